pub mod clifford;
pub mod homspace;
pub mod connection;
pub mod holonomy;
pub mod superalgebra;
pub mod document;
