//! Clifford algebra `Cl(p,q)` on basis blades, an explicit complex spinor
//! representation, and the `so ↔ spin` correspondence.
//!
//! The product convention is fixed to `x·x = +⟨x,x⟩` for every vector `x`
//! (see [`CLIFFORD_SQUARE_SIGN`]). Under this convention the round unit
//! sphere carries Killing spinors for `Ω(X) = ±(i/2)·X`, not `±½·X`.
//!
//! For odd `n` the spinor module is not a faithful representation of the
//! whole algebra: two blades whose index sets are complements of each other
//! act proportionally. All spans and kernels downstream are therefore taken
//! in the image on the spinor module, never in the abstract algebra.

mod blade;
mod element;
mod rep;
mod signature;
mod spin;

pub use blade::{blade_product, Blade};
pub use element::CliffordElement;
pub use rep::{SparseMatrix, SpinorRep};
pub use signature::Signature;
pub use spin::{commutator_action, so_to_spin};

use thiserror::Error;

/// Sign `s` in `x·x = s·⟨x,x⟩`. Fixed at build time.
pub const CLIFFORD_SQUARE_SIGN: f64 = 1.0;

/// Coefficients below this magnitude are dropped after every product.
pub const PRUNE_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("blade index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("blade indices must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<usize>),
    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },
    #[error("matrix is not skew-adjoint (residual {residual:.3e})")]
    NotSkew { residual: f64 },
    #[error("matrix has shape {rows}x{cols}, expected {dim}x{dim}")]
    Shape { rows: usize, cols: usize, dim: usize },
}
