//! Reductive homogeneous input data `𝔥 = 𝔨 ⊕ 𝔫`, its validation, the
//! pseudo-orthonormal frame on `𝔫`, the Nomizu map and the algebraic
//! curvature of the canonical Levi-Civita data.
//!
//! The combined basis of `𝔥` always lists `𝔨` first (`0..m`) and `𝔫` after
//! it (`m..m+n`).
//!
//! Riemann sign: `R(X,Y) = [α̃(X), α̃(Y)] − α̃([X,Y])`, with
//! `Ric(X,Y) = Σ_a ε_a ⟨R(a_a,X)Y, a_a⟩`. Round spheres come out with
//! positive Ricci curvature.

mod curvature;
mod frame;
mod spec;
mod validate;

pub use curvature::{curvature, CurvatureData};
pub use frame::{orthonormalize, OrthoFrame};
pub use spec::{HomSpaceSpec, Metric, StructureConstants};
pub use validate::{validate, Check, CheckOutcome, ValidationReport};

use thiserror::Error;

/// Tolerance for structural checks on user data, relative to the largest
/// structure constant (or 1, whichever is bigger).
pub const STRUCTURE_TOL: f64 = 1e-9;

/// Tolerance for identities between derived matrices.
pub const MATRIX_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomSpaceError {
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("the complement 𝔫 must have at least one element")]
    EmptyComplement,
    #[error("metric has {got} entries per side, expected {expected}")]
    MetricShape { expected: usize, got: usize },
    #[error("brackets are not antisymmetric: {0}")]
    NotAntisymmetric(String),
    #[error("Jacobi identity fails: {0}")]
    Jacobi(String),
    #[error("not reductive, [𝔨,𝔫] has a 𝔨-part: {0}")]
    NotReductive(String),
    #[error("metric is not symmetric: {0}")]
    MetricNotSymmetric(String),
    #[error("metric is degenerate (smallest |eigenvalue| {min_abs_eigenvalue:.3e})")]
    DegenerateMetric { min_abs_eigenvalue: f64 },
    #[error("metric is not Ad(K)-invariant: {0}")]
    NotAdInvariant(String),
    #[error("Schouten tensor needs dim 𝔫 ≥ 3, got {0}")]
    SchoutenUndefined(usize),
}

impl HomSpaceError {
    /// Stable identifier, one per failure kind.
    pub fn code(&self) -> &'static str {
        match self {
            Self::DuplicateName(_) => "duplicate-name",
            Self::IndexOutOfRange { .. } => "index-out-of-range",
            Self::EmptyComplement => "empty-complement",
            Self::MetricShape { .. } => "metric-shape",
            Self::NotAntisymmetric(_) => "antisymmetry",
            Self::Jacobi(_) => "jacobi",
            Self::NotReductive(_) => "reductivity",
            Self::MetricNotSymmetric(_) => "metric-symmetry",
            Self::DegenerateMetric { .. } => "metric-degenerate",
            Self::NotAdInvariant(_) => "ad-invariance",
            Self::SchoutenUndefined(_) => "schouten-undefined",
        }
    }
}
