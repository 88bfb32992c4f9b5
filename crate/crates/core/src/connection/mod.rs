//! The Wang map `α = α_g + α_Ω : 𝔥 → Cl(p,q)` of an invariant connection
//! `D = ∇ + Ω` on spinors, and its twistor extension into `Cl(p+1,q+1)`.
//!
//! `α_g` is always obtained as `so_to_spin ∘ α̃_g` from the Nomizu map, never
//! from a coordinate formula.

mod alpha;
mod forms;
mod omega;
mod twistor;

pub use alpha::{assemble_alpha, build_alpha_g, AlphaMap};
pub use forms::{clifford_to_form, form_to_clifford, interior, raise_indices, wedge_vector, Form};
pub use omega::{build_sugra_omega, check_omega_invariance, InvarianceReport, OmegaSpec};
pub use twistor::{build_twistor_alpha, lightlike_pair};

use thiserror::Error;

use crate::clifford::{CliffordError, Signature};
use crate::homspace::HomSpaceError;

/// Tolerance for antisymmetry of user-supplied form components.
pub const FORM_TOL: f64 = 1e-12;

/// Relative tolerance of the infinitesimal invariance check on `Ω`.
pub const INVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConnectionError {
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    HomSpace(#[from] HomSpaceError),
    #[error("form component {indices:?} conflicts with its antisymmetric images (residual {residual:.3e})")]
    NotAntisymmetric { indices: Vec<usize>, residual: f64 },
    #[error("form components have mixed degrees {0} and {1}")]
    MixedDegree(usize, usize),
    #[error("Ω is given twice for frame vector {0}")]
    DuplicateOmegaEntry(usize),
    #[error("frame vector {index} out of range for dimension {dim}")]
    FrameIndex { index: usize, dim: usize },
    #[error("supergravity Ω needs signature (1,10), got {0}")]
    WrongSignature(Signature),
}
