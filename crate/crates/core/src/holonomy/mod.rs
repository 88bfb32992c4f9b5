//! Curvature map `κ`, the holonomy closure and the joint kernel on `Δ`.
//!
//! Every span and rank is computed on the spinor module, over the reals,
//! with real and imaginary parts of each matrix stacked into one vector.

mod annihilator;
mod closure;
mod kappa;
mod span;

pub use annihilator::{annihilator, joint_kernel};
pub use closure::{closure, ClosureOptions, HolonomyInvariants, HolonomyResult, INVARIANTS_MAX_DIM};
pub use kappa::{curvature_map, CurvatureMap};

use crate::clifford::SpinorRep;
use crate::connection::{build_twistor_alpha, AlphaMap, ConnectionError};
use crate::homspace::{CurvatureData, OrthoFrame};

/// Default relative rank tolerance.
pub const RANK_TOL: f64 = 1e-9;

/// Bound on `‖h·v‖ / (‖h‖‖v‖)` for kernel vectors.
pub const ANN_RESIDUAL_TOL: f64 = 1e-8;

/// Steps 2 to 4 in one call.
pub fn holonomy(alpha: &AlphaMap, frame: &OrthoFrame, rep: &SpinorRep, opts: &ClosureOptions) -> (CurvatureMap, HolonomyResult) {
    let kappa = curvature_map(alpha, frame, rep, opts.rank_tol);
    let hol = closure(&kappa, alpha, rep, opts);
    let hol = annihilator(hol, rep, opts.rank_tol);
    (kappa, hol)
}

/// The same pipeline for the twistor Wang map on `Δ_{p+1,q+1}`.
pub fn twistor_holonomy(
    frame: &OrthoFrame,
    curv: &CurvatureData,
    alpha_g: &AlphaMap,
    opts: &ClosureOptions,
) -> Result<(AlphaMap, CurvatureMap, HolonomyResult), ConnectionError> {
    let alpha = build_twistor_alpha(frame, curv, alpha_g)?;
    let rep = SpinorRep::new(alpha.signature());
    let (kappa, hol) = holonomy(&alpha, frame, &rep, opts);
    Ok((alpha, kappa, hol))
}
