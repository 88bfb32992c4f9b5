//! Killing superalgebra `𝔤 = 𝔤₀ ⊕ 𝔤₁`: even part `𝔥 = 𝔨 ⊕ 𝔫`, odd part the
//! `D`-parallel spinors, with the three brackets and a graded Jacobi report.
//!
//! The even basis is the user basis of `𝔥`. The even-even bracket is minus
//! the input bracket. An even element `X` acts on spinors by `−α(X)`, and the
//! odd-odd bracket `v∘v ↦ (α_v, t_v) ∈ 𝔰𝔬(𝔫) ⊕ 𝔫` is pulled back to `𝔥`
//! through `X ↦ (−α̃_g(X), X_𝔫)`. `𝔤₁` is treated as a real vector space
//! with basis `v_1 … v_k, i·v_1 … i·v_k`.

mod brackets;
mod jacobi;
mod pairing;

pub use brackets::{
    build_superalgebra, odd_even_bracket, odd_odd_bracket, KillingSuperalgebra, SignMode, SignTrial,
    SuperalgebraOptions,
};
pub use jacobi::{jacobi_report, JacobiEntry, JacobiReport, JACOBI_TOL};
pub use pairing::{dirac_current, Realify, SpinorInnerProduct};

use thiserror::Error;

use crate::clifford::CliffordError;

/// Skewness tolerance for `α_v`, relative to the size of the pairing terms.
pub const SKEW_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuperalgebraError {
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error("no sign pair makes α_v skew: {}", format_trials(.0))]
    SignConfiguration(Vec<SignTrial>),
}

fn format_trials(t: &[SignTrial]) -> String {
    t.iter()
        .map(|s| format!("({:+},{:+}) residual {:.3e}", s.signs.0, s.signs.1, s.skew_residual))
        .collect::<Vec<_>>()
        .join("; ")
}
