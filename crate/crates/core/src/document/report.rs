use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{CliffordElement, Signature};
use crate::connection::InvarianceReport;
use crate::homspace::ValidationReport;
use crate::superalgebra::{JacobiReport, SignTrial};

/// Coefficients below this are left out of emitted tables.
const EMIT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub command: &'static str,
    pub validation: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_invariance: Option<InvarianceReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<AlphaEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<HolonomyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ann: Option<AnnReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superalgebra: Option<SuperalgebraReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twistor: Option<TwistorReport>,
    /// Seconds per stage; only filled on request since it breaks reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<(String, f64)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameReport {
    pub signature: Vec<i8>,
    /// Per-vector rescaling when the metric was diagonal.
    pub scalings: Option<Vec<f64>>,
    /// Frame vectors `a_i` in user coordinates, one row each.
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BladeTerm {
    /// 1-based generator indices.
    pub indices: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

impl BladeTerm {
    pub fn expand(x: &CliffordElement) -> Vec<BladeTerm> {
        x.terms()
            .filter(|(_, c)| c.norm() > EMIT_TOL)
            .map(|(b, c)| BladeTerm { indices: b.one_based(), re: c.re, im: c.im })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaEntry {
    pub basis: String,
    pub blades: Vec<BladeTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaEntry {
    /// 1-based frame indices, `i < j`.
    pub i: usize,
    pub j: usize,
    pub blades: Vec<BladeTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    pub span_dim: usize,
    pub max_abs_coeff: f64,
    pub entries: Vec<KappaEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    pub derived_dim: usize,
    pub center_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HolonomyReport {
    pub dim: usize,
    pub iterations: usize,
    pub trace: Vec<usize>,
    pub symmetric_fast_path: bool,
    pub invariants: Option<InvariantsReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnReport {
    pub dim_complex: usize,
    pub spinor_dim: usize,
    /// Each spinor as `[re, im]` pairs.
    pub basis: Vec<Vec<[f64; 2]>>,
}

pub(crate) fn spinor(v: &DVector<Complex64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub(crate) fn matrix(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TermReport {
    pub basis: String,
    pub coeff: f64,
}

pub(crate) fn terms(names: &[String], c: &[f64]) -> Vec<TermReport> {
    c.iter()
        .zip(names)
        .filter(|(v, _)| v.abs() > EMIT_TOL)
        .map(|(&coeff, n)| TermReport { basis: n.clone(), coeff })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EvenBracketReport {
    pub x: String,
    pub y: String,
    pub terms: Vec<TermReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OddEvenReport {
    pub basis: String,
    /// Action on the odd basis, `k×k` rows of `[re, im]`.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OddOddReport {
    /// Real odd basis indices (1-based); `k+j` stands for `i·v_j`.
    pub r: usize,
    pub s: usize,
    pub terms: Vec<TermReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperalgebraReport {
    pub label: &'static str,
    pub even_dim: usize,
    pub odd_dim: usize,
    pub signs: String,
    pub realify: &'static str,
    pub adjoint_sign: f64,
    pub sign_trials: Vec<SignTrial>,
    pub skew_residual: f64,
    pub odd_even_escape: f64,
    pub odd_odd_escape: f64,
    pub even_even: Vec<EvenBracketReport>,
    pub odd_even: Vec<OddEvenReport>,
    pub odd_odd: Vec<OddOddReport>,
    pub jacobi: JacobiReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistorReport {
    pub extended_signature: Vec<i8>,
    /// Schouten tensor in the orthonormal frame.
    pub schouten: Vec<Vec<f64>>,
    pub scalar_curvature: f64,
}

impl TwistorReport {
    pub(crate) fn new(ext: Signature, k: &DMatrix<f64>, scal: f64) -> Self {
        Self {
            extended_signature: ext.epsilons(),
            schouten: k.row_iter().map(|r| r.iter().copied().collect()).collect(),
            scalar_curvature: scal,
        }
    }
}
