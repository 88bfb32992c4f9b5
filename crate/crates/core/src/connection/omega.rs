use num_complex::Complex64;
use serde::Serialize;

use super::{form_to_clifford, interior, raise_indices, wedge_vector, AlphaMap, ConnectionError, Form, INVARIANCE_TOL};
use crate::clifford::{Blade, CliffordElement, Signature};
use crate::homspace::OrthoFrame;

/// The bundle map `Ω` as entered by the user.
#[derive(Clone, Debug, PartialEq)]
pub enum OmegaSpec {
    /// `Ω(a_i) = Σ_I Ω^i_I e_I` per frame vector (0-based frame index and
    /// 0-based blade indices). Unlisted vectors get `Ω = 0`.
    Explicit(Vec<(usize, Vec<(Vec<usize>, Complex64)>)>),
    /// `Ω(X) = λ·X`.
    Killing(Complex64),
    /// Invariant 4-form, components in the user `T`-basis.
    Sugra4Form(Form),
}

impl OmegaSpec {
    pub fn zero() -> Self {
        OmegaSpec::Explicit(Vec::new())
    }

    /// `Ω(a_i)` for every frame vector.
    pub fn resolve(&self, frame: &OrthoFrame) -> Result<Vec<CliffordElement>, ConnectionError> {
        let sig = frame.signature();
        let n = sig.dim();
        match self {
            OmegaSpec::Explicit(entries) => {
                let mut out: Vec<Option<CliffordElement>> = vec![None; n];
                for (i, blades) in entries {
                    if *i >= n {
                        return Err(ConnectionError::FrameIndex { index: *i, dim: n });
                    }
                    if out[*i].is_some() {
                        return Err(ConnectionError::DuplicateOmegaEntry(*i));
                    }
                    let terms = blades
                        .iter()
                        .map(|(idx, c)| Blade::from_indices(idx, n).map(|b| (b, *c)))
                        .collect::<Result<Vec<_>, _>>()?;
                    out[*i] = Some(CliffordElement::try_from_terms(sig, terms)?);
                }
                Ok(out.into_iter().map(|x| x.unwrap_or_else(|| CliffordElement::zero(sig))).collect())
            }
            OmegaSpec::Killing(l) => Ok((0..n).map(|i| CliffordElement::vector(sig, i, *l)).collect()),
            OmegaSpec::Sugra4Form(f) => build_sugra_omega(&f.pull_back(frame.change()), sig),
        }
    }
}

/// `Ω(a_i) = 1/6·(a_i ⌟ F) + 1/12·(a_i♭ ∧ F)` for a 4-form with frame
/// components `F`. The form is identified with a Clifford element through
/// the metric, so every index of `F` is raised first.
pub fn build_sugra_omega(f: &Form, sig: Signature) -> Result<Vec<CliffordElement>, ConnectionError> {
    if sig.dim() != 11 || sig.p() != 1 {
        return Err(ConnectionError::WrongSignature(sig));
    }
    if f.dim() != 11 || (f.degree() != 4 && f.terms().next().is_some()) {
        return Err(ConnectionError::MixedDegree(4, f.degree()));
    }
    let fc = form_to_clifford(&raise_indices(f, sig), sig);
    Ok((0..11)
        .map(|i| &interior(i, &fc).scale(1.0 / 6.0) + &wedge_vector(i, &fc).scale(1.0 / 12.0))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub passed: bool,
    pub max_residual: f64,
    /// `(L, a_i)` pairs (0-based, combined index for `L`, frame index for `a_i`).
    pub failures: Vec<(usize, usize, f64)>,
}

/// Checks `α_Ω([L, a_i]_𝔫) = [α_g(L), α_Ω(a_i)]` for all `L ∈ 𝔨`, `a_i ∈ 𝔫`.
pub fn check_omega_invariance(alpha: &AlphaMap, frame: &OrthoFrame) -> InvarianceReport {
    let m = frame.dim_k();
    let n = frame.dim_n();
    let c = frame.constants();
    let scale = (m..m + n).map(|x| alpha.omega_part(x).max_abs_coeff()).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for l in 0..m {
        for i in 0..n {
            let lhs = alpha.g_part(l).commutator(alpha.omega_part(m + i)).expect("same signature");
            let mut rhs = CliffordElement::zero(alpha.signature());
            for (v, &cv) in c.bracket(l, m + i)[m..].iter().enumerate() {
                if cv != 0.0 {
                    rhs = &rhs + &alpha.omega_part(m + v).scale(cv);
                }
            }
            let r = lhs.distance(&rhs);
            worst = worst.max(r);
            if r > INVARIANCE_TOL * scale {
                failures.push((l, i, r));
            }
        }
    }
    InvarianceReport { passed: failures.is_empty(), max_residual: worst, failures }
}
