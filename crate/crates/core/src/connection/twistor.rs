use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{AlphaMap, ConnectionError};
use crate::clifford::{Blade, CliffordElement, Signature};
use crate::homspace::{CurvatureData, OrthoFrame};

/// `(e₊, e₋)` built from two generators `u` (spacelike) and `v` (timelike)
/// appended after `e_n`: `e± = (u ± v)/√2`, so `e±² = 0` and `⟨e₊,e₋⟩ = 1`.
pub fn lightlike_pair(ext: Signature) -> (CliffordElement, CliffordElement) {
    let n = ext.dim() - 2;
    let u = Blade::vector(n);
    let v = Blade::vector(n + 1);
    let r = Complex64::from(FRAC_1_SQRT_2);
    let plus = CliffordElement::from_terms(ext, [(u, r), (v, r)]);
    let minus = CliffordElement::from_terms(ext, [(u, r), (v, -r)]);
    (plus, minus)
}

/// Twistor Wang map in `Cl(p+1,q+1)`: `α_g` embedded unchanged and, on `𝔫`,
/// `α(t) = ½(t·e₊ − K(t)·e₋)` with `K(t)^j = ε_j K_jk t^k` the Schouten
/// endomorphism.
pub fn build_twistor_alpha(
    frame: &OrthoFrame,
    curv: &CurvatureData,
    alpha_g: &AlphaMap,
) -> Result<AlphaMap, ConnectionError> {
    let k = curv.schouten()?;
    let sig = frame.signature();
    let n = sig.dim();
    let m = frame.dim_k();
    let ext = sig.extended(&[1, -1])?;
    let (plus, minus) = lightlike_pair(ext);

    let g_part = (0..frame.dim())
        .map(|x| alpha_g.g_part(x).embed(ext))
        .collect::<Result<Vec<_>, _>>()?;
    let mut omega_part = vec![CliffordElement::zero(ext); m];
    for i in 0..n {
        let t = CliffordElement::vector(ext, i, 1.0);
        let kt: Vec<f64> = (0..n).map(|j| sig.eps(j) * k[(j, i)]).collect();
        let mut kt_full = kt;
        kt_full.extend([0.0, 0.0]);
        let kv = CliffordElement::from_vector(ext, &kt_full);
        omega_part.push((&(&t * &plus) - &(&kv * &minus)).scale(0.5));
    }
    Ok(AlphaMap::from_parts(ext, m, g_part, omega_part))
}
