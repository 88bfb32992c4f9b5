use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Blade, CliffordElement, CliffordError, Signature};

/// Relative tolerance for the skew-adjointness precondition of [`so_to_spin`].
pub const SKEW_TOL: f64 = 1e-9;

/// Largest `|ε_a A_ab + ε_b A_ba|`, i.e. the failure of `⟨Ax,y⟩ + ⟨x,Ay⟩ = 0`.
pub fn skew_residual(a: &DMatrix<f64>, sig: Signature) -> f64 {
    let n = sig.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((sig.eps(i) * a[(i, j)] + sig.eps(j) * a[(j, i)]).abs());
        }
    }
    worst
}

/// The bivector `s` with `[s, x] = A x` for every vector `x`.
///
/// `A` acts on frame components (`A e_b = Σ_a A_ab e_a`). Since
/// `[e_a e_b, e_b] = 2 ε_b e_a`, the answer is `s = ½ Σ_{a<b} ε_b A_ab e_a e_b`.
pub fn so_to_spin(a: &DMatrix<f64>, sig: Signature) -> Result<CliffordElement, CliffordError> {
    let n = sig.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(CliffordError::Shape { rows: a.nrows(), cols: a.ncols(), dim: n });
    }
    let residual = skew_residual(a, sig);
    if residual > SKEW_TOL * a.amax().max(1.0) {
        return Err(CliffordError::NotSkew { residual });
    }
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let w = 0.5 * sig.eps(j) * a[(i, j)];
            if w != 0.0 {
                terms.push((Blade::from_bits((1 << i) | (1 << j)), Complex64::from(w)));
            }
        }
    }
    Ok(CliffordElement::from_terms(sig, terms))
}

/// Matrix of `x ↦ [s, x]` on frame vectors, keeping only real vector parts.
pub fn commutator_action(s: &CliffordElement) -> DMatrix<f64> {
    let sig = s.signature();
    let n = sig.dim();
    let mut out = DMatrix::zeros(n, n);
    for c in 0..n {
        let x = CliffordElement::vector(sig, c, 1.0);
        let r = s.commutator(&x).expect("same signature");
        for a in 0..n {
            out[(a, c)] = r.coeff(Blade::vector(a)).re;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_maps_to_zero() {
        let sig = Signature::lorentzian(4);
        assert!(so_to_spin(&DMatrix::zeros(4, 4), sig).unwrap().is_zero());
    }

    #[test]
    fn plane_rotation() {
        // A e1 = e2, A e2 = -e1. Writing s = c e1e2, [s, e1] = -2c e2, so c = -1/2.
        let sig = Signature::euclidean(2);
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let s = so_to_spin(&a, sig).unwrap();
        assert_eq!(s, CliffordElement::from_terms(sig, [(Blade::from_bits(0b11), Complex64::from(-0.5))]));
        let e1 = CliffordElement::vector(sig, 0, 1.0);
        assert_eq!(s.commutator(&e1).unwrap(), CliffordElement::vector(sig, 1, 1.0));
    }

    #[test]
    fn boost_is_accepted() {
        // symmetric in components, yet skew for the (1,1) form
        let sig = Signature::lorentzian(2);
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let s = so_to_spin(&a, sig).unwrap();
        assert!((commutator_action(&s) - a).amax() < 1e-15);
    }

    #[test]
    fn rejects_non_skew() {
        let sig = Signature::euclidean(3);
        let mut a = DMatrix::zeros(3, 3);
        a[(0, 1)] = 1.0;
        assert!(matches!(so_to_spin(&a, sig), Err(CliffordError::NotSkew { .. })));
        assert!(matches!(so_to_spin(&DMatrix::zeros(2, 2), sig), Err(CliffordError::Shape { .. })));
    }
}
