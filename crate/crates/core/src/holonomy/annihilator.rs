use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::HolonomyResult;
use crate::clifford::SpinorRep;

/// Joint kernel of the given matrices, as an echelon-normalized basis.
///
/// The matrices are stacked into one tall matrix, reduced by QR, and the
/// right singular vectors of the triangular factor with singular value at
/// most `tol·σ_max` span the kernel.
pub fn joint_kernel(mats: &[DMatrix<Complex64>], d: usize, tol: f64) -> Vec<DVector<Complex64>> {
    if mats.is_empty() {
        return (0..d).map(|i| DVector::from_fn(d, |r, _| if r == i { Complex64::from(1.0) } else { Complex64::default() })).collect();
    }
    let mut tall = DMatrix::<Complex64>::zeros(mats.len() * d, d);
    for (k, m) in mats.iter().enumerate() {
        tall.view_mut((k * d, 0), (d, d)).copy_from(m);
    }
    let r = tall.qr().r();
    let svd = r.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let top = svd.singular_values.max();
    let kernel: Vec<usize> = (0..d).filter(|&i| !(svd.singular_values[i] > tol * top)).collect();
    if kernel.is_empty() {
        return Vec::new();
    }
    let mut k = DMatrix::from_fn(d, kernel.len(), |r, c| vt[(kernel[c], r)].conj());
    echelon(&mut k);
    k.column_iter().map(|c| c.into_owned()).collect()
}

/// Column operations bringing `k` to a canonical form: each column has a
/// pivot row holding 1 where every other column holds 0. Pivots are chosen
/// by largest modulus, column by column.
fn echelon(k: &mut DMatrix<Complex64>) {
    let (d, c) = k.shape();
    let mut used = vec![false; d];
    let mut pivots = Vec::with_capacity(c);
    for j in 0..c {
        let (p, _) = (0..d)
            .filter(|&r| !used[r])
            .map(|r| (r, k[(r, j)].norm()))
            .fold((usize::MAX, -1.0), |best, x| if x.1 > best.1 + 1e-12 { x } else { best });
        used[p] = true;
        pivots.push(p);
        let inv = Complex64::from(1.0) / k[(p, j)];
        let mut col = k.column_mut(j);
        col *= inv;
        for o in 0..c {
            if o != j {
                let f = k[(p, o)];
                let col = k.column(j).into_owned();
                k.column_mut(o).axpy(-f, &col, Complex64::from(1.0));
            }
        }
    }
    // order columns by pivot row
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by_key(|&j| pivots[j]);
    let sorted = DMatrix::from_fn(d, c, |r, j| k[(r, order[j])]);
    *k = sorted;
    for x in k.iter_mut() {
        if x.re.abs() < 1e-15 {
            x.re = 0.0;
        }
        if x.im.abs() < 1e-15 {
            x.im = 0.0;
        }
    }
}

/// Fills the annihilator fields: `Ann = {v ∈ Δ : h·v = 0 for all h}`.
pub fn annihilator(mut hol: HolonomyResult, rep: &SpinorRep, tol: f64) -> HolonomyResult {
    hol.ann_basis = joint_kernel(&hol.basis, rep.dim(), tol);
    hol.ann_dim = hol.ann_basis.len();
    hol
}
