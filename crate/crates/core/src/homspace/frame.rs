use nalgebra::{DMatrix, SymmetricEigen};

use super::{HomSpaceError, HomSpaceSpec, Metric, StructureConstants, MATRIX_TOL, STRUCTURE_TOL};
use crate::clifford::Signature;

/// Pseudo-orthonormal frame `a_1 … a_n` of `𝔫` together with the structure
/// constants of `𝔥` rewritten in the basis `(L_1 … L_m, a_1 … a_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoFrame {
    sig: Signature,
    dim_k: usize,
    /// Column `i` holds `a_i` in user `T`-coordinates.
    change: DMatrix<f64>,
    change_inv: DMatrix<f64>,
    constants: StructureConstants,
    diagonal: bool,
}

impl OrthoFrame {
    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn dim_n(&self) -> usize {
        self.sig.dim()
    }

    pub fn dim(&self) -> usize {
        self.dim_k + self.dim_n()
    }

    pub fn eps(&self, i: usize) -> f64 {
        self.sig.eps(i)
    }

    pub fn change(&self) -> &DMatrix<f64> {
        &self.change
    }

    pub fn change_inv(&self) -> &DMatrix<f64> {
        &self.change_inv
    }

    /// Frame constants; indices `0..m` are `𝔨`, `m..` are `a_i`.
    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    /// `Some(s)` with `a_i = s_i·T_i` when the metric was diagonal.
    pub fn scales(&self) -> Option<Vec<f64>> {
        self.diagonal.then(|| (0..self.dim_n()).map(|i| self.change[(i, i)]).collect())
    }

    /// Nomizu endomorphism `α̃_g(x)` of a combined basis element, acting on
    /// frame components of `𝔫`.
    ///
    /// For `L ∈ 𝔨` this is `ad(L)|_𝔫`. For `X ∈ 𝔫` it is the skew map with
    /// `⟨α̃(X)Y, Z⟩ = ½(⟨[X,Y]_𝔫,Z⟩ − ⟨[X,Z]_𝔫,Y⟩ − ⟨[Y,Z]_𝔫,X⟩)`.
    pub fn nomizu(&self, x: usize) -> DMatrix<f64> {
        let m = self.dim_k;
        let n = self.dim_n();
        let c = &self.constants;
        let mut a = DMatrix::zeros(n, n);
        if x < m {
            for y in 0..n {
                for z in 0..n {
                    a[(z, y)] = c.get(x, m + y, m + z);
                }
            }
            return a;
        }
        let xi = x - m;
        for y in 0..n {
            for z in 0..n {
                let v = 0.5
                    * (c.get(x, m + y, m + z) * self.eps(z)
                        - c.get(x, m + z, m + y) * self.eps(y)
                        - c.get(m + y, m + z, x) * self.eps(xi));
                a[(z, y)] = v * self.eps(z);
            }
        }
        a
    }

    /// `α̃_g` of an arbitrary element given by combined-basis coefficients.
    pub fn nomizu_of(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let n = self.dim_n();
        let mut a = DMatrix::zeros(n, n);
        for (x, &cx) in coeffs.iter().enumerate() {
            if cx != 0.0 {
                a += self.nomizu(x) * cx;
            }
        }
        a
    }
}

/// Builds the frame. A diagonal metric is rescaled by `1/√|γ_i|`; a general
/// Gram matrix goes through a pseudo Gram-Schmidt pass in user order (which
/// keeps the orientation), falling back to an eigenbasis if a partial frame
/// meets a null vector.
pub fn orthonormalize(spec: &HomSpaceSpec) -> Result<OrthoFrame, HomSpaceError> {
    let n = spec.dim_n();
    let m = spec.dim_k();
    let g = spec.metric().gram();
    let eig = SymmetricEigen::new(g.clone());
    let min_abs = eig.eigenvalues.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
    if !(min_abs > STRUCTURE_TOL * eig.eigenvalues.amax()) {
        return Err(HomSpaceError::DegenerateMetric { min_abs_eigenvalue: min_abs });
    }
    let diagonal = matches!(spec.metric(), Metric::Diagonal(_));
    let (change, eps) = match gram_schmidt(&g) {
        Some(r) => r,
        None => eigen_frame(eig),
    };
    let sig = Signature::new(&eps).expect("nonempty ±1 list");
    let change_inv = change.clone().try_inverse().expect("frame change is invertible");

    let mut t = DMatrix::identity(m + n, m + n);
    let mut t_inv = DMatrix::identity(m + n, m + n);
    t.view_mut((m, m), (n, n)).copy_from(&change);
    t_inv.view_mut((m, m), (n, n)).copy_from(&change_inv);
    let constants = spec.constants().change_basis(&t, &t_inv);

    let frame = OrthoFrame { sig, dim_k: m, change, change_inv, constants, diagonal };
    debug_assert!(frame_residual(&frame, &g) < MATRIX_TOL * g.amax().max(1.0));
    Ok(frame)
}

/// `max |⟨a_i,a_j⟩ − ε_i δ_ij|`.
pub(crate) fn frame_residual(frame: &OrthoFrame, gram: &DMatrix<f64>) -> f64 {
    let p = &frame.change;
    let h = p.transpose() * gram * p;
    let mut worst: f64 = 0.0;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            let target = if i == j { frame.eps(i) } else { 0.0 };
            worst = worst.max((h[(i, j)] - target).abs());
        }
    }
    worst
}

fn gram_schmidt(g: &DMatrix<f64>) -> Option<(DMatrix<f64>, Vec<i8>)> {
    let n = g.nrows();
    let scale = g.amax();
    let mut p = DMatrix::<f64>::zeros(n, n);
    let mut eps = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = nalgebra::DVector::<f64>::zeros(n);
        v[k] = 1.0;
        for _ in 0..2 {
            for (i, &e) in eps.iter().enumerate() {
                let ai = p.column(i);
                let proj = (ai.transpose() * g * &v)[(0, 0)] * e as f64;
                v -= ai * proj;
            }
        }
        let norm2 = (v.transpose() * g * &v)[(0, 0)];
        if norm2.abs() <= 1e-8 * scale {
            return None;
        }
        let e: i8 = if norm2 > 0.0 { 1 } else { -1 };
        p.set_column(k, &(v / norm2.abs().sqrt()));
        eps.push(e);
    }
    Some((p, eps))
}

fn eigen_frame(eig: SymmetricEigen<f64, nalgebra::Dyn>) -> (DMatrix<f64>, Vec<i8>) {
    let n = eig.eigenvalues.len();
    let mut p = eig.eigenvectors.clone();
    let mut eps = Vec::with_capacity(n);
    for i in 0..n {
        let l = eig.eigenvalues[i];
        p.column_mut(i).scale_mut(1.0 / l.abs().sqrt());
        eps.push(if l > 0.0 { 1 } else { -1 });
    }
    if p.determinant() < 0.0 {
        p.column_mut(n - 1).neg_mut();
    }
    (p, eps)
}
