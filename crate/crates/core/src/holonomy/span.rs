//! Incremental orthonormal basis of a real span, fed in blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::SpinorRep;

/// `C ← α·A·B + β·C` on column-major slices, `A` being `m×k` (or its
/// transpose when `ta`), `B` being `k×n`.
#[allow(clippy::too_many_arguments)]
fn gemm(m: usize, k: usize, n: usize, alpha: f64, a: &[f64], lda: usize, ta: bool, b: &[f64], ldb: usize, beta: f64, c: &mut [f64], ldc: usize) {
    let (rsa, csa) = if ta { (lda as isize, 1) } else { (1, lda as isize) };
    // SAFETY: the slices cover the strided extents passed below.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.as_ptr(),
            rsa,
            csa,
            b.as_ptr(),
            1,
            ldb as isize,
            beta,
            c.as_mut_ptr(),
            1,
            ldc as isize,
        );
    }
}

/// Real and imaginary parts of a complex matrix, column-major, stacked.
pub(crate) fn flatten_into(m: &DMatrix<Complex64>, out: &mut [f64]) {
    let dd = m.len();
    for (k, z) in m.as_slice().iter().enumerate() {
        out[k] = z.re;
        out[dd + k] = z.im;
    }
}

/// How matrices become real vectors for the span computations.
///
/// Both compact layouts are isometries onto `ℝ^{d²}`, used when every
/// matrix fed to the span lies in a fixed real form of `𝔤𝔩(d,ℂ)`:
/// `Unitary` when `G·M` is anti-Hermitian for the invariant form `G`,
/// `Real` when `M = B·M̄·B⁻¹` for a monomial `B` built from the generators.
#[derive(Clone, Debug)]
pub(crate) enum Layout {
    Full,
    Unitary { row_col: Vec<usize>, row_phase: Vec<Complex64> },
    /// Entry `(i, j)` with `None` stands for itself and its partner; with
    /// `Some(w)` it is fixed and lies on the real line through `w`.
    Real { entries: Vec<(usize, usize, Option<Complex64>)> },
}

/// `(column, phase)` per row if `g` has exactly one nonzero per row.
fn monomial(g: &DMatrix<Complex64>) -> Option<(Vec<usize>, Vec<Complex64>)> {
    let d = g.nrows();
    let mut cols = Vec::with_capacity(d);
    let mut phases = Vec::with_capacity(d);
    for r in 0..d {
        let mut nz = (0..d).filter(|&c| g[(r, c)].norm() > 1e-14);
        let c = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        cols.push(c);
        phases.push(g[(r, c)]);
    }
    Some((cols, phases))
}

fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, scale: f64) -> bool {
    (a - b).camax() <= 1e-12 * scale.max(1.0)
}

impl Layout {
    pub(crate) fn detect(rep: &SpinorRep, mats: &[&DMatrix<Complex64>]) -> Self {
        let g = rep.invariant_form();
        if let Some((row_col, row_phase)) = monomial(&g) {
            if mats.iter().all(|m| {
                let a = &g * *m;
                close(&a.adjoint(), &(-&a), m.camax())
            }) {
                return Layout::Unitary { row_col, row_phase };
            }
        }
        Self::detect_real(rep, mats).unwrap_or(Layout::Full)
    }

    fn detect_real(rep: &SpinorRep, mats: &[&DMatrix<Complex64>]) -> Option<Self> {
        let gammas = rep.gammas();
        let d = rep.dim();
        // every generator must be real or imaginary
        let mut imag = Vec::with_capacity(gammas.len());
        for gm in &gammas {
            let c = gm.map(|z| z.conj());
            imag.push(if close(&c, gm, 1.0) {
                false
            } else if close(&c, &(-gm), 1.0) {
                true
            } else {
                return None;
            });
        }
        // B commuting with the real generators and anticommuting with the
        // imaginary ones, tried as the product of either class
        for want_imag in [true, false] {
            let mut b = DMatrix::<Complex64>::identity(d, d);
            for (gm, &im) in gammas.iter().zip(&imag) {
                if im == want_imag {
                    b *= gm;
                }
            }
            let Some((cols, phases)) = monomial(&b) else { continue };
            let b_inv = b.adjoint();
            let tau = |m: &DMatrix<Complex64>| &b * m.map(|z| z.conj()) * &b_inv;
            if !gammas.iter().all(|gm| close(&tau(gm), gm, 1.0)) || !mats.iter().all(|m| close(&tau(m), m, m.camax())) {
                continue;
            }
            // (τM)_ij = b_i·conj(M_{β(i)β(j)})·conj(b_j)
            let mut entries = Vec::with_capacity(d * d);
            for j in 0..d {
                for i in 0..d {
                    let (pi, pj) = (cols[i], cols[j]);
                    if (pi, pj) == (i, j) {
                        let c = phases[i] * phases[j].conj();
                        entries.push((i, j, Some(c.sqrt())));
                    } else if (pj, pi) > (j, i) {
                        entries.push((i, j, None));
                    }
                }
            }
            debug_assert_eq!(entries.iter().map(|e| if e.2.is_some() { 1 } else { 2 }).sum::<usize>(), d * d);
            return Some(Layout::Real { entries });
        }
        None
    }

    pub(crate) fn len(&self, d: usize) -> usize {
        match self {
            Layout::Full => 2 * d * d,
            _ => d * d,
        }
    }

    pub(crate) fn flatten_into(&self, m: &DMatrix<Complex64>, out: &mut [f64]) {
        use std::f64::consts::SQRT_2;
        match self {
            Layout::Full => flatten_into(m, out),
            Layout::Unitary { row_col, row_phase } => {
                let d = m.nrows();
                let a = |i: usize, j: usize| row_phase[i] * m[(row_col[i], j)];
                let mut k = 0;
                for j in 0..d {
                    out[k] = a(j, j).im;
                    k += 1;
                    for i in 0..j {
                        let z = a(i, j) * SQRT_2;
                        out[k] = z.re;
                        out[k + 1] = z.im;
                        k += 2;
                    }
                }
            }
            Layout::Real { entries } => {
                let mut k = 0;
                for &(i, j, w) in entries {
                    let z = m[(i, j)];
                    match w {
                        Some(w) => {
                            out[k] = (z * w.conj()).re;
                            k += 1;
                        }
                        None => {
                            out[k] = SQRT_2 * z.re;
                            out[k + 1] = SQRT_2 * z.im;
                            k += 2;
                        }
                    }
                }
            }
        }
    }
}

pub(crate) fn flatten(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v = vec![0.0; 2 * m.len()];
    flatten_into(m, &mut v);
    v
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Greedy Gram-Schmidt with one re-orthogonalization pass, in input order.
///
/// A vector is new when its residual exceeds `tol·max(‖v‖, scale)`.
pub(crate) struct RealSpan {
    len: usize,
    q: Vec<f64>,
    rank: usize,
    tol: f64,
    scale: f64,
}

impl RealSpan {
    pub fn new(len: usize, tol: f64, scale: f64) -> Self {
        Self { len, q: Vec::new(), rank: 0, tol, scale }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn q(&self) -> &[f64] {
        &self.q[..self.rank * self.len]
    }

    /// `r ← r − Q Qᵀ r` over the first `upto` basis vectors.
    fn project_out(&self, r: &mut [f64], upto: usize) {
        if upto == 0 {
            return;
        }
        let len = self.len;
        let mut coef = vec![0.0; upto];
        gemm(upto, len, 1, 1.0, &self.q[..upto * len], len, true, r, len, 0.0, &mut coef, upto);
        gemm(len, upto, 1, -1.0, &self.q[..upto * len], len, false, &coef, upto, 1.0, r, len);
    }

    /// Distance from `v` to the span.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let mut r = v.to_vec();
        self.project_out(&mut r, self.rank);
        self.project_out(&mut r, self.rank);
        norm(&r)
    }

    /// Offers `cols` column-major candidates of length `len`; returns the
    /// positions of those that enlarged the span. The block is overwritten.
    pub fn absorb(&mut self, block: &mut [f64], cols: usize) -> Vec<usize> {
        let len = self.len;
        debug_assert_eq!(block.len(), len * cols);
        let norms: Vec<f64> = block.chunks(len).map(norm).collect();
        let k0 = self.rank;
        if k0 > 0 {
            let mut coef = vec![0.0; k0 * cols];
            gemm(k0, len, cols, 1.0, self.q(), len, true, block, len, 0.0, &mut coef, k0);
            let q = &self.q[..k0 * len];
            gemm(len, k0, cols, -1.0, q, len, false, &coef, k0, 1.0, block, len);
        }
        let mut accepted = Vec::new();
        for j in 0..cols {
            let r = &mut block[j * len..(j + 1) * len];
            for t in k0..self.rank {
                let qt = &self.q[t * len..(t + 1) * len];
                let d: f64 = qt.iter().zip(r.iter()).map(|(a, b)| a * b).sum();
                for (x, y) in r.iter_mut().zip(qt) {
                    *x -= d * y;
                }
            }
            if norm(r) <= self.tol * norms[j].max(self.scale) {
                continue;
            }
            let mut r = r.to_vec();
            self.project_out(&mut r, self.rank);
            let nr = norm(&r);
            r.iter_mut().for_each(|x| *x /= nr);
            self.q.extend_from_slice(&r);
            self.rank += 1;
            accepted.push(j);
        }
        accepted
    }
}
