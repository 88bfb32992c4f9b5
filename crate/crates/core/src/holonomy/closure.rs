use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::span::{flatten, norm, Layout, RealSpan};
use super::{CurvatureMap, RANK_TOL};
use crate::clifford::{SparseMatrix, SpinorRep};
use crate::connection::AlphaMap;

/// Holonomy invariants are only computed up to this dimension.
pub const INVARIANTS_MAX_DIM: usize = 128;

const BLOCK: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureOptions {
    pub rank_tol: f64,
    /// Bracket only with `α(𝔫)`. Valid for symmetric data, where the
    /// `𝔨`-brackets add nothing new.
    pub symmetric_fast_path: bool,
    pub invariants: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self { rank_tol: RANK_TOL, symmetric_fast_path: false, invariants: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyInvariants {
    pub derived_dim: usize,
    pub center_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyResult {
    /// Independent matrices on `Δ` spanning the holonomy algebra, in the order found.
    pub basis: Vec<DMatrix<Complex64>>,
    /// Real dimension.
    pub dim: usize,
    pub ann_basis: Vec<DVector<Complex64>>,
    /// Complex dimension of the joint kernel.
    pub ann_dim: usize,
    /// Closure rounds that enlarged the span.
    pub iterations: usize,
    /// Dimension after the initial `Îm(κ)` and after every round, the final
    /// (stable) round included.
    pub trace: Vec<usize>,
    /// `None` above [`INVARIANTS_MAX_DIM`] or when not requested.
    pub invariants: Option<HolonomyInvariants>,
}

impl HolonomyResult {
    /// Distance of `m` from the span of [`HolonomyResult::basis`], relative to `‖m‖`.
    pub fn relative_residual(&self, m: &DMatrix<Complex64>) -> f64 {
        let v = flatten(m);
        let nv = norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        let Some(first) = self.basis.first() else {
            return 1.0;
        };
        let mut span = RealSpan::new(2 * first.len(), 0.0, 0.0);
        let mut block: Vec<f64> = self.basis.iter().flat_map(flatten).collect();
        span.absorb(&mut block, self.basis.len());
        span.residual(&v) / nv
    }
}

struct Feeder<'a> {
    span: RealSpan,
    layout: Layout,
    len: usize,
    block: Vec<f64>,
    pending: Vec<DMatrix<Complex64>>,
    out: &'a mut Vec<DMatrix<Complex64>>,
}

impl Feeder<'_> {
    fn push(&mut self, m: DMatrix<Complex64>) {
        let at = self.pending.len() * self.len;
        self.layout.flatten_into(&m, &mut self.block[at..at + self.len]);
        self.pending.push(m);
        if self.pending.len() == BLOCK {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let cols = self.pending.len();
        if cols == 0 {
            return;
        }
        let accepted = self.span.absorb(&mut self.block[..cols * self.len], cols);
        let mut pending: Vec<Option<DMatrix<Complex64>>> = self.pending.drain(..).map(Some).collect();
        for j in accepted {
            self.out.push(pending[j].take().expect("accepted once"));
        }
    }
}

/// Smallest `α(𝔥)`-bracket-stable real subspace containing `Îm(κ)`.
/// The annihilator fields are left empty.
pub fn closure(kappa: &CurvatureMap, alpha: &AlphaMap, rep: &SpinorRep, opts: &ClosureOptions) -> HolonomyResult {
    let d = rep.dim();
    let start = if opts.symmetric_fast_path { alpha.dim_k() } else { 0 };
    let actions: Vec<SparseMatrix> = (start..alpha.len())
        .map(|x| rep.sparse_represent(&alpha.value(x)).expect("one signature"))
        .filter(|s| s.nnz() > 0)
        .collect();

    let initial: Vec<DMatrix<Complex64>> = kappa
        .entries
        .iter()
        .filter(|(_, k)| !k.is_zero())
        .map(|(_, k)| rep.represent(k).expect("one signature"))
        .collect();
    let scale = initial.iter().map(|m| norm(&flatten(m))).fold(0.0, f64::max);
    let dense_actions: Vec<DMatrix<Complex64>> = actions.iter().map(SparseMatrix::to_dense).collect();
    let mats: Vec<&DMatrix<Complex64>> = initial.iter().chain(&dense_actions).collect();
    let layout = Layout::detect(rep, &mats);
    let len = layout.len(d);

    let mut basis: Vec<DMatrix<Complex64>> = Vec::new();
    let mut trace = Vec::new();
    let mut iterations = 0;
    {
        let mut feed = Feeder {
            span: RealSpan::new(len, opts.rank_tol, scale),
            layout,
            len,
            block: vec![0.0; BLOCK * len],
            pending: Vec::with_capacity(BLOCK),
            out: &mut basis,
        };
        for m in initial {
            feed.push(m);
        }
        feed.flush();
        trace.push(feed.out.len());
        let mut front = 0;
        while front < feed.out.len() && feed.out.len() < len {
            let end = feed.out.len();
            for h in front..end {
                let hm = feed.out[h].clone();
                for a in &actions {
                    feed.push(a.commutator(&hm));
                }
            }
            feed.flush();
            trace.push(feed.out.len());
            if feed.out.len() > end {
                iterations += 1;
            }
            front = end;
        }
    }

    let dim = basis.len();
    let invariants = (opts.invariants && dim <= INVARIANTS_MAX_DIM).then(|| invariants(&basis, opts.rank_tol));
    HolonomyResult { basis, dim, ann_basis: Vec::new(), ann_dim: 0, iterations, trace, invariants }
}

fn invariants(basis: &[DMatrix<Complex64>], tol: f64) -> HolonomyInvariants {
    let k = basis.len();
    if k == 0 {
        return HolonomyInvariants { derived_dim: 0, center_dim: 0 };
    }
    let d = basis[0].nrows();
    let len = 2 * d * d;
    let flats: Vec<Vec<f64>> = basis.iter().map(flatten).collect();
    let scale = flats.iter().map(|v| norm(v)).fold(0.0, f64::max);

    // structure constants in the holonomy basis, by least squares
    let h = DMatrix::from_fn(len, k, |r, c| flats[c][r]);
    let qr = h.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let mut derived = RealSpan::new(len, tol, scale * scale);
    let mut ad = DMatrix::<f64>::zeros(k * k, k);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let c = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            let mut v = flatten(&c);
            let coords = r.solve_upper_triangular(&(q.transpose() * DVector::from_column_slice(&v))).expect("independent basis");
            for (t, &x) in coords.iter().enumerate() {
                ad[(j * k + t, i)] = x;
            }
            if i < j {
                derived.absorb(&mut v, 1);
            }
        }
    }
    let sv = ad.singular_values();
    let top = sv.max();
    let rank = sv.iter().filter(|&&s| s > tol * top.max(f64::MIN_POSITIVE)).count();
    let center_dim = if top == 0.0 { k } else { k - rank };
    HolonomyInvariants { derived_dim: derived.rank(), center_dim }
}
