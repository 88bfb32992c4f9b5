use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{jacobi, Realify, SpinorInnerProduct, SuperalgebraError, SKEW_TOL};

/// Residual differences below this count as ties when choosing signs.
const TIE_TOL: f64 = 1e-9;
use crate::clifford::{so_to_spin, CliffordElement, SpinorRep};
use crate::connection::AlphaMap;
use crate::homspace::{HomSpaceSpec, OrthoFrame, StructureConstants};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignMode {
    Auto,
    Fixed(i8, i8),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperalgebraOptions {
    pub signs: SignMode,
    /// `None` picks the mode that makes the current real.
    pub realify: Option<Realify>,
}

impl Default for SuperalgebraOptions {
    fn default() -> Self {
        Self { signs: SignMode::Auto, realify: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignTrial {
    pub signs: (i8, i8),
    /// `max |B + Bᵀ|` relative to the pairing scale, over all basis pairs.
    pub skew_residual: f64,
    /// Largest `|α_v|` entry seen.
    pub magnitude: f64,
    /// Even-odd-odd and odd-odd-odd Jacobi residuals with this choice, when skew.
    pub eoo_residual: Option<f64>,
    pub ooo_residual: Option<f64>,
}

/// Pairing data shared by the odd-odd bracket evaluations.
pub(crate) struct OddOddKernel {
    ip: SpinorInnerProduct,
    eps: Vec<f64>,
    /// `(Γ_y Ω(a_x))^† G` and `(Ω(a_x)^T Γ_y)^† G`, indexed `x·n + y`.
    p: Vec<DMatrix<Complex64>>,
    r: Vec<DMatrix<Complex64>>,
    /// `G Γ_i`.
    c: Vec<DMatrix<Complex64>>,
}

impl OddOddKernel {
    fn new(ip: SpinorInnerProduct, alpha: &AlphaMap, rep: &SpinorRep) -> Self {
        let sig = rep.signature();
        let n = sig.dim();
        let m = alpha.dim_k();
        let gammas = rep.gammas();
        let omegas: Vec<DMatrix<Complex64>> =
            (0..n).map(|x| rep.represent(alpha.omega_part(m + x)).expect("one signature")).collect();
        let mut p = Vec::with_capacity(n * n);
        let mut r = Vec::with_capacity(n * n);
        for om in &omegas {
            let om_t = ip.adjoint(om);
            for g in &gammas {
                p.push((g * om).adjoint() * &ip.gram);
                r.push((&om_t * g).adjoint() * &ip.gram);
            }
        }
        let c = gammas.iter().map(|g| &ip.gram * g).collect();
        Self { eps: (0..n).map(|i| sig.eps(i)).collect(), ip, p, r, c }
    }

    fn n(&self) -> usize {
        self.eps.len()
    }

    /// `realify(½(u^† H w + w^† H u))`.
    fn polar(&self, h: &DMatrix<Complex64>, u: &DVector<Complex64>, w: &DVector<Complex64>) -> f64 {
        let a = u.dotc(&(h * w));
        let b = w.dotc(&(h * u));
        self.ip.realify.apply((a + b) * 0.5)
    }

    /// Bilinear forms `B_P`, `B_R` (so `B = ε₁B_P + ε₂B_R`) and the lowered current.
    fn forms(&self, u: &DVector<Complex64>, w: &DVector<Complex64>) -> (DMatrix<f64>, DMatrix<f64>, DVector<f64>) {
        let n = self.n();
        let bp = DMatrix::from_fn(n, n, |x, y| self.polar(&self.p[x * n + y], u, w));
        let br = DMatrix::from_fn(n, n, |x, y| self.polar(&self.r[x * n + y], u, w));
        let t = DVector::from_fn(n, |i, _| self.eps[i] * self.polar(&self.c[i], u, w));
        (bp, br, t)
    }

    /// `(α_v, t_v)` for the polarized pair, with `α` as an endomorphism
    /// (`α[y][x] = ε_y B[x][y]`).
    pub(crate) fn pair(&self, signs: (i8, i8), u: &DVector<Complex64>, w: &DVector<Complex64>) -> (DMatrix<f64>, DVector<f64>) {
        let (bp, br, t) = self.forms(u, w);
        let b = bp * signs.0 as f64 + br * signs.1 as f64;
        let n = self.n();
        (DMatrix::from_fn(n, n, |y, x| self.eps[y] * b[(x, y)]), t)
    }
}

/// `−Ω(t)·v + so_to_spin(β)·v` for `(β, t) ∈ 𝔰𝔬(𝔫) ⊕ 𝔫`.
///
/// With `(β, t) = (−α̃_g(X), X_𝔫)` this is `−α(X)·v`.
pub fn odd_even_bracket(
    beta: &DMatrix<f64>,
    t: &[f64],
    v: &DVector<Complex64>,
    alpha: &AlphaMap,
    rep: &SpinorRep,
) -> Result<DVector<Complex64>, SuperalgebraError> {
    let m = alpha.dim_k();
    let sig = rep.signature();
    let mut om = CliffordElement::zero(sig);
    for (i, &ti) in t.iter().enumerate() {
        if ti != 0.0 {
            om = &om + &alpha.omega_part(m + i).scale(ti);
        }
    }
    let s = so_to_spin(beta, sig)?;
    let x = &s - &om;
    Ok(rep.act(&x, v)?)
}

/// `(α_v, t_v)` of a single spinor: `g(α_v X, Y) = realify⟨(ε₁·Y·Ω(X) + ε₂·Ω(X)^T·Y)v, v⟩`
/// and `t_v` the Dirac current.
pub fn odd_odd_bracket(
    v: &DVector<Complex64>,
    ip: &SpinorInnerProduct,
    alpha: &AlphaMap,
    rep: &SpinorRep,
    signs: (i8, i8),
) -> (DMatrix<f64>, DVector<f64>) {
    OddOddKernel::new(ip.clone(), alpha, rep).pair(signs, v, v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KillingSuperalgebra {
    pub even_names: Vec<String>,
    /// Complex dimension of `𝔤₁`.
    pub odd_dim: usize,
    pub odd_basis: Vec<DVector<Complex64>>,
    /// Minus the input structure constants.
    pub even_even: StructureConstants,
    /// `ρ(x)` on the odd basis for every even basis element: complex `k×k`.
    pub odd_even: Vec<DMatrix<Complex64>>,
    /// `[u, w]` in even coordinates, for real odd basis pairs `r ≤ s`.
    pub odd_odd: Vec<((usize, usize), Vec<f64>)>,
    pub signs: (i8, i8),
    pub realify: Realify,
    pub sign_trials: Vec<SignTrial>,
    pub skew_residual: f64,
    /// Largest part of `ρ(x)v` outside `𝔤₁`.
    pub odd_even_escape: f64,
    /// Largest least-squares residual when pulling `(α, t)` back to `𝔥`.
    pub odd_odd_escape: f64,
    pub symmetry_subalgebra_only: bool,
    pub(crate) ctx: Context,
}

/// Everything the Jacobi report needs to re-evaluate brackets.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Context {
    /// Frame-combined coordinates of each user even basis element (columns).
    pub to_frame: DMatrix<f64>,
    /// `−α(x)` on `Δ` per frame-combined basis element.
    pub rho_frame: Vec<DMatrix<Complex64>>,
    /// Pseudo-inverse of `X ↦ (−α̃_g(X), X_𝔫)` in user coordinates.
    pub iota_pinv: DMatrix<f64>,
    pub iota: DMatrix<f64>,
    pub kernel: KernelData,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct KernelData {
    pub eps: Vec<f64>,
    pub p: Vec<DMatrix<Complex64>>,
    pub r: Vec<DMatrix<Complex64>>,
    pub c: Vec<DMatrix<Complex64>>,
    pub ip: SpinorInnerProduct,
}

impl KernelData {
    fn kernel(&self) -> OddOddKernel {
        OddOddKernel { ip: self.ip.clone(), eps: self.eps.clone(), p: self.p.clone(), r: self.r.clone(), c: self.c.clone() }
    }
}

impl KillingSuperalgebra {
    pub fn adjoint_sign(&self) -> f64 {
        self.ctx.kernel.ip.adjoint_sign
    }

    pub fn even_dim(&self) -> usize {
        self.even_names.len()
    }

    /// Real basis vector `r` of `𝔤₁`.
    pub fn odd_real(&self, r: usize) -> DVector<Complex64> {
        let k = self.odd_dim;
        if r < k {
            self.odd_basis[r].clone()
        } else {
            &self.odd_basis[r - k] * Complex64::i()
        }
    }

    /// `ρ(x)·v` for even user coordinates `x`.
    pub fn act(&self, x: &[f64], v: &DVector<Complex64>) -> DVector<Complex64> {
        let f = &self.ctx.to_frame * DVector::from_column_slice(x);
        let mut out = DVector::zeros(v.len());
        for (i, &c) in f.iter().enumerate() {
            if c != 0.0 {
                out += &self.ctx.rho_frame[i] * v * Complex64::from(c);
            }
        }
        out
    }

    /// Odd-odd bracket of arbitrary spinors, in even user coordinates.
    pub fn odd_odd_of(&self, u: &DVector<Complex64>, w: &DVector<Complex64>) -> Vec<f64> {
        self.pull_back(self.ctx.kernel.kernel().pair(self.signs, u, w)).0
    }

    pub fn even_bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.even_even.bracket_of(x, y)
    }

    fn pull_back(&self, (a, t): (DMatrix<f64>, DVector<f64>)) -> (Vec<f64>, f64) {
        pull_back(&self.ctx.iota, &self.ctx.iota_pinv, &a, &t)
    }
}

fn pull_back(iota: &DMatrix<f64>, pinv: &DMatrix<f64>, a: &DMatrix<f64>, t: &DVector<f64>) -> (Vec<f64>, f64) {
    let n = t.len();
    let rhs = DVector::from_fn(n * n + n, |r, _| if r < n * n { a[(r / n, r % n)] } else { t[r - n * n] });
    let c = pinv * &rhs;
    let res = (iota * &c - &rhs).amax();
    (c.iter().copied().collect(), res)
}

/// Builds the superalgebra on `Ann(𝔥𝔬𝔩(D))` (`odd_basis`).
pub fn build_superalgebra(
    spec: &HomSpaceSpec,
    frame: &OrthoFrame,
    alpha: &AlphaMap,
    rep: &SpinorRep,
    odd_basis: &[DVector<Complex64>],
    opts: &SuperalgebraOptions,
) -> Result<KillingSuperalgebra, SuperalgebraError> {
    let m = frame.dim_k();
    let n = frame.dim_n();
    let dim = m + n;

    let mut even_even = StructureConstants::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            for (o, c) in even_even.bracket_mut(i, j).iter_mut().zip(spec.constants().bracket(i, j)) {
                *o = -c;
            }
        }
    }

    let mut to_frame = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..m {
        to_frame[(i, i)] = 1.0;
    }
    to_frame.view_mut((m, m), (n, n)).copy_from(frame.change_inv());

    let rho_frame: Vec<DMatrix<Complex64>> =
        (0..dim).map(|x| -rep.represent(&alpha.value(x)).expect("one signature")).collect();

    // ι(x) = (−α̃_g(x), x_𝔫) for user basis x, flattened row-major
    let mut iota = DMatrix::<f64>::zeros(n * n + n, dim);
    for x in 0..dim {
        let u: Vec<f64> = to_frame.column(x).iter().copied().collect();
        let a = frame.nomizu_of(&u);
        for r in 0..n {
            for s in 0..n {
                iota[(r * n + s, x)] = -a[(r, s)];
            }
            iota[(n * n + r, x)] = u[m + r];
        }
    }
    let iota_pinv = iota.clone().pseudo_inverse(1e-12).expect("pseudo-inverse");

    let adjoint_sign = SpinorInnerProduct::new(rep, Realify::Re).adjoint_sign;
    let realify = opts.realify.unwrap_or_else(|| SpinorInnerProduct::natural_realify(adjoint_sign));
    let ip = SpinorInnerProduct::new(rep, realify);
    let kernel = OddOddKernel::new(ip.clone(), alpha, rep);

    let k = odd_basis.len();
    let odd_real = |r: usize| if r < k { odd_basis[r].clone() } else { &odd_basis[r - k] * Complex64::i() };

    // odd-even action in odd coordinates
    let mut odd_even = Vec::with_capacity(dim);
    let mut odd_even_escape: f64 = 0.0;
    if k > 0 {
        let v = DMatrix::from_fn(rep.dim(), k, |r, c| odd_basis[c][r]);
        let vp = v.clone().pseudo_inverse(1e-12).expect("pseudo-inverse");
        for x in 0..dim {
            let mut rho = DMatrix::<Complex64>::zeros(rep.dim(), rep.dim());
            for (i, &c) in to_frame.column(x).iter().enumerate() {
                if c != 0.0 {
                    rho += &rho_frame[i] * Complex64::from(c);
                }
            }
            let img = &rho * &v;
            let coords = &vp * &img;
            odd_even_escape = odd_even_escape.max((&v * &coords - &img).camax());
            odd_even.push(coords);
        }
    } else {
        odd_even = vec![DMatrix::zeros(0, 0); dim];
    }

    // forms for every real basis pair, computed once
    let pairs: Vec<(usize, usize)> = (0..2 * k).flat_map(|r| (r..2 * k).map(move |s| (r, s))).collect();
    let forms: Vec<_> = pairs.iter().map(|&(r, s)| kernel.forms(&odd_real(r), &odd_real(s))).collect();
    let scale = forms.iter().map(|(p, r, _)| p.amax().max(r.amax())).fold(0.0, f64::max);

    let candidates: Vec<(i8, i8)> = match opts.signs {
        SignMode::Auto => vec![(1, 1), (1, -1), (-1, 1), (-1, -1)],
        SignMode::Fixed(a, b) => vec![(a, b)],
    };
    let mut trials = Vec::new();
    for &signs in &candidates {
        let mut skew: f64 = 0.0;
        let mut magnitude: f64 = 0.0;
        for (p, r, _) in &forms {
            let b = p * signs.0 as f64 + r * signs.1 as f64;
            skew = skew.max((&b + b.transpose()).amax());
            magnitude = magnitude.max(b.amax());
        }
        let skew_residual = if scale > 0.0 { skew / scale } else { 0.0 };
        trials.push(SignTrial { signs, skew_residual, magnitude, eoo_residual: None, ooo_residual: None });
    }

    let ctx = Context {
        to_frame,
        rho_frame,
        iota_pinv,
        iota,
        kernel: KernelData { eps: kernel.eps.clone(), p: kernel.p.clone(), r: kernel.r.clone(), c: kernel.c.clone(), ip },
    };
    let build = |signs: (i8, i8)| {
        let mut odd_odd = Vec::with_capacity(pairs.len());
        let mut escape: f64 = 0.0;
        for (&(r, s), (p, q, t)) in pairs.iter().zip(&forms) {
            let b = p * signs.0 as f64 + q * signs.1 as f64;
            let a = DMatrix::from_fn(n, n, |y, x| kernel.eps[y] * b[(x, y)]);
            let (c, res) = pull_back(&ctx.iota, &ctx.iota_pinv, &a, t);
            escape = escape.max(res);
            odd_odd.push(((r, s), c));
        }
        KillingSuperalgebra {
            even_names: (0..dim).map(|i| spec.basis_name(i).to_owned()).collect(),
            odd_dim: k,
            odd_basis: odd_basis.to_vec(),
            even_even: even_even.clone(),
            odd_even: odd_even.clone(),
            odd_odd,
            signs,
            realify,
            sign_trials: Vec::new(),
            skew_residual: 0.0,
            odd_even_escape,
            odd_odd_escape: escape,
            symmetry_subalgebra_only: !spec.full_isometry,
            ctx: ctx.clone(),
        }
    };

    // among skew pairs, prefer equivariance (eoo), then ooo
    let mut best: Option<(usize, f64, f64)> = None;
    for (i, trial) in trials.iter_mut().enumerate() {
        if trial.skew_residual > SKEW_TOL {
            continue;
        }
        let (eoo, ooo) = jacobi::odd_residuals(&build(trial.signs));
        trial.eoo_residual = Some(eoo);
        trial.ooo_residual = Some(ooo);
        let better = match best {
            None => true,
            Some((_, be, bo)) => eoo < be - TIE_TOL || (eoo <= be + TIE_TOL && ooo < bo - TIE_TOL),
        };
        if better {
            best = Some((i, eoo, ooo));
        }
    }
    let Some((chosen, _, _)) = best else {
        return Err(SuperalgebraError::SignConfiguration(trials));
    };
    let mut ksa = build(trials[chosen].signs);
    ksa.skew_residual = trials[chosen].skew_residual;
    ksa.sign_trials = trials;
    Ok(ksa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Signature;
    use crate::connection::{assemble_alpha, build_alpha_g, OmegaSpec};
    use crate::homspace::{orthonormalize, Metric};

    fn flat(n: usize, lambda: Complex64) -> (HomSpaceSpec, OrthoFrame, AlphaMap, SpinorRep) {
        let names = (1..=n).map(|i| format!("T{i}")).collect();
        let spec = HomSpaceSpec::new("flat", Vec::new(), names, Metric::Diagonal(vec![1.0; n])).unwrap();
        let frame = orthonormalize(&spec).unwrap();
        let omega = OmegaSpec::Killing(lambda).resolve(&frame).unwrap();
        let alpha = assemble_alpha(&build_alpha_g(&frame).unwrap(), &omega).unwrap();
        let rep = SpinorRep::new(Signature::euclidean(n));
        (spec, frame, alpha, rep)
    }

    fn basis_spinor(d: usize, i: usize) -> DVector<Complex64> {
        DVector::from_fn(d, |r, _| if r == i { Complex64::from(1.0) } else { Complex64::from(0.0) })
    }

    #[test]
    fn parallel_spinor_bracket_is_the_current() {
        let (_, _, alpha, rep) = flat(3, Complex64::from(0.0));
        let ip = SpinorInnerProduct::new(&rep, Realify::Re);
        let v = DVector::from_vec(vec![Complex64::new(0.3, -1.0), Complex64::new(0.5, 0.2)]);
        let (a, t) = odd_odd_bracket(&v, &ip, &alpha, &rep, (1, 1));
        assert_eq!(a.amax(), 0.0);
        assert!((t - super::super::dirac_current(&v, &ip, &rep)).amax() < 1e-15);
    }

    #[test]
    fn odd_even_on_killing_type() {
        let lambda = Complex64::new(0.0, 0.5);
        let (_, _, alpha, rep) = flat(3, lambda);
        let sig = rep.signature();
        let v = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
        let t = [0.2, -1.0, 0.4];
        let out = odd_even_bracket(&DMatrix::zeros(3, 3), &t, &v, &alpha, &rep).unwrap();
        let x = CliffordElement::from_vector(sig, &t).scale(-lambda);
        assert!((out - rep.act(&x, &v).unwrap()).camax() < 1e-14);

        let mut beta = DMatrix::zeros(3, 3);
        beta[(0, 1)] = -0.7;
        beta[(1, 0)] = 0.7;
        let out = odd_even_bracket(&beta, &[0.0; 3], &v, &alpha, &rep).unwrap();
        let s = so_to_spin(&beta, sig).unwrap();
        assert!((out - rep.act(&s, &v).unwrap()).camax() < 1e-14);
    }

    #[test]
    fn flat_space_superalgebra() {
        let (spec, frame, alpha, rep) = flat(3, Complex64::from(0.0));
        let basis: Vec<_> = (0..2).map(|i| basis_spinor(2, i)).collect();
        let ksa = build_superalgebra(&spec, &frame, &alpha, &rep, &basis, &SuperalgebraOptions::default()).unwrap();
        assert_eq!((ksa.even_dim(), ksa.odd_dim), (3, 2));
        assert!(ksa.symmetry_subalgebra_only);
        assert!(ksa.odd_even.iter().all(|m| m.camax() == 0.0));
        // [v, v] is the current, which is nonzero
        assert!(ksa.odd_odd.iter().any(|(_, c)| c.iter().any(|x| x.abs() > 0.5)));
        let report = super::super::jacobi_report(&ksa);
        assert!(report.entries.iter().all(|e| e.passed));
    }

    #[test]
    fn odd_odd_is_symmetric_and_polarized() {
        let (spec, frame, alpha, rep) = flat(3, Complex64::new(0.0, 0.5));
        let basis: Vec<_> = (0..2).map(|i| basis_spinor(2, i)).collect();
        let ksa = build_superalgebra(&spec, &frame, &alpha, &rep, &basis, &SuperalgebraOptions::default()).unwrap();
        let u = ksa.odd_real(0);
        let w = ksa.odd_real(3);
        let uw = ksa.odd_odd_of(&u, &w);
        let wu = ksa.odd_odd_of(&w, &u);
        assert!(uw.iter().zip(&wu).all(|(a, b)| (a - b).abs() < 1e-14));
        let sum = &u + &w;
        let full = ksa.odd_odd_of(&sum, &sum);
        let (uu, ww) = (ksa.odd_odd_of(&u, &u), ksa.odd_odd_of(&w, &w));
        for i in 0..3 {
            assert!((full[i] - uu[i] - ww[i] - 2.0 * uw[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn fixed_signs_respect_skew_tolerance() {
        let (spec, frame, _, rep) = flat(3, Complex64::from(0.0));
        let sig = rep.signature();
        let ag = build_alpha_g(&frame).unwrap();
        let om: Vec<_> = (0..3)
            .map(|i| CliffordElement::from_terms(sig, [(crate::clifford::Blade::vector(i), Complex64::new(0.0, 0.5)), (crate::clifford::Blade::from_bits(0b111), Complex64::from(0.3))]))
            .collect();
        let alpha = assemble_alpha(&ag, &om).unwrap();
        let basis: Vec<_> = (0..2).map(|i| basis_spinor(2, i)).collect();
        for signs in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let opts = SuperalgebraOptions { signs: SignMode::Fixed(signs.0, signs.1), realify: None };
            match build_superalgebra(&spec, &frame, &alpha, &rep, &basis, &opts) {
                Ok(k) => assert!(k.skew_residual <= SKEW_TOL),
                Err(SuperalgebraError::SignConfiguration(t)) => {
                    assert_eq!(t.len(), 1);
                    assert!(t[0].skew_residual > SKEW_TOL);
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
}
