use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ConnectionError, FORM_TOL};
use crate::clifford::{Blade, CliffordElement, Signature};

/// Exterior `k`-form stored by its increasing-index coefficients `F_I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Blade, f64>,
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, comps: BTreeMap::new() }
    }

    /// Reads components `F_{i₁…i_k}` (0-based, any order). Entries that are
    /// permutations of each other must agree up to sign; entries with a
    /// repeated index must vanish.
    pub fn from_components(dim: usize, entries: &[(Vec<usize>, f64)]) -> Result<Self, ConnectionError> {
        let degree = entries.first().map_or(0, |(i, _)| i.len());
        let mut seen: BTreeMap<Blade, (f64, Vec<usize>)> = BTreeMap::new();
        for (idx, c) in entries {
            if idx.len() != degree {
                return Err(ConnectionError::MixedDegree(degree, idx.len()));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(ConnectionError::FrameIndex { index: bad, dim });
            }
            let Some((sign, sorted)) = sort_sign(idx) else {
                if c.abs() > FORM_TOL {
                    return Err(ConnectionError::NotAntisymmetric { indices: idx.clone(), residual: c.abs() });
                }
                continue;
            };
            let b = Blade::from_indices(&sorted, dim)?;
            let value = sign * c;
            match seen.get(&b) {
                Some((prev, _)) if (prev - value).abs() > FORM_TOL * prev.abs().max(1.0) => {
                    return Err(ConnectionError::NotAntisymmetric {
                        indices: idx.clone(),
                        residual: (prev - value).abs(),
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(b, (value, idx.clone()));
                }
            }
        }
        let comps = seen.into_iter().filter(|(_, (v, _))| *v != 0.0).map(|(b, (v, _))| (b, v)).collect();
        Ok(Self { dim, degree, comps })
    }

    pub fn from_blades(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Blade, f64)>) -> Self {
        let mut comps = BTreeMap::new();
        for (b, v) in terms {
            assert_eq!(b.grade(), degree);
            *comps.entry(b).or_insert(0.0) += v;
        }
        comps.retain(|_, v: &mut f64| *v != 0.0);
        Self { dim, degree, comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, f64)> + '_ {
        self.comps.iter().map(|(b, v)| (*b, *v))
    }

    /// `F_{i₁…i_k}` for any index order.
    pub fn component(&self, idx: &[usize]) -> f64 {
        match sort_sign(idx) {
            Some((s, sorted)) => {
                let b = Blade::from_indices(&sorted, self.dim).expect("index in range");
                s * self.comps.get(&b).copied().unwrap_or(0.0)
            }
            None => 0.0,
        }
    }

    /// Components on the basis `b_j = Σ_μ p[(μ, j)] x_μ`:
    /// `F'_J = Σ_I F_I det p[I, J]`.
    pub fn pull_back(&self, p: &DMatrix<f64>) -> Form {
        let k = self.degree;
        let targets = increasing_subsets(p.ncols(), k);
        let mut out = BTreeMap::new();
        for j in &targets {
            let mut acc = 0.0;
            for (b, f) in &self.comps {
                let rows = b.indices();
                let sub = DMatrix::from_fn(k, k, |r, c| p[(rows[r], j[c])]);
                acc += f * if k == 0 { 1.0 } else { sub.determinant() };
            }
            if acc != 0.0 {
                out.insert(Blade::from_indices(j, p.ncols()).expect("in range"), acc);
            }
        }
        Form { dim: p.ncols(), degree: k, comps: out }
    }
}

fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Frame components with every index raised: `F^I = ε_I F_I`.
pub fn raise_indices(f: &Form, sig: Signature) -> Form {
    let terms = f.terms().map(|(b, v)| (b, v * b.indices().iter().map(|&a| sig.eps(a)).product::<f64>()));
    Form::from_blades(f.dim, f.degree, terms)
}

/// `Σ_I F_I e_I`.
pub fn form_to_clifford(f: &Form, sig: Signature) -> CliffordElement {
    assert_eq!(f.dim, sig.dim(), "form and signature dimensions differ");
    CliffordElement::from_terms(sig, f.terms().map(|(b, v)| (b, Complex64::from(v))))
}

/// Reads the real grade-`k` blade coefficients back as a form.
pub fn clifford_to_form(x: &CliffordElement, k: usize) -> Form {
    let sig = x.signature();
    Form::from_blades(sig.dim(), k, x.grade_part(k).terms().map(|(b, c)| (b, c.re)))
}

/// `e_a ⌟ x`, contracting with the metric: `e_1 ⌟ e_12 = ε_1 e_2`.
pub fn interior(a: usize, x: &CliffordElement) -> CliffordElement {
    let sig = x.signature();
    let mut terms = Vec::new();
    for (b, c) in x.terms() {
        if b.contains(a) {
            let before = (b.bits() & ((1u64 << a) - 1)).count_ones();
            let s = if before.is_multiple_of(2) { 1.0 } else { -1.0 } * sig.eps(a);
            terms.push((Blade::from_bits(b.bits() ^ (1 << a)), c * s));
        }
    }
    CliffordElement::from_terms(sig, terms)
}

/// `e_a ∧ x`.
pub fn wedge_vector(a: usize, x: &CliffordElement) -> CliffordElement {
    let sig = x.signature();
    let mut terms = Vec::new();
    for (b, c) in x.terms() {
        if !b.contains(a) {
            let before = (b.bits() & ((1u64 << a) - 1)).count_ones();
            let s = if before.is_multiple_of(2) { 1.0 } else { -1.0 };
            terms.push((Blade::from_bits(b.bits() | (1 << a)), c * s));
        }
    }
    CliffordElement::from_terms(sig, terms)
}
