use super::span::{flatten, norm, RealSpan};
use crate::clifford::{CliffordElement, SpinorRep, PRUNE_TOL};
use crate::connection::AlphaMap;
use crate::homspace::OrthoFrame;

/// `κ(a_i, a_j)` for `i < j` and the real dimension of their span on `Δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureMap {
    pub entries: Vec<((usize, usize), CliffordElement)>,
    pub span_dim: usize,
}

impl CurvatureMap {
    pub fn get(&self, i: usize, j: usize) -> CliffordElement {
        let (a, b, s) = if i <= j { (i, j, 1.0) } else { (j, i, -1.0) };
        match self.entries.iter().find(|(p, _)| *p == (a, b)) {
            Some((_, k)) => k.scale(s),
            None => CliffordElement::zero(self.entries[0].1.signature()),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().map(|(_, k)| k.max_abs_coeff()).fold(0.0, f64::max)
    }
}

/// `κ(a_i,a_j) = [α(a_i), α(a_j)] − α([a_i,a_j]_𝔥)`, with `α` applied to
/// both the `𝔨`- and `𝔫`-parts of the bracket.
pub fn curvature_map(alpha: &AlphaMap, frame: &OrthoFrame, rep: &SpinorRep, rank_tol: f64) -> CurvatureMap {
    let m = frame.dim_k();
    let n = frame.dim_n();
    let c = frame.constants();
    let values: Vec<CliffordElement> = (0..alpha.len()).map(|x| alpha.value(x)).collect();
    let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let mut k = values[m + i].commutator(&values[m + j]).expect("one signature");
            k = &k - &alpha.value_of(c.bracket(m + i, m + j));
            let scale = k.max_abs_coeff().max(1.0);
            entries.push(((i, j), k.pruned(PRUNE_TOL * scale)));
        }
    }
    let flats: Vec<Vec<f64>> = entries
        .iter()
        .filter(|(_, k)| !k.is_zero())
        .map(|(_, k)| flatten(&rep.represent(k).expect("one signature")))
        .collect();
    let span_dim = match flats.first() {
        None => 0,
        Some(f) => {
            let scale = flats.iter().map(|v| norm(v)).fold(0.0, f64::max);
            let mut span = RealSpan::new(f.len(), rank_tol, scale);
            let mut block: Vec<f64> = flats.concat();
            span.absorb(&mut block, flats.len());
            span.rank()
        }
    };
    CurvatureMap { entries, span_dim }
}
