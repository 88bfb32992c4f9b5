use nalgebra::DMatrix;

use super::{HomSpaceError, OrthoFrame};

/// Algebraic curvature of the canonical Levi-Civita data in the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData {
    /// `R(a_i, a_j)` for `i < j`, row-major over pairs.
    pub riemann: Vec<((usize, usize), DMatrix<f64>)>,
    pub ricci: DMatrix<f64>,
    pub scal: f64,
    /// `None` when `n ≤ 2`.
    pub schouten: Option<DMatrix<f64>>,
}

impl CurvatureData {
    pub fn schouten(&self) -> Result<&DMatrix<f64>, HomSpaceError> {
        self.schouten.as_ref().ok_or(HomSpaceError::SchoutenUndefined(self.ricci.nrows()))
    }

    pub fn riemann(&self, i: usize, j: usize) -> DMatrix<f64> {
        let n = self.ricci.nrows();
        if i == j {
            return DMatrix::zeros(n, n);
        }
        let (a, b, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        let r = &self.riemann.iter().find(|(p, _)| *p == (a, b)).expect("pair stored").1;
        r * s
    }
}

/// `R(a_i,a_j) = [α̃(a_i), α̃(a_j)] − α̃([a_i,a_j]_𝔥)`, then Ricci, scalar
/// curvature and `K = (scal/(2(n−1))·g − Ric)/(n−2)`.
pub fn curvature(frame: &OrthoFrame) -> CurvatureData {
    let m = frame.dim_k();
    let n = frame.dim_n();
    let c = frame.constants();
    let nom: Vec<DMatrix<f64>> = (0..frame.dim()).map(|x| frame.nomizu(x)).collect();

    let mut riemann = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&nom[m + i], &nom[m + j]);
            let mut r = a * b - b * a;
            for (x, &cx) in c.bracket(m + i, m + j).iter().enumerate() {
                if cx != 0.0 {
                    r -= &nom[x] * cx;
                }
            }
            riemann.push(((i, j), r));
        }
    }
    let mut data = CurvatureData { riemann, ricci: DMatrix::zeros(n, n), scal: 0.0, schouten: None };

    // Ric(X,Y) = Σ_a ε_a ⟨R(a_a,X)Y, a_a⟩ = Σ_a R(a_a,X)[a, Y]
    let mut ricci = DMatrix::zeros(n, n);
    for a in 0..n {
        for x in 0..n {
            let r = data.riemann(a, x);
            for y in 0..n {
                ricci[(x, y)] += r[(a, y)];
            }
        }
    }
    let scal: f64 = (0..n).map(|b| frame.eps(b) * ricci[(b, b)]).sum();
    let schouten = (n > 2).then(|| {
        let g = DMatrix::from_fn(n, n, |i, j| if i == j { frame.eps(i) } else { 0.0 });
        (g * (scal / (2.0 * (n as f64 - 1.0))) - &ricci) / (n as f64 - 2.0)
    });
    data.ricci = ricci;
    data.scal = scal;
    data.schouten = schouten;
    data
}
