use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::KillingSuperalgebra;

/// Pass threshold for every graded Jacobi identity.
pub const JACOBI_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiEntry {
    /// `eee`, `eeo`, `eoo` or `ooo`.
    pub identity: &'static str,
    pub triples: usize,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiReport {
    pub threshold: f64,
    pub entries: Vec<JacobiEntry>,
}

impl JacobiReport {
    pub fn get(&self, identity: &str) -> &JacobiEntry {
        self.entries.iter().find(|e| e.identity == identity).expect("known identity")
    }
}

fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

fn entry(identity: &'static str, triples: usize, max_residual: f64) -> JacobiEntry {
    JacobiEntry { identity, triples, max_residual, passed: max_residual <= JACOBI_TOL }
}

/// Bracket tables over the real odd basis `b_1 … b_{2k}`.
struct Tables {
    /// `ρ(x)` as a real `2k×2k` matrix per even basis element.
    rho: Vec<DMatrix<f64>>,
    /// `[b_r, b_s]` in even coordinates, indexed `r·2k + s`.
    odd_odd: Vec<Vec<f64>>,
    /// Spinor of each real basis vector, as columns.
    spinors: DMatrix<Complex64>,
}

impl Tables {
    fn new(ksa: &KillingSuperalgebra) -> Self {
        let k = ksa.odd_dim;
        let r = 2 * k;
        let rho = ksa
            .odd_even
            .iter()
            .map(|c| {
                let mut m = DMatrix::zeros(r, r);
                for i in 0..k {
                    for j in 0..k {
                        let (a, b) = (c[(i, j)].re, c[(i, j)].im);
                        m[(i, j)] = a;
                        m[(k + i, j)] = b;
                        m[(i, k + j)] = -b;
                        m[(k + i, k + j)] = a;
                    }
                }
                m
            })
            .collect();
        let dim = ksa.even_dim();
        let mut odd_odd = vec![vec![0.0; dim]; r * r];
        for ((a, b), c) in &ksa.odd_odd {
            odd_odd[a * r + b] = c.clone();
            odd_odd[b * r + a] = c.clone();
        }
        let d = ksa.odd_basis.first().map_or(0, |v| v.len());
        let spinors = DMatrix::from_fn(d, r, |row, col| ksa.odd_real(col)[row]);
        Self { rho, odd_odd, spinors }
    }

    fn r(&self) -> usize {
        self.spinors.ncols()
    }

    /// `ρ(Σ z_x e_x)` on the real odd basis.
    fn rho_of(&self, z: &[f64]) -> DMatrix<f64> {
        let r = self.r();
        let mut m = DMatrix::zeros(r, r);
        for (x, &c) in z.iter().enumerate() {
            if c != 0.0 {
                m += &self.rho[x] * c;
            }
        }
        m
    }

    fn spinor_norm(&self, c: &DVector<f64>) -> f64 {
        (&self.spinors * c.map(Complex64::from)).camax()
    }
}

/// `[x,[b_r,b_s]] − [[x,b_r],b_s] − [b_r,[x,b_s]]`, from the tables.
fn eoo(ksa: &KillingSuperalgebra, t: &Tables) -> (usize, f64) {
    let dim = ksa.even_dim();
    let r = t.r();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for x in 0..dim {
        let ex = unit(dim, x);
        let rho = &t.rho[x];
        for a in 0..r {
            for b in a..r {
                let mut res = ksa.even_bracket(&ex, &t.odd_odd[a * r + b]);
                for q in 0..r {
                    let (ca, cb) = (rho[(q, a)], rho[(q, b)]);
                    for (o, (u, w)) in res.iter_mut().zip(t.odd_odd[q * r + b].iter().zip(&t.odd_odd[a * r + q])) {
                        *o -= ca * u + cb * w;
                    }
                }
                worst = res.iter().fold(worst, |m, v| m.max(v.abs()));
                count += 1;
            }
        }
    }
    (count, worst)
}

/// `[[b_a,b_b],b_c] + [[b_b,b_c],b_a] + [[b_c,b_a],b_b]`, measured on `Δ`.
fn ooo(t: &Tables) -> (usize, f64) {
    let r = t.r();
    let rhos: Vec<DMatrix<f64>> = (0..r * r).map(|i| t.rho_of(&t.odd_odd[i])).collect();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for a in 0..r {
        for b in a..r {
            for c in b..r {
                let s = rhos[a * r + b].column(c) + rhos[b * r + c].column(a) + rhos[c * r + a].column(b);
                worst = worst.max(t.spinor_norm(&s.into_owned()));
                count += 1;
            }
        }
    }
    (count, worst)
}

/// `(eoo, ooo)` residuals; used to choose among admissible sign pairs.
pub(crate) fn odd_residuals(ksa: &KillingSuperalgebra) -> (f64, f64) {
    if ksa.odd_dim == 0 {
        return (0.0, 0.0);
    }
    let t = Tables::new(ksa);
    (eoo(ksa, &t).1, ooo(&t).1)
}

/// Residuals of the four graded Jacobi identities over basis triples.
///
/// `eee` and `eeo` are evaluated directly (the latter on spinors); `eoo`
/// and `ooo` use the bracket tables, which is exact up to the odd-even
/// escape reported alongside.
pub fn jacobi_report(ksa: &KillingSuperalgebra) -> JacobiReport {
    let dim = ksa.even_dim();
    let e: Vec<Vec<f64>> = (0..dim).map(|i| unit(dim, i)).collect();

    let mut eee: f64 = 0.0;
    let mut n_eee = 0;
    for i in 0..dim {
        for j in i + 1..dim {
            for k in j + 1..dim {
                let a = ksa.even_bracket(&ksa.even_bracket(&e[i], &e[j]), &e[k]);
                let b = ksa.even_bracket(&ksa.even_bracket(&e[j], &e[k]), &e[i]);
                let c = ksa.even_bracket(&ksa.even_bracket(&e[k], &e[i]), &e[j]);
                eee = a.iter().zip(&b).zip(&c).fold(eee, |m, ((x, y), z)| m.max((x + y + z).abs()));
                n_eee += 1;
            }
        }
    }

    // [x,[y,v]] − [y,[x,v]] − [[x,y],v] over the complex odd basis
    let mut eeo: f64 = 0.0;
    let mut n_eeo = 0;
    for i in 0..dim {
        for j in i + 1..dim {
            let xy = ksa.even_bracket(&e[i], &e[j]);
            for v in &ksa.odd_basis {
                let s = ksa.act(&e[i], &ksa.act(&e[j], v)) - ksa.act(&e[j], &ksa.act(&e[i], v)) - ksa.act(&xy, v);
                eeo = eeo.max(s.camax());
                n_eeo += 1;
            }
        }
    }

    let (n_eoo, eoo_res, n_ooo, ooo_res) = if ksa.odd_dim == 0 {
        (0, 0.0, 0, 0.0)
    } else {
        let t = Tables::new(ksa);
        let (a, b) = eoo(ksa, &t);
        let (c, d) = ooo(&t);
        (a, b, c, d)
    };

    JacobiReport {
        threshold: JACOBI_TOL,
        entries: vec![
            entry("eee", n_eee, eee),
            entry("eeo", n_eeo, eeo),
            entry("eoo", n_eoo, eoo_res),
            entry("ooo", n_ooo, ooo_res),
        ],
    }
}
