use std::collections::HashSet;

use nalgebra::DMatrix;

use super::HomSpaceError;

/// Dense structure constants `[x_i, x_j] = Σ_k c_ij^k x_k` on a basis of size `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, c: vec![0.0; dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Components of `[x_i, x_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &[f64] {
        let s = (i * self.dim + j) * self.dim;
        &self.c[s..s + self.dim]
    }

    pub fn bracket_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let s = (i * self.dim + j) * self.dim;
        &mut self.c[s..s + self.dim]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket_of(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(self.bracket(i, j)) {
                    *o += xi * yj * c;
                }
            }
        }
        out
    }

    /// Constants in the basis `b_I = Σ_J t[(J, I)] x_J`.
    pub fn change_basis(&self, t: &DMatrix<f64>, t_inv: &DMatrix<f64>) -> Self {
        let d = self.dim;
        // three successive single-index contractions
        let mut s1 = vec![0.0; d * d * d];
        for a in 0..d {
            for b in 0..d {
                for k in 0..d {
                    let mut acc = 0.0;
                    for c in 0..d {
                        acc += self.get(a, b, c) * t_inv[(k, c)];
                    }
                    s1[(a * d + b) * d + k] = acc;
                }
            }
        }
        let mut s2 = vec![0.0; d * d * d];
        for a in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut acc = 0.0;
                    for b in 0..d {
                        acc += t[(b, j)] * s1[(a * d + b) * d + k];
                    }
                    s2[(a * d + j) * d + k] = acc;
                }
            }
        }
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut acc = 0.0;
                    for a in 0..d {
                        acc += t[(a, i)] * s2[(a * d + j) * d + k];
                    }
                    out.c[(i * d + j) * d + k] = acc;
                }
            }
        }
        out
    }
}

/// Inner product on `𝔫` in the user basis.
#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    Diagonal(Vec<f64>),
    Gram(DMatrix<f64>),
}

impl Metric {
    pub fn dim(&self) -> usize {
        match self {
            Metric::Diagonal(d) => d.len(),
            Metric::Gram(g) => g.nrows(),
        }
    }

    pub fn gram(&self) -> DMatrix<f64> {
        match self {
            Metric::Diagonal(d) => DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)),
            Metric::Gram(g) => g.clone(),
        }
    }
}

/// User input: basis names, structure constants on `𝔨 ⊕ 𝔫`, metric on `𝔫`.
///
/// Brackets are entered one ordered pair at a time. A pair whose mirror was
/// never entered is filled by antisymmetry; if both were entered, both are
/// kept verbatim and [`super::validate`] compares them.
#[derive(Clone, Debug, PartialEq)]
pub struct HomSpaceSpec {
    pub name: String,
    k_names: Vec<String>,
    n_names: Vec<String>,
    constants: StructureConstants,
    given: Vec<bool>,
    metric: Metric,
    /// User assertion that `𝔥` is the full isometry algebra.
    pub full_isometry: bool,
}

impl HomSpaceSpec {
    pub fn new(
        name: impl Into<String>,
        k_names: Vec<String>,
        n_names: Vec<String>,
        metric: Metric,
    ) -> Result<Self, HomSpaceError> {
        if n_names.is_empty() {
            return Err(HomSpaceError::EmptyComplement);
        }
        let mut seen = HashSet::new();
        for s in k_names.iter().chain(&n_names) {
            if !seen.insert(s.as_str()) {
                return Err(HomSpaceError::DuplicateName(s.clone()));
            }
        }
        let (rows, cols) = match &metric {
            Metric::Diagonal(d) => (d.len(), d.len()),
            Metric::Gram(g) => (g.nrows(), g.ncols()),
        };
        if rows != n_names.len() || cols != n_names.len() {
            return Err(HomSpaceError::MetricShape { expected: n_names.len(), got: rows.max(cols) });
        }
        let dim = k_names.len() + n_names.len();
        Ok(Self {
            name: name.into(),
            k_names,
            n_names,
            constants: StructureConstants::zeros(dim),
            given: vec![false; dim * dim],
            metric,
            full_isometry: false,
        })
    }

    /// Adds `Σ coeff·x_basis` to `[x_x, x_y]` (combined indices).
    pub fn add_bracket(&mut self, x: usize, y: usize, terms: &[(usize, f64)]) -> Result<(), HomSpaceError> {
        let dim = self.dim();
        for &i in [x, y].iter().chain(terms.iter().map(|(b, _)| b)) {
            if i >= dim {
                return Err(HomSpaceError::IndexOutOfRange { index: i, dim });
            }
        }
        self.given[x * dim + y] = true;
        for &(b, c) in terms {
            self.constants.bracket_mut(x, y)[b] += c;
        }
        if x != y && !self.given[y * dim + x] {
            let v: Vec<f64> = self.constants.bracket(x, y).iter().map(|c| -c).collect();
            self.constants.bracket_mut(y, x).copy_from_slice(&v);
        }
        Ok(())
    }

    pub fn dim_k(&self) -> usize {
        self.k_names.len()
    }

    pub fn dim_n(&self) -> usize {
        self.n_names.len()
    }

    pub fn dim(&self) -> usize {
        self.dim_k() + self.dim_n()
    }

    pub fn k_names(&self) -> &[String] {
        &self.k_names
    }

    pub fn n_names(&self) -> &[String] {
        &self.n_names
    }

    pub fn basis_name(&self, i: usize) -> &str {
        if i < self.dim_k() {
            &self.k_names[i]
        } else {
            &self.n_names[i - self.dim_k()]
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        (0..self.dim()).find(|&i| self.basis_name(i) == name)
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// `[𝔫,𝔫] ⊂ 𝔨` up to `tol` (absolute).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let m = self.dim_k();
        (m..self.dim()).all(|i| {
            (m..self.dim()).all(|j| self.constants.bracket(i, j)[m..].iter().all(|c| c.abs() <= tol))
        })
    }
}
