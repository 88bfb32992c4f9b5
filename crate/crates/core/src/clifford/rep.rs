use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{Blade, CliffordElement, CliffordError, Signature};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Matrix with exactly one nonzero entry per row: `(M v)[r] = phase[r]·v[col[r]]`.
/// Every gamma matrix built here, and every product of them, has this shape.
#[derive(Clone, Debug, PartialEq)]
struct Monomial {
    col: Vec<usize>,
    phase: Vec<Complex64>,
}

impl Monomial {
    fn identity(d: usize) -> Self {
        Self { col: (0..d).collect(), phase: vec![ONE; d] }
    }

    fn new(col: Vec<usize>, phase: Vec<Complex64>) -> Self {
        Self { col, phase }
    }

    fn dim(&self) -> usize {
        self.col.len()
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        let col = self.col.iter().map(|&k| rhs.col[k]).collect();
        let phase = self.phase.iter().zip(&self.col).map(|(p, &k)| p * rhs.phase[k]).collect();
        Monomial { col, phase }
    }

    fn scale(&self, s: Complex64) -> Monomial {
        Monomial { col: self.col.clone(), phase: self.phase.iter().map(|p| p * s).collect() }
    }

    fn kron(&self, rhs: &Monomial) -> Monomial {
        let m = rhs.dim();
        let mut col = Vec::with_capacity(self.dim() * m);
        let mut phase = Vec::with_capacity(self.dim() * m);
        for (i, &ci) in self.col.iter().enumerate() {
            for (k, &ck) in rhs.col.iter().enumerate() {
                col.push(ci * m + ck);
                phase.push(self.phase[i] * rhs.phase[k]);
            }
        }
        Monomial { col, phase }
    }

    fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (r, (&c, &p)) in self.col.iter().zip(&self.phase).enumerate() {
            m[(r, c)] = p;
        }
        m
    }
}

fn sigma_x() -> Monomial {
    Monomial::new(vec![1, 0], vec![ONE, ONE])
}

fn sigma_y() -> Monomial {
    Monomial::new(vec![1, 0], vec![-I, I])
}

fn sigma_z() -> Monomial {
    Monomial::new(vec![0, 1], vec![ONE, -ONE])
}

/// Hermitian generators of the positive-definite algebra on `C^{2^⌊m/2⌋}`, `m` even or 1.
fn euclidean_even(m: usize) -> Vec<Monomial> {
    match m {
        0 => Vec::new(),
        1 => vec![Monomial::identity(1)],
        2 => vec![sigma_x(), sigma_y()],
        _ => {
            let inner = euclidean_even(m - 2);
            let id = Monomial::identity(inner[0].dim());
            let mut out: Vec<Monomial> = inner.iter().map(|g| g.kron(&sigma_z())).collect();
            out.push(id.kron(&sigma_x()));
            out.push(id.kron(&sigma_y()));
            out
        }
    }
}

/// Irreducible complex representation of `Cl(p,q)` with `Γ_a Γ_b + Γ_b Γ_a = 2 ε_a δ_ab`.
///
/// Even `n`: the usual Pauli tensor tower. Odd `n ≥ 3`: the tower for `n − 1`
/// plus the normalized product `Γ_1⋯Γ_{n−1}`. Timelike generators are then
/// multiplied by `i`.
#[derive(Clone, Debug)]
pub struct SpinorRep {
    sig: Signature,
    gammas: Vec<Monomial>,
}

impl SpinorRep {
    pub fn new(sig: Signature) -> Self {
        let n = sig.dim();
        let mut gs = if n.is_multiple_of(2) || n == 1 {
            euclidean_even(n)
        } else {
            let mut gs = euclidean_even(n - 1);
            let mut p = Monomial::identity(gs[0].dim());
            for g in &gs {
                p = p.mul(g);
            }
            let sq = p.mul(&p).phase[0];
            if sq.re < 0.0 {
                p = p.scale(-I);
            }
            gs.push(p);
            gs
        };
        for (a, g) in gs.iter_mut().enumerate() {
            if sig.is_timelike(a) {
                *g = g.scale(I);
            }
        }
        Self { sig, gammas: gs }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// Complex dimension `2^⌊n/2⌋`.
    pub fn dim(&self) -> usize {
        self.gammas[0].dim()
    }

    pub fn gamma(&self, a: usize) -> DMatrix<Complex64> {
        self.gammas[a].to_dense()
    }

    pub fn gammas(&self) -> Vec<DMatrix<Complex64>> {
        self.gammas.iter().map(Monomial::to_dense).collect()
    }

    fn blade_monomial(&self, b: Blade) -> Monomial {
        let mut m = Monomial::identity(self.dim());
        for a in b.indices() {
            m = m.mul(&self.gammas[a]);
        }
        m
    }

    fn check(&self, x: &CliffordElement) -> Result<(), CliffordError> {
        if x.signature() != self.sig {
            return Err(CliffordError::SignatureMismatch { left: x.signature(), right: self.sig });
        }
        Ok(())
    }

    pub fn represent(&self, x: &CliffordElement) -> Result<DMatrix<Complex64>, CliffordError> {
        Ok(self.sparse_represent(x)?.to_dense())
    }

    /// Product of the timelike generators in increasing order, times `i`
    /// when that product is anti-Hermitian: Hermitian, unitary, and
    /// `𝔰𝔭𝔦𝔫`-invariant as a sesquilinear form.
    pub fn invariant_form(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut g = DMatrix::<Complex64>::identity(d, d);
        for a in 0..self.sig.dim() {
            if self.sig.is_timelike(a) {
                g *= self.gamma(a);
            }
        }
        if (g.adjoint() + &g).camax() < 1e-14 {
            g *= Complex64::i();
        }
        g
    }

    pub fn sparse_represent(&self, x: &CliffordElement) -> Result<SparseMatrix, CliffordError> {
        self.check(x)?;
        let d = self.dim();
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); d];
        for (b, c) in x.terms() {
            let m = self.blade_monomial(b);
            for r in 0..d {
                let v = m.phase[r] * c;
                match rows[r].iter_mut().find(|(col, _)| *col == m.col[r]) {
                    Some(slot) => slot.1 += v,
                    None => rows[r].push((m.col[r], v)),
                }
            }
        }
        Ok(SparseMatrix::from_rows(d, rows))
    }

    /// Spinor `x·ψ`.
    pub fn act(&self, x: &CliffordElement, psi: &DVector<Complex64>) -> Result<DVector<Complex64>, CliffordError> {
        Ok(self.sparse_represent(x)?.apply(psi))
    }
}

/// Square complex matrix in compressed-row form.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseMatrix {
    fn from_rows(dim: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        let mut row_start = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.retain(|(_, v)| *v != Complex64::default());
            row.sort_by_key(|(c, _)| *c);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_start.push(cols.len());
        }
        Self { dim, row_start, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_start[r]..self.row_start[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_fn(self.dim, |r, _| {
            (self.row_start[r]..self.row_start[r + 1]).map(|k| self.vals[k] * v[self.cols[k]]).sum()
        })
    }

    /// `self·h − h·self`.
    pub fn commutator(&self, h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let d = self.dim;
        let mut out = DMatrix::zeros(d, d);
        for (r, k, v) in self.entries() {
            // (S h)[r, j] += v h[k, j];  (h S)[i, k] += h[i, r] v
            for j in 0..d {
                out[(r, j)] += v * h[(k, j)];
            }
            let src = h.column(r).into_owned();
            let mut dst = out.column_mut(k);
            dst.axpy(-v, &src, ONE);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anticommutators_exact(sig: Signature) {
        let rep = SpinorRep::new(sig);
        let g = rep.gammas();
        let d = rep.dim();
        assert_eq!(d, 1 << (sig.dim() / 2));
        for a in 0..sig.dim() {
            for b in 0..sig.dim() {
                let anti = &g[a] * &g[b] + &g[b] * &g[a];
                let expected = if a == b {
                    DMatrix::identity(d, d) * Complex64::from(2.0 * sig.eps(a))
                } else {
                    DMatrix::zeros(d, d)
                };
                assert_eq!(anti, expected, "a={a} b={b} sig={sig}");
            }
        }
    }

    #[test]
    fn n1_is_scalar_one() {
        let rep = SpinorRep::new(Signature::euclidean(1));
        assert_eq!(rep.dim(), 1);
        assert_eq!(rep.gamma(0)[(0, 0)], ONE);
    }

    #[test]
    fn eleven_dimensional_lorentzian_has_dim_32() {
        assert_eq!(SpinorRep::new(Signature::lorentzian(11)).dim(), 32);
    }

    #[test]
    fn anticommutation_across_signatures() {
        for n in 1..=9 {
            anticommutators_exact(Signature::euclidean(n));
            anticommutators_exact(Signature::lorentzian(n));
        }
        anticommutators_exact(Signature::new(&[-1, 1, -1, 1, 1, -1]).unwrap());
        anticommutators_exact(Signature::lorentzian(11));
    }

    #[test]
    fn represent_basics() {
        let sig = Signature::new(&[-1, 1, 1, 1]).unwrap();
        let rep = SpinorRep::new(sig);
        let one = rep.represent(&CliffordElement::scalar(sig, 1.0)).unwrap();
        assert_eq!(one, DMatrix::identity(4, 4));
        for a in 0..4 {
            assert_eq!(rep.represent(&CliffordElement::vector(sig, a, 1.0)).unwrap(), rep.gamma(a));
        }
    }

    #[test]
    fn sparse_commutator_matches_dense() {
        let sig = Signature::lorentzian(5);
        let rep = SpinorRep::new(sig);
        let x = CliffordElement::from_terms(
            sig,
            [
                (Blade::from_bits(0b00011), Complex64::new(0.5, 0.0)),
                (Blade::from_bits(0b10100), Complex64::new(0.0, -1.5)),
                (Blade::from_bits(0b01101), Complex64::new(2.0, 1.0)),
            ],
        );
        let h = rep.represent(&CliffordElement::from_vector(sig, &[1.0, -2.0, 0.5, 3.0, 0.25])).unwrap();
        let s = rep.sparse_represent(&x).unwrap();
        let dense = rep.represent(&x).unwrap();
        let expected = &dense * &h - &h * &dense;
        assert!((s.commutator(&h) - expected).camax() < 1e-14);
    }

    #[test]
    fn signature_mismatch() {
        let rep = SpinorRep::new(Signature::euclidean(3));
        let x = CliffordElement::scalar(Signature::euclidean(4), 1.0);
        assert!(rep.represent(&x).is_err());
    }
}
