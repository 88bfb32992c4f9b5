use std::fmt;

use serde::{Deserialize, Serialize};

use super::CliffordError;

/// Largest supported dimension; blades are stored as 64-bit masks.
pub const MAX_DIM: usize = 62;

/// Ordered list of `ε_a = ⟨e_a, e_a⟩ ∈ {−1, +1}`.
///
/// `p` counts the timelike (`−1`) entries and `q` the spacelike ones, so a
/// Lorentzian mostly-plus eleven-dimensional space is `(p,q) = (1,10)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Signature {
    n: usize,
    timelike: u64,
}

impl Signature {
    pub fn new(eps: &[i8]) -> Result<Self, CliffordError> {
        if eps.is_empty() {
            return Err(CliffordError::MalformedSignature("empty signature".into()));
        }
        if eps.len() > MAX_DIM {
            return Err(CliffordError::MalformedSignature(format!(
                "dimension {} exceeds {MAX_DIM}",
                eps.len()
            )));
        }
        let mut timelike = 0u64;
        for (a, &e) in eps.iter().enumerate() {
            match e {
                1 => {}
                -1 => timelike |= 1 << a,
                other => {
                    return Err(CliffordError::MalformedSignature(format!(
                        "entry {a} is {other}, expected ±1"
                    )))
                }
            }
        }
        Ok(Self { n: eps.len(), timelike })
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(&vec![1; n]).expect("euclidean signature")
    }

    /// One timelike direction first, then `n − 1` spacelike ones.
    pub fn lorentzian(n: usize) -> Self {
        let mut eps = vec![1; n];
        eps[0] = -1;
        Self::new(&eps).expect("lorentzian signature")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.timelike.count_ones() as usize
    }

    pub fn q(&self) -> usize {
        self.n - self.p()
    }

    pub fn eps(&self, a: usize) -> f64 {
        if self.timelike >> a & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn is_timelike(&self, a: usize) -> bool {
        self.timelike >> a & 1 == 1
    }

    pub(crate) fn timelike_mask(&self) -> u64 {
        self.timelike
    }

    pub fn epsilons(&self) -> Vec<i8> {
        (0..self.n).map(|a| self.eps(a) as i8).collect()
    }

    /// Appends further generators after the existing ones.
    pub fn extended(&self, more: &[i8]) -> Result<Self, CliffordError> {
        let mut eps = self.epsilons();
        eps.extend_from_slice(more);
        Self::new(&eps)
    }
}

impl TryFrom<Vec<i8>> for Signature {
    type Error = CliffordError;
    fn try_from(v: Vec<i8>) -> Result<Self, Self::Error> {
        Self::new(&v)
    }
}

impl From<Signature> for Vec<i8> {
    fn from(s: Signature) -> Self {
        s.epsilons()
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature{:?}", self.epsilons())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p(), self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let s = Signature::new(&[-1, 1, 1, -1]).unwrap();
        assert_eq!((s.p(), s.q(), s.dim()), (2, 2, 4));
        assert_eq!(s.eps(0), -1.0);
        assert_eq!(s.eps(1), 1.0);
        assert_eq!(Signature::lorentzian(11).to_string(), "(1,10)");
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(Signature::new(&[]).is_err());
        assert!(Signature::new(&[1, 0]).is_err());
        assert!(Signature::new(&[2]).is_err());
    }

    #[test]
    fn extension_appends() {
        let s = Signature::euclidean(3).extended(&[1, -1]).unwrap();
        assert_eq!(s.epsilons(), vec![1, 1, 1, 1, -1]);
    }
}
