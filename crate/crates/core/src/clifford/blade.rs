use std::cmp::Ordering;
use std::fmt;

use super::{CliffordError, Signature};

/// Basis blade `e_I = e_{i₁}·…·e_{i_k}` for a strictly increasing index set,
/// stored as a bit mask (bit `a` set ⇔ `a ∈ I`). Indices are 0-based here;
/// the JSON documents use 1-based indices.
///
/// Blades order by grade first, then lexicographically by index list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_bits(bits: u64) -> Self {
        Blade(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn vector(a: usize) -> Self {
        Blade(1 << a)
    }

    /// Strictly increasing 0-based indices, each below `dim`.
    pub fn from_indices(indices: &[usize], dim: usize) -> Result<Self, CliffordError> {
        let mut bits = 0u64;
        for (k, &i) in indices.iter().enumerate() {
            if i >= dim {
                return Err(CliffordError::IndexOutOfRange { index: i, dim });
            }
            if k > 0 && indices[k - 1] >= i {
                return Err(CliffordError::NotIncreasing(indices.to_vec()));
            }
            bits |= 1 << i;
        }
        Ok(Blade(bits))
    }

    pub fn from_one_based(indices: &[usize], dim: usize) -> Result<Self, CliffordError> {
        if indices.contains(&0) {
            return Err(CliffordError::IndexOutOfRange { index: 0, dim });
        }
        let zero_based: Vec<usize> = indices.iter().map(|i| i - 1).collect();
        Self::from_indices(&zero_based, dim).map_err(|e| match e {
            CliffordError::IndexOutOfRange { index, dim } => {
                CliffordError::IndexOutOfRange { index: index + 1, dim }
            }
            CliffordError::NotIncreasing(_) => CliffordError::NotIncreasing(indices.to_vec()),
            other => other,
        })
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|a| self.0 >> a & 1 == 1).collect()
    }

    pub fn one_based(self) -> Vec<usize> {
        self.indices().into_iter().map(|i| i + 1).collect()
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 >> a & 1 == 1
    }

    pub(crate) fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade().cmp(&other.grade()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else {
                let lowest = diff & diff.wrapping_neg();
                if self.0 & lowest != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        let idx = self.one_based();
        let wide = idx.iter().any(|&i| i > 9);
        for (k, i) in idx.iter().enumerate() {
            if wide && k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Sign of reordering `e_A·e_B` into increasing order, ignoring contractions.
#[inline]
pub(crate) fn reorder_sign(a: u64, b: u64) -> f64 {
    let mut swaps = 0u32;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Unchecked product of two blades: `e_A·e_B = c·e_{A△B}`.
#[inline]
pub(crate) fn blade_mul(a: u64, b: u64, timelike: u64) -> (f64, u64) {
    let mut sign = reorder_sign(a, b);
    if (a & b & timelike).count_ones() % 2 == 1 {
        sign = -sign;
    }
    (sign, a ^ b)
}

/// `e_A·e_B = c·e_J` with `J = A △ B` and `c` a product of reordering signs
/// and `ε_a` for every contracted index.
pub fn blade_product(a: Blade, b: Blade, sig: &Signature) -> Result<(f64, Blade), CliffordError> {
    for blade in [a, b] {
        if let Some(top) = blade.max_index() {
            if top >= sig.dim() {
                return Err(CliffordError::IndexOutOfRange { index: top, dim: sig.dim() });
            }
        }
    }
    let (s, bits) = blade_mul(a.0, b.0, sig.timelike_mask());
    Ok((s, Blade(bits)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Multiplies generator by generator, bubbling each new factor into
    /// place and counting transpositions explicitly.
    fn brute_force(a: &[usize], b: &[usize], eps: &[f64]) -> (f64, Vec<usize>) {
        let mut word: Vec<usize> = a.iter().chain(b).copied().collect();
        let mut sign = 1.0;
        loop {
            let mut changed = false;
            let mut k = 0;
            while k + 1 < word.len() {
                if word[k] > word[k + 1] {
                    word.swap(k, k + 1);
                    sign = -sign;
                    changed = true;
                } else if word[k] == word[k + 1] {
                    sign *= eps[word[k]];
                    word.drain(k..k + 2);
                    changed = true;
                    continue;
                }
                k += 1;
            }
            if !changed {
                return (sign, word);
            }
        }
    }

    #[test]
    fn defining_relations() {
        let sig = Signature::new(&[-1, 1, 1]).unwrap();
        let e = |i| Blade::vector(i);
        assert_eq!(blade_product(e(0), e(0), &sig).unwrap(), (-1.0, Blade::SCALAR));
        assert_eq!(blade_product(e(1), e(1), &sig).unwrap(), (1.0, Blade::SCALAR));
        let e12 = Blade::from_indices(&[0, 1], 3).unwrap();
        assert_eq!(blade_product(e(0), e(1), &sig).unwrap(), (1.0, e12));
        assert_eq!(blade_product(e(1), e(0), &sig).unwrap(), (-1.0, e12));
    }

    #[test]
    fn overlapping_bivectors() {
        // (e1e2)(e2e3) = ε₂ e1e3
        for eps2 in [1i8, -1] {
            let sig = Signature::new(&[1, eps2, 1]).unwrap();
            let a = Blade::from_indices(&[0, 1], 3).unwrap();
            let b = Blade::from_indices(&[1, 2], 3).unwrap();
            let (s, j) = blade_product(a, b, &sig).unwrap();
            assert_eq!(j, Blade::from_indices(&[0, 2], 3).unwrap());
            assert_eq!(s, eps2 as f64);
        }
    }

    #[test]
    fn matches_brute_force_everywhere() {
        let eps = [1.0, -1.0, 1.0, -1.0, 1.0];
        let sig = Signature::new(&[1, -1, 1, -1, 1]).unwrap();
        for a in 0u64..32 {
            for b in 0u64..32 {
                let (s, j) = blade_product(Blade(a), Blade(b), &sig).unwrap();
                let (bs, bw) = brute_force(&Blade(a).indices(), &Blade(b).indices(), &eps);
                assert_eq!(s, bs, "{a:b} * {b:b}");
                assert_eq!(j.indices(), bw);
            }
        }
    }

    #[test]
    fn grade_bookkeeping() {
        let sig = Signature::euclidean(6);
        for a in 0u64..64 {
            for b in 0u64..64 {
                let (ga, gb) = (Blade(a).grade(), Blade(b).grade());
                let (_, j) = blade_product(Blade(a), Blade(b), &sig).unwrap();
                let g = j.grade();
                assert!(g >= ga.abs_diff(gb) && g <= ga + gb);
                assert_eq!((g + ga + gb) % 2, 0);
            }
        }
    }

    #[test]
    fn index_errors() {
        let sig = Signature::euclidean(3);
        assert!(blade_product(Blade::vector(3), Blade::SCALAR, &sig).is_err());
        assert!(Blade::from_indices(&[1, 1], 3).is_err());
        assert!(Blade::from_indices(&[2, 1], 3).is_err());
        assert!(Blade::from_one_based(&[0], 3).is_err());
        assert_eq!(Blade::from_one_based(&[1, 3], 3).unwrap().indices(), vec![0, 2]);
    }

    #[test]
    fn ordering_is_grade_then_lexicographic() {
        let mut v: Vec<Blade> = (0u64..16).map(Blade).collect();
        v.sort();
        let lists: Vec<Vec<usize>> = v.iter().map(|b| b.indices()).collect();
        assert_eq!(lists[0], Vec::<usize>::new());
        assert_eq!(lists[1], vec![0]);
        assert_eq!(lists[5], vec![0, 1]);
        assert_eq!(lists[6], vec![0, 2]);
        assert_eq!(lists[10], vec![2, 3]);
        assert_eq!(lists[15], vec![0, 1, 2, 3]);
    }
}
