use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::blade::blade_mul;
use super::{Blade, CliffordError, Signature, PRUNE_TOL};

/// Finite complex linear combination of basis blades in `Cl(p,q)`.
///
/// No zero coefficients are stored. Sums drop exact zeros; products also
/// drop everything below [`PRUNE_TOL`].
#[derive(Clone, PartialEq)]
pub struct CliffordElement {
    sig: Signature,
    terms: BTreeMap<Blade, Complex64>,
}

impl CliffordElement {
    pub fn zero(sig: Signature) -> Self {
        Self { sig, terms: BTreeMap::new() }
    }

    pub fn scalar(sig: Signature, c: impl Into<Complex64>) -> Self {
        Self::from_terms(sig, [(Blade::SCALAR, c.into())])
    }

    /// `c·e_a` (0-based index).
    pub fn vector(sig: Signature, a: usize, c: impl Into<Complex64>) -> Self {
        assert!(a < sig.dim(), "vector index {a} out of range");
        Self::from_terms(sig, [(Blade::vector(a), c.into())])
    }

    /// `Σ_a x_a e_a` from real frame components.
    pub fn from_vector(sig: Signature, x: &[f64]) -> Self {
        assert_eq!(x.len(), sig.dim());
        Self::from_terms(
            sig,
            x.iter().enumerate().map(|(a, &c)| (Blade::vector(a), Complex64::from(c))),
        )
    }

    /// Panics if a blade lies outside the signature; use
    /// [`CliffordElement::try_from_terms`] for untrusted input.
    pub fn from_terms(sig: Signature, terms: impl IntoIterator<Item = (Blade, Complex64)>) -> Self {
        Self::try_from_terms(sig, terms).expect("blade within signature")
    }

    pub fn try_from_terms(
        sig: Signature,
        terms: impl IntoIterator<Item = (Blade, Complex64)>,
    ) -> Result<Self, CliffordError> {
        let mut out = Self::zero(sig);
        for (b, c) in terms {
            if let Some(top) = b.max_index() {
                if top >= sig.dim() {
                    return Err(CliffordError::IndexOutOfRange { index: top, dim: sig.dim() });
                }
            }
            out.add_term(b, c);
        }
        Ok(out)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, Complex64)> + '_ {
        self.terms.iter().map(|(b, c)| (*b, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: Blade) -> Complex64 {
        self.terms.get(&b).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, b: Blade, c: Complex64) {
        if c == Complex64::default() {
            return;
        }
        let slot = self.terms.entry(b).or_default();
        *slot += c;
        if *slot == Complex64::default() {
            self.terms.remove(&b);
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients with `|c| ≤ tol`.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.terms.retain(|_, c| c.norm() > tol);
        self
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        let mut out = Self::zero(self.sig);
        for (b, c) in &self.terms {
            out.add_term(*b, c * s);
        }
        out
    }

    pub fn grade_part(&self, k: usize) -> Self {
        Self {
            sig: self.sig,
            terms: self.terms.iter().filter(|(b, _)| b.grade() == k).map(|(b, c)| (*b, *c)).collect(),
        }
    }

    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn is_pure_grade(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeff(Blade::SCALAR)
    }

    /// Reverse `ẽ_I`: flips the order of generators in each blade.
    pub fn reverse(&self) -> Self {
        let mut out = Self::zero(self.sig);
        for (b, c) in &self.terms {
            let k = b.grade();
            let s = if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(*b, c * s);
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<(), CliffordError> {
        if self.sig != other.sig {
            return Err(CliffordError::SignatureMismatch { left: self.sig, right: other.sig });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CliffordError> {
        self.check_same(other)?;
        let timelike = self.sig.timelike_mask();
        let mut acc: BTreeMap<Blade, Complex64> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let (s, bits) = blade_mul(a.bits(), b.bits(), timelike);
                *acc.entry(Blade::from_bits(bits)).or_default() += x * y * s;
            }
        }
        acc.retain(|_, c| c.norm() > PRUNE_TOL);
        Ok(Self { sig: self.sig, terms: acc })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CliffordError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, *c);
        }
        Ok(out)
    }

    /// `[a, b] = a·b − b·a`.
    pub fn commutator(&self, other: &Self) -> Result<Self, CliffordError> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        Ok((&ab - &ba).pruned(PRUNE_TOL))
    }

    /// Re-reads the same blades in a larger signature whose first generators
    /// coincide with this one.
    pub fn embed(&self, target: Signature) -> Result<Self, CliffordError> {
        for a in 0..self.sig.dim() {
            if a >= target.dim() || target.eps(a) != self.sig.eps(a) {
                return Err(CliffordError::SignatureMismatch { left: self.sig, right: target });
            }
        }
        Ok(Self { sig: target, terms: self.terms.clone() })
    }

    /// Largest coefficient difference, over the union of supports.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (b, c) in &self.terms {
            worst = worst.max((c - other.coeff(*b)).norm());
        }
        for (b, c) in &other.terms {
            if !self.terms.contains_key(b) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

impl Add for &CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_add(rhs).expect("signature mismatch in Clifford sum")
    }
}

impl Sub for &CliffordElement {
    type Output = CliffordElement;
    fn sub(self, rhs: &CliffordElement) -> CliffordElement {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        self.scale(-1.0)
    }
}

/// Panics on signature mismatch; [`CliffordElement::try_mul`] reports it.
impl Mul for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_mul(rhs).expect("signature mismatch in Clifford product")
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}·{:?}", c.re, b)?;
            } else {
                write!(f, "({}{:+}i)·{:?}", c.re, c.im, b)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig3() -> Signature {
        Signature::new(&[-1, 1, 1]).unwrap()
    }

    #[test]
    fn one_plus_e1_times_one_minus_e1() {
        for eps in [1i8, -1] {
            let sig = Signature::new(&[eps, 1]).unwrap();
            let one = CliffordElement::scalar(sig, 1.0);
            let e1 = CliffordElement::vector(sig, 0, 1.0);
            let lhs = &(&one + &e1) * &(&one - &e1);
            let expected = CliffordElement::scalar(sig, 1.0 - eps as f64);
            assert_eq!(lhs, expected);
        }
    }

    #[test]
    fn scalar_multiplication() {
        let sig = sig3();
        let x = CliffordElement::from_terms(
            sig,
            [(Blade::vector(1), Complex64::new(2.0, 1.0)), (Blade::from_bits(0b101), 3.0.into())],
        );
        let two = CliffordElement::scalar(sig, 2.0);
        assert_eq!(&two * &x, x.scale(2.0));
        assert_eq!(&x * &two, x.scale(2.0));
    }

    #[test]
    fn mismatch_is_reported() {
        let a = CliffordElement::scalar(Signature::euclidean(2), 1.0);
        let b = CliffordElement::scalar(Signature::euclidean(3), 1.0);
        assert!(matches!(a.try_mul(&b), Err(CliffordError::SignatureMismatch { .. })));
    }

    #[test]
    fn no_stored_zeros() {
        let sig = sig3();
        let e = CliffordElement::vector(sig, 1, 1.0);
        assert!((&e - &e).is_zero());
        assert_eq!((&e - &e).len(), 0);
    }

    #[test]
    fn generator_anticommutators_exact() {
        let sig = Signature::new(&[-1, 1, -1, 1, 1]).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let ea = CliffordElement::vector(sig, a, 1.0);
                let eb = CliffordElement::vector(sig, b, 1.0);
                let anti = &(&ea * &eb) + &(&eb * &ea);
                let expected = if a == b {
                    CliffordElement::scalar(sig, 2.0 * sig.eps(a))
                } else {
                    CliffordElement::zero(sig)
                };
                assert_eq!(anti, expected);
            }
        }
    }

    fn arb_element(n: usize) -> impl Strategy<Value = Vec<(u64, i8, i8)>> {
        prop::collection::vec((0u64..(1 << n), -4i8..5, -4i8..5), 0..8)
    }

    fn build(sig: Signature, raw: &[(u64, i8, i8)]) -> CliffordElement {
        CliffordElement::from_terms(
            sig,
            raw.iter().map(|&(b, re, im)| (Blade::from_bits(b), Complex64::new(re as f64, im as f64))),
        )
    }

    proptest! {
        // Small-integer coefficients keep every product exact.
        #[test]
        fn associativity(a in arb_element(5), b in arb_element(5), c in arb_element(5)) {
            let sig = Signature::new(&[1, -1, 1, 1, -1]).unwrap();
            let (a, b, c) = (build(sig, &a), build(sig, &b), build(sig, &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn reverse_is_antiautomorphism(a in arb_element(4), b in arb_element(4)) {
            let sig = Signature::new(&[1, -1, 1, 1]).unwrap();
            let (a, b) = (build(sig, &a), build(sig, &b));
            prop_assert_eq!((&a * &b).reverse(), &b.reverse() * &a.reverse());
        }
    }
}
