use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::SpinorRep;

/// How a complex pairing value becomes a real number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Realify {
    Re,
    Im,
    /// The value is used as is; only its real part is kept.
    Id,
}

impl Realify {
    pub fn apply(self, z: Complex64) -> f64 {
        match self {
            Realify::Re | Realify::Id => z.re,
            Realify::Im => z.im,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Realify::Re => "re",
            Realify::Im => "im",
            Realify::Id => "id",
        }
    }
}

/// `Spin⁺`-invariant pairing `⟨u, v⟩ = u^† G v` on `Δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorInnerProduct {
    pub gram: DMatrix<Complex64>,
    /// `σ` with `⟨x·u, v⟩ = σ⟨u, x·v⟩` for all vectors `x`.
    pub adjoint_sign: f64,
    pub realify: Realify,
}

impl SpinorInnerProduct {
    /// `G` from [`SpinorRep::invariant_form`]; the adjoint sign is measured
    /// on the generators.
    pub fn new(rep: &SpinorRep, realify: Realify) -> Self {
        let g = rep.invariant_form();
        let g0 = rep.gamma(0);
        let lhs = g0.adjoint() * &g;
        let rhs = &g * &g0;
        let adjoint_sign = if (&lhs - &rhs).camax() < 1e-12 { 1.0 } else { -1.0 };
        Self { gram: g, adjoint_sign, realify }
    }

    /// Mode making `⟨v, x·v⟩` real-valued before realification: `Re` when
    /// `σ = +1`, `Im` otherwise.
    pub fn natural_realify(adjoint_sign: f64) -> Realify {
        if adjoint_sign > 0.0 {
            Realify::Re
        } else {
            Realify::Im
        }
    }

    pub fn pair(&self, u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
        u.dotc(&(&self.gram * v))
    }

    /// Largest violation of the stated adjoint sign and of `𝔰𝔭𝔦𝔫`-invariance,
    /// over all generators and generator pairs.
    pub fn invariance_residual(&self, rep: &SpinorRep) -> f64 {
        let g = &self.gram;
        let gs = rep.gammas();
        let mut worst: f64 = 0.0;
        for (a, ga) in gs.iter().enumerate() {
            worst = worst.max((ga.adjoint() * g - g * ga * Complex64::from(self.adjoint_sign)).camax());
            for gb in &gs[a + 1..] {
                let s = ga * gb;
                worst = worst.max((s.adjoint() * g + g * &s).camax());
            }
        }
        worst
    }

    /// `G⁻¹ M^† G`, the adjoint of `M` for this pairing.
    pub fn adjoint(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        // G is Hermitian and unitary, so G⁻¹ = G.
        &self.gram * m.adjoint() * &self.gram
    }
}

/// `t_v` with `g(t_v, a_i) = realify⟨v, Γ_i v⟩`, i.e. `t^i = ε_i·realify⟨v, Γ_i v⟩`.
pub fn dirac_current(v: &DVector<Complex64>, ip: &SpinorInnerProduct, rep: &SpinorRep) -> DVector<f64> {
    let sig = rep.signature();
    DVector::from_fn(sig.dim(), |i, _| {
        let gv = rep.gamma(i) * v;
        sig.eps(i) * ip.realify.apply(ip.pair(v, &gv))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Signature;

    #[test]
    fn euclidean_gram_is_identity() {
        let rep = SpinorRep::new(Signature::euclidean(5));
        let ip = SpinorInnerProduct::new(&rep, Realify::Re);
        assert_eq!(ip.gram, DMatrix::identity(4, 4));
        assert_eq!(ip.adjoint_sign, 1.0);
        assert!(ip.invariance_residual(&rep) < 1e-14);
    }

    #[test]
    fn lorentzian_eleven() {
        let rep = SpinorRep::new(Signature::lorentzian(11));
        let ip = SpinorInnerProduct::new(&rep, Realify::Im);
        assert_eq!(ip.adjoint_sign, -1.0);
        assert!(ip.invariance_residual(&rep) < 1e-10);
        assert!((ip.gram.adjoint() - &ip.gram).camax() < 1e-15);
        assert!((&ip.gram * &ip.gram - DMatrix::identity(32, 32)).camax() < 1e-15);
    }

    #[test]
    fn zero_current() {
        let rep = SpinorRep::new(Signature::lorentzian(4));
        let ip = SpinorInnerProduct::new(&rep, Realify::Im);
        assert!(dirac_current(&DVector::zeros(4), &ip, &rep).iter().all(|&x| x == 0.0));
    }

    fn random_spinor(d: usize, seed: u64) -> DVector<Complex64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DVector::from_fn(d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn lorentzian_current_is_causal() {
        let rep = SpinorRep::new(Signature::lorentzian(11));
        let ip = SpinorInnerProduct::new(&rep, SpinorInnerProduct::natural_realify(-1.0));
        let sig = rep.signature();
        for seed in 0..20 {
            let v = random_spinor(32, seed);
            let t = dirac_current(&v, &ip, &rep);
            let norm2: f64 = (0..11).map(|i| sig.eps(i) * t[i] * t[i]).sum();
            assert!(norm2 <= 1e-10 * t.norm_squared(), "seed {seed}: g(t,t) = {norm2}");
            assert!(t.norm() > 1e-6);
        }
    }

    #[test]
    fn current_polarizes() {
        let rep = SpinorRep::new(Signature::new(&[-1, 1, 1, 1, 1]).unwrap());
        let ip = SpinorInnerProduct::new(&rep, Realify::Im);
        for seed in 0..10 {
            let u = random_spinor(4, 2 * seed);
            let w = random_spinor(4, 2 * seed + 1);
            let lhs = dirac_current(&(&u + &w), &ip, &rep) + dirac_current(&(&u - &w), &ip, &rep);
            let rhs = (dirac_current(&u, &ip, &rep) + dirac_current(&w, &ip, &rep)) * 2.0;
            assert!((lhs - rhs).amax() < 1e-12);
        }
    }
}
