use nalgebra::SymmetricEigen;
use serde::Serialize;

use super::{HomSpaceError, HomSpaceSpec, STRUCTURE_TOL};

const MAX_OFFENDERS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Antisymmetry,
    Reductivity,
    Jacobi,
    MetricSymmetry,
    MetricNondegenerate,
    AdInvariance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub max_residual: f64,
    /// Offending basis pairs or triples by name, at most a dozen.
    pub offenders: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// First failed check as an error.
    pub fn into_result(self) -> Result<(), HomSpaceError> {
        let Some(bad) = self.checks.into_iter().find(|c| !c.passed) else {
            return Ok(());
        };
        let detail = format!("{} (max residual {:.3e})", bad.offenders.join(", "), bad.max_residual);
        Err(match bad.check {
            Check::Antisymmetry => HomSpaceError::NotAntisymmetric(detail),
            Check::Jacobi => HomSpaceError::Jacobi(detail),
            Check::Reductivity => HomSpaceError::NotReductive(detail),
            Check::MetricSymmetry => HomSpaceError::MetricNotSymmetric(detail),
            Check::MetricNondegenerate => HomSpaceError::DegenerateMetric { min_abs_eigenvalue: bad.max_residual },
            Check::AdInvariance => HomSpaceError::NotAdInvariant(detail),
        })
    }
}

struct Collector {
    check: Check,
    tol: f64,
    worst: f64,
    offenders: Vec<String>,
    failed: bool,
}

impl Collector {
    fn new(check: Check, tol: f64) -> Self {
        Self { check, tol, worst: 0.0, offenders: Vec::new(), failed: false }
    }

    fn record(&mut self, residual: f64, who: impl FnOnce() -> String) {
        self.worst = self.worst.max(residual);
        if residual > self.tol {
            self.failed = true;
            if self.offenders.len() < MAX_OFFENDERS {
                self.offenders.push(who());
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome { check: self.check, passed: !self.failed, max_residual: self.worst, offenders: self.offenders }
    }
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Runs every structural check. Pure; never stops at the first failure.
pub fn validate(spec: &HomSpaceSpec) -> ValidationReport {
    let c = spec.constants();
    let dim = spec.dim();
    let m = spec.dim_k();
    let n = spec.dim_n();
    let name = |i: usize| spec.basis_name(i).to_owned();
    let tol = STRUCTURE_TOL * c.max_abs().max(1.0);

    let mut anti = Collector::new(Check::Antisymmetry, tol);
    for i in 0..dim {
        for j in i..dim {
            let r = max_abs(c.bracket(i, j).iter().zip(c.bracket(j, i)).map(|(a, b)| a + b));
            anti.record(r, || format!("({}, {})", name(i), name(j)));
        }
    }

    let mut jac = Collector::new(Check::Jacobi, tol * c.max_abs().max(1.0));
    for i in 0..dim {
        for j in i + 1..dim {
            for k in j + 1..dim {
                let mut acc = vec![0.0; dim];
                for (a, b, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (p, &cp) in c.bracket(a, b).iter().enumerate() {
                        if cp != 0.0 {
                            for (o, &q) in acc.iter_mut().zip(c.bracket(p, z)) {
                                *o += cp * q;
                            }
                        }
                    }
                }
                jac.record(max_abs(acc), || format!("({}, {}, {})", name(i), name(j), name(k)));
            }
        }
    }

    let mut red = Collector::new(Check::Reductivity, tol);
    for l in 0..m {
        for t in m..dim {
            let r = max_abs(c.bracket(l, t)[..m].iter().copied());
            red.record(r, || format!("({}, {})", name(l), name(t)));
        }
    }

    let g = spec.metric().gram();
    let gscale = g.amax().max(1.0);
    let mut sym = Collector::new(Check::MetricSymmetry, STRUCTURE_TOL * gscale);
    for i in 0..n {
        for j in i + 1..n {
            sym.record((g[(i, j)] - g[(j, i)]).abs(), || format!("({}, {})", name(m + i), name(m + j)));
        }
    }

    let eig = SymmetricEigen::new(g.clone()).eigenvalues;
    let min_abs = eig.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
    let nondegenerate = CheckOutcome {
        check: Check::MetricNondegenerate,
        passed: min_abs.is_finite() && min_abs > STRUCTURE_TOL * eig.amax(),
        max_residual: min_abs,
        offenders: Vec::new(),
    };

    // ⟨[L,X]_𝔫, Y⟩ + ⟨X, [L,Y]_𝔫⟩ on user basis vectors
    let mut adinv = Collector::new(Check::AdInvariance, tol * gscale);
    for l in 0..m {
        for x in 0..n {
            for y in x..n {
                let lx = &c.bracket(l, m + x)[m..];
                let ly = &c.bracket(l, m + y)[m..];
                let mut r = 0.0;
                for v in 0..n {
                    r += lx[v] * g[(v, y)] + g[(x, v)] * ly[v];
                }
                adinv.record(r.abs(), || format!("({}; {}, {})", name(l), name(m + x), name(m + y)));
            }
        }
    }

    ValidationReport {
        checks: vec![anti.finish(), red.finish(), jac.finish(), sym.finish(), nondegenerate, adinv.finish()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homspace::Metric;

    fn so3_as_sphere() -> HomSpaceSpec {
        // so(3) = span(L12) ⊕ span(L13, L23), with L_ab e_c = δ_bc e_a − δ_ac e_b
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let mut s = HomSpaceSpec::new("s2", names(&["L12"]), names(&["L13", "L23"]), Metric::Diagonal(vec![1.0, 1.0]))
            .unwrap();
        s.add_bracket(0, 1, &[(2, -1.0)]).unwrap();
        s.add_bracket(0, 2, &[(1, 1.0)]).unwrap();
        s.add_bracket(1, 2, &[(0, -1.0)]).unwrap();
        s
    }

    #[test]
    fn sphere_passes() {
        let r = validate(&so3_as_sphere());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r, validate(&so3_as_sphere()));
    }

    #[test]
    fn non_reductive_names_pair() {
        let mut s = so3_as_sphere();
        s.add_bracket(0, 1, &[(0, 0.5)]).unwrap();
        let r = validate(&s);
        let red = r.checks.iter().find(|c| c.check == Check::Reductivity).unwrap();
        assert!(!red.passed);
        assert!(red.offenders.contains(&"(L12, L13)".to_string()));
    }

    #[test]
    fn affine_line_is_not_reductive() {
        // [A, B] = B with 𝔨 = span(B): Jacobi holds, reductivity does not
        let mut s = HomSpaceSpec::new("aff", vec!["B".into()], vec!["A".into()], Metric::Diagonal(vec![1.0])).unwrap();
        s.add_bracket(1, 0, &[(0, 1.0)]).unwrap();
        let r = validate(&s);
        assert!(r.checks.iter().filter(|c| c.check != Check::Reductivity).all(|c| c.passed), "{r:?}");
        let err = r.into_result().unwrap_err();
        assert_eq!(err.code(), "reductivity");
        assert!(err.to_string().contains("(B, A)"));
    }

    #[test]
    fn perturbed_constant_breaks_jacobi() {
        let mut s = so3_as_sphere();
        s.add_bracket(0, 1, &[(1, 1e-3)]).unwrap();
        let r = validate(&s);
        let jac = r.checks.iter().find(|c| c.check == Check::Jacobi).unwrap();
        assert!(!jac.passed);
        assert!(jac.max_residual > 1e-4);
    }

    #[test]
    fn degenerate_and_non_invariant_metric() {
        let s = so3_as_sphere();
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let mut t = HomSpaceSpec::new("s2", names(&["L12"]), names(&["L13", "L23"]), Metric::Diagonal(vec![1.0, 0.0]))
            .unwrap();
        t.add_bracket(0, 1, &[(2, -1.0)]).unwrap();
        t.add_bracket(0, 2, &[(1, 1.0)]).unwrap();
        t.add_bracket(1, 2, &[(0, -1.0)]).unwrap();
        assert_eq!(validate(&t).into_result().unwrap_err().code(), "metric-degenerate");

        let mut u = HomSpaceSpec::new("s2", names(&["L12"]), names(&["L13", "L23"]), Metric::Diagonal(vec![1.0, 2.0]))
            .unwrap();
        u.add_bracket(0, 1, &[(2, -1.0)]).unwrap();
        u.add_bracket(0, 2, &[(1, 1.0)]).unwrap();
        u.add_bracket(1, 2, &[(0, -1.0)]).unwrap();
        assert_eq!(validate(&u).into_result().unwrap_err().code(), "ad-invariance");
        assert!(validate(&s).passed());
    }

    #[test]
    fn conflicting_mirror_is_antisymmetry_failure() {
        let mut s = so3_as_sphere();
        s.add_bracket(2, 1, &[(0, -1.0)]).unwrap();
        assert_eq!(validate(&s).into_result().unwrap_err().code(), "antisymmetry");
    }
}
