//! One line per acceptance criterion, then a single assertion over all of them.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use holospin_core::clifford::{commutator_action, so_to_spin, Blade, CliffordElement, Signature, SpinorRep};
use holospin_core::connection::OmegaSpec;
use holospin_core::holonomy::{holonomy, twistor_holonomy, ClosureOptions, CurvatureMap, HolonomyResult};
use holospin_core::homspace::curvature;
use holospin_core::superalgebra::{build_superalgebra, jacobi_report, SignMode, SuperalgebraOptions};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn hol(s: &common::Setup, fast: bool, rank_tol: f64) -> (CurvatureMap, HolonomyResult) {
    let opts = ClosureOptions { rank_tol, symmetric_fast_path: fast, ..ClosureOptions::default() };
    holonomy(&s.alpha, &s.frame, &s.rep, &opts)
}

fn blade(idx: &[usize], n: usize) -> Blade {
    Blade::from_indices(idx, n).unwrap()
}

fn freund_rubin() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    // full background; frame order J45, L15..L45, J14, J24, J34, J15, J25, J35
    let full = common::load("freund_rubin", None);
    let (kappa, h) = hol(&full, false, 1e-9);
    let mut s4: f64 = 0.0;
    for i in 1..5 {
        for j in i + 1..5 {
            s4 = s4.max(kappa.get(i, j).max_abs_coeff());
        }
    }
    ok &= s4 < 1e-9;
    notes.push(format!("(a) S4 block max {s4:.1e}"));

    // X7 block; a_m of the full background is frame index 0 for m = 0 and m − 4 otherwise
    let x7 = common::load("freund_rubin_x7", None);
    let (k2, h2) = hol(&x7, false, 1e-9);
    let f = |m: usize| if m == 0 { 0 } else { m - 4 };
    let sig = x7.frame.signature();
    let expected: [((usize, usize), Vec<Vec<usize>>); 5] = [
        ((5, 10), vec![vec![5, 10], vec![7, 8]]),
        ((6, 10), vec![vec![6, 10], vec![7, 9]]),
        ((5, 9), vec![vec![5, 9], vec![6, 8]]),
        ((0, 10), vec![vec![7], vec![0, 10]]),
        ((0, 9), vec![vec![6], vec![0, 9]]),
    ];
    let mut worst: f64 = 0.0;
    for ((a, b), blades) in &expected {
        let want = CliffordElement::from_terms(
            sig,
            blades.iter().map(|m| (blade(&m.iter().map(|&x| f(x)).collect::<Vec<_>>(), 7), Complex64::from(1.0))),
        );
        worst = worst.max(k2.get(f(*a), f(*b)).distance(&want));
    }
    ok &= worst < 1e-9;
    notes.push(format!("(b) kappa2 max deviation {worst:.3e}"));

    ok &= h2.dim == 15;
    notes.push(format!("(c) hol dim {}", h2.dim));
    ok &= h2.ann_dim == 2 && h.ann_dim == 8;
    notes.push(format!("(d) ann {} on X7, {} on full", h2.ann_dim, h.ann_dim));

    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 10.0;
    notes.push(format!("{secs:.2}s"));
    Outcome { id: "1 freund-rubin reproduction", passed: ok, detail: notes.join("; ") }
}

fn circle() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for phase in [0.0, PI / 6.0, PI / 4.0, PI / 2.0] {
        let s = common::load_with("circle_background", None, &[("alpha".to_string(), phase)]);
        let (kappa, h) = hol(&s, false, 1e-9);
        let n = s.frame.dim_n();
        let mut smallest = f64::INFINITY;
        for i in 1..5 {
            for j in i + 1..5 {
                let k = kappa.get(i, j);
                smallest = smallest.min(k.coeff(blade(&[i, j], n)).norm());
            }
        }
        ok &= h.ann_dim == 0 && smallest >= 0.1;
        notes.push(format!("phase {phase:.4}: ann {} min |e_ie_j| {smallest:.4}", h.ann_dim));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 30.0;
    notes.push(format!("{secs:.2}s"));
    Outcome { id: "2 circle obstruction", passed: ok, detail: notes.join("; ") }
}

fn spheres() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, n) in [("round_s2", 2), ("round_s3", 3), ("round_s4", 4)] {
        let s = common::load(name, None);
        let (_, g) = hol(&s, false, 1e-9);
        let (_, f) = hol(&s, true, 1e-9);
        ok &= g.dim == n * (n - 1) / 2 && g.ann_dim == 0 && (f.dim, f.ann_dim) == (g.dim, g.ann_dim);
        notes.push(format!("S{n}: generic {}/{} fast {}/{}", g.dim, g.ann_dim, f.dim, f.ann_dim));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 5.0;
    notes.push(format!("{secs:.2}s"));
    Outcome { id: "3 symmetric-space oracle", passed: ok, detail: notes.join("; ") }
}

fn killing_spheres() -> Outcome {
    let mut notes = Vec::new();
    let mut passing: Vec<Option<f64>> = Vec::new();
    for (name, n) in [("round_s2", 2), ("round_s3", 3), ("round_s4", 4)] {
        let mut found = None;
        let mut seen = Vec::new();
        for s in [0.5, -0.5] {
            let setup = common::load(name, Some(OmegaSpec::Killing(Complex64::from(s))));
            let (_, h) = hol(&setup, false, 1e-9);
            seen.push(format!("{s:+}: {}/{}", h.dim, h.ann_dim));
            if found.is_none() && h.dim == 0 && h.ann_dim == setup.rep.dim() {
                found = Some(s);
            }
        }
        notes.push(format!("S{n} [{}]", seen.join(", ")));
        passing.push(found);
    }
    let ok = passing.iter().all(Option::is_some) && passing.windows(2).all(|w| w[0] == w[1]);
    notes.push(format!("passing sign {:?}", passing));
    Outcome { id: "4 killing-spinor flatness", passed: ok, detail: notes.join("; ") }
}

fn skew(rng: &mut ChaCha8Rng, sig: Signature) -> DMatrix<f64> {
    let n = sig.dim();
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(-1.0..1.0);
            b[(i, j)] = x;
            b[(j, i)] = -x;
        }
    }
    // A = B·η is skew for ⟨·,·⟩
    b * DMatrix::from_fn(n, n, |i, j| if i == j { sig.eps(i) } else { 0.0 })
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for (p, q) in [(0, 3), (1, 3), (1, 6), (1, 10)] {
        let mut eps = vec![-1i8; p];
        eps.extend(vec![1i8; q]);
        let sig = Signature::new(&eps).unwrap();
        for _ in 0..1000 {
            let a = skew(&mut rng, sig);
            let s = so_to_spin(&a, sig).unwrap();
            worst = worst.max((commutator_action(&s) - &a).amax());
        }
    }
    Outcome { id: "5 so_to_spin round trip", passed: worst < 1e-10, detail: format!("max residual {worst:.2e}") }
}

fn clifford_suite() -> Outcome {
    let sig = Signature::lorentzian(11);
    let rep = SpinorRep::new(sig);
    let g = rep.gammas();
    let d = rep.dim();
    let mut exact = true;
    for a in 0..11 {
        for b in 0..11 {
            let ac = &g[a] * &g[b] + &g[b] * &g[a];
            let want = if a == b { DMatrix::identity(d, d) * Complex64::from(2.0 * sig.eps(a)) } else { DMatrix::zeros(d, d) };
            exact &= ac == want;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let random = |rng: &mut ChaCha8Rng| {
        let terms: Vec<_> = (0..24)
            .map(|_| (Blade::from_bits(rng.gen_range(0..1u64 << 11)), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        CliffordElement::from_terms(sig, terms)
    };
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = random(&mut rng);
        let y = random(&mut rng);
        let lhs = rep.represent(&x.try_mul(&y).unwrap()).unwrap();
        let rhs = rep.represent(&x).unwrap() * rep.represent(&y).unwrap();
        worst = worst.max((lhs - rhs).camax());
    }
    Outcome {
        id: "6 clifford representation",
        passed: exact && worst < 1e-12,
        detail: format!("anticommutators exact {exact}; homomorphism residual {worst:.2e}"),
    }
}

fn twistor() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["round_s3", "flat_abelian"] {
        let s = common::load(name, None);
        let curv = curvature(&s.frame);
        let (alpha, kappa, h) = twistor_holonomy(&s.frame, &curv, &s.alpha_g, &ClosureOptions::default()).unwrap();
        let d = SpinorRep::new(alpha.signature()).dim();
        let k = kappa.max_abs_coeff();
        ok &= h.ann_dim == d && (name != "round_s3" || k < 1e-9);
        notes.push(format!("{name}: kappa {k:.1e} ann {}/{d}", h.ann_dim));
    }
    Outcome { id: "7 twistor model spaces", passed: ok, detail: notes.join("; ") }
}

fn superalgebra() -> Outcome {
    let s = common::load("freund_rubin", None);
    let (_, h) = hol(&s, false, 1e-9);
    let opts = SuperalgebraOptions { signs: SignMode::Auto, realify: None };
    let ksa = build_superalgebra(&s.spec, &s.frame, &s.alpha, &s.rep, &h.ann_basis, &opts).unwrap();
    let c = s.spec.constants();
    let n = c.dim();
    let mut exact = ksa.even_dim() == n;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                exact &= ksa.even_even.get(i, j, k) == -c.get(i, j, k);
            }
        }
    }
    let jac = jacobi_report(&ksa);
    let evaluated = ["eee", "eeo", "eoo", "ooo"].iter().all(|id| jac.entries.iter().any(|e| e.identity == *id));
    let table: Vec<_> = jac.entries.iter().map(|e| format!("{} {:.2e} {}", e.identity, e.max_residual, if e.passed { "pass" } else { "fail" })).collect();
    Outcome {
        id: "8 superalgebra structure",
        passed: exact && ksa.skew_residual < 1e-8 && evaluated,
        detail: format!(
            "even-even exact {exact}; signs {:?} skew {:.1e}; jacobi [{}]",
            ksa.signs,
            ksa.skew_residual,
            table.join(", ")
        ),
    }
}

#[test]
fn acceptance() {
    let outcomes = [freund_rubin(), circle(), spheres(), killing_spheres(), round_trip(), clifford_suite(), twistor(), superalgebra()];
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.detail);
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
