use std::time::Instant;

use thiserror::Error;

use super::report::{
    matrix, spinor, terms, AlphaEntry, AnnReport, BladeTerm, EvenBracketReport, FrameReport, HolonomyReport,
    InvariantsReport, KappaEntry, KappaReport, OddEvenReport, OddOddReport, Report, SuperalgebraReport, TwistorReport,
};
use super::InputDocument;
use crate::clifford::SpinorRep;
use crate::connection::{assemble_alpha, build_alpha_g, AlphaMap};
use crate::holonomy::{holonomy, twistor_holonomy, ClosureOptions, CurvatureMap, HolonomyResult, RANK_TOL};
use crate::homspace::{curvature, orthonormalize, validate, HomSpaceSpec, OrthoFrame, STRUCTURE_TOL};
use crate::superalgebra::{build_superalgebra, jacobi_report, Realify, SignMode, SuperalgebraOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Holonomy,
    Superalgebra,
    Twistor,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Holonomy => "holonomy",
            Command::Superalgebra => "superalgebra",
            Command::Twistor => "twistor",
        }
    }
}

/// Command line overrides; `None` falls back to the document, then the default.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub rank_tol: Option<f64>,
    pub sign_mode: Option<SignMode>,
    /// `Some(None)` is an explicit `auto`.
    pub realify: Option<Option<Realify>>,
    pub symmetric_fast_path: bool,
    pub timing: bool,
    pub params: Vec<(String, f64)>,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid document: {0}")]
    Schema(String),
    #[error("validation failed: {message}")]
    Validation { message: String, report: Box<Report> },
    #[error("{0}")]
    Domain(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse(_) | PipelineError::Schema(_) => 1,
            PipelineError::Validation { .. } => 2,
            PipelineError::Domain(_) => 3,
        }
    }
}

pub fn parse_sign_mode(s: &str) -> Option<SignMode> {
    Some(match s {
        "auto" => SignMode::Auto,
        "++" => SignMode::Fixed(1, 1),
        "+-" => SignMode::Fixed(1, -1),
        "-+" => SignMode::Fixed(-1, 1),
        "--" => SignMode::Fixed(-1, -1),
        _ => return None,
    })
}

pub fn parse_realify(s: &str) -> Option<Option<Realify>> {
    Some(match s {
        "auto" => None,
        "re" => Some(Realify::Re),
        "im" => Some(Realify::Im),
        "id" => Some(Realify::Id),
        _ => return None,
    })
}

fn sign_name(s: (i8, i8)) -> String {
    let c = |x: i8| if x > 0 { '+' } else { '-' };
    format!("{}{}", c(s.0), c(s.1))
}

struct Clock {
    on: bool,
    last: Instant,
    stages: Vec<(String, f64)>,
}

impl Clock {
    fn lap(&mut self, stage: &str) {
        if self.on {
            let now = Instant::now();
            self.stages.push((stage.to_owned(), (now - self.last).as_secs_f64()));
            self.last = now;
        }
    }
}

fn alpha_table(spec: &HomSpaceSpec, alpha: &AlphaMap) -> Vec<AlphaEntry> {
    // frame basis: 𝔨 names, then a_1 … a_n
    (0..alpha.len())
        .map(|x| AlphaEntry {
            basis: if x < spec.dim_k() { spec.basis_name(x).to_owned() } else { format!("a{}", x - spec.dim_k() + 1) },
            blades: BladeTerm::expand(&alpha.value(x)),
        })
        .collect()
}

fn kappa_table(kappa: &CurvatureMap) -> KappaReport {
    KappaReport {
        span_dim: kappa.span_dim,
        max_abs_coeff: kappa.max_abs_coeff(),
        entries: kappa
            .entries
            .iter()
            .map(|((i, j), k)| KappaEntry { i: i + 1, j: j + 1, blades: BladeTerm::expand(k) })
            .filter(|e| !e.blades.is_empty())
            .collect(),
    }
}

fn holonomy_tables(hol: &HolonomyResult, fast: bool, d: usize) -> (HolonomyReport, AnnReport) {
    (
        HolonomyReport {
            dim: hol.dim,
            iterations: hol.iterations,
            trace: hol.trace.clone(),
            symmetric_fast_path: fast,
            invariants: hol
                .invariants
                .as_ref()
                .map(|i| InvariantsReport { derived_dim: i.derived_dim, center_dim: i.center_dim }),
        },
        AnnReport { dim_complex: hol.ann_dim, spinor_dim: d, basis: hol.ann_basis.iter().map(spinor).collect() },
    )
}

fn frame_report(frame: &OrthoFrame) -> FrameReport {
    FrameReport {
        signature: frame.signature().epsilons(),
        scalings: frame.scales(),
        vectors: frame.change().column_iter().map(|c| c.iter().copied().collect()).collect(),
    }
}

/// Runs one command on the text of an input document.
pub fn run(cmd: Command, text: &str, opts: &RunOptions) -> Result<Report, PipelineError> {
    let mut clock = Clock { on: opts.timing, last: Instant::now(), stages: Vec::new() };
    let doc = InputDocument::from_json(text)?;
    let spec = doc.to_spec()?;
    let omega = doc.omega_spec(&opts.params)?;
    let rank_tol = opts.rank_tol.or(doc.options.rank_tol).unwrap_or(RANK_TOL);
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(PipelineError::Schema(format!("rank tolerance {rank_tol} outside (0, 1)")));
    }
    let sign_mode = match (opts.sign_mode, &doc.options.sign_mode) {
        (Some(s), _) => s,
        (None, Some(s)) => parse_sign_mode(s).ok_or_else(|| PipelineError::Schema(format!("unknown sign mode {s:?}")))?,
        (None, None) => SignMode::Auto,
    };
    let realify = match (opts.realify, &doc.options.realify_mode) {
        (Some(r), _) => r,
        (None, Some(s)) => parse_realify(s).ok_or_else(|| PipelineError::Schema(format!("unknown realify mode {s:?}")))?,
        (None, None) => None,
    };

    let validation = validate(&spec);
    let mut report = Report {
        name: spec.name.clone(),
        command: cmd.name(),
        validation,
        frame: None,
        omega_invariance: None,
        alpha: Vec::new(),
        kappa: None,
        holonomy: None,
        ann: None,
        superalgebra: None,
        twistor: None,
        timing: None,
    };
    clock.lap("validate");
    if !report.validation.passed() {
        let message = report.validation.clone().into_result().expect_err("failed check").to_string();
        return Err(PipelineError::Validation { message, report: Box::new(report) });
    }
    if cmd == Command::Validate {
        return Ok(finish(report, clock));
    }

    let domain = |e: &dyn std::fmt::Display| PipelineError::Domain(e.to_string());
    let frame = orthonormalize(&spec).map_err(|e| domain(&e))?;
    report.frame = Some(frame_report(&frame));
    let alpha_g = build_alpha_g(&frame).map_err(|e| domain(&e))?;
    let fast = opts.symmetric_fast_path && spec.is_symmetric(STRUCTURE_TOL);
    let closure = ClosureOptions { rank_tol, symmetric_fast_path: fast, ..ClosureOptions::default() };

    if cmd == Command::Twistor {
        let curv = curvature(&frame);
        let k = curv.schouten().map_err(|e| domain(&e))?.clone();
        clock.lap("curvature");
        let (alpha, kappa, hol) = twistor_holonomy(&frame, &curv, &alpha_g, &closure).map_err(|e| domain(&e))?;
        clock.lap("holonomy");
        let d = SpinorRep::new(alpha.signature()).dim();
        report.alpha = alpha_table(&spec, &alpha);
        report.kappa = Some(kappa_table(&kappa));
        let (h, a) = holonomy_tables(&hol, fast, d);
        report.holonomy = Some(h);
        report.ann = Some(a);
        report.twistor = Some(TwistorReport::new(alpha.signature(), &k, curv.scal));
        return Ok(finish(report, clock));
    }

    let values = omega.resolve(&frame).map_err(|e| domain(&e))?;
    let alpha = assemble_alpha(&alpha_g, &values).map_err(|e| domain(&e))?;
    report.omega_invariance = Some(crate::connection::check_omega_invariance(&alpha, &frame));
    report.alpha = alpha_table(&spec, &alpha);
    let rep = SpinorRep::new(frame.signature());
    clock.lap("alpha");
    let (kappa, hol) = holonomy(&alpha, &frame, &rep, &closure);
    clock.lap("holonomy");
    report.kappa = Some(kappa_table(&kappa));
    let (h, a) = holonomy_tables(&hol, fast, rep.dim());
    report.holonomy = Some(h);
    report.ann = Some(a);

    if cmd == Command::Superalgebra {
        let sa_opts = SuperalgebraOptions { signs: sign_mode, realify };
        let ksa = build_superalgebra(&spec, &frame, &alpha, &rep, &hol.ann_basis, &sa_opts).map_err(|e| domain(&e))?;
        let jacobi = jacobi_report(&ksa);
        clock.lap("superalgebra");
        let names = &ksa.even_names;
        let dim = ksa.even_dim();
        let mut even_even = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let t = terms(names, ksa.even_even.bracket(i, j));
                if !t.is_empty() {
                    even_even.push(EvenBracketReport { x: names[i].clone(), y: names[j].clone(), terms: t });
                }
            }
        }
        report.superalgebra = Some(SuperalgebraReport {
            label: if ksa.symmetry_subalgebra_only { "symmetry subalgebra only" } else { "killing superalgebra" },
            even_dim: dim,
            odd_dim: ksa.odd_dim,
            signs: sign_name(ksa.signs),
            realify: ksa.realify.name(),
            adjoint_sign: ksa.adjoint_sign(),
            sign_trials: ksa.sign_trials.clone(),
            skew_residual: ksa.skew_residual,
            odd_even_escape: ksa.odd_even_escape,
            odd_odd_escape: ksa.odd_odd_escape,
            even_even,
            odd_even: if ksa.odd_dim == 0 {
                Vec::new()
            } else {
                names.iter().zip(&ksa.odd_even).map(|(n, m)| OddEvenReport { basis: n.clone(), matrix: matrix(m) }).collect()
            },
            odd_odd: ksa
                .odd_odd
                .iter()
                .map(|((r, s), c)| OddOddReport { r: r + 1, s: s + 1, terms: terms(names, c) })
                .filter(|o| !o.terms.is_empty())
                .collect(),
            jacobi,
        });
    }
    Ok(finish(report, clock))
}

fn finish(mut report: Report, clock: Clock) -> Report {
    if clock.on {
        report.timing = Some(clock.stages);
    }
    report
}
