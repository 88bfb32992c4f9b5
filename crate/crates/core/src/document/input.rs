use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use super::PipelineError;
use crate::connection::{Form, OmegaSpec};
use crate::homspace::{HomSpaceSpec, Metric};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub name: String,
    #[serde(default)]
    pub k_basis: Vec<String>,
    pub n_basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    pub metric: MetricDoc,
    #[serde(default)]
    pub omega: Option<OmegaDoc>,
    #[serde(default)]
    pub flags: FlagsDoc,
    #[serde(default)]
    pub options: OptionsDoc,
    /// Named numbers that phase terms refer to; overridable from the command line.
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub x: String,
    pub y: String,
    #[serde(default)]
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub basis: String,
    pub coeff: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricDoc {
    Diag(Vec<f64>),
    Gram(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OmegaDoc {
    Explicit { entries: Vec<ExplicitEntryDoc> },
    Killing { lambda: f64, #[serde(default)] lambda_im: f64 },
    Sugra4form { terms: Vec<FormTermDoc> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitEntryDoc {
    /// 1-based frame index.
    pub vector: usize,
    pub blades: Vec<BladeDoc>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BladeDoc {
    /// 1-based, strictly increasing.
    pub indices: Vec<usize>,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTermDoc {
    /// 1-based positions in `n_basis`.
    pub indices: Vec<usize>,
    #[serde(default)]
    pub coeff: f64,
    /// Adds `amplitude·cos(param + quarter_turns·π/2)` to `coeff`.
    #[serde(default)]
    pub phase: Option<PhaseDoc>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDoc {
    pub param: String,
    pub amplitude: f64,
    #[serde(default)]
    pub quarter_turns: i32,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsDoc {
    #[serde(default)]
    pub full_isometry: bool,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    pub rank_tol: Option<f64>,
    pub sign_mode: Option<String>,
    pub realify_mode: Option<String>,
}

impl FormTermDoc {
    pub fn value(&self, params: &BTreeMap<String, f64>) -> Result<f64, PipelineError> {
        let Some(p) = &self.phase else { return Ok(self.coeff) };
        let a = params.get(&p.param).ok_or_else(|| schema(format!("unknown parameter {:?}", p.param)))?;
        Ok(self.coeff + p.amplitude * (a + p.quarter_turns as f64 * std::f64::consts::FRAC_PI_2).cos())
    }
}

fn schema(msg: impl Into<String>) -> PipelineError {
    PipelineError::Schema(msg.into())
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        serde_json::from_str(text).map_err(|e| PipelineError::Parse(e.to_string()))
    }

    fn index(&self) -> Result<HashMap<&str, usize>, PipelineError> {
        let mut idx = HashMap::new();
        for (i, s) in self.k_basis.iter().chain(&self.n_basis).enumerate() {
            if idx.insert(s.as_str(), i).is_some() {
                return Err(schema(format!("duplicate basis name {s:?}")));
            }
        }
        Ok(idx)
    }

    pub fn to_spec(&self) -> Result<HomSpaceSpec, PipelineError> {
        let idx = self.index()?;
        let look = |s: &str| idx.get(s).copied().ok_or_else(|| schema(format!("unknown basis name {s:?}")));
        let metric = match &self.metric {
            MetricDoc::Diag(d) => Metric::Diagonal(d.clone()),
            MetricDoc::Gram(rows) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(schema("gram metric must be square"));
                }
                Metric::Gram(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
            }
        };
        let mut spec = HomSpaceSpec::new(self.name.clone(), self.k_basis.clone(), self.n_basis.clone(), metric)
            .map_err(|e| schema(e.to_string()))?;
        spec.full_isometry = self.flags.full_isometry;
        for b in &self.brackets {
            let terms = b.terms.iter().map(|t| Ok((look(&t.basis)?, t.coeff))).collect::<Result<Vec<_>, PipelineError>>()?;
            spec.add_bracket(look(&b.x)?, look(&b.y)?, &terms).map_err(|e| schema(e.to_string()))?;
        }
        Ok(spec)
    }

    /// `Ω` with phase terms evaluated against `parameters` (after overrides).
    pub fn omega_spec(&self, overrides: &[(String, f64)]) -> Result<OmegaSpec, PipelineError> {
        let mut params = self.parameters.clone();
        for (k, v) in overrides {
            if !params.contains_key(k) {
                return Err(schema(format!("unknown parameter {k:?}")));
            }
            params.insert(k.clone(), *v);
        }
        let n = self.n_basis.len();
        let zero_based = |idx: &[usize]| -> Result<Vec<usize>, PipelineError> {
            idx.iter()
                .map(|&i| if (1..=n).contains(&i) { Ok(i - 1) } else { Err(schema(format!("index {i} outside 1..{n}"))) })
                .collect()
        };
        match &self.omega {
            None => Ok(OmegaSpec::zero()),
            Some(OmegaDoc::Killing { lambda, lambda_im }) => Ok(OmegaSpec::Killing(Complex64::new(*lambda, *lambda_im))),
            Some(OmegaDoc::Explicit { entries }) => {
                let mut out = Vec::with_capacity(entries.len());
                for e in entries {
                    let v = zero_based(&[e.vector])?[0];
                    let mut blades = Vec::with_capacity(e.blades.len());
                    for b in &e.blades {
                        let idx = zero_based(&b.indices)?;
                        if idx.windows(2).any(|w| w[0] >= w[1]) {
                            return Err(schema(format!("blade indices {:?} not strictly increasing", b.indices)));
                        }
                        blades.push((idx, Complex64::new(b.re, b.im)));
                    }
                    out.push((v, blades));
                }
                Ok(OmegaSpec::Explicit(out))
            }
            Some(OmegaDoc::Sugra4form { terms }) => {
                let mut comps = Vec::with_capacity(terms.len());
                for t in terms {
                    if t.indices.len() != 4 {
                        return Err(schema(format!("4-form term has {} indices", t.indices.len())));
                    }
                    comps.push((zero_based(&t.indices)?, t.value(&params)?));
                }
                let f = Form::from_components(n, &comps).map_err(|e| schema(e.to_string()))?;
                Ok(OmegaSpec::Sugra4Form(f))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = r#"{
        "name": "s2",
        "k_basis": ["L12"],
        "n_basis": ["L13", "L23"],
        "brackets": [
            {"x": "L12", "y": "L13", "terms": [{"basis": "L23", "coeff": 1}]},
            {"x": "L12", "y": "L23", "terms": [{"basis": "L13", "coeff": -1}]},
            {"x": "L13", "y": "L23", "terms": [{"basis": "L12", "coeff": 1}]}
        ],
        "metric": {"diag": [1, 1]},
        "parameters": {"alpha": 0.0}
    }"#;

    #[test]
    fn builds_spec() {
        let doc = InputDocument::from_json(SPHERE).unwrap();
        let spec = doc.to_spec().unwrap();
        assert_eq!(spec.dim(), 3);
        assert_eq!(spec.constants().get(2, 1, 0), -1.0);
        assert!(matches!(doc.omega_spec(&[]).unwrap(), OmegaSpec::Explicit(v) if v.is_empty()));
    }

    #[test]
    fn schema_errors() {
        let bad = SPHERE.replace(r#""basis": "L23", "coeff": 1}]},
            {"x": "L12", "y": "L23""#, r#""basis": "L99", "coeff": 1}]},
            {"x": "L12", "y": "L23""#);
        let doc = InputDocument::from_json(&bad).unwrap();
        assert!(matches!(doc.to_spec(), Err(PipelineError::Schema(_))));
        let doc = InputDocument::from_json(SPHERE).unwrap();
        assert!(matches!(doc.omega_spec(&[("beta".into(), 1.0)]), Err(PipelineError::Schema(_))));
        assert!(matches!(InputDocument::from_json(&SPHERE[..40]), Err(PipelineError::Parse(_))));
    }

    #[test]
    fn phase_terms() {
        let t = FormTermDoc {
            indices: vec![1, 2, 3, 4],
            coeff: 0.5,
            phase: Some(PhaseDoc { param: "alpha".into(), amplitude: 2.0, quarter_turns: 1 }),
        };
        let params = BTreeMap::from([("alpha".to_string(), 0.3)]);
        assert!((t.value(&params).unwrap() - (0.5 - 2.0 * 0.3f64.sin())).abs() < 1e-15);
        assert!(t.value(&BTreeMap::new()).is_err());
    }
}
