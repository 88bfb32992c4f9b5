#![allow(dead_code)]

use std::path::PathBuf;

use holospin_core::clifford::SpinorRep;
use holospin_core::connection::{assemble_alpha, build_alpha_g, AlphaMap, OmegaSpec};
use holospin_core::document::InputDocument;
use holospin_core::homspace::{orthonormalize, HomSpaceSpec, OrthoFrame};

pub struct Setup {
    pub spec: HomSpaceSpec,
    pub frame: OrthoFrame,
    pub alpha_g: AlphaMap,
    pub alpha: AlphaMap,
    pub rep: SpinorRep,
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture")
}

pub fn document(name: &str) -> InputDocument {
    InputDocument::from_json(&fixture_text(name)).expect("parse")
}

/// Frame, `α_𝔤` and `α` for a fixture, with `Ω` from the document unless given.
pub fn load(name: &str, omega: Option<OmegaSpec>) -> Setup {
    load_with(name, omega, &[])
}

pub fn load_with(name: &str, omega: Option<OmegaSpec>, params: &[(String, f64)]) -> Setup {
    let doc = document(name);
    let spec = doc.to_spec().expect("spec");
    let omega = omega.unwrap_or_else(|| doc.omega_spec(params).expect("omega"));
    let frame = orthonormalize(&spec).expect("frame");
    let alpha_g = build_alpha_g(&frame).expect("alpha_g");
    let alpha = assemble_alpha(&alpha_g, &omega.resolve(&frame).expect("resolve")).expect("alpha");
    let rep = SpinorRep::new(frame.signature());
    Setup { spec, frame, alpha_g, alpha, rep }
}
