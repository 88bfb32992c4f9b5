//! JSON input document, report document and the end-to-end pipeline the
//! command line drives.

mod input;
mod pipeline;
mod report;

pub use input::{
    BracketDoc, FlagsDoc, InputDocument, MetricDoc, OmegaDoc, OptionsDoc, PhaseDoc, TermDoc, BladeDoc,
    ExplicitEntryDoc, FormTermDoc,
};
pub use pipeline::{parse_realify, parse_sign_mode, run, Command, PipelineError, RunOptions};
pub use report::{
    AlphaEntry, AnnReport, BladeTerm, FrameReport, HolonomyReport, KappaEntry, KappaReport, Report,
    SuperalgebraReport, TwistorReport,
};
