//! Seeded random soft topologies and a property registry that checks
//! implications between topological properties on generated instances, with
//! counterexample shrinking.

pub mod config;
pub mod generate;
pub mod instance;
pub mod registry;
pub mod report;
pub mod runner;
pub mod shrink;

pub use config::GeneratorConfig;
pub use registry::{find, TheoremCase, REGISTRY};
pub use report::{Counterexample, TrialReport, Verdict};
pub use runner::run_theorem;

#[derive(Debug, thiserror::Error)]
pub enum FuzzError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("bad counterexample document: {0}")]
    Document(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
}
