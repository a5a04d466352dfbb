//! Serializable outcome of one fuzz run.

use serde::{Deserialize, Serialize};
use softtopo::io::SpaceDocument;

use crate::config::GeneratorConfig;
use crate::generate::HausdorffStats;
use crate::instance::Instance;
use crate::registry::TheoremCase;
use crate::shrink::{self, ShrinkStep};
use crate::FuzzError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Confirmed,
    Counterexample,
    AllSkipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub original_size: usize,
    pub size: usize,
    pub domain: SpaceDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<SpaceDocument>,
    pub shrink_trace: Vec<ShrinkStep>,
}

impl Counterexample {
    pub fn instance(&self) -> Result<Instance, FuzzError> {
        Instance::from_documents(&self.domain, self.codomain.as_ref())
    }

    /// Rebuilt from its documents, the instance still satisfies the
    /// hypothesis and violates the conclusion.
    pub fn verify(&self, case: &TheoremCase) -> Result<bool, FuzzError> {
        Ok(shrink::fails(case, &self.instance()?))
    }

    pub fn is_shrink_minimal(&self, case: &TheoremCase) -> Result<bool, FuzzError> {
        Ok(shrink::is_shrink_minimal(case, &self.instance()?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub case: String,
    pub statement: String,
    pub rng: String,
    pub config: GeneratorConfig,
    pub trials: usize,
    pub confirmed: usize,
    pub skipped: usize,
    pub counterexample_trials: usize,
    /// Trials in which some draw satisfied the hypothesis.
    pub hypothesis_fired: usize,
    /// Draws whose generation failed or whose topology could not be rebuilt.
    pub generation_failures: usize,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hausdorff_generation: Option<HausdorffStats>,
    /// Shrunk counterexamples from the first failing trials.
    pub counterexamples: Vec<Counterexample>,
}

impl TrialReport {
    pub fn to_json(&self) -> String {
        softtopo::io::to_canonical_string(self)
    }

    pub fn classified(&self) -> bool {
        self.confirmed + self.skipped + self.counterexample_trials == self.trials
    }
}
