use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::FuzzError;

/// Identifier of the trial stream derivation, stored in every report.
pub const RNG_ALGORITHM: &str = "chacha8-stream-v1";

/// Per-trial universes are capped at this many soft elements.
pub const MAX_ELEMENTS: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Upper bound on points per trial universe.
    pub points: usize,
    /// Upper bound on parameters per trial universe.
    pub params: usize,
    pub seed: u64,
    /// Random generators drawn per subbase.
    pub subbase: usize,
    pub max_topology: usize,
    pub trials: usize,
    /// Instance draws per trial before the trial counts as skipped.
    pub attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { points: 4, params: 2, seed: 0, subbase: 3, max_topology: 512, trials: 100, attempts: 16 }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), FuzzError> {
        let bad = |msg: String| Err(FuzzError::Config(msg));
        if self.points == 0 || self.params == 0 {
            return bad("points and params must be at least 1".into());
        }
        if self.points > softtopo::soft::MAX_POINTS {
            return bad(format!("at most {} points", softtopo::soft::MAX_POINTS));
        }
        let elements = (self.points as u128).checked_pow(self.params as u32);
        if elements.is_none_or(|n| n > MAX_ELEMENTS as u128) {
            return bad(format!("points^params must not exceed {MAX_ELEMENTS}"));
        }
        if self.max_topology < 2 {
            return bad("max_topology must be at least 2".into());
        }
        if self.attempts == 0 {
            return bad("attempts must be at least 1".into());
        }
        Ok(())
    }
}

/// Independent stream for one trial: the seed picks the key, the trial index
/// picks the stream, so trials can run in any order.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}
