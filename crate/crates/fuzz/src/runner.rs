//! Parallel execution of registered cases.

use rayon::prelude::*;

use crate::config::{trial_rng, GeneratorConfig, RNG_ALGORITHM};
use crate::generate::HausdorffStats;
use crate::instance::Instance;
use crate::registry::{evaluate, find, Gen, Outcome, TheoremCase};
use crate::report::{Counterexample, TrialReport, Verdict};
use crate::shrink::shrink;
use crate::FuzzError;

/// Counterexamples persisted per report.
pub const MAX_PERSISTED: usize = 5;

struct Trial {
    outcome: Outcome,
    failures: usize,
    hausdorff: HausdorffStats,
    instance: Option<Instance>,
}

/// Up to `attempts` draws; the first one meeting the hypothesis decides.
fn run_trial(case: &TheoremCase, config: &GeneratorConfig, index: usize) -> Trial {
    let mut rng = trial_rng(config.seed, index);
    let mut gen = Gen { rng: &mut rng, config, hausdorff: HausdorffStats::default() };
    let mut failures = 0;
    let attempts = if case.retry { config.attempts } else { 1 };
    for _ in 0..attempts {
        let inst = match (case.generate)(&mut gen) {
            Ok(inst) => inst,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        match evaluate(case, &inst) {
            Outcome::Invalid => failures += 1,
            Outcome::Skipped => {}
            outcome => {
                let instance = (outcome == Outcome::Counterexample).then_some(inst);
                return Trial { outcome, failures, hausdorff: gen.hausdorff, instance };
            }
        }
    }
    Trial { outcome: Outcome::Skipped, failures, hausdorff: gen.hausdorff, instance: None }
}

pub fn run_case(case: &TheoremCase, config: &GeneratorConfig) -> Result<TrialReport, FuzzError> {
    config.validate()?;
    let trials: Vec<Trial> = (0..config.trials).into_par_iter().map(|i| run_trial(case, config, i)).collect();
    let count = |o: Outcome| trials.iter().filter(|t| t.outcome == o).count();
    let (confirmed, counterexample_trials) = (count(Outcome::Confirmed), count(Outcome::Counterexample));
    let mut hausdorff = HausdorffStats::default();
    for t in &trials {
        hausdorff.merge(&t.hausdorff);
    }
    let counterexamples = trials
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.instance.as_ref().map(|inst| (i, inst)))
        .take(MAX_PERSISTED)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(trial, inst)| {
            let (small, shrink_trace) = shrink(case, inst);
            let (domain, codomain) = small.to_documents();
            Counterexample { trial, original_size: inst.size(), size: small.size(), domain, codomain, shrink_trace }
        })
        .collect();
    let verdict = if counterexample_trials > 0 {
        Verdict::Counterexample
    } else if confirmed > 0 {
        Verdict::Confirmed
    } else {
        Verdict::AllSkipped
    };
    Ok(TrialReport {
        case: case.id.to_string(),
        statement: case.statement.to_string(),
        rng: RNG_ALGORITHM.to_string(),
        config: config.clone(),
        trials: config.trials,
        confirmed,
        skipped: count(Outcome::Skipped),
        counterexample_trials,
        hypothesis_fired: confirmed + counterexample_trials,
        generation_failures: trials.iter().map(|t| t.failures).sum(),
        verdict,
        hausdorff_generation: (hausdorff.total() > 0).then_some(hausdorff),
        counterexamples,
    })
}

pub fn run_theorem(id: &str, config: &GeneratorConfig) -> Result<TrialReport, FuzzError> {
    let case = find(id).ok_or_else(|| FuzzError::UnknownCase(id.to_string()))?;
    run_case(case, config)
}
