//! Greedy minimization of failing instances.

use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::registry::{evaluate, Outcome, TheoremCase};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkStep {
    pub action: String,
    pub target: String,
    pub size_after: usize,
}

pub fn fails(case: &TheoremCase, inst: &Instance) -> bool {
    evaluate(case, inst) == Outcome::Counterexample
}

/// Repeatedly applies the first reduction (generators, then points, then
/// parameters) that keeps the hypothesis true and the conclusion false.
pub fn shrink(case: &TheoremCase, inst: &Instance) -> (Instance, Vec<ShrinkStep>) {
    let mut current = inst.clone();
    let mut trace = Vec::new();
    'outer: loop {
        for r in current.reductions() {
            let Some(next) = current.reduce(&r) else { continue };
            if fails(case, &next) {
                let (action, target) = current.describe(&r);
                trace.push(ShrinkStep { action, target, size_after: next.size() });
                current = next;
                continue 'outer;
            }
        }
        return (current, trace);
    }
}

/// No single reduction preserves hypothesis and failure.
pub fn is_shrink_minimal(case: &TheoremCase, inst: &Instance) -> bool {
    inst.reductions()
        .iter()
        .filter_map(|r| inst.reduce(r))
        .all(|next| !fails(case, &next))
}
