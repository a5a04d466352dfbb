//! JSON and text renderings of library reports.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use softtopo::io::{self, Bundle, ABSOLUTE_NAME, NULL_NAME};
use softtopo::separation::{Hypothesis, SeparationReport};
use softtopo::{SoftElement, SoftSet};

/// Witnesses listed in separation reports; the total is always given.
const WITNESS_LIMIT: usize = 16;

pub fn set(s: &SoftSet) -> Value {
    serde_json::to_value(io::slices_doc(s)).expect("slices serialize")
}

pub fn element(x: &SoftElement) -> Value {
    serde_json::to_value(io::element_doc(x)).expect("elements serialize")
}

pub fn sets<'a>(family: impl IntoIterator<Item = &'a SoftSet>) -> Value {
    Value::Array(family.into_iter().map(set).collect())
}

pub fn hypothesis(h: &Hypothesis) -> Value {
    match h {
        Hypothesis::Points { x, y } => json!({ "kind": "points", "x": element(x), "y": element(y) }),
        Hypothesis::PointClosed { point, closed } => {
            json!({ "kind": "point-closed", "point": element(point), "closed": set(closed) })
        }
        Hypothesis::ClosedPair { first, second } => {
            json!({ "kind": "closed-pair", "first": set(first), "second": set(second) })
        }
    }
}

pub fn hypothesis_text(h: &Hypothesis) -> String {
    match h {
        Hypothesis::Points { x, y } => format!("{x} / {y}"),
        Hypothesis::PointClosed { point, closed } => format!("point {point} / closed {closed}"),
        Hypothesis::ClosedPair { first, second } => format!("closed {first} / closed {second}"),
    }
}

pub fn separation(r: &SeparationReport) -> (Value, String) {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .take(WITNESS_LIMIT)
        .map(|w| json!({ "hypothesis": hypothesis(&w.hypothesis), "left": set(&w.left), "right": set(&w.right) }))
        .collect();
    let value = json!({
        "property": r.property,
        "holds": r.holds,
        "checked": r.checked,
        "counterexample": r.counterexample.as_ref().map(hypothesis),
        "witness_count": r.witnesses.len(),
        "witnesses": witnesses,
    });
    let mut text = format!("holds: {}\nchecked: {}\n", r.holds, r.checked);
    match &r.counterexample {
        Some(h) => text += &format!("counterexample: {}\n", hypothesis_text(h)),
        None => {
            if let Some(w) = r.witnesses.first() {
                text += &format!("witness: {} separated by {} and {}\n", hypothesis_text(&w.hypothesis), w.left, w.right);
            }
        }
    }
    (value, text)
}

/// Names for sets of a document, preferring topology-listed names and the
/// reserved names for Φ̃ and X̃.
pub struct Names {
    by_set: BTreeMap<Vec<u64>, String>,
}

impl Names {
    pub fn new(bundle: &Bundle) -> Self {
        let mut by_set = BTreeMap::new();
        by_set.insert(SoftSet::null(&bundle.universe).slices().to_vec(), NULL_NAME.to_string());
        by_set.insert(SoftSet::absolute(&bundle.universe).slices().to_vec(), ABSOLUTE_NAME.to_string());
        let listed = bundle.topology.iter().chain(bundle.subbase.iter()).flatten();
        for name in listed.chain(bundle.sets.keys()) {
            if let Ok(s) = bundle.set(name) {
                by_set.entry(s.slices().to_vec()).or_insert_with(|| name.clone());
            }
        }
        Self { by_set }
    }

    pub fn get(&self, s: &SoftSet) -> Option<&str> {
        self.by_set.get(s.slices()).map(String::as_str)
    }

    pub fn label(&self, s: &SoftSet) -> String {
        self.get(s).map_or_else(|| s.to_string(), str::to_string)
    }
}
