//! Sub-e-topologies τ_Y = {O ⋒ Ỹ : O ∈ τ}, their preconditions, and e_Y-closed
//! sets.
//!
//! Subspace members stay over the original universe with slices inside Y, and
//! the subspace topology uses Ỹ as its carrier.

use crate::error::{Error, Result};
use crate::soft::SoftSet;
use crate::topology::SoftTopology;

/// Every open pair and every open whose slice-wise meet leaves S(X̃).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspacePreconditions {
    pub y: SoftSet,
    /// Index pairs (i < j) into τ's members.
    pub pair_violations: Vec<(usize, usize)>,
    /// Indices of opens O with O ∩̃ Ỹ ∉ S(X̃).
    pub trace_violations: Vec<usize>,
}

impl SubspacePreconditions {
    pub fn holds(&self) -> bool {
        self.violation_count() == 0
    }

    pub fn violation_count(&self) -> usize {
        self.pair_violations.len() + self.trace_violations.len()
    }
}

pub fn check_subspace_preconditions(tau: &SoftTopology, y: u64) -> Result<SubspacePreconditions> {
    let universe = tau.universe();
    if y == 0 {
        return Err(Error::Malformed("subspace point set is empty".into()));
    }
    if y & !universe.full_mask() != 0 {
        return Err(Error::Malformed("subspace points lie outside the universe".into()));
    }
    let y_set = SoftSet::constant_mask(universe, y);
    let members = tau.members();
    let mut pair_violations = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if !members[i].meet(&members[j]).in_s() {
                pair_violations.push((i, j));
            }
        }
    }
    let trace_violations = (0..members.len())
        .filter(|&i| !members[i].meet(&y_set).in_s())
        .collect();
    Ok(SubspacePreconditions { y: y_set, pair_violations, trace_violations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceResult {
    pub y: u64,
    pub topology: SoftTopology,
    /// For each τ_Y member, the index of the first τ member it came from.
    pub provenance: Vec<usize>,
}

impl SubspaceResult {
    pub fn carrier(&self) -> &SoftSet {
        self.topology.carrier()
    }
}

pub fn build_subspace(tau: &SoftTopology, y: u64) -> Result<SubspaceResult> {
    let pre = check_subspace_preconditions(tau, y)?;
    if !pre.holds() {
        return Err(Error::Subspace(Box::new(pre)));
    }
    let y_set = pre.y;
    let mut members: Vec<SoftSet> = Vec::new();
    let mut provenance = Vec::new();
    for (i, o) in tau.members().iter().enumerate() {
        let trace = o.e_meet(&y_set);
        if !members.contains(&trace) {
            members.push(trace);
            provenance.push(i);
        }
    }
    let topology = SoftTopology::with_carrier(y_set, members)?;
    Ok(SubspaceResult { y, topology, provenance })
}

fn check_within(sub: &SubspaceResult, z: &SoftSet) -> Result<()> {
    sub.topology.check(z)?;
    if !z.subset_of(sub.carrier()) {
        return Err(Error::pre(format!("{z} is not contained in {}", sub.carrier())));
    }
    Ok(())
}

/// Z_Y^C ∈ S(Ỹ) and Z_Y^ℂ ∈ τ_Y.
pub fn is_ey_closed(sub: &SubspaceResult, z: &SoftSet) -> Result<bool> {
    check_within(sub, z)?;
    if !z.in_s() {
        return Err(Error::pre(format!("{z} is not in S(Ỹ)")));
    }
    Ok(sub.topology.closed(z))
}

/// Searches the e-closed sets of τ for F with Z = F ⋒ Ỹ.
pub fn decompose_ey_closed(tau: &SoftTopology, sub: &SubspaceResult, z: &SoftSet) -> Result<Option<SoftSet>> {
    if !is_ey_closed(sub, z)? {
        return Ok(None);
    }
    let y_set = sub.carrier();
    Ok(tau.closed_sets().into_iter().find(|f| f.e_meet(y_set) == *z))
}
