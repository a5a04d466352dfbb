//! Open covers, minimal subcovers, quasi-compactness, compact spaces and sets,
//! and finite-intersection witnesses.
//!
//! Over a finite universe every topology is finite, so every open cover is
//! already a finite subcover of itself. The procedures here still extract
//! explicit minimal witnesses so that results can be audited.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::separation::{is_hausdorff, SeparationReport};
use crate::soft::SoftSet;
use crate::topology::SoftTopology;

/// Family sizes up to this bound get an exact minimum subcover.
pub const EXACT_SUBCOVER_BOUND: usize = 20;

/// A family of open sets covering a target. For the carrier itself the
/// elementary union must equal it; for any other target containment suffices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    family: Vec<SoftSet>,
    target: SoftSet,
}

impl Cover {
    pub fn new(tau: &SoftTopology, family: Vec<SoftSet>, target: SoftSet) -> Result<Self> {
        if !is_cover(tau, &family, &target)? {
            return Err(Error::pre(format!("family does not cover {target}")));
        }
        Ok(Self { family, target })
    }

    pub fn family(&self) -> &[SoftSet] {
        &self.family
    }

    pub fn target(&self) -> &SoftSet {
        &self.target
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubcoverResult {
    /// Indices into the cover's family, ascending.
    pub indices: Vec<usize>,
    pub cardinality: usize,
    /// False when the greedy fallback was used.
    pub optimal: bool,
}

pub fn is_cover(tau: &SoftTopology, family: &[SoftSet], target: &SoftSet) -> Result<bool> {
    tau.check(target)?;
    if !tau.admissible(target) {
        return Err(Error::pre(format!("cover target {target} is not in S(X̃)")));
    }
    for f in family {
        tau.check(f)?;
        if !tau.contains(f) {
            return Err(Error::pre(format!("cover member {f} is not open")));
        }
    }
    let union = family.iter().fold(tau.null(), |acc, f| acc.join(f));
    if target == tau.carrier() {
        Ok(union == *target)
    } else {
        Ok(target.subset_of(&union))
    }
}

fn covers(target: &SoftSet, family: &[SoftSet], chosen: &[usize]) -> bool {
    let union = chosen
        .iter()
        .fold(SoftSet::null(target.universe()), |acc, &i| acc.join(&family[i]));
    target.subset_of(&union)
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until it
/// returns true.
pub(crate) fn first_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return Some(idx);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Minimum-cardinality subcover, lexicographically smallest among ties.
pub fn minimal_subcover(cover: &Cover) -> SubcoverResult {
    minimal_subcover_bounded(cover, EXACT_SUBCOVER_BOUND)
}

pub fn minimal_subcover_bounded(cover: &Cover, bound: usize) -> SubcoverResult {
    let family = &cover.family;
    let target = &cover.target;
    if family.len() <= bound {
        for k in 0..=family.len() {
            if let Some(indices) = first_combination(family.len(), k, |c| covers(target, family, c)) {
                return SubcoverResult { cardinality: indices.len(), indices, optimal: true };
            }
        }
        unreachable!("a validated cover covers its target");
    }
    // greedy: repeatedly take the member covering the most uncovered points
    let mut chosen = Vec::new();
    let mut covered = SoftSet::null(target.universe());
    while !target.subset_of(&covered) {
        let gain = |f: &SoftSet| -> u32 {
            f.slices()
                .iter()
                .zip(target.slices())
                .zip(covered.slices())
                .map(|((&s, &t), &c)| (s & t & !c).count_ones())
                .sum()
        };
        let best = (0..family.len())
            .filter(|i| !chosen.contains(i))
            .max_by_key(|&i| (gain(&family[i]), std::cmp::Reverse(i)))
            .expect("a validated cover covers its target");
        covered = covered.join(&family[best]);
        chosen.push(best);
    }
    chosen.sort_unstable();
    SubcoverResult { cardinality: chosen.len(), indices: chosen, optimal: false }
}

/// Justification of quasi-compactness for a finite topology: the whole
/// topology is a finite family, every open cover is one of its subfamilies,
/// and the minimum subcover of the full cover is exhibited.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiCompactReport {
    pub holds: bool,
    pub open_count: usize,
    pub full_cover_subcover: SubcoverResult,
}

pub fn is_quasi_compact(tau: &SoftTopology) -> QuasiCompactReport {
    let cover = Cover { family: tau.members().to_vec(), target: tau.carrier().clone() };
    QuasiCompactReport {
        holds: true,
        open_count: tau.len(),
        full_cover_subcover: minimal_subcover(&cover),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactSpaceReport {
    pub holds: bool,
    pub quasi_compact: QuasiCompactReport,
    pub hausdorff: SeparationReport,
}

/// Compact space: quasi-compact and soft e-Hausdorff.
pub fn is_compact_space(tau: &SoftTopology) -> CompactSpaceReport {
    let quasi_compact = is_quasi_compact(tau);
    let hausdorff = is_hausdorff(tau);
    CompactSpaceReport { holds: quasi_compact.holds && hausdorff.holds, quasi_compact, hausdorff }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompactSetReport {
    pub holds: bool,
    pub admissible: bool,
    pub complement_admissible: bool,
    /// Minimum subcover of the cover formed by the opens meeting F.
    pub subcover: Option<SubcoverResult>,
}

/// The compactness conditions on F, assuming the space is Hausdorff.
pub(crate) fn compact_set_conditions(tau: &SoftTopology, f: &SoftSet) -> (bool, bool) {
    let admissible = tau.admissible(f);
    let complement_admissible = f.complement_within(tau.carrier()).in_s();
    (admissible, complement_admissible)
}

/// Compact set: F and its complement in S(X̃); covers are automatically
/// finite. Defined only in Hausdorff spaces.
pub fn is_compact_set(tau: &SoftTopology, f: &SoftSet) -> Result<CompactSetReport> {
    tau.check(f)?;
    if !is_hausdorff(tau).holds {
        return Err(Error::pre("compact sets are only defined in soft e-Hausdorff spaces"));
    }
    Ok(compact_set_report(tau, f))
}

pub fn compact_set_report(tau: &SoftTopology, f: &SoftSet) -> CompactSetReport {
    let (admissible, complement_admissible) = compact_set_conditions(tau, f);
    let subcover = admissible.then(|| {
        let meeting: Vec<SoftSet> = tau
            .members()
            .iter()
            .filter(|o| !o.meet(f).is_null())
            .cloned()
            .collect();
        minimal_subcover(&Cover { family: meeting, target: f.clone() })
    });
    CompactSetReport {
        holds: admissible && complement_admissible,
        admissible,
        complement_admissible,
        subcover,
    }
}

fn e_meet_fold<'a>(tau: &SoftTopology, sets: impl IntoIterator<Item = &'a SoftSet>) -> SoftSet {
    sets.into_iter().fold(tau.carrier().clone(), |acc, s| acc.e_meet(s))
}

/// Minimum subfamily of e-closed sets whose elementary intersection is Φ̃
/// (indices ascending, lexicographically smallest among ties).
pub fn fip_witness(tau: &SoftTopology, closed_family: &[SoftSet]) -> Result<Vec<usize>> {
    for c in closed_family {
        tau.check(c)?;
        if !tau.closed(c) {
            return Err(Error::pre(format!("{c} is not e-closed")));
        }
    }
    if !e_meet_fold(tau, closed_family).is_null() {
        return Err(Error::pre("the family's elementary intersection is not Φ̃"));
    }
    (1..=closed_family.len())
        .find_map(|k| {
            first_combination(closed_family.len(), k, |c| {
                e_meet_fold(tau, c.iter().map(|&i| &closed_family[i])).is_null()
            })
        })
        .ok_or_else(|| Error::pre("empty family"))
}

/// Checks that a decreasing chain of nonempty e-closed sets in a compact
/// space has non-null elementary intersection.
pub fn nested_intersection_check(tau: &SoftTopology, chain: &[SoftSet]) -> Result<bool> {
    for c in chain {
        tau.check(c)?;
    }
    if chain.is_empty() {
        return Err(Error::pre("empty chain"));
    }
    if !is_compact_space(tau).holds {
        return Err(Error::pre("the space is not soft e-compact"));
    }
    for (i, c) in chain.iter().enumerate() {
        if c.is_null() {
            return Err(Error::pre(format!("chain member {i} is Φ̃")));
        }
        if !tau.closed(c) {
            return Err(Error::pre(format!("chain member {i} is not e-closed")));
        }
    }
    if let Some(i) = chain.windows(2).position(|w| !w[1].subset_of(&w[0])) {
        return Err(Error::pre(format!("chain member {} is not contained in member {i}", i + 1)));
    }
    Ok(!e_meet_fold(tau, chain).is_null())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soft::Universe;
    use std::sync::Arc;

    fn s(u: &Arc<Universe>, a: &[&str], b: &[&str]) -> SoftSet {
        SoftSet::from_names(u, &[a, b]).unwrap()
    }

    fn chain_space() -> SoftTopology {
        let u = Universe::new(["a", "b", "c", "d"], ["alpha", "beta"]).unwrap();
        SoftTopology::new(
            &u,
            vec![
                SoftSet::null(&u),
                SoftSet::absolute(&u),
                s(&u, &["a"], &["b"]),
                s(&u, &["b", "c"], &["c", "d"]),
                s(&u, &["a", "b", "c"], &["b", "c", "d"]),
                s(&u, &["a", "b", "c", "d"], &["b", "c", "d"]),
            ],
        )
        .unwrap()
    }

    fn cross_space() -> SoftTopology {
        let u = Universe::new(["a", "b", "c", "d"], ["alpha", "beta"]).unwrap();
        SoftTopology::new(
            &u,
            vec![
                SoftSet::null(&u),
                SoftSet::absolute(&u),
                s(&u, &["a"], &["c", "d"]),
                s(&u, &["c", "d"], &["a"]),
                s(&u, &["a", "c", "d"], &["a", "c", "d"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn covers_of_the_space_and_of_sets() {
        let tau = chain_space();
        let u = tau.universe().clone();
        assert!(is_cover(&tau, tau.members(), &SoftSet::absolute(&u)).unwrap());
        assert!(!is_cover(&tau, &tau.members()[2..], &SoftSet::absolute(&u)).unwrap());
        assert!(is_cover(&tau, &[s(&u, &["a"], &[])], &SoftSet::absolute(&u)).unwrap_err().is_precondition());

        let cross = cross_space();
        let h = cross.members()[4].clone();
        assert!(is_cover(&cross, &cross.members()[2..4], &h).unwrap());
    }

    #[test]
    fn minimum_subcovers() {
        let tau = chain_space();
        let cover = Cover::new(&tau, tau.members().to_vec(), tau.carrier().clone()).unwrap();
        let result = minimal_subcover(&cover);
        assert_eq!(result, SubcoverResult { indices: vec![1], cardinality: 1, optimal: true });

        let cross = cross_space();
        let h = cross.members()[4].clone();
        let cover = Cover::new(&cross, cross.members()[2..].to_vec(), h).unwrap();
        assert_eq!(minimal_subcover(&cover).indices, vec![2]);
        let greedy = minimal_subcover_bounded(&cover, 0);
        assert!(!greedy.optimal);
        assert!(covers(cover.target(), cover.family(), &greedy.indices));
    }

    #[test]
    fn quasi_compactness_is_automatic() {
        let u = Universe::indexed(3, 2).unwrap();
        for tau in [chain_space(), SoftTopology::indiscrete(&u), SoftTopology::full(&u)] {
            let r = is_quasi_compact(&tau);
            assert!(r.holds);
            assert_eq!(r.full_cover_subcover.cardinality, 1);
        }
    }

    #[test]
    fn compact_spaces_and_sets() {
        let u = Universe::new(["a", "b"], ["alpha", "beta"]).unwrap();
        let full = SoftTopology::full(&u);
        assert!(is_compact_space(&full).holds);
        assert!(!is_compact_space(&chain_space()).holds);
        let f = s(&u, &["a"], &["a"]);
        let report = is_compact_set(&full, &f).unwrap();
        assert!(report.holds);
        assert_eq!(report.subcover.unwrap().cardinality, 1);
        let mixed = s(&u, &["a", "b"], &["a"]);
        assert!(!is_compact_set(&full, &mixed).unwrap().holds);
        assert!(is_compact_set(&chain_space(), &SoftSet::null(chain_space().universe()))
            .unwrap_err()
            .is_precondition());
    }

    #[test]
    fn fip_witnesses() {
        let tau = chain_space();
        let u = tau.universe().clone();
        let with_null = vec![SoftSet::absolute(&u), SoftSet::null(&u)];
        assert_eq!(fip_witness(&tau, &with_null).unwrap(), vec![1]);
        let closed: Vec<SoftSet> = tau.closed_sets().into_iter().filter(|c| !c.is_null() && !c.is_absolute()).collect();
        assert_eq!(closed.len(), 3);
        assert!(fip_witness(&tau, &closed).unwrap_err().is_precondition());

        let v = Universe::new(["a", "b", "c", "d"], ["alpha", "beta"]).unwrap();
        let full = SoftTopology::full(&v);
        let family = vec![s(&v, &["b", "c", "d"], &["a", "c", "d"]), s(&v, &["a"], &["b"])];
        assert!(family.iter().all(|c| full.is_closed(c).unwrap()));
        assert_eq!(fip_witness(&full, &family).unwrap(), vec![0, 1]);
    }

    #[test]
    fn nested_chains() {
        let u = Universe::new(["a", "b"], ["alpha", "beta"]).unwrap();
        let full = SoftTopology::full(&u);
        assert!(nested_intersection_check(&full, &[SoftSet::absolute(&u)]).unwrap());
        let f = s(&u, &["a"], &["b"]);
        assert!(nested_intersection_check(&full, &[SoftSet::absolute(&u), f.clone()]).unwrap());
        assert!(nested_intersection_check(&full, &[f.clone(), SoftSet::absolute(&u)]).unwrap_err().is_precondition());
        assert!(nested_intersection_check(&full, &[SoftSet::null(&u)]).unwrap_err().is_precondition());
        let tau = chain_space();
        let closed = tau.closed_sets();
        assert!(nested_intersection_check(&tau, &closed[..1]).unwrap_err().is_precondition());
    }
}
