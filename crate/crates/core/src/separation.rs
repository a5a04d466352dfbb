//! Decision procedures for soft e-Hausdorff, e-regular and e-normal spaces.
//!
//! Each check scans its hypothesis instances in canonical order and stops at
//! the first one that cannot be separated. The separating opens are found
//! through minimal open sets: if any pair of opens U ⊇ A, V ⊇ B is disjoint,
//! so is the pair of smallest opens around A and B, since both disjointness
//! notions are inherited by subsets.

use serde::Serialize;

use crate::soft::{SoftElement, SoftSet};
use crate::topology::SoftTopology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationProperty {
    Hausdorff,
    Regular,
    Normal,
}

/// How two opens are required to be disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disjointness {
    /// Slice-wise intersection equals Φ̃.
    Pointwise,
    /// Elementary intersection equals Φ̃ (some slice of the intersection is
    /// empty).
    Elementary,
}

impl Disjointness {
    pub fn holds(self, u: &SoftSet, v: &SoftSet) -> bool {
        let meet = u.meet(v);
        match self {
            Disjointness::Pointwise => meet.is_null(),
            Disjointness::Elementary => !meet.is_full_support(),
        }
    }
}

/// Which sets the e-regular conclusion requires to be disjoint.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularClause {
    /// The open around the closed set and the open around the point.
    #[default]
    SeparateOpens,
    /// The closed set and its surrounding open, as literally printed. This is
    /// unsatisfiable for nonempty closed sets and exists to demonstrate that.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hypothesis {
    /// Two soft elements differing at every parameter.
    Points { x: SoftElement, y: SoftElement },
    /// An e-closed set and a soft element avoiding it at every parameter.
    PointClosed { point: SoftElement, closed: SoftSet },
    /// Two e-closed sets with slice-wise empty intersection.
    ClosedPair { first: SoftSet, second: SoftSet },
}

/// Opens separating a hypothesis instance: `left` contains its first
/// component, `right` the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separated {
    pub hypothesis: Hypothesis,
    pub left: SoftSet,
    pub right: SoftSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub property: SeparationProperty,
    pub holds: bool,
    /// Hypothesis instances examined before stopping.
    pub checked: usize,
    pub witnesses: Vec<Separated>,
    /// The first unseparable hypothesis instance in canonical order.
    pub counterexample: Option<Hypothesis>,
    disjointness: Disjointness,
    clause: RegularClause,
}

impl SeparationReport {
    fn new(property: SeparationProperty, disjointness: Disjointness, clause: RegularClause) -> Self {
        Self {
            property,
            holds: true,
            checked: 0,
            witnesses: Vec::new(),
            counterexample: None,
            disjointness,
            clause,
        }
    }

    fn fail(mut self, h: Hypothesis) -> Self {
        self.holds = false;
        self.counterexample = Some(h);
        self
    }

    /// Re-verifies every witness and the counterexample's hypothesis against
    /// `tau`.
    pub fn recheck(&self, tau: &SoftTopology) -> bool {
        let witnesses_ok = self.witnesses.iter().all(|w| {
            tau.contains(&w.left)
                && tau.contains(&w.right)
                && hypothesis_holds(tau, &w.hypothesis)
                && match &w.hypothesis {
                    Hypothesis::Points { x, y } => {
                        w.left.holds(x) && w.right.holds(y) && self.disjointness.holds(&w.left, &w.right)
                    }
                    Hypothesis::PointClosed { point, closed } => {
                        closed.subset_of(&w.left)
                            && w.right.holds(point)
                            && match self.clause {
                                RegularClause::SeparateOpens => self.disjointness.holds(&w.left, &w.right),
                                RegularClause::Literal => self.disjointness.holds(closed, &w.left),
                            }
                    }
                    Hypothesis::ClosedPair { first, second } => {
                        first.subset_of(&w.left)
                            && second.subset_of(&w.right)
                            && self.disjointness.holds(&w.left, &w.right)
                    }
                }
        });
        let counterexample_ok = self
            .counterexample
            .as_ref()
            .is_none_or(|h| hypothesis_holds(tau, h));
        witnesses_ok && counterexample_ok && self.holds == self.counterexample.is_none()
    }
}

fn hypothesis_holds(tau: &SoftTopology, h: &Hypothesis) -> bool {
    match h {
        Hypothesis::Points { x, y } => x.differs_everywhere(y),
        Hypothesis::PointClosed { point, closed } => {
            tau.closed(closed) && (0..closed.slices().len()).all(|a| closed.slice(a) >> point.coord(a) & 1 == 0)
        }
        Hypothesis::ClosedPair { first, second } => {
            tau.closed(first) && tau.closed(second) && first.meet(second).is_null()
        }
    }
}

/// Soft e-Hausdorff with slice-wise disjoint opens.
pub fn is_hausdorff(tau: &SoftTopology) -> SeparationReport {
    is_hausdorff_with(tau, Disjointness::Pointwise)
}

/// Pairs differing at some but not all parameters impose no constraint.
pub fn is_hausdorff_with(tau: &SoftTopology, disjointness: Disjointness) -> SeparationReport {
    let mut report = SeparationReport::new(SeparationProperty::Hausdorff, disjointness, RegularClause::default());
    let elements: Vec<SoftElement> = tau.elements().collect();
    let minimal: Vec<SoftSet> = elements.iter().map(|x| tau.minimal_open(x)).collect();
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate().skip(i + 1) {
            if !x.differs_everywhere(y) {
                continue;
            }
            report.checked += 1;
            let hypothesis = Hypothesis::Points { x: x.clone(), y: y.clone() };
            if !disjointness.holds(&minimal[i], &minimal[j]) {
                return report.fail(hypothesis);
            }
            report.witnesses.push(Separated {
                hypothesis,
                left: minimal[i].clone(),
                right: minimal[j].clone(),
            });
        }
    }
    report
}

/// Soft e-regular with the separating opens elementarily disjoint.
pub fn is_regular(tau: &SoftTopology) -> SeparationReport {
    is_regular_with(tau, RegularClause::SeparateOpens, Disjointness::Elementary)
}

pub fn is_regular_with(tau: &SoftTopology, clause: RegularClause, disjointness: Disjointness) -> SeparationReport {
    let mut report = SeparationReport::new(SeparationProperty::Regular, disjointness, clause);
    let params = tau.universe().param_count();
    let elements: Vec<SoftElement> = tau.elements().collect();
    for closed in tau.closed_sets() {
        let around = tau.minimal_open_around(&closed);
        for x in &elements {
            if (0..params).any(|a| closed.slice(a) >> x.coord(a) & 1 == 1) {
                continue;
            }
            report.checked += 1;
            let hypothesis = Hypothesis::PointClosed { point: x.clone(), closed: closed.clone() };
            let right = tau.minimal_open(x);
            let separated = match clause {
                RegularClause::SeparateOpens => disjointness.holds(&around, &right),
                RegularClause::Literal => disjointness.holds(&closed, &around),
            };
            if !separated {
                return report.fail(hypothesis);
            }
            report.witnesses.push(Separated { hypothesis, left: around.clone(), right });
        }
    }
    report
}

/// Soft e-normal: slice-wise disjoint closed sets have elementarily disjoint
/// open neighborhoods.
pub fn is_normal(tau: &SoftTopology) -> SeparationReport {
    is_normal_with(tau, Disjointness::Elementary)
}

pub fn is_normal_with(tau: &SoftTopology, disjointness: Disjointness) -> SeparationReport {
    let mut report = SeparationReport::new(SeparationProperty::Normal, disjointness, RegularClause::default());
    let closed = tau.closed_sets();
    let around: Vec<SoftSet> = closed.iter().map(|c| tau.minimal_open_around(c)).collect();
    for (i, f) in closed.iter().enumerate() {
        for (j, g) in closed.iter().enumerate().skip(i) {
            if !f.meet(g).is_null() {
                continue;
            }
            report.checked += 1;
            let hypothesis = Hypothesis::ClosedPair { first: f.clone(), second: g.clone() };
            if !disjointness.holds(&around[i], &around[j]) {
                return report.fail(hypothesis);
            }
            report.witnesses.push(Separated {
                hypothesis,
                left: around[i].clone(),
                right: around[j].clone(),
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soft::Universe;
    use std::sync::Arc;

    fn chain_space() -> SoftTopology {
        let u = Universe::new(["a", "b", "c", "d"], ["alpha", "beta"]).unwrap();
        let s = |a: &[&str], b: &[&str]| SoftSet::from_names(&u, &[a, b]).unwrap();
        SoftTopology::new(
            &u,
            vec![
                SoftSet::null(&u),
                SoftSet::absolute(&u),
                s(&["a"], &["b"]),
                s(&["b", "c"], &["c", "d"]),
                s(&["a", "b", "c"], &["b", "c", "d"]),
                s(&["a", "b", "c", "d"], &["b", "c", "d"]),
            ],
        )
        .unwrap()
    }

    fn universes() -> Vec<Arc<Universe>> {
        let mut out = Vec::new();
        for p in 1..=3 {
            for q in 1..=2 {
                out.push(Universe::indexed(p, q).unwrap());
            }
        }
        out
    }

    #[test]
    fn full_topology_separates_everything() {
        for u in universes() {
            let full = SoftTopology::full(&u);
            for r in [is_hausdorff(&full), is_regular(&full), is_normal(&full)] {
                assert!(r.holds, "{:?} over {:?}", r.property, u);
                assert!(r.recheck(&full));
            }
        }
    }

    #[test]
    fn indiscrete_topology() {
        for u in universes() {
            let tau = SoftTopology::indiscrete(&u);
            assert_eq!(is_hausdorff(&tau).holds, u.point_count() < 2);
            assert!(is_regular(&tau).holds);
            assert!(is_normal(&tau).holds);
        }
    }

    #[test]
    fn chain_space_is_not_hausdorff() {
        let tau = chain_space();
        let u = tau.universe().clone();
        let report = is_hausdorff(&tau);
        assert!(!report.holds);
        assert!(report.recheck(&tau));
        let e = |a: &str, b: &str| SoftElement::from_names(&u, &[a, b]).unwrap();
        assert_eq!(report.counterexample, Some(Hypothesis::Points { x: e("a", "a"), y: e("b", "b") }));
        // (b,a) and (a,b) are also inseparable: no proper open holds `a` at beta
        let ba = tau.minimal_open(&e("b", "a"));
        let ab = tau.minimal_open(&e("a", "b"));
        assert!(ba.is_absolute());
        assert!(!Disjointness::Pointwise.holds(&ba, &ab));
    }

    #[test]
    fn literal_regular_clause_fails_on_nonempty_closed_sets() {
        let u = Universe::indexed(2, 2).unwrap();
        let full = SoftTopology::full(&u);
        let literal = is_regular_with(&full, RegularClause::Literal, Disjointness::Elementary);
        assert!(!literal.holds);
        assert!(literal.recheck(&full));
        let tau = SoftTopology::indiscrete(&u);
        assert!(is_regular_with(&tau, RegularClause::Literal, Disjointness::Elementary).holds);
    }

    #[test]
    fn pointwise_hausdorff_implies_elementary_variant() {
        for u in universes() {
            for tau in [SoftTopology::full(&u), SoftTopology::indiscrete(&u)] {
                if is_hausdorff(&tau).holds {
                    assert!(is_hausdorff_with(&tau, Disjointness::Elementary).holds);
                }
            }
        }
        let tau = chain_space();
        assert!(!is_hausdorff(&tau).holds || is_hausdorff_with(&tau, Disjointness::Elementary).holds);
    }
}
