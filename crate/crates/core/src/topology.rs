//! Soft e-topologies: verification of the axioms and the derived operators
//! (closed sets, closure, interior, limiting elements, neighborhoods).
//!
//! A topology lives on a *carrier*: the absolute soft set X̃ for an ordinary
//! space, or a constant soft set (Ỹ,A) for a subspace built over the original
//! universe. Complements, closed sets and the soft elements of the space are
//! taken relative to the carrier.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::soft::{dedup_sets, SoftElement, SoftSet, Universe};

/// Which axiom a candidate family violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// A member lies outside S(X̃).
    NotAdmissible,
    /// A member is not contained in the carrier.
    OutsideCarrier,
    MissingNull,
    MissingCarrier,
    UnionNotClosed,
    IntersectionNotClosed,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::NotAdmissible => "not-admissible",
            Axiom::OutsideCarrier => "outside-carrier",
            Axiom::MissingNull => "missing-null",
            Axiom::MissingCarrier => "missing-carrier",
            Axiom::UnionNotClosed => "union-not-closed",
            Axiom::IntersectionNotClosed => "intersection-not-closed",
        };
        f.write_str(s)
    }
}

/// One failed axiom instance. `offending` is recomputable from `witnesses`:
/// it is the witness itself for membership axioms, the missing extreme set
/// for the presence axioms, and the elementary union/intersection of the two
/// witnesses for the closure axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witnesses: Vec<SoftSet>,
    pub offending: SoftSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks the soft e-topology axioms for `members` over X̃ and reports every
/// violation.
pub fn verify_topology(universe: &Arc<Universe>, members: &[SoftSet]) -> Result<TopologyReport> {
    verify_with_carrier(&SoftSet::absolute(universe), members)
}

/// As [`verify_topology`] with `carrier` in place of X̃.
///
/// Arbitrary elementary unions are checked through pairwise closure: on S(X̃)
/// the elementary union is associative with identity Φ̃, so a finite family
/// closed under pairwise unions is closed under the union of any subfamily.
pub fn verify_with_carrier(carrier: &SoftSet, members: &[SoftSet]) -> Result<TopologyReport> {
    for m in members {
        carrier.check_same(m)?;
    }
    let universe = carrier.universe();
    let members = dedup_sets(members.iter().cloned());
    let present: HashSet<&SoftSet> = members.iter().collect();
    let mut violations = Vec::new();

    let null = SoftSet::null(universe);
    if !present.contains(&null) {
        violations.push(Violation { axiom: Axiom::MissingNull, witnesses: vec![], offending: null });
    }
    if !present.contains(carrier) {
        violations.push(Violation {
            axiom: Axiom::MissingCarrier,
            witnesses: vec![],
            offending: carrier.clone(),
        });
    }
    let mut admissible = Vec::with_capacity(members.len());
    for m in &members {
        let mut ok = true;
        if !m.in_s() {
            violations.push(Violation {
                axiom: Axiom::NotAdmissible,
                witnesses: vec![m.clone()],
                offending: m.clone(),
            });
            ok = false;
        }
        if !m.subset_of(carrier) {
            violations.push(Violation {
                axiom: Axiom::OutsideCarrier,
                witnesses: vec![m.clone()],
                offending: m.clone(),
            });
            ok = false;
        }
        if ok {
            admissible.push(m);
        }
    }
    for (i, f) in admissible.iter().enumerate() {
        for g in &admissible[i + 1..] {
            let union = f.join(g);
            if !present.contains(&union) {
                violations.push(Violation {
                    axiom: Axiom::UnionNotClosed,
                    witnesses: vec![(*f).clone(), (*g).clone()],
                    offending: union,
                });
            }
            let meet = f.e_meet(g);
            if !present.contains(&meet) {
                violations.push(Violation {
                    axiom: Axiom::IntersectionNotClosed,
                    witnesses: vec![(*f).clone(), (*g).clone()],
                    offending: meet,
                });
            }
        }
    }
    Ok(TopologyReport { valid: violations.is_empty(), violations })
}

impl Violation {
    /// Recomputes the offending set from the witnesses.
    pub fn recompute(&self, carrier: &SoftSet) -> Option<SoftSet> {
        match (self.axiom, self.witnesses.as_slice()) {
            (Axiom::NotAdmissible | Axiom::OutsideCarrier, [w]) => Some(w.clone()),
            (Axiom::MissingNull, []) => Some(SoftSet::null(carrier.universe())),
            (Axiom::MissingCarrier, []) => Some(carrier.clone()),
            (Axiom::UnionNotClosed, [f, g]) => f.e_union(g).ok(),
            (Axiom::IntersectionNotClosed, [f, g]) => f.e_intersection(g).ok(),
            _ => None,
        }
    }
}

/// How the quantifiers of the limiting-element condition are read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitingMode {
    /// For every open G and every parameter α with x(α) ∈ G(α), the slice
    /// F(α) meets G(α) \ {x(α)}.
    #[default]
    PerParameter,
    /// For every open G with x ∈̃ G, every slice F(α) meets G(α) \ {x(α)}.
    WholeElement,
}

/// A validated soft e-topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftTopology {
    carrier: SoftSet,
    members: Vec<SoftSet>,
}

impl SoftTopology {
    /// Validates `members` as a soft e-topology on X̃. Duplicate members are
    /// dropped, keeping first occurrences.
    pub fn new(universe: &Arc<Universe>, members: Vec<SoftSet>) -> Result<Self> {
        Self::with_carrier(SoftSet::absolute(universe), members)
    }

    pub fn with_carrier(carrier: SoftSet, members: Vec<SoftSet>) -> Result<Self> {
        if !carrier.is_full_support() {
            return Err(Error::pre(format!("carrier {carrier} has an empty slice")));
        }
        let report = verify_with_carrier(&carrier, &members)?;
        if !report.valid {
            return Err(Error::InvalidTopology(Box::new(report)));
        }
        Ok(Self { carrier, members: dedup_sets(members) })
    }

    /// {Φ̃, X̃}.
    pub fn indiscrete(universe: &Arc<Universe>) -> Self {
        Self {
            carrier: SoftSet::absolute(universe),
            members: vec![SoftSet::null(universe), SoftSet::absolute(universe)],
        }
    }

    /// Every member of S(X̃): the largest soft e-topology on X̃.
    pub fn full(universe: &Arc<Universe>) -> Self {
        let full = universe.full_mask();
        let params = universe.param_count();
        let mut members = vec![SoftSet::null(universe)];
        let mut cursor = vec![1u64; params];
        'outer: loop {
            members.push(SoftSet::from_masks_unchecked(universe, cursor.clone().into()));
            let mut k = params;
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                if cursor[k] < full {
                    cursor[k] += 1;
                    break;
                }
                cursor[k] = 1;
            }
        }
        Self { carrier: SoftSet::absolute(universe), members }
    }

    /// Closes Φ̃, the carrier and `generators` under pairwise unions and
    /// elementary intersections. Generators must be admissible. Returns `None`
    /// once the family would exceed `cap` members.
    pub fn generate(carrier: &SoftSet, generators: &[SoftSet], cap: usize) -> Result<Option<Self>> {
        let carrier_top = Self { carrier: carrier.clone(), members: Vec::new() };
        for g in generators {
            carrier_top.check(g)?;
            if !carrier_top.admissible(g) {
                return Err(Error::pre(format!("generator {g} is not admissible")));
            }
        }
        let mut members = dedup_sets(
            [SoftSet::null(carrier.universe()), carrier.clone()]
                .into_iter()
                .chain(generators.iter().cloned()),
        );
        let mut seen: HashSet<SoftSet> = members.iter().cloned().collect();
        let mut done = 0;
        while done < members.len() {
            let fresh = members.len();
            for i in 0..fresh {
                for j in done.max(i + 1)..fresh {
                    for candidate in [members[i].join(&members[j]), members[i].e_meet(&members[j])] {
                        if seen.insert(candidate.clone()) {
                            if seen.len() > cap {
                                return Ok(None);
                            }
                            members.push(candidate);
                        }
                    }
                }
            }
            done = fresh;
        }
        if members.len() > cap {
            return Ok(None);
        }
        Ok(Some(Self::trusted(carrier.clone(), members)))
    }

    /// Skips validation; callers guarantee the axioms.
    pub(crate) fn trusted(carrier: SoftSet, members: Vec<SoftSet>) -> Self {
        debug_assert!(verify_with_carrier(&carrier, &members).map(|r| r.valid).unwrap_or(false));
        Self { carrier, members }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        self.carrier.universe()
    }

    /// The absolute member: X̃, or (Ỹ,A) for a subspace.
    pub fn carrier(&self) -> &SoftSet {
        &self.carrier
    }

    pub fn members(&self) -> &[SoftSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn null(&self) -> SoftSet {
        SoftSet::null(self.universe())
    }

    pub(crate) fn check(&self, f: &SoftSet) -> Result<()> {
        self.carrier.check_same(f)
    }

    pub(crate) fn check_element(&self, x: &SoftElement) -> Result<()> {
        self.carrier.check_element(x)
    }

    /// Soft elements of the space, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = SoftElement> {
        self.carrier.elements()
    }

    pub fn is_open(&self, f: &SoftSet) -> Result<bool> {
        self.check(f)?;
        Ok(self.contains(f))
    }

    /// Unchecked `is_open`.
    pub fn contains(&self, f: &SoftSet) -> bool {
        self.members.iter().any(|m| m == f)
    }

    /// Slice-wise complement relative to the carrier.
    pub fn complement(&self, f: &SoftSet) -> Result<SoftSet> {
        self.check(f)?;
        Ok(f.complement_within(&self.carrier))
    }

    /// Admissibility relative to the carrier: in S(X̃) and inside the carrier.
    pub fn admissible(&self, f: &SoftSet) -> bool {
        f.in_s() && f.subset_of(&self.carrier)
    }

    /// e-closed: F admissible, its complement admissible, and its elementary
    /// complement open.
    pub fn is_closed(&self, f: &SoftSet) -> Result<bool> {
        self.check(f)?;
        Ok(self.closed(f))
    }

    /// Unchecked `is_closed`.
    pub fn closed(&self, f: &SoftSet) -> bool {
        if !self.admissible(f) {
            return false;
        }
        let c = f.complement_within(&self.carrier);
        c.in_s() && self.contains(&c.collapse())
    }

    /// All e-closed sets: the admissible complements of the open sets, in
    /// member order.
    pub fn closed_sets(&self) -> Vec<SoftSet> {
        dedup_sets(
            self.members
                .iter()
                .map(|o| o.complement_within(&self.carrier))
                .filter(SoftSet::in_s),
        )
    }

    /// Elementary intersection of every e-closed superset of F.
    pub fn closure(&self, f: &SoftSet) -> Result<SoftSet> {
        self.check(f)?;
        if !self.admissible(f) {
            return Err(Error::pre(format!("closure is only defined on S(X̃); got {f}")));
        }
        Ok(self.closure_of(f))
    }

    /// Closure without the admissibility check.
    pub fn closure_of(&self, f: &SoftSet) -> SoftSet {
        self.closed_sets()
            .iter()
            .filter(|c| f.subset_of(c))
            .fold(self.carrier.clone(), |acc, c| acc.e_meet(c))
    }

    /// SS of the interior soft elements of F. Equal to the elementary union of
    /// the open sets contained in F, which is how it is computed.
    pub fn interior(&self, f: &SoftSet) -> Result<SoftSet> {
        self.check(f)?;
        Ok(self.interior_of(f))
    }

    /// Interior as the union of the opens inside F.
    pub fn interior_of(&self, f: &SoftSet) -> SoftSet {
        self.members
            .iter()
            .filter(|o| o.subset_of(f))
            .fold(self.null(), |acc, o| acc.join(o))
    }

    /// Int(F): the interior soft elements of F, enumerated by definition.
    pub fn interior_elements(&self, f: &SoftSet) -> Result<Vec<SoftElement>> {
        self.check(f)?;
        let inside: Vec<&SoftSet> = self.members.iter().filter(|o| o.subset_of(f)).collect();
        Ok(f.elements().filter(|x| inside.iter().any(|o| o.holds(x))).collect())
    }

    /// The first open G with x ∈̃ G ⊆̃ F, if any.
    pub fn is_interior_element(&self, f: &SoftSet, x: &SoftElement) -> Result<Option<&SoftSet>> {
        self.check(f)?;
        self.check_element(x)?;
        Ok(self.members.iter().find(|o| o.holds(x) && o.subset_of(f)))
    }

    pub fn is_limiting(&self, f: &SoftSet, x: &SoftElement, mode: LimitingMode) -> Result<bool> {
        self.check(f)?;
        self.check_element(x)?;
        Ok(self.limiting(f, x, mode))
    }

    pub(crate) fn limiting(&self, f: &SoftSet, x: &SoftElement, mode: LimitingMode) -> bool {
        let params = self.universe().param_count();
        let punctured_meets = |g: &SoftSet, a: usize| {
            let without = g.slice(a) & !(1u64 << x.coord(a));
            f.slice(a) & without != 0
        };
        self.members.iter().all(|g| match mode {
            LimitingMode::PerParameter => (0..params)
                .all(|a| g.slice(a) >> x.coord(a) & 1 == 0 || punctured_meets(g, a)),
            LimitingMode::WholeElement => !g.holds(x) || (0..params).all(|a| punctured_meets(g, a)),
        })
    }

    /// Every limiting soft element of F among the soft elements of the space.
    pub fn limiting_elements(&self, f: &SoftSet, mode: LimitingMode) -> Result<Vec<SoftElement>> {
        self.check(f)?;
        Ok(self.elements().filter(|x| self.limiting(f, x, mode)).collect())
    }

    /// The first open G with x ∈̃ G ⊆̃ N, if N is a neighborhood of x.
    pub fn is_nbd(&self, n: &SoftSet, x: &SoftElement) -> Result<Option<&SoftSet>> {
        self.check(n)?;
        self.check_element(x)?;
        if n.is_null() || !n.in_s() {
            return Err(Error::pre(format!("a neighborhood must be a non-null member of S(X̃); got {n}")));
        }
        Ok(self.members.iter().find(|o| o.holds(x) && o.subset_of(n)))
    }

    /// The smallest open set containing x: the slice-wise intersection of all
    /// opens containing x. It is itself open because every such intersection
    /// keeps x and so never collapses.
    pub fn minimal_open(&self, x: &SoftElement) -> SoftSet {
        self.members
            .iter()
            .filter(|o| o.holds(x))
            .fold(self.carrier.clone(), |acc, o| acc.meet(o))
    }

    /// The smallest open set containing F (Φ̃ for F = Φ̃).
    pub fn minimal_open_around(&self, f: &SoftSet) -> SoftSet {
        if f.is_null() {
            return self.null();
        }
        self.members
            .iter()
            .filter(|o| f.subset_of(o))
            .fold(self.carrier.clone(), |acc, o| acc.meet(o))
    }

    /// True when every two opens meet slice-wise inside S(X̃).
    pub fn pairwise_meets_admissible(&self) -> bool {
        self.members
            .iter()
            .enumerate()
            .all(|(i, a)| self.members[i + 1..].iter().all(|b| a.meet(b).in_s()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soft::e_union_family;

    fn abcd() -> Arc<Universe> {
        Universe::new(["a", "b", "c", "d"], ["alpha", "beta"]).unwrap()
    }

    fn set(u: &Arc<Universe>, a: &[&str], b: &[&str]) -> SoftSet {
        SoftSet::from_names(u, &[a, b]).unwrap()
    }

    fn chain_opens(u: &Arc<Universe>) -> Vec<SoftSet> {
        vec![
            SoftSet::null(u),
            SoftSet::absolute(u),
            set(u, &["a"], &["b"]),
            set(u, &["b", "c"], &["c", "d"]),
            set(u, &["a", "b", "c"], &["b", "c", "d"]),
            set(u, &["a", "b", "c", "d"], &["b", "c", "d"]),
        ]
    }

    #[test]
    fn four_point_family_is_a_topology() {
        let u = abcd();
        let report = verify_topology(&u, &chain_opens(&u)).unwrap();
        assert!(report.valid, "{report:?}");
        assert!(verify_topology(&u, &[SoftSet::null(&u), SoftSet::absolute(&u)]).unwrap().valid);
    }

    #[test]
    fn missing_union_is_reported_with_witnesses() {
        let u = abcd();
        let mut opens = chain_opens(&u);
        opens.remove(4);
        let report = verify_topology(&u, &opens).unwrap();
        assert!(!report.valid);
        let f1 = set(&u, &["a"], &["b"]);
        let f2 = set(&u, &["b", "c"], &["c", "d"]);
        let v = report
            .violations
            .iter()
            .find(|v| v.axiom == Axiom::UnionNotClosed && v.witnesses == [f1.clone(), f2.clone()])
            .expect("union violation for the two generators");
        assert_eq!(v.offending, set(&u, &["a", "b", "c"], &["b", "c", "d"]));
        for v in &report.violations {
            assert_eq!(v.recompute(&SoftSet::absolute(&u)).as_ref(), Some(&v.offending));
        }
    }

    #[test]
    fn all_violations_are_reported() {
        let u = abcd();
        let report = verify_topology(&u, &[set(&u, &["a"], &[])]).unwrap();
        let axioms: Vec<Axiom> = report.violations.iter().map(|v| v.axiom).collect();
        assert_eq!(axioms, [Axiom::MissingNull, Axiom::MissingCarrier, Axiom::NotAdmissible]);
        assert!(SoftTopology::new(&u, vec![]).is_err());
    }

    #[test]
    fn closed_sets_closure_interior() {
        let u = abcd();
        let tau = SoftTopology::new(&u, chain_opens(&u)).unwrap();
        let f1c = set(&u, &["b", "c", "d"], &["a", "c", "d"]);
        let f2c = set(&u, &["a", "d"], &["a", "b"]);
        let f3c = set(&u, &["d"], &["a"]);
        let closed: HashSet<SoftSet> = tau.closed_sets().into_iter().collect();
        let expected: HashSet<SoftSet> =
            [SoftSet::null(&u), SoftSet::absolute(&u), f1c.clone(), f2c, f3c.clone()].into();
        assert_eq!(closed, expected);

        let f4c = set(&u, &["a", "b", "c", "d"], &["b", "c", "d"]).complement();
        assert!(!tau.is_closed(&f4c).unwrap());
        assert!(tau.is_closed(&SoftSet::absolute(&u)).unwrap());

        let f = set(&u, &["c"], &["c"]);
        assert_eq!(tau.closure(&f).unwrap(), f1c);
        assert_eq!(tau.closure(&SoftSet::absolute(&u)).unwrap(), SoftSet::absolute(&u));
        assert!(tau.closure(&set(&u, &["c"], &[])).unwrap_err().is_precondition());

        let g = set(&u, &["a", "b"], &["b"]);
        assert_eq!(tau.interior(&g).unwrap(), set(&u, &["a"], &["b"]));
        assert_eq!(tau.interior(&SoftSet::absolute(&u)).unwrap(), SoftSet::absolute(&u));
        assert!(tau.interior(&f3c).unwrap().is_null());
    }

    #[test]
    fn neighborhoods() {
        let u = abcd();
        let tau = SoftTopology::new(&u, chain_opens(&u)).unwrap();
        let g = set(&u, &["a", "b"], &["b"]);
        let ab = SoftElement::from_names(&u, &["a", "b"]).unwrap();
        let bb = SoftElement::from_names(&u, &["b", "b"]).unwrap();
        assert_eq!(tau.is_nbd(&g, &ab).unwrap(), Some(&set(&u, &["a"], &["b"])));
        assert_eq!(tau.is_nbd(&g, &bb).unwrap(), None);
        assert!(tau.is_nbd(&SoftSet::absolute(&u), &bb).unwrap().is_some());
        assert!(tau.is_nbd(&SoftSet::null(&u), &bb).unwrap_err().is_precondition());
        assert_eq!(tau.is_interior_element(&g, &ab).unwrap(), Some(&set(&u, &["a"], &["b"])));
    }

    #[test]
    fn limiting_elements_in_extreme_topologies() {
        let u = Universe::new(["a", "b", "c"], ["alpha", "beta"]).unwrap();
        let full = SoftTopology::full(&u);
        let indiscrete = SoftTopology::indiscrete(&u);
        for f in full.members() {
            for mode in [LimitingMode::PerParameter, LimitingMode::WholeElement] {
                assert!(full.limiting_elements(f, mode).unwrap().is_empty());
                for x in indiscrete.elements() {
                    let expected = (0..2).all(|a| f.slice(a) & !(1u64 << x.coord(a)) != 0);
                    assert_eq!(indiscrete.is_limiting(f, &x, mode).unwrap(), expected);
                }
            }
        }
        assert!(indiscrete.limiting_elements(&SoftSet::null(&u), LimitingMode::PerParameter).unwrap().is_empty());
    }

    #[test]
    fn full_topology_enumerates_admissible_family() {
        let u = Universe::new(["a", "b", "c"], ["alpha", "beta"]).unwrap();
        let full = SoftTopology::full(&u);
        assert_eq!(full.len(), 7 * 7 + 1);
        assert!(verify_topology(&u, full.members()).unwrap().valid);
    }

    #[test]
    fn pairwise_union_closure_matches_family_unions() {
        let u = abcd();
        let tau = SoftTopology::new(&u, chain_opens(&u)).unwrap();
        let members = tau.members();
        for mask in 0u32..1 << members.len() {
            let sub: Vec<&SoftSet> = (0..members.len()).filter(|i| mask >> i & 1 == 1).map(|i| &members[i]).collect();
            let union = e_union_family(&u, sub).unwrap();
            assert!(tau.contains(&union));
        }
    }
}
