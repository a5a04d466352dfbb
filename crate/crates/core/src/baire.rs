//! Nowhere dense sets, category, Baire spaces and local compactness.
//!
//! Countable families collapse to finite ones over a finite universe.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::separation::is_hausdorff;
use crate::soft::{bits, SoftElement, SoftSet};
use crate::topology::SoftTopology;

/// Exhaustive first-category search runs only when F has at most this many
/// soft elements.
pub const EXHAUSTIVE_ELEMENT_LIMIT: u128 = 64;
/// ... and at most this many admissible soft subsets.
pub const EXHAUSTIVE_SUBSET_LIMIT: u128 = 1 << 20;
/// Exhaustive Baire cross-check bound on the number of subfamilies.
pub const EXHAUSTIVE_FAMILY_LIMIT: usize = 1 << 12;

fn require_subject(tau: &SoftTopology, f: &SoftSet) -> Result<()> {
    tau.check(f)?;
    if f.is_null() {
        return Err(Error::pre("Φ̃ is excluded from category notions"));
    }
    if !tau.admissible(f) {
        return Err(Error::pre(format!("{f} is not in S(X̃)")));
    }
    Ok(())
}

pub fn is_nowhere_dense(tau: &SoftTopology, f: &SoftSet) -> Result<bool> {
    require_subject(tau, f)?;
    Ok(nowhere_dense(tau, f))
}

pub fn nowhere_dense(tau: &SoftTopology, f: &SoftSet) -> bool {
    tau.interior_of(&tau.closure_of(f)).is_null()
}

/// The e-closed sets with empty interior, in `closed_sets` order.
pub fn empty_interior_closed(tau: &SoftTopology) -> Vec<SoftSet> {
    tau.closed_sets()
        .into_iter()
        .filter(|c| tau.interior_of(c).is_null())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    NowhereDense,
    FirstCategory,
    SecondCategory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CategoryMethod {
    FastPath,
    ExhaustiveOracle,
    ExplicitPool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryReport {
    pub subject: SoftSet,
    pub verdict: Category,
    /// Nowhere dense pieces whose elementary union is the subject.
    pub decomposition: Option<Vec<SoftSet>>,
    pub method: CategoryMethod,
}

impl CategoryReport {
    pub fn is_first_category(&self) -> bool {
        self.verdict != Category::SecondCategory
    }

    /// Re-verifies every piece and the union.
    pub fn recheck(&self, tau: &SoftTopology) -> bool {
        match &self.decomposition {
            None => self.verdict == Category::SecondCategory,
            Some(pieces) => {
                let union = pieces.iter().fold(tau.null(), |acc, p| acc.join(p));
                union == self.subject
                    && pieces.iter().all(|p| !p.is_null() && tau.admissible(p) && nowhere_dense(tau, p))
            }
        }
    }
}

fn decompose(subject: &SoftSet, pieces: Vec<SoftSet>) -> Option<Vec<SoftSet>> {
    let union = pieces.iter().fold(SoftSet::null(subject.universe()), |acc, p| acc.join(p));
    (union == *subject).then_some(pieces)
}

/// Every piece of a first-category F lies in F ⋒ C for the e-closed C =
/// closure(piece), which has empty interior, so the pieces F ⋒ C over all such
/// C decide the question exactly.
pub fn is_first_category(tau: &SoftTopology, f: &SoftSet, pool: Option<&[SoftSet]>) -> Result<CategoryReport> {
    require_subject(tau, f)?;
    if nowhere_dense(tau, f) {
        return Ok(CategoryReport {
            subject: f.clone(),
            verdict: Category::NowhereDense,
            decomposition: Some(vec![f.clone()]),
            method: CategoryMethod::FastPath,
        });
    }
    let (pieces, method) = match pool {
        Some(pool) => {
            for p in pool {
                tau.check(p)?;
            }
            let pieces = pool
                .iter()
                .filter(|p| !p.is_null() && tau.admissible(p) && p.subset_of(f) && nowhere_dense(tau, p))
                .cloned();
            (crate::soft::dedup_sets(pieces), CategoryMethod::ExplicitPool)
        }
        None => {
            let pieces = empty_interior_closed(tau)
                .into_iter()
                .map(|c| f.e_meet(&c))
                .filter(|p| !p.is_null());
            (crate::soft::dedup_sets(pieces), CategoryMethod::FastPath)
        }
    };
    let decomposition = decompose(f, pieces);
    let verdict = if decomposition.is_some() { Category::FirstCategory } else { Category::SecondCategory };
    Ok(CategoryReport { subject: f.clone(), verdict, decomposition, method })
}

/// Searches every nonempty admissible soft subset of F directly. Returns
/// `None` when F exceeds the exhaustive limits.
pub fn is_first_category_exhaustive(tau: &SoftTopology, f: &SoftSet) -> Result<Option<CategoryReport>> {
    require_subject(tau, f)?;
    let subsets = f
        .slices()
        .iter()
        .fold(1u128, |acc, s| acc.saturating_mul((1u128 << s.count_ones()) - 1));
    if f.se_count() > EXHAUSTIVE_ELEMENT_LIMIT || subsets > EXHAUSTIVE_SUBSET_LIMIT {
        return Ok(None);
    }
    let verdict_nd = nowhere_dense(tau, f);
    let pieces: Vec<SoftSet> = full_support_subsets(f)
        .filter(|p| nowhere_dense(tau, p))
        .collect();
    let decomposition = decompose(f, pieces);
    let verdict = match (verdict_nd, &decomposition) {
        (true, _) => Category::NowhereDense,
        (false, Some(_)) => Category::FirstCategory,
        (false, None) => Category::SecondCategory,
    };
    Ok(Some(CategoryReport {
        subject: f.clone(),
        verdict,
        decomposition,
        method: CategoryMethod::ExhaustiveOracle,
    }))
}

/// Soft subsets of F with every slice a nonempty subset of F's slice.
pub(crate) fn full_support_subsets(f: &SoftSet) -> impl Iterator<Item = SoftSet> + '_ {
    let choices: Vec<Vec<u64>> = f.slices().iter().map(|&s| nonempty_submasks(s)).collect();
    let total: usize = choices.iter().map(Vec::len).product();
    (0..total).map(move |mut code| {
        let mut masks = vec![0u64; choices.len()];
        for a in (0..choices.len()).rev() {
            masks[a] = choices[a][code % choices[a].len()];
            code /= choices[a].len();
        }
        SoftSet::from_masks_unchecked(f.universe(), masks.into())
    })
}

fn nonempty_submasks(mask: u64) -> Vec<u64> {
    let idx: Vec<usize> = bits(mask).collect();
    (1u64..1 << idx.len())
        .map(|code| bits(code).fold(0u64, |m, i| m | 1 << idx[i]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaireReport {
    pub holds: bool,
    /// Elementary union of the e-closed sets with empty interior.
    pub meager_union: SoftSet,
    pub interior: SoftSet,
    pub family: Vec<SoftSet>,
}

/// Interior and elementary union are monotone, so the union of all e-closed
/// sets with empty interior dominates every subfamily.
pub fn is_baire(tau: &SoftTopology) -> BaireReport {
    let family = empty_interior_closed(tau);
    let meager_union = family.iter().fold(tau.null(), |acc, c| acc.join(c));
    let interior = tau.interior_of(&meager_union);
    BaireReport { holds: interior.is_null(), meager_union, interior, family }
}

/// Checks every subfamily of the empty-interior e-closed sets. Returns `None`
/// when there are too many subfamilies.
pub fn is_baire_exhaustive(tau: &SoftTopology) -> Option<bool> {
    let family = empty_interior_closed(tau);
    if family.len() >= usize::BITS as usize || 1usize << family.len() > EXHAUSTIVE_FAMILY_LIMIT {
        return None;
    }
    Some((0u64..1 << family.len()).all(|code| {
        let union = bits(code).fold(tau.null(), |acc, i| acc.join(&family[i]));
        tau.interior_of(&union).is_null()
    }))
}

/// Every nonempty open set is of second category.
pub fn opens_are_second_category(tau: &SoftTopology) -> bool {
    tau.members()
        .iter()
        .filter(|o| !o.is_null())
        .all(|o| !is_first_category(tau, o, None).expect("opens are admissible").is_first_category())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCompactnessReport {
    pub holds: bool,
    /// A soft element and an open neighborhood with no compact neighborhood
    /// inside it.
    pub counterexample: Option<(SoftElement, SoftSet)>,
}

/// Every soft element has a compact neighborhood inside each of its
/// neighborhoods. Restricting to open neighborhoods loses nothing since every
/// neighborhood contains an open one. The smallest candidate K is the
/// minimal open N(x): enlarging K only fills slices, and a full slice keeps
/// the complement out of S(X̃) unless K is the carrier.
pub fn is_locally_compact(tau: &SoftTopology) -> Result<LocalCompactnessReport> {
    if !is_hausdorff(tau).holds {
        return Err(Error::pre("local compactness is only defined in soft e-Hausdorff spaces"));
    }
    Ok(locally_compact(tau))
}

pub fn locally_compact(tau: &SoftTopology) -> LocalCompactnessReport {
    let carrier = tau.carrier();
    for x in tau.elements() {
        let n = tau.minimal_open(&x);
        if n.complement_within(carrier).in_s() {
            continue;
        }
        if let Some(o) = tau.members().iter().find(|o| o.holds(&x) && *o != carrier) {
            return LocalCompactnessReport { holds: false, counterexample: Some((x, o.clone())) };
        }
    }
    LocalCompactnessReport { holds: true, counterexample: None }
}

/// Hypotheses of the elementary Baire theorem.
pub fn baire_theorem_hypothesis(tau: &SoftTopology) -> bool {
    is_hausdorff(tau).holds && tau.pairwise_meets_admissible() && locally_compact(tau).holds
}

/// `None` when the hypotheses fail, otherwise whether the space is Baire.
pub fn thm_5_1_property(tau: &SoftTopology) -> Option<bool> {
    baire_theorem_hypothesis(tau).then(|| is_baire(tau).holds)
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

    #[test]
    fn nowhere_dense_sets() {
        let tau = chain_space();
        let u = tau.universe().clone();
        assert!(is_nowhere_dense(&tau, &s(&u, &["d"], &["a"])).unwrap());
        assert!(!is_nowhere_dense(&tau, &SoftSet::absolute(&u)).unwrap());
        assert!(is_nowhere_dense(&tau, &SoftSet::null(&u)).unwrap_err().is_precondition());
        let v = Universe::indexed(3, 2).unwrap();
        let full = SoftTopology::full(&v);
        assert!(full.members().iter().filter(|f| !f.is_null()).all(|f| !is_nowhere_dense(&full, f).unwrap()));
    }

    #[test]
    fn category() {
        let tau = chain_space();
        let u = tau.universe().clone();
        let f = s(&u, &["d"], &["a"]);
        let r = is_first_category(&tau, &f, None).unwrap();
        assert_eq!(r.verdict, Category::NowhereDense);
        assert_eq!(r.decomposition, Some(vec![f.clone()]));
        assert!(r.recheck(&tau));
        let v = Universe::indexed(3, 2).unwrap();
        let full = SoftTopology::full(&v);
        let r = is_first_category(&full, &SoftSet::absolute(&v), None).unwrap();
        assert_eq!(r.verdict, Category::SecondCategory);
        assert!(r.recheck(&full));
    }

    #[test]
    fn fast_path_matches_exhaustive_search() {
        let tau = chain_space();
        let u = tau.universe().clone();
        let mut checked = 0;
        for f in SoftTopology::full(&u).members().iter().filter(|f| !f.is_null()) {
            let Some(oracle) = is_first_category_exhaustive(&tau, f).unwrap() else { continue };
            let fast = is_first_category(&tau, f, None).unwrap();
            assert_eq!(fast.verdict, oracle.verdict, "{f}");
            assert!(fast.recheck(&tau) && oracle.recheck(&tau));
            checked += 1;
        }
        assert!(checked > 100);
    }

    #[test]
    fn baire_spaces() {
        let u = Universe::indexed(3, 2).unwrap();
        for tau in [SoftTopology::indiscrete(&u), SoftTopology::full(&u)] {
            let r = is_baire(&tau);
            assert!(r.holds);
            assert!(r.meager_union.is_null());
            assert_eq!(is_baire_exhaustive(&tau), Some(true));
        }
        let tau = chain_space();
        let v = tau.universe().clone();
        let r = is_baire(&tau);
        assert_eq!(r.family, vec![SoftSet::null(&v), s(&v, &["d"], &["a"])]);
        assert_eq!(r.meager_union, s(&v, &["d"], &["a"]));
        assert!(r.holds);
        assert_eq!(is_baire_exhaustive(&tau), Some(true));
    }

    /// Local compactness straight from the definition: for each x and each
    /// open O around x, some compact K and open U with x ∈ U ⊆ K ⊆ O.
    fn locally_compact_by_search(tau: &SoftTopology) -> bool {
        let candidates = SoftTopology::full(tau.universe()).members().to_vec();
        tau.elements().all(|x| {
            tau.members().iter().filter(|o| o.holds(&x)).all(|o| {
                candidates.iter().any(|k| {
                    k.subset_of(o)
                        && crate::compactness::compact_set_report(tau, k).holds
                        && tau.members().iter().any(|u| u.holds(&x) && u.subset_of(k))
                })
            })
        })
    }

    #[test]
    fn local_compactness_matches_definition() {
        let u = Universe::indexed(3, 2).unwrap();
        let full = SoftTopology::full(&u);
        assert!(is_locally_compact(&full).unwrap().holds);
        assert!(is_locally_compact(&SoftTopology::indiscrete(&u)).unwrap_err().is_precondition());

        let mut tested = 0;
        let members = full.members();
        for i in 1..members.len() {
            for j in i + 1..members.len() {
                let family = vec![SoftSet::null(&u), SoftSet::absolute(&u), members[i].clone(), members[j].clone()];
                let Ok(tau) = SoftTopology::new(&u, family) else { continue };
                assert_eq!(locally_compact(&tau).holds, locally_compact_by_search(&tau), "{:?}", tau.members());
                tested += 1;
            }
        }
        assert!(tested > 50);
    }

    #[test]
    fn baire_theorem_on_extremes() {
        let u = Universe::indexed(3, 2).unwrap();
        assert_eq!(thm_5_1_property(&SoftTopology::full(&Universe::indexed(3, 1).unwrap())), Some(true));
        assert!(!SoftTopology::full(&u).pairwise_meets_admissible());
        assert_eq!(thm_5_1_property(&SoftTopology::full(&u)), None);
        assert_eq!(thm_5_1_property(&SoftTopology::indiscrete(&u)), None);
    }
}
