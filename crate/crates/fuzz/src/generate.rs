//! Random soft sets, topologies by subbase closure, Hausdorff topologies and
//! soft functions.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use softtopo::separation::is_hausdorff;
use softtopo::{SoftElement, SoftFunction, SoftSet, SoftTopology, Universe};

use crate::instance::Space;
use crate::FuzzError;

/// Subbase redraws before gen_topology gives up.
pub const MAX_REDRAWS: usize = 100;
/// Repair rounds per Hausdorff draw, and Hausdorff draws before the fallback.
const HAUSDORFF_REPAIRS: usize = 16;
const HAUSDORFF_DRAWS: usize = 4;

pub fn random_universe(rng: &mut ChaCha8Rng, max_points: usize, max_params: usize) -> Arc<Universe> {
    let p = rng.gen_range(1..=max_points);
    let q = rng.gen_range(1..=max_params);
    Universe::indexed(p, q).expect("sizes validated by the config")
}

pub fn random_mask(rng: &mut ChaCha8Rng, u: &Universe) -> u64 {
    rng.gen_range(0..=u.full_mask())
}

pub fn random_nonempty_mask(rng: &mut ChaCha8Rng, u: &Universe) -> u64 {
    rng.gen_range(1..=u.full_mask())
}

/// Any soft set; slices may be empty.
pub fn random_soft_set(rng: &mut ChaCha8Rng, u: &Arc<Universe>) -> SoftSet {
    let masks = (0..u.param_count()).map(|_| random_mask(rng, u)).collect();
    SoftSet::from_masks(u, masks).expect("masks lie inside the universe")
}

/// A member of S(X̃) other than Φ̃.
pub fn random_s_member(rng: &mut ChaCha8Rng, u: &Arc<Universe>) -> SoftSet {
    let masks = (0..u.param_count()).map(|_| random_nonempty_mask(rng, u)).collect();
    SoftSet::from_masks(u, masks).expect("masks lie inside the universe")
}

pub fn random_element(rng: &mut ChaCha8Rng, u: &Arc<Universe>) -> SoftElement {
    let coords: Vec<usize> = (0..u.param_count()).map(|_| rng.gen_range(0..u.point_count())).collect();
    SoftElement::from_indices(u, &coords).expect("coordinates in range")
}

/// A soft set that is a compact-set candidate: F and its complement both in
/// S(X̃), occasionally Φ̃ or X̃, occasionally an arbitrary S member.
pub fn random_compact_candidate(rng: &mut ChaCha8Rng, u: &Arc<Universe>) -> SoftSet {
    match rng.gen_range(0..10) {
        0 => SoftSet::null(u),
        1 => SoftSet::absolute(u),
        2 => random_s_member(rng, u),
        _ if u.point_count() == 1 => SoftSet::absolute(u),
        _ => {
            let masks = (0..u.param_count()).map(|_| rng.gen_range(1..u.full_mask())).collect();
            SoftSet::from_masks(u, masks).expect("masks lie inside the universe")
        }
    }
}

/// Subbase closure with the configured size cap; redraws on overflow.
pub fn gen_topology(rng: &mut ChaCha8Rng, u: &Arc<Universe>, subbase: usize, cap: usize) -> Result<(Space, SoftTopology), FuzzError> {
    for _ in 0..MAX_REDRAWS {
        let generators: Vec<SoftSet> = (0..subbase).map(|_| random_s_member(rng, u)).collect();
        if let Some(tau) = close(u, &generators, cap) {
            return Ok((Space { universe: u.clone(), subbase: generators }, tau));
        }
    }
    Err(FuzzError::Generation(format!("no subbase of {subbase} generators closed within {cap} members")))
}

fn close(u: &Arc<Universe>, generators: &[SoftSet], cap: usize) -> Option<SoftTopology> {
    SoftTopology::generate(&SoftSet::absolute(u), generators, cap).expect("generators are admissible")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HausdorffPath {
    /// The first closure was already Hausdorff.
    Direct,
    /// Separating generators were added for unseparated pairs.
    Repaired,
    /// The subbase of all singleton soft sets.
    Fallback,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HausdorffStats {
    pub direct: usize,
    pub repaired: usize,
    pub fallback: usize,
}

impl HausdorffStats {
    pub fn record(&mut self, path: HausdorffPath) {
        match path {
            HausdorffPath::Direct => self.direct += 1,
            HausdorffPath::Repaired => self.repaired += 1,
            HausdorffPath::Fallback => self.fallback += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.direct + self.repaired + self.fallback
    }

    pub fn merge(&mut self, other: &HausdorffStats) {
        self.direct += other.direct;
        self.repaired += other.repaired;
        self.fallback += other.fallback;
    }
}

/// ss({x}) with each slice enlarged by random points outside `avoid`'s slice.
fn enlarged_singleton(rng: &mut ChaCha8Rng, x: &SoftElement, avoid: &SoftElement) -> SoftSet {
    let u = x.universe();
    let masks = (0..u.param_count())
        .map(|a| {
            let extra = random_mask(rng, u) & !(1 << avoid.coord(a));
            1u64 << x.coord(a) | extra
        })
        .collect();
    SoftSet::from_masks(u, masks).expect("masks lie inside the universe")
}

/// A soft e-Hausdorff topology. The subbase mixes random S members with
/// singleton soft sets; unseparated pairs are repaired by adding disjoint
/// enlarged singletons. After repeated cap overflows the subbase of all
/// singletons (which generates every member of S(X̃)) is used.
pub fn gen_hausdorff(rng: &mut ChaCha8Rng, u: &Arc<Universe>, subbase: usize, cap: usize) -> (Space, SoftTopology, HausdorffPath) {
    let elements: Vec<SoftElement> = SoftSet::absolute(u).elements().collect();
    'draw: for _ in 0..HAUSDORFF_DRAWS {
        let mut generators: Vec<SoftSet> = (0..subbase).map(|_| random_s_member(rng, u)).collect();
        generators.extend((0..subbase).map(|_| elements.choose(rng).expect("nonempty").singleton()));
        let mut repaired = false;
        for _ in 0..HAUSDORFF_REPAIRS {
            let Some(tau) = close(u, &generators, cap) else { continue 'draw };
            let report = is_hausdorff(&tau);
            let Some(pair) = report.counterexample else {
                let path = if repaired { HausdorffPath::Repaired } else { HausdorffPath::Direct };
                return (Space { universe: u.clone(), subbase: generators }, tau, path);
            };
            let softtopo::separation::Hypothesis::Points { x, y } = pair else {
                unreachable!("Hausdorff counterexamples are point pairs")
            };
            generators.push(enlarged_singleton(rng, &x, &y));
            generators.push(y.singleton());
            repaired = true;
        }
    }
    let generators: Vec<SoftSet> = elements.iter().map(SoftElement::singleton).collect();
    let tau = close(u, &generators, crate::instance::EVAL_CAP).unwrap_or_else(|| SoftTopology::full(u));
    (Space { universe: u.clone(), subbase: generators }, tau, HausdorffPath::Fallback)
}

/// Constant, identity-like or uniformly random point maps.
pub fn random_function(rng: &mut ChaCha8Rng, domain: &Arc<Universe>, codomain: &Arc<Universe>) -> SoftFunction {
    let (n, m) = (domain.point_count(), codomain.point_count());
    let maps: Vec<Vec<usize>> = match rng.gen_range(0..3) {
        0 => {
            let c = rng.gen_range(0..m);
            vec![vec![c; n]; domain.param_count()]
        }
        1 => vec![(0..n).map(|i| i % m).collect(); domain.param_count()],
        _ => (0..domain.param_count()).map(|_| (0..n).map(|_| rng.gen_range(0..m)).collect()).collect(),
    };
    SoftFunction::from_indices(domain, codomain, maps).expect("indices in range")
}

/// Universe with points `q0..` sharing `domain`'s parameters.
pub fn codomain_universe(rng: &mut ChaCha8Rng, domain: &Universe, max_points: usize) -> Arc<Universe> {
    let p = rng.gen_range(1..=max_points);
    Universe::new((0..p).map(|i| format!("q{i}")), domain.params().to_vec()).expect("valid sizes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::trial_rng;
    use softtopo::topology::verify_topology;

    #[test]
    fn empty_subbase_gives_indiscrete() {
        let u = Universe::indexed(3, 2).unwrap();
        let mut rng = trial_rng(1, 0);
        let (_, tau) = gen_topology(&mut rng, &u, 0, 512).unwrap();
        assert_eq!(tau, SoftTopology::indiscrete(&u));
    }

    #[test]
    fn all_admissible_generators_give_full() {
        let u = Universe::indexed(3, 2).unwrap();
        let full = SoftTopology::full(&u);
        let generated = close(&u, &full.members()[1..], 1 << 10).unwrap();
        let mut a = generated.members().to_vec();
        let mut b = full.members().to_vec();
        a.sort_by_key(|s| s.slices().to_vec());
        b.sort_by_key(|s| s.slices().to_vec());
        assert_eq!(a, b);
    }

    #[test]
    fn generated_topologies_verify() {
        for t in 0..200 {
            let mut rng = trial_rng(42, t);
            let u = random_universe(&mut rng, 4, 2);
            let (space, tau) = gen_topology(&mut rng, &u, 3, 512).unwrap();
            assert!(verify_topology(&u, tau.members()).unwrap().valid);
            assert_eq!(space.topology().unwrap(), tau);
        }
    }

    #[test]
    fn hausdorff_generation_always_succeeds() {
        let mut stats = HausdorffStats::default();
        for t in 0..100 {
            let mut rng = trial_rng(5, t);
            let u = random_universe(&mut rng, 4, 2);
            let (space, tau, path) = gen_hausdorff(&mut rng, &u, 2, 512);
            assert!(is_hausdorff(&tau).holds);
            let mut a = space.topology().unwrap().members().to_vec();
            let mut b = tau.members().to_vec();
            a.sort_by_key(|s| s.slices().to_vec());
            b.sort_by_key(|s| s.slices().to_vec());
            assert_eq!(a, b);
            stats.record(path);
        }
        assert_eq!(stats.total(), 100);
    }

    #[test]
    fn pinned_generation() {
        let mut rng = trial_rng(42, 0);
        let u = Universe::indexed(4, 2).unwrap();
        let (space, tau) = gen_topology(&mut rng, &u, 3, 512).unwrap();
        assert!(verify_topology(&u, tau.members()).unwrap().valid);
        let shown = |sets: &[SoftSet]| sets.iter().map(SoftSet::to_string).collect::<Vec<_>>();
        assert_eq!(shown(&space.subbase), ["({p0,p1,p3},{p0,p1,p2,p3})", "({p0,p1,p2},{p1,p3})", "({p0,p2},{p0,p1})"]);
        assert_eq!(
            shown(tau.members()),
            [
                "({},{})",
                "({p0,p1,p2,p3},{p0,p1,p2,p3})",
                "({p0,p1,p3},{p0,p1,p2,p3})",
                "({p0,p1,p2},{p1,p3})",
                "({p0,p2},{p0,p1})",
                "({p0,p1},{p1,p3})",
                "({p0},{p0,p1})",
                "({p0,p1,p2},{p0,p1,p3})",
                "({p0,p2},{p1})",
                "({p0,p1},{p0,p1,p3})",
                "({p0},{p1})",
            ]
        );
        let again = gen_topology(&mut trial_rng(42, 0), &u, 3, 512).unwrap();
        assert_eq!((space, tau), again);
    }
}
