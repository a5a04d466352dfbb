//! Registered properties: each pairs an instance generator with a hypothesis
//! and a conclusion over the generated instance.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use softtopo::baire::{baire_theorem_hypothesis, is_baire, opens_are_second_category};
use softtopo::compactness::{compact_set_report, fip_witness, is_compact_space, nested_intersection_check};
use softtopo::maps::PreimageMode;
use softtopo::separation::{is_hausdorff, is_normal, is_regular};
use softtopo::subspace::{build_subspace, check_subspace_preconditions};
use softtopo::topology::{verify_with_carrier, LimitingMode};
use softtopo::{oracle, SoftSet, SoftTopology, Universe};

use crate::config::GeneratorConfig;
use crate::generate::{self as g, HausdorffStats};
use crate::instance::{Instance, Space};
use crate::FuzzError;

/// Randomness and bookkeeping available to instance generators.
pub struct Gen<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub config: &'a GeneratorConfig,
    pub hausdorff: HausdorffStats,
}

impl Gen<'_> {
    pub fn universe(&mut self) -> Arc<Universe> {
        g::random_universe(self.rng, self.config.points, self.config.params)
    }

    pub fn space(&mut self, u: &Arc<Universe>) -> Result<(Space, SoftTopology), FuzzError> {
        g::gen_topology(self.rng, u, self.config.subbase, self.config.max_topology)
    }

    pub fn hausdorff_space(&mut self, u: &Arc<Universe>) -> (Space, SoftTopology) {
        let (space, tau, path) = g::gen_hausdorff(self.rng, u, self.config.subbase, self.config.max_topology);
        self.hausdorff.record(path);
        (space, tau)
    }

    fn point_set(&mut self, u: &Arc<Universe>) -> SoftSet {
        SoftSet::constant_mask(u, g::random_nonempty_mask(self.rng, u))
    }

    fn pick<'s>(&mut self, from: &'s [SoftSet]) -> Option<&'s SoftSet> {
        from.choose(self.rng)
    }

    fn chance(&mut self, numerator: u32, denominator: u32) -> bool {
        self.rng.gen_ratio(numerator, denominator)
    }
}

/// An instance with its topologies regenerated.
pub struct Ctx<'a> {
    pub inst: &'a Instance,
    pub tau: SoftTopology,
    pub sigma: Option<SoftTopology>,
}

impl Ctx<'_> {
    pub fn set(&self, name: &str) -> Option<&SoftSet> {
        self.inst.sets.get(name)
    }

    /// The point mask of the constant set `Y`.
    fn y(&self) -> Option<u64> {
        let y = self.set("Y")?;
        let first = y.slice(0);
        (first != 0 && y.slices().iter().all(|&s| s == first)).then_some(first)
    }

    fn hausdorff(&self) -> bool {
        is_hausdorff(&self.tau).holds
    }

    fn compact(&self, name: &str) -> bool {
        self.set(name).is_some_and(|k| compact_set_report(&self.tau, k).holds)
    }

    /// Sets named `C0`, `C1`, ... in index order.
    fn chain(&self) -> Vec<&SoftSet> {
        (0..).map_while(|i| self.set(&format!("C{i}"))).collect()
    }
}

pub type Predicate = fn(&Ctx) -> bool;

pub struct TheoremCase {
    pub id: &'static str,
    pub statement: &'static str,
    pub generate: fn(&mut Gen) -> Result<Instance, FuzzError>,
    pub hypothesis: Predicate,
    pub conclusion: Predicate,
    /// Redraw when the hypothesis fails. Off for hypotheses no finite
    /// instance can meet.
    pub retry: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// The instance's topology could not be regenerated.
    Invalid,
    Skipped,
    Confirmed,
    Counterexample,
}

pub fn evaluate(case: &TheoremCase, inst: &Instance) -> Outcome {
    let Some(tau) = inst.domain.topology() else { return Outcome::Invalid };
    let sigma = match &inst.codomain {
        Some(c) => match c.topology() {
            Some(s) => Some(s),
            None => return Outcome::Invalid,
        },
        None => None,
    };
    let ctx = Ctx { inst, tau, sigma };
    if !(case.hypothesis)(&ctx) {
        Outcome::Skipped
    } else if (case.conclusion)(&ctx) {
        Outcome::Confirmed
    } else {
        Outcome::Counterexample
    }
}

pub fn find(id: &str) -> Option<&'static TheoremCase> {
    let id = if id == "thm_4_6" { "thm_4_6_vacuity" } else { id };
    REGISTRY.iter().find(|c| c.id == id)
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|c| c.id)
}

fn with_topology(gen: &mut Gen, hausdorff: bool) -> Result<(Instance, SoftTopology), FuzzError> {
    let u = gen.universe();
    let (space, tau) = if hausdorff { gen.hausdorff_space(&u) } else { gen.space(&u)? };
    Ok((Instance::new(space), tau))
}

fn subspace_instance(gen: &mut Gen, hausdorff: bool) -> Result<Instance, FuzzError> {
    let (mut inst, _) = with_topology(gen, hausdorff)?;
    let u = inst.universe().clone();
    let y = gen.point_set(&u);
    inst.sets.insert("Y".into(), y);
    Ok(inst)
}

fn preconditions_hold(ctx: &Ctx) -> bool {
    ctx.y()
        .and_then(|y| check_subspace_preconditions(&ctx.tau, y).ok())
        .is_some_and(|p| p.holds())
}

fn subspace(ctx: &Ctx) -> Option<SoftTopology> {
    build_subspace(&ctx.tau, ctx.y()?).ok().map(|s| s.topology)
}

fn compact_sets(gen: &mut Gen, names: &[&str]) -> Result<Instance, FuzzError> {
    let (mut inst, _) = with_topology(gen, true)?;
    let u = inst.universe().clone();
    for n in names {
        let k = g::random_compact_candidate(gen.rng, &u);
        inst.sets.insert((*n).into(), k);
    }
    Ok(inst)
}

fn with_function(gen: &mut Gen, hausdorff: bool) -> Result<Instance, FuzzError> {
    let (mut inst, _) = with_topology(gen, hausdorff)?;
    let u = inst.universe().clone();
    let cu = g::codomain_universe(gen.rng, &u, gen.config.points);
    let (codomain, _) = if hausdorff { gen.hausdorff_space(&cu) } else { gen.space(&cu)? };
    inst.function = Some(g::random_function(gen.rng, &u, &cu));
    inst.codomain = Some(codomain);
    Ok(inst)
}

fn closed_nonempty(tau: &SoftTopology) -> Vec<SoftSet> {
    tau.closed_sets().into_iter().filter(|c| !c.is_null()).collect()
}

pub static REGISTRY: &[TheoremCase] = &[
    TheoremCase {
        id: "thm_3_1_constructive",
        statement: "when every pairwise meet of opens and every trace on Y lies in S(X̃), the traces O ⋒ Ỹ form a soft e-topology on Ỹ",
        generate: |gen| subspace_instance(gen, false),
        hypothesis: preconditions_hold,
        conclusion: |ctx| {
            subspace(ctx).is_some_and(|s| {
                verify_with_carrier(s.carrier(), s.members()).is_ok_and(|r| r.valid)
            })
        },
        retry: true,
    },
    TheoremCase {
        id: "lem_3_1",
        statement: "a limiting soft element x of F meets F ⋒ G in another soft element for every open G containing x",
        generate: |gen| {
            let (mut inst, _) = with_topology(gen, false)?;
            let u = inst.universe().clone();
            inst.sets.insert("F".into(), g::random_soft_set(gen.rng, &u));
            inst.elements.insert("x".into(), g::random_element(gen.rng, &u));
            Ok(inst)
        },
        hypothesis: |ctx| {
            let (f, x) = (&ctx.inst.sets["F"], &ctx.inst.elements["x"]);
            ctx.tau.is_limiting(f, x, LimitingMode::PerParameter).unwrap_or(false)
        },
        conclusion: |ctx| {
            let (f, x) = (&ctx.inst.sets["F"], &ctx.inst.elements["x"]);
            ctx.tau.members().iter().filter(|o| o.holds(x)).all(|o| {
                let m = f.e_meet(o);
                !m.is_null() && (m.se_count() > 1 || !m.holds(x))
            })
        },
        retry: true,
    },
    TheoremCase {
        id: "hausdorff_heredity",
        statement: "subspaces of a soft e-Hausdorff space satisfying the trace conditions are soft e-Hausdorff",
        generate: |gen| subspace_instance(gen, true),
        hypothesis: |ctx| ctx.hausdorff() && preconditions_hold(ctx),
        conclusion: |ctx| subspace(ctx).is_some_and(|s| is_hausdorff(&s).holds),
        retry: true,
    },
    TheoremCase {
        id: "thm_4_1",
        statement: "in a quasi-compact space a family of e-closed sets with Φ̃ elementary intersection has a finite subfamily with Φ̃ intersection",
        generate: |gen| {
            let (mut inst, tau) = with_topology(gen, false)?;
            let closed = tau.closed_sets();
            let mut i = 0;
            for c in &closed {
                if gen.chance(1, 2) {
                    inst.sets.insert(format!("C{i}"), c.clone());
                    i += 1;
                }
            }
            if i == 0 {
                inst.sets.insert("C0".into(), gen.pick(&closed).expect("Φ̃ and X̃ are closed").clone());
            }
            Ok(inst)
        },
        hypothesis: |ctx| {
            let family = ctx.chain();
            !family.is_empty()
                && family.iter().all(|c| ctx.tau.closed(c))
                && family.iter().fold(ctx.tau.carrier().clone(), |acc, c| acc.e_meet(c)).is_null()
        },
        conclusion: |ctx| {
            let family: Vec<SoftSet> = ctx.chain().into_iter().cloned().collect();
            fip_witness(&ctx.tau, &family).is_ok()
        },
        retry: true,
    },
    TheoremCase {
        id: "thm_4_2",
        statement: "in a compact space a decreasing chain of nonempty e-closed sets has non-null elementary intersection",
        generate: |gen| {
            let (mut inst, tau) = with_topology(gen, true)?;
            let closed = closed_nonempty(&tau);
            let length = gen.rng.gen_range(1..=4);
            let mut last = gen.pick(&closed).expect("X̃ is closed").clone();
            inst.sets.insert("C0".into(), last.clone());
            for i in 1..length {
                let below: Vec<SoftSet> = closed.iter().filter(|c| c.subset_of(&last)).cloned().collect();
                last = gen.pick(&below).expect("the last member is below itself").clone();
                inst.sets.insert(format!("C{i}"), last.clone());
            }
            Ok(inst)
        },
        hypothesis: |ctx| {
            let chain = ctx.chain();
            is_compact_space(&ctx.tau).holds
                && !chain.is_empty()
                && chain.iter().all(|c| !c.is_null() && ctx.tau.closed(c))
                && chain.windows(2).all(|w| w[1].subset_of(w[0]))
        },
        conclusion: |ctx| {
            let chain: Vec<SoftSet> = ctx.chain().into_iter().cloned().collect();
            nested_intersection_check(&ctx.tau, &chain).unwrap_or(false)
        },
        retry: true,
    },
    TheoremCase {
        id: "thm_4_3",
        statement: "if a proper subspace is a compact space then Ỹ is a compact set of the whole space",
        generate: |gen| subspace_instance(gen, true),
        hypothesis: |ctx| {
            ctx.hausdorff()
                && ctx.tau.pairwise_meets_admissible()
                && ctx.y().is_some_and(|y| y != ctx.inst.universe().full_mask())
                && preconditions_hold(ctx)
                && subspace(ctx).is_some_and(|s| is_compact_space(&s).holds)
        },
        conclusion: |ctx| compact_set_report(&ctx.tau, &ctx.inst.sets["Y"]).holds,
        retry: true,
    },
    TheoremCase {
        id: "thm_4_4",
        statement: "in a soft e-Hausdorff space whose opens meet inside S(X̃), every compact set is e-closed",
        generate: |gen| compact_sets(gen, &["F"]),
        hypothesis: |ctx| ctx.hausdorff() && ctx.tau.pairwise_meets_admissible() && ctx.compact("F"),
        conclusion: |ctx| ctx.tau.closed(&ctx.inst.sets["F"]),
        retry: true,
    },
    TheoremCase {
        id: "thm_4_5",
        statement: "an e-closed set inside a compact set is compact",
        generate: |gen| {
            let mut inst = compact_sets(gen, &["K"])?;
            let tau = inst.domain.topology().expect("freshly generated");
            let k = inst.sets["K"].clone();
            let inside: Vec<SoftSet> = tau.closed_sets().into_iter().filter(|c| c.subset_of(&k)).collect();
            let f = match gen.pick(&inside) {
                Some(f) => f.clone(),
                None => g::random_s_member(gen.rng, inst.universe()),
            };
            inst.sets.insert("F".into(), f);
            Ok(inst)
        },
        hypothesis: |ctx| {
            let (f, k) = (&ctx.inst.sets["F"], &ctx.inst.sets["K"]);
            ctx.hausdorff() && ctx.compact("K") && ctx.tau.closed(f) && f.subset_of(k)
        },
        conclusion: |ctx| ctx.compact("F"),
        retry: true,
    },
    TheoremCase {
        id: "prop_4_1a",
        statement: "the elementary union of two compact sets is compact",
        generate: |gen| compact_sets(gen, &["K1", "K2"]),
        hypothesis: |ctx| ctx.hausdorff() && ctx.compact("K1") && ctx.compact("K2"),
        conclusion: |ctx| {
            let union = ctx.inst.sets["K1"].join(&ctx.inst.sets["K2"]);
            compact_set_report(&ctx.tau, &union).holds
        },
        retry: true,
    },
    TheoremCase {
        id: "prop_4_1b",
        statement: "in a compact space whose opens meet inside S(X̃), or below a common compact set, the elementary intersection of two compact sets is compact",
        generate: |gen| compact_sets(gen, &["K", "K1", "K2"]),
        hypothesis: |ctx| {
            let (k, k1, k2) = (&ctx.inst.sets["K"], &ctx.inst.sets["K1"], &ctx.inst.sets["K2"]);
            let bounded = ctx.compact("K") && k1.subset_of(k) && k2.subset_of(k);
            ctx.hausdorff()
                && ctx.tau.pairwise_meets_admissible()
                && ctx.compact("K1")
                && ctx.compact("K2")
                && (is_compact_space(&ctx.tau).holds || bounded)
        },
        conclusion: |ctx| {
            let meet = ctx.inst.sets["K1"].e_meet(&ctx.inst.sets["K2"]);
            compact_set_report(&ctx.tau, &meet).holds
        },
        retry: true,
    },
    TheoremCase {
        id: "thm_4_6_vacuity",
        statement: "an infinite admissible subset of a compact set has a limiting soft element; no soft set over a finite universe is infinite",
        generate: |gen| {
            let mut inst = compact_sets(gen, &["K"])?;
            let k = inst.sets["K"].clone();
            let masks = k.slices().iter().map(|&s| s & g::random_mask(gen.rng, inst.universe())).collect();
            inst.sets.insert("F".into(), SoftSet::from_masks(inst.universe(), masks).expect("inside the universe"));
            Ok(inst)
        },
        hypothesis: |ctx| {
            let (f, k) = (&ctx.inst.sets["F"], &ctx.inst.sets["K"]);
            // SE(F) is a finite product of finite slices
            let infinite = false;
            infinite && ctx.hausdorff() && ctx.compact("K") && f.in_s() && f.subset_of(k)
        },
        conclusion: |ctx| {
            let f = &ctx.inst.sets["F"];
            ctx.tau.limiting_elements(f, LimitingMode::PerParameter).is_ok_and(|v| !v.is_empty())
        },
        retry: false,
    },
    TheoremCase {
        id: "thm_4_7",
        statement: "a compact soft e-Hausdorff space is soft e-regular",
        generate: |gen| Ok(with_topology(gen, true)?.0),
        hypothesis: |ctx| is_compact_space(&ctx.tau).holds,
        conclusion: |ctx| is_regular(&ctx.tau).holds,
        retry: true,
    },
    TheoremCase {
        id: "thm_4_8",
        statement: "a compact soft e-Hausdorff space is soft e-normal",
        generate: |gen| Ok(with_topology(gen, true)?.0),
        hypothesis: |ctx| is_compact_space(&ctx.tau).holds,
        conclusion: |ctx| is_normal(&ctx.tau).holds,
        retry: true,
    },
    TheoremCase {
        id: "prop_6_1",
        statement: "a soft e-continuous image of a compact set between soft e-Hausdorff spaces is compact",
        generate: |gen| {
            let mut inst = with_function(gen, true)?;
            let k = g::random_compact_candidate(gen.rng, inst.universe());
            inst.sets.insert("K".into(), k);
            Ok(inst)
        },
        hypothesis: |ctx| {
            let (Some(sigma), Some(f)) = (&ctx.sigma, &ctx.inst.function) else { return false };
            ctx.hausdorff()
                && is_hausdorff(sigma).holds
                && ctx.compact("K")
                && f.is_continuous_definitional(&ctx.tau, sigma).unwrap_or(false)
        },
        conclusion: |ctx| {
            let (Some(sigma), Some(f)) = (&ctx.sigma, &ctx.inst.function) else { return false };
            f.image(&ctx.inst.sets["K"]).is_ok_and(|img| compact_set_report(sigma, &img).holds)
        },
        retry: true,
    },
    TheoremCase {
        id: "continuity_criteria_agree",
        statement: "continuity at every soft element agrees with openness of the preimages of all opens",
        generate: |gen| with_function(gen, false),
        hypothesis: |ctx| ctx.sigma.is_some() && ctx.inst.function.is_some(),
        conclusion: |ctx| {
            let (Some(sigma), Some(f)) = (&ctx.sigma, &ctx.inst.function) else { return false };
            let definitional = f.is_continuous_definitional(&ctx.tau, sigma);
            let preimage = f.is_continuous_preimage(&ctx.tau, sigma, PreimageMode::Violation);
            matches!((definitional, preimage), (Ok(a), Ok(b)) if a == b.holds)
        },
        retry: true,
    },
    TheoremCase {
        id: "thm_5_1",
        statement: "a locally compact soft e-Hausdorff space whose opens meet inside S(X̃) is a Baire space",
        generate: |gen| Ok(with_topology(gen, true)?.0),
        hypothesis: |ctx| baire_theorem_hypothesis(&ctx.tau),
        conclusion: |ctx| is_baire(&ctx.tau).holds,
        retry: true,
    },
    TheoremCase {
        id: "baire_definitions_agree",
        statement: "the closed-family Baire property agrees with every nonempty open set being of second category",
        generate: |gen| Ok(with_topology(gen, true)?.0),
        hypothesis: |ctx| ctx.hausdorff(),
        conclusion: |ctx| is_baire(&ctx.tau).holds == opens_are_second_category(&ctx.tau),
        retry: true,
    },
    TheoremCase {
        id: "elementary_op_oracle",
        statement: "slice-wise elementary union, intersection and complement equal their soft-element materializations",
        generate: |gen| {
            let u = gen.universe();
            let mut inst = Instance::new(Space { universe: u.clone(), subbase: Vec::new() });
            for n in ["F", "G"] {
                let s = if gen.chance(1, 8) { SoftSet::null(&u) } else { g::random_s_member(gen.rng, &u) };
                inst.sets.insert(n.into(), s);
            }
            Ok(inst)
        },
        hypothesis: |ctx| ctx.set("F").is_some_and(SoftSet::in_s) && ctx.set("G").is_some_and(SoftSet::in_s),
        conclusion: |ctx| {
            let (f, g) = (&ctx.inst.sets["F"], &ctx.inst.sets["G"]);
            f.e_union(g).ok() == oracle::e_union(f, g).ok()
                && f.e_intersection(g).ok() == oracle::e_intersection(f, g).ok()
                && f.e_complement().ok() == oracle::e_complement(f).ok()
                && g.e_complement().ok() == oracle::e_complement(g).ok()
        },
        retry: true,
    },
];
