//! Algebraic laws of the elementary operations and of closure and interior
//! on random topologies.

use std::sync::Arc;

use proptest::prelude::*;
use softtopo::{SoftSet, SoftTopology, Universe};

const POINTS: usize = 4;
const PARAMS: usize = 2;

fn universe() -> Arc<Universe> {
    Universe::indexed(POINTS, PARAMS).unwrap()
}

fn any_set() -> impl Strategy<Value = SoftSet> {
    prop::collection::vec(0u64..1 << POINTS, PARAMS).prop_map(|m| SoftSet::from_masks(&universe(), m).unwrap())
}

/// Φ̃ one time in eight, otherwise full support.
fn s_member() -> impl Strategy<Value = SoftSet> {
    prop_oneof![
        1 => Just(SoftSet::null(&universe())),
        7 => prop::collection::vec(1u64..1 << POINTS, PARAMS).prop_map(|m| SoftSet::from_masks(&universe(), m).unwrap()),
    ]
}

fn topology() -> impl Strategy<Value = SoftTopology> {
    prop::collection::vec(s_member(), 0..4).prop_map(|gens| {
        let gens: Vec<SoftSet> = gens.into_iter().filter(|g| !g.is_null()).collect();
        SoftTopology::generate(&SoftSet::absolute(&universe()), &gens, 1 << 12).unwrap().unwrap()
    })
}

proptest! {
    #[test]
    fn union_and_intersection_laws(f in s_member(), g in s_member(), h in s_member()) {
        let u = |a: &SoftSet, b: &SoftSet| a.e_union(b).unwrap();
        let i = |a: &SoftSet, b: &SoftSet| a.e_intersection(b).unwrap();
        prop_assert_eq!(u(&f, &g), u(&g, &f));
        prop_assert_eq!(i(&f, &g), i(&g, &f));
        prop_assert_eq!(u(&u(&f, &g), &h), u(&f, &u(&g, &h)));
        prop_assert_eq!(i(&i(&f, &g), &h), i(&f, &i(&g, &h)));
        prop_assert_eq!(u(&f, &f), f.clone());
        prop_assert_eq!(i(&f, &f), f.clone());
        prop_assert_eq!(u(&f, &i(&f, &g)), f.clone());
        prop_assert_eq!(i(&f, &u(&f, &g)), f.clone());
        prop_assert!(i(&f, &g).subset_of(&f));
        prop_assert!(f.subset_of(&u(&f, &g)));
    }

    #[test]
    fn results_stay_admissible(f in s_member(), g in s_member()) {
        prop_assert!(f.e_union(&g).unwrap().in_s());
        prop_assert!(f.e_intersection(&g).unwrap().in_s());
        prop_assert!(f.e_complement().unwrap().in_s());
    }

    #[test]
    fn complement_is_disjoint_and_antitone(f in s_member(), g in s_member()) {
        let c = f.e_complement().unwrap();
        prop_assert!(f.e_intersection(&c).unwrap().is_null());
        if f.subset_of(&g) {
            prop_assert!(g.e_complement().unwrap().subset_of(&c));
        }
        // a complement in S(X̃) comes back to F
        if c.is_full_support() {
            prop_assert_eq!(c.e_complement().unwrap(), f.clone());
        }
    }

    #[test]
    fn pointwise_operations_are_slicewise(f in any_set(), g in any_set()) {
        let j = f.pw_union(&g).unwrap();
        let m = f.pw_intersection(&g).unwrap();
        for a in 0..PARAMS {
            prop_assert_eq!(j.slice(a), f.slice(a) | g.slice(a));
            prop_assert_eq!(m.slice(a), f.slice(a) & g.slice(a));
        }
    }

    #[test]
    fn closure_and_interior(tau in topology(), f in s_member()) {
        let cl = tau.closure(&f).unwrap();
        let int = tau.interior(&f).unwrap();
        prop_assert!(f.subset_of(&cl));
        prop_assert!(int.subset_of(&f));
        prop_assert!(tau.closed(&cl));
        prop_assert!(tau.contains(&int));
        prop_assert_eq!(tau.closure(&cl).unwrap(), cl.clone());
        prop_assert_eq!(tau.interior(&int).unwrap(), int.clone());
        for x in f.elements() {
            let is_interior = tau.is_interior_element(&f, &x).unwrap().is_some();
            prop_assert_eq!(is_interior, int.holds(&x));
        }
    }

    #[test]
    fn generated_topologies_verify(tau in topology()) {
        let report = softtopo::topology::verify_topology(tau.universe(), tau.members()).unwrap();
        prop_assert!(report.valid);
    }

    #[test]
    fn dropping_a_member_is_detected(tau in topology(), pick in any::<prop::sample::Index>()) {
        let members = tau.members();
        let inner: Vec<usize> = (0..members.len()).filter(|&i| !members[i].is_null() && !members[i].is_absolute()).collect();
        prop_assume!(!inner.is_empty());
        let drop = inner[pick.index(inner.len())];
        let rest: Vec<SoftSet> = members.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, m)| m.clone()).collect();
        let report = softtopo::topology::verify_topology(tau.universe(), &rest).unwrap();
        let closed = rest.iter().all(|a| rest.iter().all(|b| {
            rest.contains(&a.e_union(b).unwrap()) && rest.contains(&a.e_intersection(b).unwrap())
        }));
        prop_assert_eq!(report.valid, closed);
        prop_assert_eq!(report.violations.is_empty(), closed);
    }
}
