//! Literal soft-element materializations of the elementary operations and of
//! soft-function images.
//!
//! These build the sets SE(·) explicitly and apply SS to the result. They are
//! exponential in the number of parameters and exist to cross-check the
//! slice-wise implementations.

use crate::error::Result;
use crate::maps::SoftFunction;
use crate::soft::{SoftElement, SoftElementBag, SoftSet};

fn coordinate_in(x: &SoftElement, set: &SoftSet, param: usize) -> bool {
    set.slice(param) >> x.coord(param) & 1 == 1
}

fn belongs(x: &SoftElement, set: &SoftSet) -> bool {
    (0..set.universe().param_count()).all(|a| coordinate_in(x, set, a))
}

/// SS(SE(F) ∪ SE(G)).
pub fn e_union(f: &SoftSet, g: &SoftSet) -> Result<SoftSet> {
    f.check_same(g)?;
    let bag = SoftElementBag::from_elements(f.universe(), f.elements().chain(g.elements()))?;
    Ok(bag.ss())
}

/// SS(SE(F) ∩ SE(G)).
pub fn e_intersection(f: &SoftSet, g: &SoftSet) -> Result<SoftSet> {
    f.check_same(g)?;
    let bag = SoftElementBag::from_elements(f.universe(), f.elements().filter(|x| belongs(x, g)))?;
    Ok(bag.ss())
}

/// SS of the soft elements of X̃ whose every coordinate avoids F.
pub fn e_complement(f: &SoftSet) -> Result<SoftSet> {
    let universe = f.universe();
    let params = universe.param_count();
    let outside = SoftSet::absolute(universe)
        .elements()
        .filter(|x| (0..params).all(|a| !coordinate_in(x, f, a)));
    Ok(SoftElementBag::from_elements(universe, outside)?.ss())
}

/// SS{f(SE(F))}.
pub fn image(func: &SoftFunction, f: &SoftSet) -> Result<SoftSet> {
    let mapped = f
        .elements()
        .map(|x| func.apply(&x))
        .collect::<Result<Vec<_>>>()?;
    Ok(SoftElementBag::from_elements(func.codomain(), mapped)?.ss())
}

/// SS{f⁻¹(SE(G))}: the soft elements of the domain mapped into SE(G).
pub fn preimage(func: &SoftFunction, g: &SoftSet) -> Result<SoftSet> {
    let mut bag = SoftElementBag::new(func.domain());
    for x in SoftSet::absolute(func.domain()).elements() {
        if belongs(&func.apply(&x)?, g) {
            bag.insert(x)?;
        }
    }
    Ok(bag.ss())
}
