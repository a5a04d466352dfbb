//! Trial instances: spaces given by a subbase, named sets and elements, and
//! an optional soft function into a second space.

use std::collections::BTreeMap;
use std::sync::Arc;

use softtopo::io::{self, Bundle, SpaceDocument, ABSOLUTE_NAME, NULL_NAME};
use softtopo::{SoftElement, SoftFunction, SoftSet, SoftTopology, Universe};

use crate::FuzzError;

/// Topologies regenerated during evaluation are capped here; generation
/// itself enforces the configured cap.
pub const EVAL_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    pub universe: Arc<Universe>,
    pub subbase: Vec<SoftSet>,
}

impl Space {
    pub fn topology(&self) -> Option<SoftTopology> {
        SoftTopology::generate(&SoftSet::absolute(&self.universe), &self.subbase, EVAL_CAP)
            .ok()
            .flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub domain: Space,
    pub sets: BTreeMap<String, SoftSet>,
    pub elements: BTreeMap<String, SoftElement>,
    pub codomain: Option<Space>,
    pub function: Option<SoftFunction>,
}

/// One reduction applied while shrinking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    RemoveGenerator { codomain: bool, index: usize },
    RemovePoint { codomain: bool, index: usize },
    RemoveParam { index: usize },
}

impl Instance {
    pub fn new(domain: Space) -> Self {
        Self { domain, sets: BTreeMap::new(), elements: BTreeMap::new(), codomain: None, function: None }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.domain.universe
    }

    /// Generators plus points plus parameters, over both spaces.
    pub fn size(&self) -> usize {
        let space = |s: &Space| s.subbase.len() + s.universe.point_count();
        space(&self.domain) + self.codomain.as_ref().map_or(0, space) + self.universe().param_count()
    }

    /// Every single-step reduction, in shrink order.
    pub fn reductions(&self) -> Vec<Reduction> {
        let mut out = Vec::new();
        for (codomain, space) in self.spaces() {
            out.extend((0..space.subbase.len()).map(|index| Reduction::RemoveGenerator { codomain, index }));
        }
        for (codomain, space) in self.spaces() {
            if space.universe.point_count() > 1 {
                out.extend((0..space.universe.point_count()).map(|index| Reduction::RemovePoint { codomain, index }));
            }
        }
        if self.universe().param_count() > 1 {
            out.extend((0..self.universe().param_count()).map(|index| Reduction::RemoveParam { index }));
        }
        out
    }

    fn spaces(&self) -> impl Iterator<Item = (bool, &Space)> {
        std::iter::once((false, &self.domain)).chain(self.codomain.iter().map(|c| (true, c)))
    }

    pub fn describe(&self, r: &Reduction) -> (String, String) {
        let side = |c: bool| if c { "codomain" } else { "domain" };
        match *r {
            Reduction::RemoveGenerator { codomain, index } => {
                let space = if codomain { self.codomain.as_ref().unwrap() } else { &self.domain };
                ("remove-generator".into(), format!("{} {}", side(codomain), space.subbase[index]))
            }
            Reduction::RemovePoint { codomain, index } => {
                let space = if codomain { self.codomain.as_ref().unwrap() } else { &self.domain };
                ("remove-point".into(), format!("{} {}", side(codomain), space.universe.points()[index]))
            }
            Reduction::RemoveParam { index } => ("remove-param".into(), self.universe().params()[index].clone()),
        }
    }

    /// Applies a reduction; `None` when the result is not a well-formed
    /// instance (an element or function value would lose its point).
    pub fn reduce(&self, r: &Reduction) -> Option<Instance> {
        match *r {
            Reduction::RemoveGenerator { codomain: false, index } => {
                let mut out = self.clone();
                out.domain.subbase.remove(index);
                Some(out)
            }
            Reduction::RemoveGenerator { codomain: true, index } => {
                let mut out = self.clone();
                out.codomain.as_mut()?.subbase.remove(index);
                Some(out)
            }
            Reduction::RemovePoint { codomain: false, index } => self.remove_domain_point(index),
            Reduction::RemovePoint { codomain: true, index } => self.remove_codomain_point(index),
            Reduction::RemoveParam { index } => self.remove_param(index),
        }
    }

    fn remove_domain_point(&self, index: usize) -> Option<Instance> {
        let u = without_point(&self.domain.universe, index)?;
        let domain = project_space(&self.domain, &u, |m| drop_bit(m, index))?;
        let sets = project_sets(&self.sets, &u, |m| drop_bit(m, index))?;
        let mut elements = BTreeMap::new();
        for (name, x) in &self.elements {
            let coords: Option<Vec<usize>> = x.coords().map(|c| shift_index(c, index)).collect();
            elements.insert(name.clone(), SoftElement::from_indices(&u, &coords?).ok()?);
        }
        let function = match (&self.function, &self.codomain) {
            (Some(f), Some(c)) => {
                let maps = (0..u.param_count())
                    .map(|a| (0..self.universe().point_count()).filter(|&i| i != index).map(|i| f.map_at(a, i)).collect())
                    .collect();
                Some(SoftFunction::from_indices(&u, &c.universe, maps).ok()?)
            }
            _ => None,
        };
        Some(Instance { domain, sets, elements, codomain: self.codomain.clone(), function })
    }

    fn remove_codomain_point(&self, index: usize) -> Option<Instance> {
        let cod = self.codomain.as_ref()?;
        let cu = without_point(&cod.universe, index)?;
        let codomain = project_space(cod, &cu, |m| drop_bit(m, index))?;
        let function = match &self.function {
            Some(f) => {
                let maps = (0..cu.param_count())
                    .map(|a| {
                        (0..self.universe().point_count())
                            .map(|i| shift_index(f.map_at(a, i), index))
                            .collect::<Option<Vec<_>>>()
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(SoftFunction::from_indices(self.universe(), &cu, maps).ok()?)
            }
            None => None,
        };
        Some(Instance { codomain: Some(codomain), function, ..self.clone() })
    }

    fn remove_param(&self, index: usize) -> Option<Instance> {
        let drop_param = |u: &Universe| {
            let params = u.params().iter().enumerate().filter(|&(a, _)| a != index).map(|(_, p)| p.clone());
            Universe::new(u.points().to_vec(), params).ok()
        };
        let u = drop_param(self.universe())?;
        let project = |s: &SoftSet, u: &Arc<Universe>| {
            let masks = s.slices().iter().enumerate().filter(|&(a, _)| a != index).map(|(_, &m)| m).collect();
            SoftSet::from_masks(u, masks).ok()
        };
        let domain = Space {
            subbase: self.domain.subbase.iter().map(|s| project(s, &u)).collect::<Option<_>>()?,
            universe: u.clone(),
        };
        let sets = self.sets.iter().map(|(n, s)| Some((n.clone(), project(s, &u)?))).collect::<Option<_>>()?;
        let elements = self
            .elements
            .iter()
            .map(|(n, x)| {
                let coords: Vec<usize> = x.coords().enumerate().filter(|&(a, _)| a != index).map(|(_, c)| c).collect();
                Some((n.clone(), SoftElement::from_indices(&u, &coords).ok()?))
            })
            .collect::<Option<_>>()?;
        let codomain = match &self.codomain {
            Some(c) => {
                let cu = drop_param(&c.universe)?;
                Some(Space { subbase: c.subbase.iter().map(|s| project(s, &cu)).collect::<Option<_>>()?, universe: cu })
            }
            None => None,
        };
        let function = match (&self.function, &codomain) {
            (Some(f), Some(c)) => {
                let maps = (0..self.universe().param_count())
                    .filter(|&a| a != index)
                    .map(|a| (0..u.point_count()).map(|i| f.map_at(a, i)).collect())
                    .collect();
                Some(SoftFunction::from_indices(&u, &c.universe, maps).ok()?)
            }
            _ => None,
        };
        Some(Instance { domain, sets, elements, codomain, function })
    }

    /// Domain document (named sets, generators `gen*`, topology members
    /// `open*`, elements, function `f`) and codomain document.
    pub fn to_documents(&self) -> (SpaceDocument, Option<SpaceDocument>) {
        let mut domain = space_bundle(&self.domain, &self.sets);
        domain.elements = self.elements.clone();
        if let Some(f) = &self.function {
            domain.functions.insert("f".into(), io::function_doc(f));
        }
        let codomain = self.codomain.as_ref().map(|c| space_bundle(c, &BTreeMap::new()).to_document());
        (domain.to_document(), codomain)
    }

    pub fn from_documents(domain: &SpaceDocument, codomain: Option<&SpaceDocument>) -> Result<Instance, FuzzError> {
        let (space, sets, bundle) = read_space(domain)?;
        let codomain = codomain.map(read_space).transpose()?;
        let function = match (&codomain, bundle.functions.contains_key("f")) {
            (Some((c, _, _)), true) => Some(bundle.function("f", &c.universe).map_err(|e| FuzzError::Document(e.to_string()))?),
            (None, false) => None,
            _ => return Err(FuzzError::Document("function and codomain must appear together".into())),
        };
        Ok(Instance {
            domain: space,
            sets,
            elements: bundle.elements.clone(),
            codomain: codomain.map(|(c, _, _)| c),
            function,
        })
    }
}

fn without_point(u: &Universe, index: usize) -> Option<Arc<Universe>> {
    let points = u.points().iter().enumerate().filter(|&(i, _)| i != index).map(|(_, p)| p.clone());
    Universe::new(points, u.params().to_vec()).ok()
}

fn drop_bit(mask: u64, index: usize) -> u64 {
    let low = mask & ((1u64 << index) - 1);
    low | mask.checked_shr(index as u32 + 1).unwrap_or(0) << index
}

fn shift_index(c: usize, removed: usize) -> Option<usize> {
    match c.cmp(&removed) {
        std::cmp::Ordering::Less => Some(c),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(c - 1),
    }
}

fn project_set(s: &SoftSet, u: &Arc<Universe>, f: impl Fn(u64) -> u64) -> Option<SoftSet> {
    SoftSet::from_masks(u, s.slices().iter().map(|&m| f(m)).collect()).ok()
}

/// Generators that lose a slice are dropped.
fn project_space(space: &Space, u: &Arc<Universe>, f: impl Fn(u64) -> u64 + Copy) -> Option<Space> {
    let mut subbase = Vec::new();
    for g in &space.subbase {
        let p = project_set(g, u, f)?;
        if p.in_s() && !p.is_null() {
            subbase.push(p);
        }
    }
    Some(Space { universe: u.clone(), subbase })
}

fn project_sets(
    sets: &BTreeMap<String, SoftSet>,
    u: &Arc<Universe>,
    f: impl Fn(u64) -> u64 + Copy,
) -> Option<BTreeMap<String, SoftSet>> {
    sets.iter().map(|(n, s)| Some((n.clone(), project_set(s, u, f)?))).collect()
}

fn space_bundle(space: &Space, named: &BTreeMap<String, SoftSet>) -> Bundle {
    let mut sets = named.clone();
    let mut subbase = Vec::new();
    for (i, g) in space.subbase.iter().enumerate() {
        let name = format!("gen{}", i + 1);
        sets.insert(name.clone(), g.clone());
        subbase.push(name);
    }
    let topology = space.topology().map(|tau| {
        let mut opens = 0;
        tau.members()
            .iter()
            .map(|m| {
                if m.is_null() {
                    NULL_NAME.to_string()
                } else if m.is_absolute() {
                    ABSOLUTE_NAME.to_string()
                } else if let Some(i) = space.subbase.iter().position(|g| g == m) {
                    subbase[i].clone()
                } else {
                    opens += 1;
                    let name = format!("open{opens}");
                    sets.insert(name.clone(), m.clone());
                    name
                }
            })
            .collect()
    });
    Bundle {
        universe: space.universe.clone(),
        carrier: None,
        sets,
        topology,
        subbase: Some(subbase),
        elements: BTreeMap::new(),
        functions: BTreeMap::new(),
    }
}

type ReadSpace = (Space, BTreeMap<String, SoftSet>, Bundle);

fn read_space(doc: &SpaceDocument) -> Result<ReadSpace, FuzzError> {
    let bundle = io::resolve(doc, "").map_err(|e| FuzzError::Document(e.to_string()))?;
    let doc_err = |e: io::BundleError| FuzzError::Document(e.to_string());
    let gen_names = bundle.subbase.clone().unwrap_or_default();
    let subbase = gen_names.iter().map(|n| bundle.set(n)).collect::<Result<Vec<_>, _>>().map_err(doc_err)?;
    let space = Space { universe: bundle.universe.clone(), subbase };
    if let Some(listed) = &bundle.topology {
        let generated = space.topology().ok_or_else(|| FuzzError::Document("subbase closure too large".into()))?;
        let members = bundle.topology_members().map_err(doc_err)?;
        if members != generated.members() {
            return Err(FuzzError::Document(format!(
                "listed topology ({} members) differs from the subbase closure",
                listed.len()
            )));
        }
    }
    let structural: Vec<&String> = gen_names.iter().chain(bundle.topology.iter().flatten()).collect();
    let sets = bundle
        .sets
        .iter()
        .filter(|(n, _)| !structural.contains(n))
        .map(|(n, s)| (n.clone(), s.clone()))
        .collect();
    Ok((space, sets, bundle))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Instance {
        let u = Universe::indexed(3, 2).unwrap();
        let g = SoftSet::from_masks(&u, vec![0b001, 0b110]).unwrap();
        let h = SoftSet::from_masks(&u, vec![0b110, 0b001]).unwrap();
        let mut inst = Instance::new(Space { universe: u.clone(), subbase: vec![g, h] });
        inst.sets.insert("F".into(), SoftSet::from_masks(&u, vec![0b011, 0b100]).unwrap());
        inst.elements.insert("x".into(), SoftElement::from_indices(&u, &[0, 2]).unwrap());
        let cu = Universe::new(["q0", "q1"], ["e0", "e1"]).unwrap();
        inst.codomain = Some(Space { universe: cu.clone(), subbase: vec![SoftSet::from_masks(&cu, vec![1, 2]).unwrap()] });
        inst.function = Some(SoftFunction::from_indices(&u, &cu, vec![vec![0, 1, 1], vec![1, 1, 0]]).unwrap());
        inst
    }

    #[test]
    fn documents_round_trip() {
        let inst = sample();
        let (d, c) = inst.to_documents();
        let text = io::to_canonical_string(&d);
        let back: SpaceDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(Instance::from_documents(&back, c.as_ref()).unwrap(), inst);
    }

    #[test]
    fn reductions() {
        let inst = sample();
        assert_eq!(inst.size(), 2 + 3 + 1 + 2 + 2);
        let r = inst.reductions();
        assert_eq!(r.len(), 3 + 3 + 2 + 2);
        // x sits on p0 and p2
        assert!(inst.reduce(&Reduction::RemovePoint { codomain: false, index: 0 }).is_none());
        let without_p1 = inst.reduce(&Reduction::RemovePoint { codomain: false, index: 1 }).unwrap();
        assert_eq!(without_p1.universe().points(), &["p0".to_string(), "p2".to_string()]);
        assert_eq!(without_p1.sets["F"].slices(), &[0b01, 0b10]);
        assert_eq!(without_p1.domain.subbase.len(), 2);
        // f hits q0 and q1
        assert!(inst.reduce(&Reduction::RemovePoint { codomain: true, index: 0 }).is_none());
        let one_param = inst.reduce(&Reduction::RemoveParam { index: 1 }).unwrap();
        assert_eq!(one_param.universe().param_count(), 1);
        assert_eq!(one_param.function.as_ref().unwrap().map_at(0, 2), 1);
        assert_eq!(one_param.size(), inst.size() - 1);
    }
}
