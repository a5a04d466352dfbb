//! Soft functions between universes sharing a parameter list, images,
//! preimages and the two continuity criteria.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::soft::{bits, SoftElement, SoftSet, Universe};
use crate::topology::SoftTopology;

/// One total point map per parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftFunction {
    domain: Arc<Universe>,
    codomain: Arc<Universe>,
    maps: Vec<Vec<u8>>,
}

impl SoftFunction {
    /// `maps[a][i]` is the codomain index of domain point `i` at parameter `a`.
    pub fn from_indices(domain: &Arc<Universe>, codomain: &Arc<Universe>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if domain.params() != codomain.params() {
            return Err(Error::Malformed("domain and codomain parameter lists differ".into()));
        }
        if maps.len() != domain.param_count() {
            return Err(Error::Malformed(format!(
                "expected {} parameter maps, found {}",
                domain.param_count(),
                maps.len()
            )));
        }
        let mut out = Vec::with_capacity(maps.len());
        for (a, m) in maps.into_iter().enumerate() {
            if m.len() != domain.point_count() {
                return Err(Error::Malformed(format!(
                    "map at `{}` is not total on the domain",
                    domain.params()[a]
                )));
            }
            if let Some(&bad) = m.iter().find(|&&j| j >= codomain.point_count()) {
                return Err(Error::UnknownPoint(format!("#{bad}")));
            }
            out.push(m.into_iter().map(|j| j as u8).collect());
        }
        Ok(Self { domain: domain.clone(), codomain: codomain.clone(), maps: out })
    }

    /// Builds from name maps keyed by parameter then domain point.
    pub fn from_names(
        domain: &Arc<Universe>,
        codomain: &Arc<Universe>,
        maps: &BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<Self> {
        for name in maps.keys() {
            domain.param_index(name)?;
        }
        let mut indices = Vec::with_capacity(domain.param_count());
        for param in domain.params() {
            let m = maps
                .get(param)
                .ok_or_else(|| Error::Malformed(format!("no map for parameter `{param}`")))?;
            for name in m.keys() {
                domain.point_index(name)?;
            }
            let row = domain
                .points()
                .iter()
                .map(|p| {
                    let target = m
                        .get(p)
                        .ok_or_else(|| Error::Malformed(format!("map at `{param}` has no image for `{p}`")))?;
                    codomain.point_index(target)
                })
                .collect::<Result<Vec<_>>>()?;
            indices.push(row);
        }
        Self::from_indices(domain, codomain, indices)
    }

    pub fn identity(universe: &Arc<Universe>) -> Self {
        let row: Vec<u8> = (0..universe.point_count() as u8).collect();
        Self { domain: universe.clone(), codomain: universe.clone(), maps: vec![row; universe.param_count()] }
    }

    /// Every f_α maps everything to codomain point `target`.
    pub fn constant(domain: &Arc<Universe>, codomain: &Arc<Universe>, target: usize) -> Result<Self> {
        let maps = vec![vec![target; domain.point_count()]; domain.param_count()];
        Self::from_indices(domain, codomain, maps)
    }

    pub fn domain(&self) -> &Arc<Universe> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Universe> {
        &self.codomain
    }

    pub fn map_at(&self, param: usize, point: usize) -> usize {
        self.maps[param][point] as usize
    }

    /// Name maps keyed by parameter then domain point.
    pub fn to_names(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        self.domain
            .params()
            .iter()
            .zip(&self.maps)
            .map(|(param, row)| {
                let m = self
                    .domain
                    .points()
                    .iter()
                    .zip(row)
                    .map(|(p, &j)| (p.clone(), self.codomain.points()[j as usize].clone()))
                    .collect();
                (param.clone(), m)
            })
            .collect()
    }

    fn check_domain(&self, universe: &Arc<Universe>) -> Result<()> {
        if **universe == *self.domain {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    fn check_codomain(&self, universe: &Arc<Universe>) -> Result<()> {
        if **universe == *self.codomain {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn apply(&self, x: &SoftElement) -> Result<SoftElement> {
        self.check_domain(x.universe())?;
        let coords: Vec<usize> = x.coords().enumerate().map(|(a, c)| self.map_at(a, c)).collect();
        SoftElement::from_indices(&self.codomain, &coords)
    }

    /// Slice-wise forward image; Φ̃ when F has an empty slice, since F then
    /// has no soft elements.
    pub fn image(&self, f: &SoftSet) -> Result<SoftSet> {
        self.check_domain(f.universe())?;
        Ok(self.image_of(f))
    }

    pub(crate) fn image_of(&self, f: &SoftSet) -> SoftSet {
        let masks = f
            .slices()
            .iter()
            .enumerate()
            .map(|(a, &s)| bits(s).fold(0u64, |m, i| m | 1 << self.map_at(a, i)))
            .collect();
        SoftSet::from_masks_unchecked(&self.codomain, masks).collapse()
    }

    /// Slice-wise preimage; slices may come out empty.
    pub fn preimage(&self, g: &SoftSet) -> Result<SoftSet> {
        self.check_codomain(g.universe())?;
        Ok(self.preimage_of(g))
    }

    pub(crate) fn preimage_of(&self, g: &SoftSet) -> SoftSet {
        let masks = g
            .slices()
            .iter()
            .enumerate()
            .map(|(a, &s)| {
                (0..self.domain.point_count())
                    .filter(|&i| s >> self.map_at(a, i) & 1 == 1)
                    .fold(0u64, |m, i| m | 1 << i)
            })
            .collect();
        SoftSet::from_masks_unchecked(&self.domain, masks)
    }

    fn check_spaces(&self, tau: &SoftTopology, sigma: &SoftTopology) -> Result<()> {
        self.check_domain(tau.universe())?;
        self.check_codomain(sigma.universe())
    }

    /// Continuity at `x0`. The minimal open around `x0` is the best
    /// candidate for U since images are monotone.
    pub fn is_continuous_at(&self, tau: &SoftTopology, sigma: &SoftTopology, x0: &SoftElement) -> Result<bool> {
        self.check_spaces(tau, sigma)?;
        tau.check_element(x0)?;
        Ok(self.continuous_at(tau, sigma, x0))
    }

    pub(crate) fn continuous_at(&self, tau: &SoftTopology, sigma: &SoftTopology, x0: &SoftElement) -> bool {
        let y = self.apply(x0).expect("element checked against the domain");
        let image = self.image_of(&tau.minimal_open(x0));
        sigma
            .members()
            .iter()
            .filter(|v| v.holds(&y))
            .all(|v| image.subset_of(v))
    }

    /// First soft element of the domain carrier at which continuity fails.
    pub fn discontinuity(&self, tau: &SoftTopology, sigma: &SoftTopology) -> Result<Option<SoftElement>> {
        self.check_spaces(tau, sigma)?;
        Ok(tau.elements().find(|x| !self.continuous_at(tau, sigma, x)))
    }

    /// Continuity at every soft element of the domain.
    pub fn is_continuous_definitional(&self, tau: &SoftTopology, sigma: &SoftTopology) -> Result<bool> {
        Ok(self.discontinuity(tau, sigma)?.is_none())
    }

    /// Preimage-of-opens criterion with a trace of every failing open.
    pub fn is_continuous_preimage(
        &self,
        tau: &SoftTopology,
        sigma: &SoftTopology,
        mode: PreimageMode,
    ) -> Result<PreimageReport> {
        self.check_spaces(tau, sigma)?;
        let mut failures = Vec::new();
        for v in sigma.members() {
            let pre = self.preimage_of(v);
            let reason = if !pre.in_s() {
                match mode {
                    PreimageMode::Violation => Some(PreimageFailure::NotAdmissible),
                    PreimageMode::Skip => None,
                }
            } else if !tau.contains(&pre) {
                Some(PreimageFailure::NotOpen)
            } else {
                None
            };
            if let Some(reason) = reason {
                failures.push(PreimageTrace { open: v.clone(), preimage: pre, reason });
            }
        }
        Ok(PreimageReport { holds: failures.is_empty(), failures })
    }
}

/// Handling of preimages with a mix of empty and nonempty slices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreimageMode {
    #[default]
    Violation,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreimageFailure {
    NotAdmissible,
    NotOpen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageTrace {
    pub open: SoftSet,
    pub preimage: SoftSet,
    pub reason: PreimageFailure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageReport {
    pub holds: bool,
    pub failures: Vec<PreimageTrace>,
}
