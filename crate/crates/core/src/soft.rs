//! Universes, soft sets, soft elements and the elementary algebra.
//!
//! A soft set assigns to each parameter a subset ("slice") of the universe's
//! points. Slices are stored as 64-bit membership masks indexed by the
//! universe's canonical point order, so a universe holds at most
//! [`MAX_POINTS`] points.
//!
//! Two families of operations live here:
//!
//! * pointwise operations (`pw_union`, `pw_intersection`, `complement`) act
//!   slice by slice with no side conditions;
//! * elementary operations (`e_union`, `e_intersection`, `e_complement`) are
//!   defined through the soft elements of their arguments. They are only
//!   defined on the admissible family S(X̃) (the null soft set plus every soft
//!   set whose slices are all nonempty), and the intersection and complement
//!   collapse to the null soft set whenever some resulting slice is empty.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported number of points in a universe.
pub const MAX_POINTS: usize = 64;

/// A finite universe of points together with a finite parameter list.
///
/// The declaration order of both lists is the canonical order used for
/// iteration, enumeration and serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    points: Vec<String>,
    params: Vec<String>,
}

impl Universe {
    pub fn new<P, Q>(points: P, params: Q) -> Result<Arc<Self>>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        Q: IntoIterator,
        Q::Item: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::InvalidUniverse("no points".into()));
        }
        if params.is_empty() {
            return Err(Error::InvalidUniverse("no parameters".into()));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::InvalidUniverse(format!(
                "{} points exceed the supported maximum of {MAX_POINTS}",
                points.len()
            )));
        }
        for (kind, list) in [("point", &points), ("parameter", &params)] {
            let mut seen = BTreeSet::new();
            for name in list {
                if !seen.insert(name.as_str()) {
                    return Err(Error::InvalidUniverse(format!("duplicate {kind} `{name}`")));
                }
            }
        }
        Ok(Arc::new(Self { points, params }))
    }

    /// Universe with points `p0..p{n}` and parameters `e0..e{m}`.
    pub fn indexed(points: usize, params: usize) -> Result<Arc<Self>> {
        Self::new(
            (0..points).map(|i| format!("p{i}")),
            (0..params).map(|i| format!("e{i}")),
        )
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// Mask with one bit per point.
    pub fn full_mask(&self) -> u64 {
        low_bits(self.points.len())
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn param_index(&self, name: &str) -> Result<usize> {
        self.params
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownParam(name.to_string()))
    }

    /// Point mask of a set of point names.
    pub fn mask_of<S: AsRef<str>>(&self, names: &[S]) -> Result<u64> {
        names.iter().try_fold(0u64, |acc, n| {
            Ok(acc | 1u64 << self.point_index(n.as_ref())?)
        })
    }

    /// Point names of a mask, in canonical order.
    pub fn names_of(&self, mask: u64) -> Vec<&str> {
        bits(mask).map(|i| self.points[i].as_str()).collect()
    }

    /// Number of soft elements of the absolute soft set, saturating.
    pub fn element_count(&self) -> u128 {
        (0..self.params.len()).fold(1u128, |acc, _| acc.saturating_mul(self.points.len() as u128))
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

fn same_universe(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A soft set: one slice of points per parameter.
#[derive(Clone)]
pub struct SoftSet {
    universe: Arc<Universe>,
    slices: Box<[u64]>,
}

impl PartialEq for SoftSet {
    fn eq(&self, other: &Self) -> bool {
        self.slices == other.slices && same_universe(&self.universe, &other.universe)
    }
}

impl Eq for SoftSet {}

impl Hash for SoftSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.slices.hash(state);
    }
}

impl fmt::Debug for SoftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SoftSet{self}")
    }
}

impl fmt::Display for SoftSet {
    /// `({a,c},{b})`, one brace group per parameter.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, &s) in self.slices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{{{}}}", self.universe.names_of(s).join(","))?;
        }
        f.write_str(")")
    }
}

impl SoftSet {
    /// The null soft set Φ̃: every slice empty.
    pub fn null(universe: &Arc<Universe>) -> Self {
        Self::constant_mask(universe, 0)
    }

    /// The absolute soft set X̃: every slice equals the whole universe.
    pub fn absolute(universe: &Arc<Universe>) -> Self {
        Self::constant_mask(universe, universe.full_mask())
    }

    /// The constant soft set (Ỹ,A) whose every slice is `points`.
    pub fn constant<S: AsRef<str>>(universe: &Arc<Universe>, points: &[S]) -> Result<Self> {
        Ok(Self::constant_mask(universe, universe.mask_of(points)?))
    }

    /// The constant soft set whose every slice is `mask`.
    pub fn constant_mask(universe: &Arc<Universe>, mask: u64) -> Self {
        Self {
            universe: universe.clone(),
            slices: vec![mask & universe.full_mask(); universe.param_count()].into(),
        }
    }

    /// Builds a soft set from one list of point names per parameter, in
    /// parameter order.
    pub fn from_names<S: AsRef<str>>(universe: &Arc<Universe>, slices: &[&[S]]) -> Result<Self> {
        if slices.len() != universe.param_count() {
            return Err(Error::Malformed(format!(
                "expected {} slices, got {}",
                universe.param_count(),
                slices.len()
            )));
        }
        let masks = slices
            .iter()
            .map(|s| universe.mask_of(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { universe: universe.clone(), slices: masks.into() })
    }

    pub fn from_masks(universe: &Arc<Universe>, masks: Vec<u64>) -> Result<Self> {
        if masks.len() != universe.param_count() {
            return Err(Error::Malformed(format!(
                "expected {} slices, got {}",
                universe.param_count(),
                masks.len()
            )));
        }
        if let Some(m) = masks.iter().find(|&&m| m & !universe.full_mask() != 0) {
            return Err(Error::Malformed(format!("slice mask {m:#x} names points outside the universe")));
        }
        Ok(Self { universe: universe.clone(), slices: masks.into() })
    }

    pub(crate) fn from_masks_unchecked(universe: &Arc<Universe>, masks: Box<[u64]>) -> Self {
        debug_assert_eq!(masks.len(), universe.param_count());
        Self { universe: universe.clone(), slices: masks }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn slices(&self) -> &[u64] {
        &self.slices
    }

    pub fn slice(&self, param: usize) -> u64 {
        self.slices[param]
    }

    /// Point names of one slice, in canonical order.
    pub fn slice_names(&self, param: usize) -> Vec<&str> {
        self.universe.names_of(self.slices[param])
    }

    pub fn is_null(&self) -> bool {
        self.slices.iter().all(|&s| s == 0)
    }

    pub fn is_absolute(&self) -> bool {
        let full = self.universe.full_mask();
        self.slices.iter().all(|&s| s == full)
    }

    /// True when every slice is nonempty.
    pub fn is_full_support(&self) -> bool {
        self.slices.iter().all(|&s| s != 0)
    }

    /// Membership in S(X̃): the null soft set, or every slice nonempty.
    pub fn in_s(&self) -> bool {
        self.is_null() || self.is_full_support()
    }

    pub(crate) fn check_same(&self, other: &SoftSet) -> Result<()> {
        if same_universe(&self.universe, &other.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub(crate) fn check_element(&self, x: &SoftElement) -> Result<()> {
        if same_universe(&self.universe, &x.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    fn require_s(&self, op: &str) -> Result<()> {
        if self.in_s() {
            Ok(())
        } else {
            Err(Error::pre(format!("{op} is only defined on S(X̃); {self} has a mixed empty/nonempty slice profile")))
        }
    }

    pub fn is_subset(&self, other: &SoftSet) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.subset_of(other))
    }

    /// Unchecked `is_subset`: both sets must share a universe.
    pub fn subset_of(&self, other: &SoftSet) -> bool {
        self.slices.iter().zip(other.slices.iter()).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &SoftSet, op: impl Fn(u64, u64) -> u64) -> SoftSet {
        let slices = self
            .slices
            .iter()
            .zip(other.slices.iter())
            .map(|(&a, &b)| op(a, b))
            .collect();
        SoftSet { universe: self.universe.clone(), slices }
    }

    fn map_slices(&self, op: impl Fn(u64) -> u64) -> SoftSet {
        SoftSet {
            universe: self.universe.clone(),
            slices: self.slices.iter().map(|&s| op(s)).collect(),
        }
    }

    pub fn pw_union(&self, other: &SoftSet) -> Result<SoftSet> {
        self.check_same(other)?;
        Ok(self.join(other))
    }

    pub fn pw_intersection(&self, other: &SoftSet) -> Result<SoftSet> {
        self.check_same(other)?;
        Ok(self.meet(other))
    }

    /// Unchecked slice-wise union.
    pub fn join(&self, other: &SoftSet) -> SoftSet {
        self.zip_with(other, |a, b| a | b)
    }

    /// Unchecked slice-wise intersection.
    pub fn meet(&self, other: &SoftSet) -> SoftSet {
        self.zip_with(other, |a, b| a & b)
    }

    /// Slice-wise complement relative to the universe.
    pub fn complement(&self) -> SoftSet {
        let full = self.universe.full_mask();
        self.map_slices(|s| !s & full)
    }

    /// Slice-wise complement relative to the point mask `within`.
    pub fn complement_within(&self, within: &SoftSet) -> SoftSet {
        within.zip_with(self, |w, s| w & !s)
    }

    /// Returns the null soft set if any slice is empty, otherwise `self`.
    pub fn collapse(self) -> SoftSet {
        if self.is_full_support() {
            self
        } else {
            SoftSet::null(&self.universe)
        }
    }

    /// Soft-element membership: every coordinate lies in its slice.
    pub fn member(&self, x: &SoftElement) -> Result<bool> {
        self.check_element(x)?;
        Ok(self.holds(x))
    }

    /// Unchecked `member`.
    pub fn holds(&self, x: &SoftElement) -> bool {
        self.slices
            .iter()
            .zip(x.coords.iter())
            .all(|(&s, &c)| s >> c & 1 == 1)
    }

    /// |SE(F)|: the product of the slice sizes, saturating at `u128::MAX`.
    pub fn se_count(&self) -> u128 {
        self.slices
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.count_ones() as u128))
    }

    /// Lazily enumerates SE(F) lexicographically: the first parameter is the
    /// most significant coordinate and points follow canonical order.
    pub fn elements(&self) -> Elements {
        Elements::new(self)
    }

    /// Elementary union F ⋓ G. On S(X̃) this coincides with the slice-wise
    /// union.
    pub fn e_union(&self, other: &SoftSet) -> Result<SoftSet> {
        self.check_same(other)?;
        self.require_s("elementary union")?;
        other.require_s("elementary union")?;
        Ok(self.join(other))
    }

    /// Elementary intersection F ⋒ G: the slice-wise intersection when all of
    /// its slices are nonempty, otherwise Φ̃.
    pub fn e_intersection(&self, other: &SoftSet) -> Result<SoftSet> {
        self.check_same(other)?;
        self.require_s("elementary intersection")?;
        other.require_s("elementary intersection")?;
        Ok(self.e_meet(other))
    }

    /// Slice-wise intersection collapsed to Φ̃, without the S(X̃) check.
    pub fn e_meet(&self, other: &SoftSet) -> SoftSet {
        self.meet(other).collapse()
    }

    /// Elementary complement F^ℂ: the slice-wise complement when all of its
    /// slices are nonempty, otherwise Φ̃.
    pub fn e_complement(&self) -> Result<SoftSet> {
        self.require_s("elementary complement")?;
        Ok(self.complement().collapse())
    }

    fn require_within(&self, y: u64) -> Result<()> {
        if self.slices.iter().any(|&s| s & !y != 0) {
            Err(Error::pre(format!(
                "{self} is not contained in the constant soft set over {{{}}}",
                self.universe.names_of(y).join(",")
            )))
        } else {
            Ok(())
        }
    }

    /// (Z)_Y^C: slice-wise complement relative to the point mask `y`.
    pub fn rel_complement(&self, y: u64) -> Result<SoftSet> {
        self.require_within(y)?;
        Ok(self.map_slices(|s| y & !s))
    }

    /// (Z)_Y^ℂ: the relative complement, collapsed to Φ̃ when some slice is
    /// empty.
    pub fn e_rel_complement(&self, y: u64) -> Result<SoftSet> {
        Ok(self.rel_complement(y)?.collapse())
    }
}

/// Elementary union of a family; the empty family yields Φ̃.
pub fn e_union_family<'a, I>(universe: &Arc<Universe>, family: I) -> Result<SoftSet>
where
    I: IntoIterator<Item = &'a SoftSet>,
{
    family
        .into_iter()
        .try_fold(SoftSet::null(universe), |acc, f| acc.e_union(f))
}

/// A soft element: one point per parameter.
#[derive(Clone)]
pub struct SoftElement {
    universe: Arc<Universe>,
    coords: Box<[u8]>,
}

impl PartialEq for SoftElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_universe(&self.universe, &other.universe)
    }
}

impl Eq for SoftElement {}

impl Hash for SoftElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for SoftElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SoftElement {
    /// Canonical enumeration order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for SoftElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SoftElement{self}")
    }
}

impl fmt::Display for SoftElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .coords
            .iter()
            .map(|&c| self.universe.points()[c as usize].as_str())
            .collect();
        write!(f, "({})", names.join(","))
    }
}

impl SoftElement {
    /// Builds a soft element from one point name per parameter.
    pub fn from_names<S: AsRef<str>>(universe: &Arc<Universe>, coords: &[S]) -> Result<Self> {
        if coords.len() != universe.param_count() {
            return Err(Error::Malformed(format!(
                "expected {} coordinates, got {}",
                universe.param_count(),
                coords.len()
            )));
        }
        let coords = coords
            .iter()
            .map(|c| universe.point_index(c.as_ref()).map(|i| i as u8))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { universe: universe.clone(), coords: coords.into() })
    }

    pub fn from_indices(universe: &Arc<Universe>, coords: &[usize]) -> Result<Self> {
        if coords.len() != universe.param_count() {
            return Err(Error::Malformed(format!(
                "expected {} coordinates, got {}",
                universe.param_count(),
                coords.len()
            )));
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= universe.point_count()) {
            return Err(Error::Malformed(format!("point index {c} out of range")));
        }
        Ok(Self {
            universe: universe.clone(),
            coords: coords.iter().map(|&c| c as u8).collect(),
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    /// Point index of the coordinate at `param`.
    pub fn coord(&self, param: usize) -> usize {
        self.coords[param] as usize
    }

    pub fn coords(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.iter().map(|&c| c as usize)
    }

    pub fn coord_names(&self) -> Vec<&str> {
        self.coords
            .iter()
            .map(|&c| self.universe.points()[c as usize].as_str())
            .collect()
    }

    /// The soft set SS({x}) whose slices are the singletons of the
    /// coordinates.
    pub fn singleton(&self) -> SoftSet {
        SoftSet {
            universe: self.universe.clone(),
            slices: self.coords.iter().map(|&c| 1u64 << c).collect(),
        }
    }

    /// True when the two elements differ at every parameter.
    pub fn differs_everywhere(&self, other: &SoftElement) -> bool {
        self.coords.iter().zip(other.coords.iter()).all(|(a, b)| a != b)
    }
}

/// Lazy lexicographic enumeration of SE(F).
pub struct Elements {
    universe: Arc<Universe>,
    choices: Vec<Vec<u8>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Elements {
    fn new(set: &SoftSet) -> Self {
        let choices: Vec<Vec<u8>> = set
            .slices
            .iter()
            .map(|&s| bits(s).map(|i| i as u8).collect())
            .collect();
        let done = choices.iter().any(Vec::is_empty);
        Self {
            universe: set.universe.clone(),
            cursor: vec![0; choices.len()],
            choices,
            done,
        }
    }
}

impl Iterator for Elements {
    type Item = SoftElement;

    fn next(&mut self) -> Option<SoftElement> {
        if self.done {
            return None;
        }
        let coords = self
            .cursor
            .iter()
            .zip(&self.choices)
            .map(|(&i, c)| c[i])
            .collect();
        // odometer: the last parameter moves fastest
        let mut k = self.cursor.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.cursor[k] += 1;
            if self.cursor[k] < self.choices[k].len() {
                break;
            }
            self.cursor[k] = 0;
        }
        Some(SoftElement { universe: self.universe.clone(), coords })
    }
}

/// A duplicate-free collection of soft elements over one universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftElementBag {
    universe: Arc<Universe>,
    members: BTreeSet<SoftElement>,
}

impl SoftElementBag {
    pub fn new(universe: &Arc<Universe>) -> Self {
        Self { universe: universe.clone(), members: BTreeSet::new() }
    }

    pub fn from_elements<I>(universe: &Arc<Universe>, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = SoftElement>,
    {
        let mut bag = Self::new(universe);
        for x in elements {
            bag.insert(x)?;
        }
        Ok(bag)
    }

    /// Adds an element; returns false when it was already present.
    pub fn insert(&mut self, x: SoftElement) -> Result<bool> {
        if !same_universe(&self.universe, &x.universe) {
            return Err(Error::UniverseMismatch);
        }
        Ok(self.members.insert(x))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &SoftElement) -> bool {
        self.members.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SoftElement> {
        self.members.iter()
    }

    /// SS(B): slice α collects the α-coordinates of the bag's members.
    pub fn ss(&self) -> SoftSet {
        let mut slices = vec![0u64; self.universe.param_count()];
        for x in &self.members {
            for (s, &c) in slices.iter_mut().zip(x.coords.iter()) {
                *s |= 1u64 << c;
            }
        }
        SoftSet { universe: self.universe.clone(), slices: slices.into() }
    }
}

/// SS(B) of a bag.
pub fn ss(bag: &SoftElementBag) -> SoftSet {
    bag.ss()
}

/// Interns soft sets by their slice masks; used to deduplicate families while
/// preserving first-occurrence order.
pub(crate) fn dedup_sets(sets: impl IntoIterator<Item = SoftSet>) -> Vec<SoftSet> {
    let mut seen: HashMap<Box<[u64]>, ()> = HashMap::new();
    let mut out = Vec::new();
    for s in sets {
        if seen.insert(s.slices.clone(), ()).is_none() {
            out.push(s);
        }
    }
    out
}
