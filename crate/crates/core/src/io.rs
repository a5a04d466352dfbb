//! JSON space documents: parsing with located diagnostics, resolution into
//! soft values, and canonical serialization.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::Deref;
use std::sync::Arc;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::maps::SoftFunction;
use crate::soft::{SoftElement, SoftSet, Universe};
use crate::topology::SoftTopology;

pub const FORMAT_VERSION: u32 = 1;
pub const NULL_NAME: &str = "PHI";
pub const ABSOLUTE_NAME: &str = "ABS";

/// A JSON object that rejects duplicate keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct NameMap<V>(pub BTreeMap<String, V>);

impl<V> Default for NameMap<V> {
    fn default() -> Self {
        Self(BTreeMap::new())
    }
}

impl<V> Deref for NameMap<V> {
    type Target = BTreeMap<String, V>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl<V> FromIterator<(String, V)> for NameMap<V> {
    fn from_iter<I: IntoIterator<Item = (String, V)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for NameMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V_<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V_<V> {
            type Value = NameMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with unique keys")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut access: M) -> Result<Self::Value, M::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = access.next_entry::<String, V>()? {
                    if out.contains_key(&k) {
                        return Err(serde::de::Error::custom(format!("duplicate name `{k}`")));
                    }
                    out.insert(k, v);
                }
                Ok(NameMap(out))
            }
        }
        d.deserialize_map(V_(PhantomData))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseDoc {
    pub params: Vec<String>,
    pub points: Vec<String>,
}

/// Point maps keyed by parameter, then domain point.
pub type FunctionDoc = NameMap<NameMap<String>>;

/// The on-disk document. Fields are declared in key order so serialization
/// is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    /// Name of the set acting as the absolute member, for subspaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: NameMap<NameMap<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: NameMap<FunctionDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: NameMap<NameMap<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subbase: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<Vec<String>>,
    pub universe: UniverseDoc,
    pub version: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Dotted location inside the document, empty for syntax errors.
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.path.is_empty(), self.line) {
            (true, Some(l)) => write!(f, "line {l}: {}", self.message),
            (true, None) => write!(f, "{}", self.message),
            (false, Some(l)) => write!(f, "{} (line {l}): {}", self.path, self.message),
            (false, None) => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

/// Line of the last path segment, found by scanning for each quoted key in
/// turn.
fn locate(text: &str, segments: &[&str]) -> Option<usize> {
    let mut offset = 0;
    for seg in segments {
        let needle = format!("\"{seg}\"");
        offset += text[offset..].find(&needle)?;
    }
    Some(text[..offset].matches('\n').count() + 1)
}

struct Located<'a> {
    text: &'a str,
}

impl Located<'_> {
    fn err(&self, segments: &[&str], message: impl Into<String>) -> ParseError {
        ParseError {
            path: segments.join("."),
            line: locate(self.text, segments),
            message: message.into(),
        }
    }
}

/// A parsed and resolved document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub universe: Arc<Universe>,
    pub carrier: Option<String>,
    pub sets: BTreeMap<String, SoftSet>,
    pub topology: Option<Vec<String>>,
    pub subbase: Option<Vec<String>>,
    pub elements: BTreeMap<String, SoftElement>,
    pub functions: BTreeMap<String, FunctionDoc>,
}

pub fn parse(text: &str) -> Result<Bundle, ParseError> {
    let doc: SpaceDocument = serde_json::from_str(text).map_err(|e| ParseError {
        path: String::new(),
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    resolve(&doc, text)
}

pub fn resolve(doc: &SpaceDocument, text: &str) -> Result<Bundle, ParseError> {
    let at = Located { text };
    if doc.version != FORMAT_VERSION {
        return Err(at.err(&["version"], format!("unsupported version {}", doc.version)));
    }
    let universe = Universe::new(doc.universe.points.iter(), doc.universe.params.iter())
        .map_err(|e| at.err(&["universe"], e.to_string()))?;

    let mut sets = BTreeMap::new();
    for (name, slices) in doc.sets.iter() {
        if name == NULL_NAME || name == ABSOLUTE_NAME {
            return Err(at.err(&["sets", name], format!("`{name}` is reserved")));
        }
        for param in slices.keys() {
            if universe.param_index(param).is_err() {
                return Err(at.err(&["sets", name, param], format!("unknown parameter `{param}`")));
            }
        }
        let mut masks = Vec::with_capacity(universe.param_count());
        for param in universe.params() {
            let points = slices
                .get(param)
                .ok_or_else(|| at.err(&["sets", name], format!("set `{name}` has no slice for parameter `{param}`")))?;
            let mut mask = 0u64;
            for p in points {
                let i = universe
                    .point_index(p)
                    .map_err(|_| at.err(&["sets", name, param], format!("unknown point `{p}`")))?;
                if mask >> i & 1 == 1 {
                    return Err(at.err(&["sets", name, param], format!("point `{p}` listed twice")));
                }
                mask |= 1 << i;
            }
            masks.push(mask);
        }
        let set = SoftSet::from_masks(&universe, masks).map_err(|e| at.err(&["sets", name], e.to_string()))?;
        sets.insert(name.clone(), set);
    }

    let check_names = |field: &str, names: &Option<Vec<String>>| -> Result<(), ParseError> {
        for n in names.iter().flatten() {
            if n != NULL_NAME && n != ABSOLUTE_NAME && !sets.contains_key(n) {
                return Err(at.err(&[field, n], format!("unknown set `{n}`")));
            }
        }
        Ok(())
    };
    check_names("topology", &doc.topology)?;
    check_names("subbase", &doc.subbase)?;
    if let Some(c) = &doc.carrier {
        if c != ABSOLUTE_NAME && !sets.contains_key(c) {
            return Err(at.err(&["carrier"], format!("unknown set `{c}`")));
        }
    }

    let mut elements = BTreeMap::new();
    for (name, coords) in doc.elements.iter() {
        for param in coords.keys() {
            if universe.param_index(param).is_err() {
                return Err(at.err(&["elements", name, param], format!("unknown parameter `{param}`")));
            }
        }
        let mut names = Vec::with_capacity(universe.param_count());
        for param in universe.params() {
            let p = coords.get(param).ok_or_else(|| {
                at.err(&["elements", name], format!("element `{name}` has no coordinate for parameter `{param}`"))
            })?;
            if universe.point_index(p).is_err() {
                return Err(at.err(&["elements", name, param], format!("unknown point `{p}`")));
            }
            names.push(p.as_str());
        }
        let x = SoftElement::from_names(&universe, &names).map_err(|e| at.err(&["elements", name], e.to_string()))?;
        elements.insert(name.clone(), x);
    }

    for (name, maps) in doc.functions.iter() {
        for (param, m) in maps.iter() {
            if universe.param_index(param).is_err() {
                return Err(at.err(&["functions", name, param], format!("unknown parameter `{param}`")));
            }
            for p in m.keys() {
                if universe.point_index(p).is_err() {
                    return Err(at.err(&["functions", name, param, p], format!("unknown point `{p}`")));
                }
            }
            if let Some(p) = universe.points().iter().find(|p| !m.contains_key(*p)) {
                return Err(at.err(&["functions", name, param], format!("no image for point `{p}`")));
            }
        }
        if let Some(param) = universe.params().iter().find(|a| !maps.contains_key(*a)) {
            return Err(at.err(&["functions", name], format!("function `{name}` has no map for parameter `{param}`")));
        }
    }

    Ok(Bundle {
        universe,
        carrier: doc.carrier.clone(),
        sets,
        topology: doc.topology.clone(),
        subbase: doc.subbase.clone(),
        elements,
        functions: doc.functions.0.clone(),
    })
}

/// Errors raised while using a resolved bundle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("unknown set `{0}`")]
    UnknownSet(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("document has no topology or subbase")]
    NoTopology,
    #[error("generated topology exceeds {0} members")]
    TooLarge(usize),
    #[error(transparent)]
    Soft(#[from] crate::error::Error),
}

impl BundleError {
    pub fn is_precondition(&self) -> bool {
        matches!(self, BundleError::Soft(e) if e.is_precondition())
    }
}

/// Members generated from a subbase are capped at this count.
pub const SUBBASE_CAP: usize = 1 << 16;

impl Bundle {
    pub fn set(&self, name: &str) -> Result<SoftSet, BundleError> {
        match name {
            NULL_NAME => Ok(SoftSet::null(&self.universe)),
            ABSOLUTE_NAME => Ok(SoftSet::absolute(&self.universe)),
            _ => self.sets.get(name).cloned().ok_or_else(|| BundleError::UnknownSet(name.into())),
        }
    }

    pub fn element(&self, name: &str) -> Result<SoftElement, BundleError> {
        self.elements.get(name).cloned().ok_or_else(|| BundleError::UnknownElement(name.into()))
    }

    pub fn carrier_set(&self) -> Result<SoftSet, BundleError> {
        self.set(self.carrier.as_deref().unwrap_or(ABSOLUTE_NAME))
    }

    fn named(&self, names: &[String]) -> Result<Vec<SoftSet>, BundleError> {
        names.iter().map(|n| self.set(n)).collect()
    }

    /// The listed family, unvalidated.
    pub fn topology_members(&self) -> Result<Vec<SoftSet>, BundleError> {
        self.named(self.topology.as_ref().ok_or(BundleError::NoTopology)?)
    }

    /// The listed topology, validated; failing that, the topology generated by
    /// the subbase.
    pub fn topology(&self) -> Result<SoftTopology, BundleError> {
        let carrier = self.carrier_set()?;
        if let Some(names) = &self.topology {
            return Ok(SoftTopology::with_carrier(carrier, self.named(names)?)?);
        }
        let subbase = self.named(self.subbase.as_ref().ok_or(BundleError::NoTopology)?)?;
        SoftTopology::generate(&carrier, &subbase, SUBBASE_CAP)?.ok_or(BundleError::TooLarge(SUBBASE_CAP))
    }

    pub fn function(&self, name: &str, codomain: &Arc<Universe>) -> Result<SoftFunction, BundleError> {
        let maps = self.functions.get(name).ok_or_else(|| BundleError::UnknownFunction(name.into()))?;
        let plain: BTreeMap<String, BTreeMap<String, String>> =
            maps.iter().map(|(k, v)| (k.clone(), v.0.clone())).collect();
        Ok(SoftFunction::from_names(&self.universe, codomain, &plain)?)
    }

    pub fn to_document(&self) -> SpaceDocument {
        let sets = self.sets.iter().map(|(n, s)| (n.clone(), slices_doc(s))).collect();
        let elements = self.elements.iter().map(|(n, x)| (n.clone(), element_doc(x))).collect();
        SpaceDocument {
            carrier: self.carrier.clone(),
            elements,
            functions: self.functions.clone().into_iter().collect(),
            sets,
            subbase: self.subbase.clone(),
            topology: self.topology.clone(),
            universe: UniverseDoc {
                params: self.universe.params().to_vec(),
                points: self.universe.points().to_vec(),
            },
            version: FORMAT_VERSION,
        }
    }
}

pub fn slices_doc(set: &SoftSet) -> NameMap<Vec<String>> {
    let u = set.universe();
    u.params()
        .iter()
        .enumerate()
        .map(|(a, p)| (p.clone(), set.slice_names(a).into_iter().map(String::from).collect()))
        .collect()
}

pub fn element_doc(x: &SoftElement) -> NameMap<String> {
    x.universe()
        .params()
        .iter()
        .zip(x.coord_names())
        .map(|(a, p)| (a.clone(), p.to_string()))
        .collect()
}

pub fn function_doc(f: &SoftFunction) -> FunctionDoc {
    f.to_names().into_iter().map(|(a, m)| (a, NameMap(m))).collect()
}

/// Canonical text: sorted keys, slices in universe order, two-space indent,
/// trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("documents serialize");
    out.push('\n');
    out
}

pub fn serialize(bundle: &Bundle) -> String {
    to_canonical_string(&bundle.to_document())
}

/// Describes a topology as a document, naming its members `O1`, `O2`, ...
/// except for Φ̃ and X̃. A carrier other than X̃ is stored as set `Y`.
pub fn topology_document(tau: &SoftTopology) -> SpaceDocument {
    let universe = tau.universe().clone();
    let mut sets = BTreeMap::new();
    let carrier_name = if tau.carrier().is_absolute() {
        None
    } else {
        sets.insert("Y".to_string(), tau.carrier().clone());
        Some("Y".to_string())
    };
    let mut names = Vec::new();
    let mut counter = 0;
    for m in tau.members() {
        let name = if m.is_null() {
            NULL_NAME.to_string()
        } else if m.is_absolute() {
            ABSOLUTE_NAME.to_string()
        } else if Some(m) == carrier_name.as_ref().map(|_| tau.carrier()) {
            "Y".to_string()
        } else {
            counter += 1;
            let n = format!("O{counter}");
            sets.insert(n.clone(), m.clone());
            n
        };
        names.push(name);
    }
    Bundle {
        universe,
        carrier: carrier_name,
        sets,
        topology: Some(names),
        subbase: None,
        elements: BTreeMap::new(),
        functions: BTreeMap::new(),
    }
    .to_document()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
  "sets": {
    "F": {
      "alpha": ["a"],
      "beta": ["c", "d"]
    },
    "G": {
      "alpha": ["c", "d"],
      "beta": ["a"]
    },
    "H": {
      "alpha": ["a", "c", "d"],
      "beta": ["a", "c", "d"]
    }
  },
  "topology": ["PHI", "ABS", "F", "G", "H"],
  "universe": {
    "params": ["alpha", "beta"],
    "points": ["a", "b", "c", "d"]
  },
  "version": 1
}
"#;

    #[test]
    fn parses_and_resolves() {
        let b = parse(DOC).unwrap();
        let tau = b.topology().unwrap();
        assert_eq!(tau.len(), 5);
        assert_eq!(b.set("F").unwrap().to_string(), "({a},{c,d})");
        assert!(b.set("PHI").unwrap().is_null());
        assert!(matches!(b.set("Q"), Err(BundleError::UnknownSet(_))));
    }

    #[test]
    fn round_trips_canonically() {
        let b = parse(DOC).unwrap();
        let text = serialize(&b);
        assert_eq!(parse(&text).unwrap(), b);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn missing_slice_is_located() {
        let bad = DOC.replace("\"beta\": [\"a\"]\n", "\"gamma\": [\"a\"]\n");
        let err = parse(&bad).unwrap_err();
        assert_eq!(err.path, "sets.G.gamma");
        assert_eq!(err.line, Some(9));
        let bad = DOC.replace(",\n      \"beta\": [\"a\"]", "");
        let err = parse(&bad).unwrap_err();
        assert_eq!(err.path, "sets.G");
        assert!(err.message.contains("`G`") && err.message.contains("`beta`"));
    }

    #[test]
    fn rejects_bad_documents() {
        let dup = DOC.replace("\"G\": {", "\"F\": {");
        let err = parse(&dup).unwrap_err();
        assert!(err.message.contains("duplicate"), "{err}");
        assert!(err.line.is_some());
        let reserved = DOC.replace("\"G\": {", "\"ABS\": {");
        assert!(parse(&reserved).unwrap_err().message.contains("reserved"));
        let unknown = DOC.replace("[\"c\", \"d\"],\n      \"beta\": [\"a\"]", "[\"c\", \"e\"],\n      \"beta\": [\"a\"]");
        assert_eq!(parse(&unknown).unwrap_err().path, "sets.G.alpha");
        let names = DOC.replace("\"PHI\", \"ABS\", \"F\"", "\"PHI\", \"ABS\", \"Q\"");
        assert_eq!(parse(&names).unwrap_err().path, "topology.Q");
        let syntax = DOC.replace("\"version\": 1", "\"version\": ");
        assert!(parse(&syntax).unwrap_err().line.is_some());
        assert!(parse(&DOC.replace("\"version\": 1", "\"version\": 2")).is_err());
    }

    #[test]
    fn subbase_generates_topology() {
        let text = DOC.replace("\"topology\": [\"PHI\", \"ABS\", \"F\", \"G\", \"H\"]", "\"subbase\": [\"F\", \"G\"]");
        let tau = parse(&text).unwrap().topology().unwrap();
        assert_eq!(tau.len(), 5);
    }

    #[test]
    fn topology_documents_reparse() {
        let tau = parse(DOC).unwrap().topology().unwrap();
        let doc = topology_document(&tau);
        let text = to_canonical_string(&doc);
        assert_eq!(parse(&text).unwrap().topology().unwrap(), tau);
    }
}
