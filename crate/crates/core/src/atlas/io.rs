//! JSON atlas documents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{StratumAtlas, StratumData, Subset};
use crate::qmat::{format_scalar, parse_scalar, Matrix, Scalar};

/// A malformed atlas document. `line` and `column` are 1-based; both are 0
/// when the problem is not tied to a position in the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl ParseError {
    fn semantic(message: impl Into<String>) -> Self {
        Self { message: message.into(), line: 0, column: 0 }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "parse error: {}", self.message)
        } else {
            write!(f, "parse error at line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

type RawMatrix = Vec<Vec<String>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtlasDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    dimension: usize,
    components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    codimensions: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    self_intersections: Option<Vec<String>>,
    strata: Vec<StratumDoc>,
    #[serde(default)]
    restrictions: Vec<RestrictionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StratumDoc {
    subset: Vec<String>,
    cohomology: Vec<Vec<[i64; 2]>>,
    #[serde(default)]
    pairings: Vec<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    units: Option<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RestrictionDoc {
    from: Vec<String>,
    to: Vec<String>,
    matrices: Vec<RawMatrix>,
}

fn scalar(s: &str) -> Result<Scalar, ParseError> {
    parse_scalar(s).ok_or_else(|| ParseError::semantic(format!("`{s}` is not a rational number")))
}

fn vector(v: &[String]) -> Result<Vec<Scalar>, ParseError> {
    v.iter().map(|s| scalar(s)).collect()
}

/// A matrix from rows; an empty row list takes `cols` columns.
fn matrix(raw: &RawMatrix, cols: usize, what: &str) -> Result<Matrix, ParseError> {
    if raw.is_empty() {
        return Ok(Matrix::zeros(0, cols));
    }
    let width = raw[0].len();
    let rows = raw.iter().map(|r| vector(r)).collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(width, rows).map_err(|e| ParseError::semantic(format!("{what}: {e}")))
}

fn raw_matrix(m: &Matrix) -> RawMatrix {
    m.to_rows().iter().map(|r| r.iter().map(format_scalar).collect()).collect()
}

fn subset(names: &[String], index: &BTreeMap<&str, usize>, what: &str) -> Result<Subset, ParseError> {
    let mut s = names
        .iter()
        .map(|n| {
            index
                .get(n.as_str())
                .copied()
                .ok_or_else(|| ParseError::semantic(format!("{what}: unknown component `{n}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    s.sort_unstable();
    let before = s.len();
    s.dedup();
    if s.len() != before {
        return Err(ParseError::semantic(format!("{what}: repeated component")));
    }
    Ok(s)
}

/// Parses an atlas document without validating it.
pub fn load_atlas(text: &str) -> Result<StratumAtlas, ParseError> {
    let doc: AtlasDoc = serde_json::from_str(text).map_err(|e| ParseError {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })?;
    from_doc(doc)
}

/// Reads and parses a file; the atlas name defaults to the file stem.
pub fn load_atlas_file(path: &Path) -> Result<StratumAtlas, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::semantic(format!("cannot read {}: {e}", path.display())))?;
    let mut atlas = load_atlas(&text)?;
    if atlas.name.is_empty() {
        let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or("atlas");
        atlas.name = stem.trim_end_matches(".json").trim_end_matches(".atlas").to_string();
    }
    Ok(atlas)
}

fn from_doc(doc: AtlasDoc) -> Result<StratumAtlas, ParseError> {
    let mut index = BTreeMap::new();
    for (i, c) in doc.components.iter().enumerate() {
        if index.insert(c.as_str(), i).is_some() {
            return Err(ParseError::semantic(format!("component `{c}` listed twice")));
        }
    }
    let ncomp = doc.components.len();
    let codimensions = doc.codimensions.clone().unwrap_or_else(|| vec![1; ncomp]);
    if codimensions.len() != ncomp {
        return Err(ParseError::semantic("`codimensions` must have one entry per component"));
    }
    let self_intersections = match &doc.self_intersections {
        Some(v) if v.len() != ncomp => {
            return Err(ParseError::semantic("`self_intersections` must have one entry per component"))
        }
        Some(v) => Some(vector(v)?),
        None => None,
    };
    let d = doc.dimension as i64;
    let stratum_dim = |s: &Subset| d - s.iter().map(|&i| codimensions[i] as i64).sum::<i64>();

    // First pass: cohomology, so that empty matrix shapes can be inferred.
    let mut cohom: BTreeMap<Subset, Vec<Vec<(i64, i64)>>> = BTreeMap::new();
    let mut subsets = Vec::new();
    for st in &doc.strata {
        let s = subset(&st.subset, &index, "stratum")?;
        let slots: Vec<Vec<(i64, i64)>> =
            st.cohomology.iter().map(|deg| deg.iter().map(|&[p, q]| (p, q)).collect()).collect();
        if cohom.insert(s.clone(), slots).is_some() {
            return Err(ParseError::semantic(format!("stratum {:?} declared twice", st.subset)));
        }
        subsets.push(s);
    }
    let dim_of = |s: &Subset, k: i64| -> usize {
        if k < 0 {
            return 0;
        }
        cohom.get(s).and_then(|c| c.get(k as usize)).map_or(0, Vec::len)
    };
    let degree_count = |s: &Subset| -> usize {
        let a = stratum_dim(s);
        let natural = if a >= 0 { (2 * a + 1) as usize } else { 0 };
        natural.max(cohom.get(s).map_or(0, Vec::len))
    };

    let mut strata = BTreeMap::new();
    for (st, s) in doc.strata.iter().zip(&subsets) {
        let a = stratum_dim(s);
        let len = degree_count(s).max(st.pairings.len());
        let mut cohomology = cohom[s].clone();
        cohomology.resize(len, Vec::new());
        let mut pairings = Vec::with_capacity(len);
        for k in 0..len {
            let cols = dim_of(s, 2 * a - k as i64);
            pairings.push(match st.pairings.get(k) {
                Some(raw) => matrix(raw, cols, &format!("pairing of {:?} in degree {k}", st.subset))?,
                None => Matrix::zeros(dim_of(s, k as i64), cols),
            });
        }
        let units = st.units.as_ref().map(|u| u.iter().map(|v| vector(v)).collect()).transpose()?;
        strata.insert(s.clone(), StratumData { cohomology, pairings, units });
    }

    let mut restrictions = BTreeMap::new();
    for r in &doc.restrictions {
        let from = subset(&r.from, &index, "restriction source")?;
        let to = subset(&r.to, &index, "restriction target")?;
        let extra: BTreeSet<usize> = to.iter().copied().filter(|i| !from.contains(i)).collect();
        if to.len() != from.len() + 1 || extra.len() != 1 {
            return Err(ParseError::semantic(format!(
                "restriction {:?} -> {:?} must add exactly one component",
                r.from, r.to
            )));
        }
        let len = degree_count(&from).max(degree_count(&to)).max(r.matrices.len());
        let mut mats = Vec::with_capacity(len);
        for k in 0..len {
            let cols = dim_of(&from, k as i64);
            mats.push(match r.matrices.get(k) {
                Some(raw) => matrix(raw, cols, &format!("restriction {:?} -> {:?} in degree {k}", r.from, r.to))?,
                None => Matrix::zeros(dim_of(&to, k as i64), cols),
            });
        }
        if restrictions.insert((from, to), mats).is_some() {
            return Err(ParseError::semantic(format!("restriction {:?} -> {:?} declared twice", r.from, r.to)));
        }
    }

    Ok(StratumAtlas {
        name: doc.name.unwrap_or_default(),
        dimension: doc.dimension,
        components: doc.components,
        codimensions,
        strata,
        restrictions,
        self_intersections,
    })
}

fn to_doc(a: &StratumAtlas) -> AtlasDoc {
    let names = |s: &Subset| a.subset_names(s);
    AtlasDoc {
        name: (!a.name.is_empty()).then(|| a.name.clone()),
        dimension: a.dimension,
        components: a.components.clone(),
        codimensions: a.codimensions.iter().any(|&c| c != 1).then(|| a.codimensions.clone()),
        self_intersections: a.self_intersections.as_ref().map(|v| v.iter().map(format_scalar).collect()),
        strata: a
            .strata
            .iter()
            .map(|(s, st)| StratumDoc {
                subset: names(s),
                cohomology: st.cohomology.iter().map(|deg| deg.iter().map(|&(p, q)| [p, q]).collect()).collect(),
                pairings: st.pairings.iter().map(raw_matrix).collect(),
                units: st.units.as_ref().map(|u| u.iter().map(|v| v.iter().map(format_scalar).collect()).collect()),
            })
            .collect(),
        restrictions: a
            .restrictions
            .iter()
            .map(|((from, to), mats)| RestrictionDoc {
                from: names(from),
                to: names(to),
                matrices: mats.iter().map(raw_matrix).collect(),
            })
            .collect(),
    }
}

/// Pretty-printed JSON document; `load_atlas` inverts it.
pub fn emit_atlas(a: &StratumAtlas) -> String {
    serde_json::to_string_pretty(&to_doc(a)).expect("atlas documents serialize")
}

/// Compact JSON used for hashing.
pub fn canonical_json(a: &StratumAtlas) -> String {
    serde_json::to_string(&to_doc(a)).expect("atlas documents serialize")
}

/// Hex SHA-256 of [`canonical_json`].
pub fn atlas_hash(a: &StratumAtlas) -> String {
    hex::encode(Sha256::digest(canonical_json(a).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A1: &str = r#"{
        "name": "a1", "dimension": 1, "components": ["p"],
        "strata": [
            {"subset": [], "cohomology": [[[0,0]], [], [[1,1]]], "pairings": [[["1"]], [], [["1"]]]},
            {"subset": ["p"], "cohomology": [[[0,0]]], "pairings": [[["1"]]]}
        ],
        "restrictions": [{"from": [], "to": ["p"], "matrices": [[["1"]]]}]
    }"#;

    #[test]
    fn loads_and_pads() {
        let a = load_atlas(A1).unwrap();
        assert_eq!(a.dimension, 1);
        assert_eq!(a.components, vec!["p"]);
        assert_eq!(a.codimensions, vec![1]);
        let r = &a.restrictions[&(vec![], vec![0])];
        assert_eq!(r.len(), 3);
        assert_eq!(r[2].shape(), (0, 1));
        assert_eq!(a.pairing(&[], 1).shape(), (0, 0));
    }

    #[test]
    fn round_trip() {
        let a = load_atlas(A1).unwrap();
        assert_eq!(load_atlas(&emit_atlas(&a)).unwrap(), a);
        assert_eq!(atlas_hash(&a), atlas_hash(&load_atlas(&emit_atlas(&a)).unwrap()));
    }

    #[test]
    fn proper_variety() {
        let a = load_atlas(
            r#"{"dimension": 0, "components": [], "strata": [{"subset": [], "cohomology": [[[0,0]]], "pairings": [[["1"]]]}]}"#,
        )
        .unwrap();
        assert!(a.components.is_empty());
        assert!(a.restrictions.is_empty());
    }

    #[test]
    fn errors_carry_locations() {
        let e = load_atlas(&A1[..A1.len() / 2]).unwrap_err();
        assert!(e.line > 0);
        let e = load_atlas(r#"{"dimension": 1, "components": [], "strata": [], "colour": 3}"#).unwrap_err();
        assert!(e.message.contains("colour"), "{e}");
        let e = load_atlas(&A1.replace(r#"["1"]]]}]"#, r#"["x"]]]}]"#)).unwrap_err();
        assert!(e.message.contains("rational"), "{e}");
        let e = load_atlas(&A1.replace(r#""to": ["p"]"#, r#""to": ["q"]"#)).unwrap_err();
        assert!(e.message.contains("unknown component"), "{e}");
    }
}
