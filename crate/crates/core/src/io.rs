//! JSON documents: colorings, bases, protocols.

use std::collections::HashMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::coloring::{ColorId, EdgeColoring};
use crate::cube::{Edge, Hypercube, Vertex};
use crate::error::{Error, Result};
use crate::locc::ProtocolTree;
use crate::uob::{ProductState, QubitRay, Uob};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColorLabel {
    Id(u32),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: Vertex,
    pub to: Vertex,
    pub color: ColorLabel,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringDocument {
    pub schema_version: u32,
    pub n: usize,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub metadata: Metadata,
}

/// A coloring with display names per color id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedColoring {
    pub coloring: EdgeColoring,
    pub color_names: Vec<String>,
    pub metadata: Metadata,
}

impl ColoringDocument {
    /// Edges in canonical order; colors by name when `names` covers every id.
    pub fn from_coloring(c: &EdgeColoring, names: Option<&[String]>, metadata: Metadata) -> Self {
        let names = names.filter(|ns| ns.len() >= c.color_count());
        let edges = c
            .cube()
            .edges()
            .into_iter()
            .map(|e| {
                let (from, to) = e.endpoints();
                let k = c.color(e);
                let color = match names {
                    Some(ns) => ColorLabel::Name(ns[k as usize].clone()),
                    None => ColorLabel::Id(k),
                };
                EdgeRecord { from, to, color }
            })
            .collect();
        ColoringDocument { schema_version: SCHEMA_VERSION, n: c.n(), edges, metadata }
    }

    pub fn to_coloring(&self) -> Result<LoadedColoring> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let cube = Hypercube::new(self.n)?;
        let mut raw: Vec<Option<ColorId>> = vec![None; cube.edge_count()];
        let mut ids: HashMap<&ColorLabel, ColorId> = HashMap::new();
        let mut labels: Vec<&ColorLabel> = Vec::new();
        for (i, rec) in self.edges.iter().enumerate() {
            let limit = cube.vertex_count() as Vertex;
            if rec.from >= limit || rec.to >= limit {
                return Err(Error::Document(format!(
                    "edges[{i}]: {}-{} has a vertex outside Q{}",
                    rec.from, rec.to, self.n
                )));
            }
            let e = Edge::between(rec.from, rec.to).ok_or_else(|| {
                Error::Document(format!(
                    "edges[{i}]: {}-{} is not a cube edge (endpoints differ in {} bits)",
                    rec.from,
                    rec.to,
                    (rec.from ^ rec.to).count_ones()
                ))
            })?;
            let slot = &mut raw[cube.edge_index(e)];
            if slot.is_some() {
                return Err(Error::Document(format!("edges[{i}]: duplicate edge {e}")));
            }
            let next = ids.len() as ColorId;
            *slot = Some(*ids.entry(&rec.color).or_insert_with(|| {
                labels.push(&rec.color);
                next
            }));
        }
        if let Some(i) = raw.iter().position(Option::is_none) {
            return Err(Error::Document(format!("edge {} is missing", cube.edge_at(i))));
        }
        let raw: Vec<ColorId> = raw.into_iter().map(|k| k.expect("checked")).collect();
        let (coloring, origin) = EdgeColoring::from_raw_with_origin(self.n, &raw)?;
        let color_names = origin
            .iter()
            .map(|&k| match labels[k as usize] {
                ColorLabel::Id(id) => id.to_string(),
                ColorLabel::Name(s) => s.clone(),
            })
            .collect();
        Ok(LoadedColoring { coloring, color_names, metadata: self.metadata.clone() })
    }
}

pub fn parse_coloring(text: &str) -> Result<LoadedColoring> {
    let doc: ColoringDocument = serde_json::from_str(text)?;
    doc.to_coloring()
}

pub fn load_coloring(path: &Path) -> Result<LoadedColoring> {
    let text = std::fs::read_to_string(path)?;
    parse_coloring(&text).map_err(|e| match e {
        Error::Json(j) => Error::Document(format!("{}: {j}", path.display())),
        Error::Document(m) => Error::Document(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn coloring_to_json(c: &EdgeColoring, names: Option<&[String]>, metadata: Metadata) -> Result<String> {
    let doc = ColoringDocument::from_coloring(c, names, metadata);
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

pub fn save_coloring(c: &EdgeColoring, names: Option<&[String]>, metadata: Metadata, path: &Path) -> Result<()> {
    std::fs::write(path, coloring_to_json(c, names, metadata)?)?;
    Ok(())
}

/// An `f64` written with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exact(pub f64);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite amplitude"));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Exact)
    }
}

type Amplitude = [Exact; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UobDocument {
    pub schema_version: u32,
    pub n: usize,
    pub tolerance: f64,
    #[serde(default)]
    pub metadata: Metadata,
    /// Per state, per position: `[[re, im], [re, im]]` for the two amplitudes.
    pub states: Vec<Vec<[Amplitude; 2]>>,
}

fn amp(z: Complex64) -> Amplitude {
    [Exact(z.re), Exact(z.im)]
}

impl UobDocument {
    pub fn from_uob(u: &Uob, tolerance: f64, metadata: Metadata) -> Self {
        let states =
            u.states.iter().map(|s| s.factors.iter().map(|f| [amp(f.alpha()), amp(f.beta())]).collect()).collect();
        UobDocument { schema_version: SCHEMA_VERSION, n: u.n, tolerance, metadata, states }
    }

    pub fn to_uob(&self) -> Result<Uob> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!("schema_version {} is not supported", self.schema_version)));
        }
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(j, row)| {
                if row.len() != self.n {
                    return Err(Error::Document(format!("states[{j}] has {} factors, expected {}", row.len(), self.n)));
                }
                let factors = row
                    .iter()
                    .map(|[a, b]| QubitRay::from_stored(Complex64::new(a[0].0, a[1].0), Complex64::new(b[0].0, b[1].0)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ProductState { factors })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Uob { n: self.n, states })
    }
}

pub fn uob_to_json(u: &Uob, tolerance: f64, metadata: Metadata) -> Result<String> {
    Ok(serde_json::to_string_pretty(&UobDocument::from_uob(u, tolerance, metadata))? + "\n")
}

pub fn parse_uob(text: &str) -> Result<Uob> {
    let doc: UobDocument = serde_json::from_str(text)?;
    doc.to_uob()
}

pub fn load_uob(path: &Path) -> Result<Uob> {
    parse_uob(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolDocument {
    pub schema_version: u32,
    pub n: usize,
    pub tree: ProtocolTree,
}

pub fn protocol_to_json(n: usize, tree: &ProtocolTree) -> Result<String> {
    let doc = ProtocolDocument { schema_version: SCHEMA_VERSION, n, tree: tree.clone() };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

pub fn parse_protocol(text: &str) -> Result<ProtocolDocument> {
    let doc: ProtocolDocument = serde_json::from_str(text)?;
    doc.tree.validate(doc.n)?;
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{fixture, Fixture};
    use crate::uob::{sample_assignment, synthesize};

    #[test]
    fn fig1_round_trip() {
        let f = fixture(Fixture::Fig1);
        let text = coloring_to_json(&f.coloring, Some(&f.color_names), Metadata::default()).unwrap();
        let back = parse_coloring(&text).unwrap();
        assert_eq!(back.coloring, f.coloring);
        assert_eq!(back.color_names, f.color_names);
    }

    #[test]
    fn numeric_ids_are_accepted() {
        let c = fixture(Fixture::Fig2).coloring;
        let text = coloring_to_json(&c, None, Metadata::default()).unwrap();
        assert_eq!(parse_coloring(&text).unwrap().coloring, c);
    }

    #[test]
    fn missing_edge_is_named() {
        let c = fixture(Fixture::Fig1).coloring;
        let mut doc = ColoringDocument::from_coloring(&c, None, Metadata::default());
        doc.edges.retain(|e| (e.from, e.to) != (2, 6));
        let err = doc.to_coloring().unwrap_err().to_string();
        assert!(err.contains("2-6"), "{err}");
    }

    #[test]
    fn non_adjacent_and_duplicate_edges() {
        let text = r#"{"schema_version":1,"n":2,"edges":[{"from":0,"to":3,"color":0}]}"#;
        assert!(parse_coloring(text).unwrap_err().to_string().contains("2 bits"));
        let dup = r#"{"schema_version":1,"n":1,"edges":[{"from":0,"to":1,"color":0},{"from":1,"to":0,"color":0}]}"#;
        assert!(parse_coloring(dup).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn unknown_field_has_location() {
        let text = "{\"schema_version\":1,\"n\":1,\n\"edges\":[],\"extra\":1}";
        let err = parse_coloring(text).unwrap_err().to_string();
        assert!(err.contains("extra") && err.contains("line 2"), "{err}");
    }

    #[test]
    fn uob_round_trip_is_bit_exact() {
        let c = fixture(Fixture::Fig2).coloring;
        let u = synthesize(&c, &sample_assignment(&c, 0.1, 4).unwrap()).unwrap();
        let text = uob_to_json(&u, 1e-10, Metadata::default()).unwrap();
        let back = parse_uob(&text).unwrap();
        assert_eq!(back, u);
        assert_eq!(uob_to_json(&back, 1e-10, Metadata::default()).unwrap(), text);
    }
}
