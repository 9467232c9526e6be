//! The measure-file format: a JSON document with a schema version, a space
//! descriptor, and weighted atoms.
//!
//! ```json
//! {
//!   "version": 1,
//!   "space": {"kind": "tree", "vertices": [0, 1, 2, 3],
//!             "edges": [[0, 1, 1.0], [0, 2, 1.0], [0, 3, 1.0]]},
//!   "atoms": [{"point": {"edge": [0, 1], "offset": 1.0}, "weight": 0.5}, ...]
//! }
//! ```
//!
//! Tree points are `{"edge": [a, b], "offset": x}` with the offset measured
//! from `a`; hyperboloid and euclidean points are coordinate arrays
//! (ambient coordinates for the hyperboloid).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::FiniteMeasure;
use crate::spaces::{Euclidean, Hyperboloid, MetricTree};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    pub version: u32,
    pub space: SpaceSpec,
    pub atoms: Vec<AtomSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    Tree {
        vertices: Vec<usize>,
        edges: Vec<(usize, usize, f64)>,
    },
    Hyperboloid {
        dim: usize,
    },
    Euclidean {
        dim: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomSpec {
    pub point: serde_json::Value,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TreePointSpec {
    edge: (usize, usize),
    offset: f64,
}

/// A measure on whichever space the file described. The tree variant is
/// boxed: it carries the tree's path tables.
#[derive(Debug, Clone)]
pub enum AnyMeasure {
    Tree(Box<FiniteMeasure<MetricTree>>),
    Hyperboloid(FiniteMeasure<Hyperboloid>),
    Euclidean(FiniteMeasure<Euclidean>),
}

impl AnyMeasure {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyMeasure::Tree(_) => "tree",
            AnyMeasure::Hyperboloid(_) => "hyperboloid",
            AnyMeasure::Euclidean(_) => "euclidean",
        }
    }

    pub fn support_diameter(&self) -> f64 {
        match self {
            AnyMeasure::Tree(m) => m.support_diameter(),
            AnyMeasure::Hyperboloid(m) => m.support_diameter(),
            AnyMeasure::Euclidean(m) => m.support_diameter(),
        }
    }
}

/// Parses and validates a measure file.
pub fn parse_measure(text: &str) -> Result<AnyMeasure> {
    let file: MeasureFile = serde_json::from_str(text)?;
    build_measure(&file)
}

pub fn build_measure(file: &MeasureFile) -> Result<AnyMeasure> {
    if file.version != SCHEMA_VERSION {
        return Err(Error::Format(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            file.version
        )));
    }
    match &file.space {
        SpaceSpec::Tree { vertices, edges } => {
            let tree = MetricTree::new(vertices.clone(), edges.clone())?;
            let atoms = file
                .atoms
                .iter()
                .enumerate()
                .map(|(i, atom)| {
                    let spec: TreePointSpec = serde_json::from_value(atom.point.clone())
                        .map_err(|e| Error::Format(format!("atom {i}: {e}")))?;
                    let p = tree
                        .point_between(spec.edge.0, spec.edge.1, spec.offset)
                        .map_err(|e| Error::Format(format!("atom {i}: {e}")))?;
                    Ok((p, atom.weight))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyMeasure::Tree(Box::new(FiniteMeasure::new(tree, atoms)?)))
        }
        SpaceSpec::Hyperboloid { dim } => {
            let space = Hyperboloid::new(*dim);
            let atoms = file
                .atoms
                .iter()
                .enumerate()
                .map(|(i, atom)| {
                    let coords: Vec<f64> = serde_json::from_value(atom.point.clone())
                        .map_err(|e| Error::Format(format!("atom {i}: {e}")))?;
                    let p = space
                        .point(coords)
                        .map_err(|e| Error::Format(format!("atom {i}: {e}")))?;
                    Ok((p, atom.weight))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyMeasure::Hyperboloid(FiniteMeasure::new(space, atoms)?))
        }
        SpaceSpec::Euclidean { dim } => {
            let space = Euclidean::new(*dim);
            let atoms = file
                .atoms
                .iter()
                .enumerate()
                .map(|(i, atom)| {
                    let coords: Vec<f64> = serde_json::from_value(atom.point.clone())
                        .map_err(|e| Error::Format(format!("atom {i}: {e}")))?;
                    Ok((coords, atom.weight))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyMeasure::Euclidean(FiniteMeasure::new(space, atoms)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIPOD: &str = r#"{
        "version": 1,
        "space": {"kind": "tree", "vertices": [0, 1, 2, 3],
                  "edges": [[0, 1, 1.0], [0, 2, 1.0], [0, 3, 1.0]]},
        "atoms": [
            {"point": {"edge": [0, 1], "offset": 1.0}, "weight": 0.3333333333333333},
            {"point": {"edge": [0, 2], "offset": 1.0}, "weight": 0.3333333333333333},
            {"point": {"edge": [0, 3], "offset": 1.0}, "weight": 0.3333333333333334}
        ]
    }"#;

    #[test]
    fn parses_the_tripod_file() {
        let m = parse_measure(TRIPOD).unwrap();
        assert_eq!(m.kind(), "tree");
        assert!((m.support_diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reversed_edge_reference_flips_offset() {
        let text = TRIPOD.replace(
            r#"{"point": {"edge": [0, 1], "offset": 1.0}, "weight": 0.3333333333333333}"#,
            r#"{"point": {"edge": [1, 0], "offset": 0.0}, "weight": 0.3333333333333333}"#,
        );
        let m = parse_measure(&text).unwrap();
        assert!((m.support_diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_truncated_json_and_bad_semantics() {
        assert!(matches!(
            parse_measure(&TRIPOD[..40]),
            Err(Error::Json(_))
        ));
        let wrong_version = TRIPOD.replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(
            parse_measure(&wrong_version),
            Err(Error::Format(_))
        ));
        let bad_edge = TRIPOD.replace("\"edge\": [0, 3]", "\"edge\": [2, 3]");
        assert!(matches!(parse_measure(&bad_edge), Err(Error::Format(_))));
        let bad_weight = TRIPOD.replace("0.3333333333333334", "0.5");
        assert!(matches!(
            parse_measure(&bad_weight),
            Err(Error::InvalidMeasure(_))
        ));
    }

    #[test]
    fn parses_coordinate_spaces() {
        let text = r#"{
            "version": 1,
            "space": {"kind": "euclidean", "dim": 2},
            "atoms": [{"point": [0.0, 0.0], "weight": 0.5},
                      {"point": [1.0, 1.0], "weight": 0.5}]
        }"#;
        let m = parse_measure(text).unwrap();
        assert_eq!(m.kind(), "euclidean");

        let c = 1.0f64.cosh();
        let s = 1.0f64.sinh();
        let text = format!(
            r#"{{
            "version": 1,
            "space": {{"kind": "hyperboloid", "dim": 2}},
            "atoms": [{{"point": [1.0, 0.0, 0.0], "weight": 0.5}},
                      {{"point": [{c}, {s}, 0.0], "weight": 0.5}}]
        }}"#
        );
        let m = parse_measure(&text).unwrap();
        assert_eq!(m.kind(), "hyperboloid");
        assert!((m.support_diameter() - 1.0).abs() < 1e-9);
    }
}
