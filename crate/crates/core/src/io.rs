//! Diagram files and canonical serialization.
//!
//! Diagram specification files are JSON with fixed field names. All numbers
//! are rational strings "p/q" (or bare integers "p"); table maps use 1-based
//! point indices. The canonical text rendering is the digest input for
//! reports, so it must stay byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::category::{Diagram, FiniteCategory, MapKind, SpaceKind, SpaceRef};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, parse_rat, Point};
use crate::spaces::{AffineMap, Polytope};

#[derive(Debug, Serialize, Deserialize)]
pub struct DiagramFile {
    pub objects: Vec<ObjectSpec>,
    pub morphisms: Vec<MorphismSpec>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<ComposeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub id: String,
    pub kind: String, // "finite" | "polytope"
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<usize>>, // 1-based target points
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine: Option<AffineSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AffineSpec {
    pub matrix: Vec<Vec<String>>,
    pub offset: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ComposeEntry {
    pub g: String,
    pub f: String,
    pub gf: String,
}

/// Parses a diagram from JSON text and validates it fully.
pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let file: DiagramFile =
        serde_json::from_str(text).map_err(|e| Error::DiagramFile(e.to_string()))?;
    diagram_from_file(&file)
}

pub fn read_diagram(path: &std::path::Path) -> Result<Diagram> {
    let text = std::fs::read_to_string(path)?;
    parse_diagram(&text)
}

fn diagram_from_file(file: &DiagramFile) -> Result<Diagram> {
    let mut spaces: Vec<(String, SpaceRef)> = Vec::new();
    for obj in &file.objects {
        let space = match obj.kind.as_str() {
            "finite" => {
                let points = obj.points.ok_or_else(|| {
                    Error::DiagramFile(format!("object `{}`: missing `points`", obj.id))
                })?;
                if points == 0 {
                    return Err(Error::DiagramFile(format!(
                        "object `{}`: finite spaces need at least one point",
                        obj.id
                    )));
                }
                SpaceRef::finite(&obj.id, points)
            }
            "polytope" => {
                let verts = obj.vertices.as_ref().ok_or_else(|| {
                    Error::DiagramFile(format!("object `{}`: missing `vertices`", obj.id))
                })?;
                let points: Vec<Point> = verts
                    .iter()
                    .map(|v| v.iter().map(|s| parse_rat(s)).collect())
                    .collect::<Result<_>>()?;
                let dim = points
                    .first()
                    .map(|p| p.len())
                    .ok_or_else(|| Error::DiagramFile("empty vertex list".into()))?;
                SpaceRef::poly(&obj.id, Polytope::conv_hull(dim, &points)?)
            }
            other => {
                return Err(Error::DiagramFile(format!(
                    "object `{}`: unknown kind `{other}`",
                    obj.id
                )))
            }
        };
        spaces.push((obj.id.clone(), space));
    }

    let mut morphisms: Vec<(String, String, String)> = Vec::new();
    let mut maps: Vec<(String, MapKind)> = Vec::new();
    for mor in &file.morphisms {
        morphisms.push((mor.id.clone(), mor.src.clone(), mor.dst.clone()));
        let spec = mor.map.as_ref().ok_or_else(|| {
            Error::DiagramFile(format!("morphism `{}`: missing `map`", mor.id))
        })?;
        let kind = match (&spec.table, &spec.affine) {
            (Some(t), None) => {
                let zero_based: Vec<usize> = t
                    .iter()
                    .map(|&v| {
                        v.checked_sub(1).ok_or_else(|| {
                            Error::DiagramFile(format!(
                                "morphism `{}`: table points are 1-based",
                                mor.id
                            ))
                        })
                    })
                    .collect::<Result<_>>()?;
                MapKind::Table(zero_based)
            }
            (None, Some(a)) => {
                let matrix: Vec<Vec<_>> = a
                    .matrix
                    .iter()
                    .map(|row| row.iter().map(|s| parse_rat(s)).collect())
                    .collect::<Result<_>>()?;
                let offset = a.offset.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?;
                MapKind::Affine(AffineMap::new(matrix, offset))
            }
            _ => {
                return Err(Error::DiagramFile(format!(
                    "morphism `{}`: map must be exactly one of table/affine",
                    mor.id
                )))
            }
        };
        maps.push((mor.id.clone(), kind));
    }

    let identities: Vec<(String, String)> = file
        .identities
        .iter()
        .map(|(o, m)| (o.clone(), m.clone()))
        .collect();
    let compose: Vec<(String, String, String)> = file
        .compose
        .iter()
        .map(|c| (c.g.clone(), c.f.clone(), c.gf.clone()))
        .collect();

    let shape = FiniteCategory::new(
        spaces.iter().map(|(id, _)| id.clone()).collect(),
        morphisms,
        identities,
        compose,
    )?;
    Diagram::new(shape, spaces, maps)
}

/// Canonical, byte-stable text rendering of a diagram; the digest input.
pub fn canonical_string(d: &Diagram) -> String {
    let mut out = String::new();
    out.push_str("objects\n");
    for (o, s) in d.spaces().iter().enumerate() {
        let id = &d.shape().objects()[o];
        match &s.kind {
            SpaceKind::Finite { points } => {
                out.push_str(&format!("  {id} finite {points}\n"));
            }
            SpaceKind::Poly(p) => {
                let verts: Vec<String> = p
                    .vertices()
                    .iter()
                    .map(|v| {
                        let cs: Vec<String> = v.iter().map(fmt_rat).collect();
                        format!("[{}]", cs.join(","))
                    })
                    .collect();
                out.push_str(&format!("  {id} polytope {}\n", verts.join(" ")));
            }
        }
    }
    out.push_str("morphisms\n");
    for (mi, m) in d.shape().morphisms().iter().enumerate() {
        let src = &d.shape().objects()[m.src];
        let dst = &d.shape().objects()[m.dst];
        match d.map(mi) {
            MapKind::Table(t) => {
                let entries: Vec<String> = t.iter().map(|v| (v + 1).to_string()).collect();
                out.push_str(&format!(
                    "  {} {src}->{dst} table [{}]\n",
                    m.id,
                    entries.join(",")
                ));
            }
            MapKind::Affine(f) => {
                let rows: Vec<String> = f
                    .matrix
                    .iter()
                    .map(|row| {
                        let cs: Vec<String> = row.iter().map(fmt_rat).collect();
                        format!("[{}]", cs.join(","))
                    })
                    .collect();
                let off: Vec<String> = f.offset.iter().map(fmt_rat).collect();
                out.push_str(&format!(
                    "  {} {src}->{dst} affine [{}] + [{}]\n",
                    m.id,
                    rows.join(" "),
                    off.join(",")
                ));
            }
        }
    }
    out.push_str("compose\n");
    let morphs = d.shape().morphisms();
    for (gi, g) in morphs.iter().enumerate() {
        for (fi, f) in morphs.iter().enumerate() {
            if let Some(gf) = d.shape().composite(gi, fi) {
                out.push_str(&format!(
                    "  ({},{})={}\n",
                    g.id, f.id, morphs[gf].id
                ));
            }
        }
    }
    out
}

/// SHA-256 of the canonical rendering, hex-encoded.
pub fn diagram_digest(d: &Diagram) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical_string(d).as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    const COSPAN_JSON: &str = r#"{
        "objects": [
            {"id": "L", "kind": "finite", "points": 2},
            {"id": "M", "kind": "finite", "points": 1},
            {"id": "R", "kind": "finite", "points": 2}
        ],
        "morphisms": [
            {"id": "id_L", "src": "L", "dst": "L", "map": {"table": [1, 2]}},
            {"id": "id_M", "src": "M", "dst": "M", "map": {"table": [1]}},
            {"id": "id_R", "src": "R", "dst": "R", "map": {"table": [1, 2]}},
            {"id": "f", "src": "L", "dst": "M", "map": {"table": [1, 1]}},
            {"id": "g", "src": "R", "dst": "M", "map": {"table": [1, 1]}}
        ],
        "identities": {"L": "id_L", "M": "id_M", "R": "id_R"},
        "compose": [
            {"g": "id_L", "f": "id_L", "gf": "id_L"},
            {"g": "id_M", "f": "id_M", "gf": "id_M"},
            {"g": "id_R", "f": "id_R", "gf": "id_R"},
            {"g": "id_M", "f": "f", "gf": "f"},
            {"g": "f", "f": "id_L", "gf": "f"},
            {"g": "id_M", "f": "g", "gf": "g"},
            {"g": "g", "f": "id_R", "gf": "g"}
        ]
    }"#;

    #[test]
    fn parses_and_digests_deterministically() {
        let d1 = parse_diagram(COSPAN_JSON).unwrap();
        let d2 = parse_diagram(COSPAN_JSON).unwrap();
        assert_eq!(diagram_digest(&d1), diagram_digest(&d2));
        assert_eq!(diagram_digest(&d1).len(), 64);
        let lim = crate::category::compute_limit(&d1).unwrap();
        assert_eq!(lim.finite_tuples().unwrap().len(), 4);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(
            parse_diagram("{not json"),
            Err(Error::DiagramFile(_))
        ));
        // Missing compose entry: caught by category validation.
        let broken = COSPAN_JSON.replace(
            r#"{"g": "id_M", "f": "f", "gf": "f"},"#,
            "",
        );
        assert!(matches!(
            parse_diagram(&broken),
            Err(Error::MalformedCategory { .. })
        ));
        // Zero-based table entry.
        let zero = COSPAN_JSON.replace(r#""map": {"table": [1, 1]}"#, r#""map": {"table": [0, 1]}"#);
        assert!(parse_diagram(&zero).is_err());
    }

    #[test]
    fn parses_polytope_objects() {
        let json = r#"{
            "objects": [
                {"id": "X", "kind": "polytope", "vertices": [["0"], ["1"]]}
            ],
            "morphisms": [
                {"id": "id_X", "src": "X", "dst": "X",
                 "map": {"affine": {"matrix": [["1"]], "offset": ["0"]}}}
            ],
            "identities": {"X": "id_X"},
            "compose": [{"g": "id_X", "f": "id_X", "gf": "id_X"}]
        }"#;
        let d = parse_diagram(json).unwrap();
        let lim = crate::category::compute_limit(&d).unwrap();
        assert_eq!(lim.polytope().unwrap().vertices().len(), 2);
    }
}
