//! Finite categories, diagrams of desk-scale compacta, cones, limits.
//!
//! Objects of a diagram are either finite point sets or rational polytopes;
//! morphism images are total table maps or affine maps. Everything is
//! validated by exhaustion: composition tables must be explicit and closed,
//! diagrams must be functorial pointwise, cones must commute.

mod limit;

pub use limit::{
    characteristic_point, compute_limit, Cone, LimitCarrier, LimitPoint, LimitSpace,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rat::Point;
use crate::spaces::{AffineMap, Polytope};

/// A morphism of the shape category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category with an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    compose: BTreeMap<(usize, usize), usize>, // (g, f) -> g∘f with src(g) = dst(f)
}

impl FiniteCategory {
    /// Assembles a category from named parts. Objects and morphisms are
    /// sorted by identifier, so carrier orderings are reproducible.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>, // (id, src, dst)
        identities: Vec<(String, String)>,        // (object, morphism)
        compose: Vec<(String, String, String)>,   // (g, f, g∘f)
    ) -> Result<FiniteCategory> {
        let mut objects = objects;
        objects.sort();
        let malformed = |law: &str, witness: String| Error::MalformedCategory {
            law: law.into(),
            witness,
        };
        if objects.windows(2).any(|w| w[0] == w[1]) {
            return Err(malformed("unique-object-ids", "duplicate object id".into()));
        }
        let obj_index = |id: &str| -> Result<usize> {
            objects
                .binary_search_by(|o| o.as_str().cmp(id))
                .map_err(|_| malformed("object-exists", format!("unknown object `{id}`")))
        };

        let mut raw = morphisms;
        raw.sort();
        raw.dedup();
        let mut morphisms: Vec<Morphism> = Vec::with_capacity(raw.len());
        for (id, src, dst) in raw {
            morphisms.push(Morphism {
                src: obj_index(&src)?,
                dst: obj_index(&dst)?,
                id,
            });
        }
        if morphisms.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(malformed(
                "unique-morphism-ids",
                "duplicate morphism id".into(),
            ));
        }
        let mor_index = |id: &str| -> Result<usize> {
            morphisms
                .binary_search_by(|m| m.id.as_str().cmp(id))
                .map_err(|_| malformed("morphism-exists", format!("unknown morphism `{id}`")))
        };

        let mut identity_of: Vec<Option<usize>> = vec![None; objects.len()];
        for (obj, mor) in identities {
            let o = obj_index(&obj)?;
            let m = mor_index(&mor)?;
            if identity_of[o].is_some() {
                return Err(malformed("one-identity", format!("object `{obj}`")));
            }
            identity_of[o] = Some(m);
        }
        let identities: Vec<usize> = identity_of
            .into_iter()
            .enumerate()
            .map(|(o, m)| m.ok_or_else(|| malformed("identity-total", objects[o].clone())))
            .collect::<Result<_>>()?;

        let mut table = BTreeMap::new();
        for (g, f, gf) in compose {
            let g = mor_index(&g)?;
            let f = mor_index(&f)?;
            let gf = mor_index(&gf)?;
            if table.insert((g, f), gf).is_some() {
                return Err(malformed(
                    "compose-single-valued",
                    format!("pair ({}, {})", morphisms[g].id, morphisms[f].id),
                ));
            }
        }

        Ok(FiniteCategory {
            objects,
            morphisms,
            identities,
            compose: table,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, morphism: usize) -> bool {
        self.identities.contains(&morphism)
    }

    pub fn composite(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.objects.binary_search_by(|o| o.as_str().cmp(id)).ok()
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.morphisms
            .binary_search_by(|m| m.id.as_str().cmp(id))
            .ok()
    }

    /// Checks closure, identity neutrality, and associativity by exhaustion;
    /// returns the first violated law.
    pub fn validate(&self) -> Result<()> {
        let malformed = |law: &str, witness: String| Error::MalformedCategory {
            law: law.into(),
            witness,
        };
        for (o, &idm) in self.identities.iter().enumerate() {
            let m = &self.morphisms[idm];
            if m.src != o || m.dst != o {
                return Err(malformed(
                    "identity-endpoints",
                    format!("identity of `{}` is `{}`", self.objects[o], m.id),
                ));
            }
        }
        // Totality and typing of composition on composable pairs.
        for (fi, f) in self.morphisms.iter().enumerate() {
            for (gi, g) in self.morphisms.iter().enumerate() {
                if g.src != f.dst {
                    if self.compose.contains_key(&(gi, fi)) {
                        return Err(malformed(
                            "compose-typed",
                            format!("non-composable pair ({}, {})", g.id, f.id),
                        ));
                    }
                    continue;
                }
                let Some(gf) = self.composite(gi, fi) else {
                    return Err(malformed(
                        "compose-total",
                        format!("missing entry ({}, {})", g.id, f.id),
                    ));
                };
                let c = &self.morphisms[gf];
                if c.src != f.src || c.dst != g.dst {
                    return Err(malformed(
                        "compose-endpoints",
                        format!("({}, {}) = {}", g.id, f.id, c.id),
                    ));
                }
            }
        }
        // Identity neutrality.
        for (fi, f) in self.morphisms.iter().enumerate() {
            let left = self.composite(self.identities[f.dst], fi);
            let right = self.composite(fi, self.identities[f.src]);
            if left != Some(fi) || right != Some(fi) {
                return Err(malformed("identity-neutral", f.id.clone()));
            }
        }
        // Associativity by exhaustion.
        for (fi, f) in self.morphisms.iter().enumerate() {
            for (gi, g) in self.morphisms.iter().enumerate() {
                if g.src != f.dst {
                    continue;
                }
                for (hi, h) in self.morphisms.iter().enumerate() {
                    if h.src != g.dst {
                        continue;
                    }
                    let gf = self.composite(gi, fi).expect("checked total");
                    let hg = self.composite(hi, gi).expect("checked total");
                    if self.composite(hi, gf) != self.composite(hg, fi) {
                        return Err(malformed(
                            "associativity",
                            format!("({}, {}, {})", h.id, g.id, f.id),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Shape with the given objects and no non-identity morphisms.
    pub fn discrete(objects: &[&str]) -> FiniteCategory {
        let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let morphisms: Vec<(String, String, String)> = objs
            .iter()
            .map(|o| (format!("id_{o}"), o.clone(), o.clone()))
            .collect();
        let identities: Vec<(String, String)> =
            objs.iter().map(|o| (o.clone(), format!("id_{o}"))).collect();
        let compose: Vec<(String, String, String)> = objs
            .iter()
            .map(|o| {
                let id = format!("id_{o}");
                (id.clone(), id.clone(), id)
            })
            .collect();
        FiniteCategory::new(objs, morphisms, identities, compose)
            .expect("discrete shape is well formed")
    }

    /// Cospan shape `src1 → mid ← src2`.
    pub fn cospan() -> FiniteCategory {
        shape_from_edges(
            &["L", "M", "R"],
            &[("f", "L", "M"), ("g", "R", "M")],
        )
    }

    /// Two parallel arrows `A ⇉ B`.
    pub fn parallel_pair() -> FiniteCategory {
        shape_from_edges(&["A", "B"], &[("f", "A", "B"), ("g", "A", "B")])
    }

    /// Chain `X0 → X1 → ... → Xn` with all composites.
    pub fn chain(n: usize) -> FiniteCategory {
        assert!(n >= 1);
        let objects: Vec<String> = (0..=n).map(|i| format!("X{i}")).collect();
        let mut edges: Vec<(String, String, String)> = Vec::new();
        // All arrows i -> j for i < j, named by endpoints; composition is
        // then determined by endpoints alone.
        for i in 0..=n {
            for j in i + 1..=n {
                edges.push((format!("a{i}_{j}"), format!("X{i}"), format!("X{j}")));
            }
        }
        let mut morphs: Vec<(String, String, String)> = edges.clone();
        for o in &objects {
            morphs.push((format!("id_{o}"), o.clone(), o.clone()));
        }
        let identities: Vec<(String, String)> = objects
            .iter()
            .map(|o| (o.clone(), format!("id_{o}")))
            .collect();
        let name = |i: usize, j: usize| -> String {
            if i == j {
                format!("id_X{i}")
            } else {
                format!("a{i}_{j}")
            }
        };
        let mut compose = Vec::new();
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    compose.push((name(j, k), name(i, j), name(i, k)));
                }
            }
        }
        compose.sort();
        compose.dedup();
        FiniteCategory::new(objects, morphs, identities, compose)
            .expect("chain shape is well formed")
    }
}

/// Builds a poset-like shape (no composable non-identity pairs) from edges.
fn shape_from_edges(objects: &[&str], edges: &[(&str, &str, &str)]) -> FiniteCategory {
    let objs: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
    let mut morphs: Vec<(String, String, String)> = edges
        .iter()
        .map(|(id, s, d)| (id.to_string(), s.to_string(), d.to_string()))
        .collect();
    for o in &objs {
        morphs.push((format!("id_{o}"), o.clone(), o.clone()));
    }
    let identities: Vec<(String, String)> =
        objs.iter().map(|o| (o.clone(), format!("id_{o}"))).collect();
    let mut compose: Vec<(String, String, String)> = Vec::new();
    for o in &objs {
        let id = format!("id_{o}");
        compose.push((id.clone(), id.clone(), id.clone()));
    }
    for (id, s, d) in edges {
        compose.push((format!("id_{d}"), id.to_string(), id.to_string()));
        compose.push((id.to_string(), format!("id_{s}"), id.to_string()));
    }
    FiniteCategory::new(objs, morphs, identities, compose).expect("edge shape is well formed")
}


/// An object carrier: a finite point set or a polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceRef {
    pub label: String,
    pub kind: SpaceKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceKind {
    Finite { points: usize },
    Poly(Polytope),
}

impl SpaceRef {
    pub fn finite(label: &str, points: usize) -> SpaceRef {
        assert!(points >= 1, "finite spaces need at least one point");
        SpaceRef {
            label: label.to_string(),
            kind: SpaceKind::Finite { points },
        }
    }

    pub fn poly(label: &str, polytope: Polytope) -> SpaceRef {
        SpaceRef {
            label: label.to_string(),
            kind: SpaceKind::Poly(polytope),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, SpaceKind::Finite { .. })
    }
}

/// A morphism carrier: a total table or an affine map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    /// `table[i]` is the image of source point `i`.
    Table(Vec<usize>),
    Affine(AffineMap),
}

impl MapKind {
    pub fn identity_for(space: &SpaceRef) -> MapKind {
        match &space.kind {
            SpaceKind::Finite { points } => MapKind::Table((0..*points).collect()),
            SpaceKind::Poly(p) => MapKind::Affine(AffineMap::identity(p.dim())),
        }
    }
}

/// A point of a space: an index into a finite carrier or rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpacePoint {
    Finite(usize),
    Poly(Point),
}

/// A diagram: a shape category with carriers and map images.
#[derive(Debug, Clone)]
pub struct Diagram {
    shape: FiniteCategory,
    spaces: Vec<SpaceRef>,
    maps: Vec<MapKind>,
}

impl Diagram {
    pub fn new(
        shape: FiniteCategory,
        spaces: Vec<(String, SpaceRef)>,
        maps: Vec<(String, MapKind)>,
    ) -> Result<Diagram> {
        shape.validate()?;
        let mut space_of: Vec<Option<SpaceRef>> = vec![None; shape.objects().len()];
        for (obj, s) in spaces {
            let o = shape
                .object_index(&obj)
                .ok_or_else(|| Error::MalformedDiagram(format!("unknown object `{obj}`")))?;
            if space_of[o].replace(s).is_some() {
                return Err(Error::MalformedDiagram(format!(
                    "object `{obj}` assigned twice"
                )));
            }
        }
        let spaces: Vec<SpaceRef> = space_of
            .into_iter()
            .enumerate()
            .map(|(o, s)| {
                s.ok_or_else(|| {
                    Error::MalformedDiagram(format!("object `{}` has no space", shape.objects()[o]))
                })
            })
            .collect::<Result<_>>()?;

        let mut map_of: Vec<Option<MapKind>> = vec![None; shape.morphisms().len()];
        for (mor, m) in maps {
            let i = shape
                .morphism_index(&mor)
                .ok_or_else(|| Error::MalformedDiagram(format!("unknown morphism `{mor}`")))?;
            if map_of[i].replace(m).is_some() {
                return Err(Error::MalformedDiagram(format!(
                    "morphism `{mor}` assigned twice"
                )));
            }
        }
        let maps: Vec<MapKind> = map_of
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::MalformedDiagram(format!(
                        "morphism `{}` has no map",
                        shape.morphisms()[i].id
                    ))
                })
            })
            .collect::<Result<_>>()?;

        let d = Diagram {
            shape,
            spaces,
            maps,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn shape(&self) -> &FiniteCategory {
        &self.shape
    }

    pub fn space(&self, object: usize) -> &SpaceRef {
        &self.spaces[object]
    }

    pub fn spaces(&self) -> &[SpaceRef] {
        &self.spaces
    }

    pub fn map(&self, morphism: usize) -> &MapKind {
        &self.maps[morphism]
    }

    pub fn all_finite(&self) -> bool {
        self.spaces.iter().all(|s| s.is_finite())
    }

    pub fn all_poly(&self) -> bool {
        self.spaces.iter().all(|s| !s.is_finite())
    }

    /// Applies the image of `morphism` to a point of its source carrier.
    pub fn apply(&self, morphism: usize, x: &SpacePoint) -> Result<SpacePoint> {
        match (&self.maps[morphism], x) {
            (MapKind::Table(t), SpacePoint::Finite(i)) => {
                Ok(SpacePoint::Finite(*t.get(*i).ok_or_else(|| {
                    Error::MalformedDiagram(format!("point {i} outside table domain"))
                })?))
            }
            (MapKind::Affine(f), SpacePoint::Poly(p)) => Ok(SpacePoint::Poly(f.apply(p))),
            _ => Err(Error::MalformedDiagram(
                "map kind does not match point kind".into(),
            )),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Error::MalformedDiagram(msg);
        // Kind and totality checks per morphism.
        for (i, m) in self.shape.morphisms().iter().enumerate() {
            let src = &self.spaces[m.src];
            let dst = &self.spaces[m.dst];
            match (&self.maps[i], &src.kind, &dst.kind) {
                (MapKind::Table(t), SpaceKind::Finite { points: np }, SpaceKind::Finite { points: nq }) => {
                    if t.len() != *np {
                        return Err(bad(format!(
                            "table for `{}` has {} entries, source has {} points",
                            m.id,
                            t.len(),
                            np
                        )));
                    }
                    if let Some(v) = t.iter().find(|v| **v >= *nq) {
                        return Err(bad(format!(
                            "table for `{}` hits point {} outside target",
                            m.id, v
                        )));
                    }
                }
                (MapKind::Affine(f), SpaceKind::Poly(p), SpaceKind::Poly(q)) => {
                    if f.source_dim() != p.dim() || f.target_dim() != q.dim() {
                        return Err(bad(format!("affine map for `{}` has wrong shape", m.id)));
                    }
                    // Affine maps agreeing on vertices agree on the hull, so
                    // vertex containment is an exact range check.
                    for v in p.vertices() {
                        if !q.contains_point(&f.apply(v)) {
                            return Err(bad(format!(
                                "affine map for `{}` sends a vertex outside the target",
                                m.id
                            )));
                        }
                    }
                }
                _ => {
                    return Err(bad(format!(
                        "map kind for `{}` does not match its endpoint kinds",
                        m.id
                    )))
                }
            }
        }
        // Identities act as identities.
        for (o, s) in self.spaces.iter().enumerate() {
            let idm = self.shape.identity(o);
            if self.maps[idm] != MapKind::identity_for(s) {
                // Table identity is syntactic; affine identity is checked
                // pointwise on vertices.
                if let (MapKind::Affine(f), SpaceKind::Poly(p)) = (&self.maps[idm], &s.kind) {
                    if p.vertices().iter().all(|v| &f.apply(v) == v) {
                        continue;
                    }
                }
                return Err(bad(format!(
                    "identity of `{}` is not the identity map",
                    s.label
                )));
            }
        }
        // Functoriality: map(g∘f) = map(g) ∘ map(f), pointwise on source
        // points or vertices.
        for (fi, f) in self.shape.morphisms().iter().enumerate() {
            for (gi, g) in self.shape.morphisms().iter().enumerate() {
                if g.src != f.dst {
                    continue;
                }
                let gf = self
                    .shape
                    .composite(gi, fi)
                    .expect("validated category is total");
                let probe_points: Vec<SpacePoint> = match &self.spaces[f.src].kind {
                    SpaceKind::Finite { points } => {
                        (0..*points).map(SpacePoint::Finite).collect()
                    }
                    SpaceKind::Poly(p) => p
                        .vertices()
                        .iter()
                        .map(|v| SpacePoint::Poly(v.clone()))
                        .collect(),
                };
                for x in probe_points {
                    let two_step = self.apply(gi, &self.apply(fi, &x)?)?;
                    let one_step = self.apply(gf, &x)?;
                    if two_step != one_step {
                        return Err(bad(format!(
                            "functoriality fails: {} after {} differs from {}",
                            g.id,
                            f.id,
                            self.shape.morphisms()[gf].id
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_object_identity_only_is_valid() {
        let c = FiniteCategory::new(
            vec!["A".into()],
            vec![("id_A".into(), "A".into(), "A".into())],
            vec![("A".into(), "id_A".into())],
            vec![("id_A".into(), "id_A".into(), "id_A".into())],
        )
        .unwrap();
        assert!(c.validate().is_ok());
    }

    #[test]
    fn cospan_shape_is_valid() {
        assert!(FiniteCategory::cospan().validate().is_ok());
        assert!(FiniteCategory::parallel_pair().validate().is_ok());
        assert!(FiniteCategory::chain(3).validate().is_ok());
    }

    #[test]
    fn missing_identity_composition_is_malformed() {
        let c = FiniteCategory::new(
            vec!["A".into(), "B".into()],
            vec![
                ("id_A".into(), "A".into(), "A".into()),
                ("id_B".into(), "B".into(), "B".into()),
                ("f".into(), "A".into(), "B".into()),
            ],
            vec![("A".into(), "id_A".into()), ("B".into(), "id_B".into())],
            vec![
                ("id_A".into(), "id_A".into(), "id_A".into()),
                ("id_B".into(), "id_B".into(), "id_B".into()),
                ("f".into(), "id_A".into(), "f".into()),
                // (id_B, f) entry missing
            ],
        )
        .unwrap();
        match c.validate() {
            Err(Error::MalformedCategory { law, .. }) => assert_eq!(law, "compose-total"),
            other => panic!("expected MalformedCategory, got {other:?}"),
        }
    }

    #[test]
    fn non_identity_identity_map_is_rejected() {
        let shape = FiniteCategory::discrete(&["A"]);
        let err = Diagram::new(
            shape,
            vec![("A".into(), SpaceRef::finite("A", 2))],
            vec![("id_A".into(), MapKind::Table(vec![0, 0]))],
        );
        assert!(matches!(err, Err(Error::MalformedDiagram(_))));
    }

    #[test]
    fn non_functorial_diagram_is_rejected() {
        let shape = FiniteCategory::chain(2);
        // a0_2 must equal a1_2 ∘ a0_1 pointwise; make it differ.
        let err = Diagram::new(
            shape,
            vec![
                ("X0".into(), SpaceRef::finite("X0", 2)),
                ("X1".into(), SpaceRef::finite("X1", 2)),
                ("X2".into(), SpaceRef::finite("X2", 2)),
            ],
            vec![
                ("id_X0".into(), MapKind::Table(vec![0, 1])),
                ("id_X1".into(), MapKind::Table(vec![0, 1])),
                ("id_X2".into(), MapKind::Table(vec![0, 1])),
                ("a0_1".into(), MapKind::Table(vec![0, 1])),
                ("a1_2".into(), MapKind::Table(vec![0, 1])),
                ("a0_2".into(), MapKind::Table(vec![1, 0])),
            ],
        );
        assert!(matches!(err, Err(Error::MalformedDiagram(_))));
    }
}
