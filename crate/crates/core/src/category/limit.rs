//! Limits of diagrams and characteristic maps of cones.
//!
//! The limit of an all-finite diagram is the set of morphism-compatible
//! tuples inside the product of the carriers, in lexicographic order by
//! object identifier. For all-polytope diagrams it is the product coordinate
//! space cut out by the object facets and the affine compatibility equations,
//! with the V-form recovered by exact vertex enumeration.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{Point, Rat};
use crate::spaces::{AffineMap, HRep, LinearForm, Polytope};

use super::{Diagram, MapKind, SpaceKind, SpacePoint, SpaceRef};

/// A point of a limit carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitPoint {
    /// One carrier-point index per object, in object order.
    Finite(Vec<usize>),
    /// Concatenated block coordinates, in object order.
    Poly(Point),
}

#[derive(Debug, Clone)]
pub enum LimitCarrier {
    Finite {
        tuples: Vec<Vec<usize>>,
    },
    Poly {
        /// `None` when the limit is empty.
        polytope: Option<Polytope>,
        hrep: HRep,
        /// Coordinate block `(start, len)` per object.
        blocks: Vec<(usize, usize)>,
    },
}

/// The limit cone: carrier plus one projection per object.
#[derive(Debug, Clone)]
pub struct LimitSpace {
    pub carrier: LimitCarrier,
    pub projections: Vec<MapKind>,
}

impl LimitSpace {
    pub fn is_empty(&self) -> bool {
        match &self.carrier {
            LimitCarrier::Finite { tuples } => tuples.is_empty(),
            LimitCarrier::Poly { polytope, .. } => polytope.is_none(),
        }
    }

    pub fn finite_tuples(&self) -> Option<&[Vec<usize>]> {
        match &self.carrier {
            LimitCarrier::Finite { tuples } => Some(tuples),
            _ => None,
        }
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match &self.carrier {
            LimitCarrier::Poly { polytope, .. } => polytope.as_ref(),
            _ => None,
        }
    }

    pub fn blocks(&self) -> Option<&[(usize, usize)]> {
        match &self.carrier {
            LimitCarrier::Poly { blocks, .. } => Some(blocks),
            _ => None,
        }
    }

    /// Checks carrier membership of a candidate point.
    pub fn contains(&self, p: &LimitPoint) -> bool {
        match (&self.carrier, p) {
            (LimitCarrier::Finite { tuples }, LimitPoint::Finite(t)) => {
                tuples.binary_search(t).is_ok()
            }
            (LimitCarrier::Poly { hrep, .. }, LimitPoint::Poly(x)) => hrep.contains(x),
            _ => false,
        }
    }
}

/// Computes the limit of a diagram. An empty carrier is a legal, flagged
/// outcome (`is_empty`), not an error.
pub fn compute_limit(d: &Diagram) -> Result<LimitSpace> {
    if d.all_finite() {
        compute_limit_finite(d)
    } else if d.all_poly() {
        compute_limit_poly(d)
    } else {
        Err(Error::MalformedDiagram(
            "limits of mixed finite/polytope diagrams are not supported".into(),
        ))
    }
}

fn compute_limit_finite(d: &Diagram) -> Result<LimitSpace> {
    let sizes: Vec<usize> = d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            SpaceKind::Finite { points } => *points,
            _ => unreachable!("checked all_finite"),
        })
        .collect();

    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; sizes.len()];
    'outer: loop {
        if tuple_compatible(d, &current)? {
            tuples.push(current.clone());
        }
        // Lexicographic successor with the last object fastest.
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < sizes[pos] {
                break;
            }
            current[pos] = 0;
        }
    }

    let projections: Vec<MapKind> = (0..sizes.len())
        .map(|o| MapKind::Table(tuples.iter().map(|t| t[o]).collect()))
        .collect();

    Ok(LimitSpace {
        carrier: LimitCarrier::Finite { tuples },
        projections,
    })
}

fn tuple_compatible(d: &Diagram, tuple: &[usize]) -> Result<bool> {
    for (mi, m) in d.shape().morphisms().iter().enumerate() {
        if d.shape().is_identity(mi) {
            continue;
        }
        let image = d.apply(mi, &SpacePoint::Finite(tuple[m.src]))?;
        if image != SpacePoint::Finite(tuple[m.dst]) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn compute_limit_poly(d: &Diagram) -> Result<LimitSpace> {
    let polys: Vec<&Polytope> = d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            SpaceKind::Poly(p) => p,
            _ => unreachable!("checked all_poly"),
        })
        .collect();

    let mut blocks = Vec::with_capacity(polys.len());
    let mut total = 0usize;
    for p in &polys {
        blocks.push((total, p.dim()));
        total += p.dim();
    }

    let embed = |block: usize, form: &LinearForm| -> LinearForm {
        let (start, len) = blocks[block];
        let mut coeffs = vec![Rat::zero(); total];
        coeffs[start..start + len].clone_from_slice(&form.coeffs);
        LinearForm::new(coeffs, form.rhs.clone())
    };

    let mut equalities: Vec<LinearForm> = Vec::new();
    let mut inequalities: Vec<LinearForm> = Vec::new();
    for (o, p) in polys.iter().enumerate() {
        let h = p.hrep();
        equalities.extend(h.equalities.iter().map(|f| embed(o, f)));
        inequalities.extend(h.inequalities.iter().map(|f| embed(o, f)));
    }
    // One affine compatibility equation per morphism and target coordinate:
    // matrix·x_src + offset = x_dst.
    for (mi, m) in d.shape().morphisms().iter().enumerate() {
        if d.shape().is_identity(mi) {
            continue;
        }
        let MapKind::Affine(f) = d.map(mi) else {
            unreachable!("polytope diagrams carry affine maps");
        };
        let (s_start, _) = blocks[m.src];
        let (d_start, d_len) = blocks[m.dst];
        for r in 0..d_len {
            let mut coeffs = vec![Rat::zero(); total];
            for (j, c) in f.matrix[r].iter().enumerate() {
                coeffs[s_start + j] = c.clone();
            }
            coeffs[d_start + r] = -Rat::one();
            equalities.push(LinearForm::new(coeffs, -f.offset[r].clone()));
        }
    }

    let polytope = Polytope::from_hrep(total, &equalities, &inequalities)?;
    let hrep = HRep {
        equalities,
        inequalities,
    };
    let projections: Vec<MapKind> = blocks
        .iter()
        .map(|&(start, len)| MapKind::Affine(AffineMap::block_projection(total, start, len)))
        .collect();

    Ok(LimitSpace {
        carrier: LimitCarrier::Poly {
            polytope,
            hrep,
            blocks,
        },
        projections,
    })
}

/// A cone over a diagram: an apex space with one leg per object.
#[derive(Debug, Clone)]
pub struct Cone {
    pub apex: SpaceRef,
    pub legs: Vec<MapKind>, // indexed by object
}

impl Cone {
    /// The limit cone itself: apex is the carrier, legs are the projections.
    pub fn limit_cone(d: &Diagram, limit: &LimitSpace) -> Cone {
        let apex = match &limit.carrier {
            LimitCarrier::Finite { tuples } => SpaceRef::finite("lim", tuples.len().max(1)),
            LimitCarrier::Poly { polytope, .. } => SpaceRef::poly(
                "lim",
                polytope.clone().unwrap_or_else(|| {
                    Polytope::point(vec![Rat::zero(); d.spaces().iter().map(|_| 0).sum()])
                }),
            ),
        };
        Cone {
            apex,
            legs: limit.projections.clone(),
        }
    }

    fn apex_probe_points(&self) -> Vec<SpacePoint> {
        match &self.apex.kind {
            SpaceKind::Finite { points } => (0..*points).map(SpacePoint::Finite).collect(),
            SpaceKind::Poly(p) => p
                .vertices()
                .iter()
                .map(|v| SpacePoint::Poly(v.clone()))
                .collect(),
        }
    }

    fn apply_leg(&self, object: usize, x: &SpacePoint) -> Result<SpacePoint> {
        match (&self.legs[object], x) {
            (MapKind::Table(t), SpacePoint::Finite(i)) => t
                .get(*i)
                .map(|&j| SpacePoint::Finite(j))
                .ok_or_else(|| Error::NotACone(format!("apex point {i} outside leg table"))),
            (MapKind::Affine(f), SpacePoint::Poly(p)) => Ok(SpacePoint::Poly(f.apply(p))),
            _ => Err(Error::NotACone(
                "leg kind does not match apex point kind".into(),
            )),
        }
    }

    /// Checks that every leg commutes with every diagram morphism, pointwise
    /// on apex points or vertices.
    pub fn validate(&self, d: &Diagram) -> Result<()> {
        if self.legs.len() != d.shape().objects().len() {
            return Err(Error::NotACone("one leg per object required".into()));
        }
        for (mi, m) in d.shape().morphisms().iter().enumerate() {
            if d.shape().is_identity(mi) {
                continue;
            }
            for x in self.apex_probe_points() {
                let via_src = d.apply(mi, &self.apply_leg(m.src, &x)?)?;
                let direct = self.apply_leg(m.dst, &x)?;
                if via_src != direct {
                    return Err(Error::NotACone(format!(
                        "legs disagree along `{}`",
                        m.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Evaluates the characteristic map of a cone at an apex point: the tuple of
/// leg images, which lands in the limit carrier.
pub fn characteristic_point(
    d: &Diagram,
    limit: &LimitSpace,
    cone: &Cone,
    x: &SpacePoint,
) -> Result<LimitPoint> {
    cone.validate(d)?;
    match &cone.apex.kind {
        SpaceKind::Finite { points } => {
            let SpacePoint::Finite(i) = x else {
                return Err(Error::NotACone("apex point kind mismatch".into()));
            };
            if *i >= *points {
                return Err(Error::NotACone(format!("point {i} outside apex")));
            }
        }
        SpaceKind::Poly(p) => {
            let SpacePoint::Poly(coords) = x else {
                return Err(Error::NotACone("apex point kind mismatch".into()));
            };
            if !p.contains_point(coords) {
                return Err(Error::NotACone("point outside apex polytope".into()));
            }
        }
    }

    let images: Vec<SpacePoint> = (0..d.shape().objects().len())
        .map(|o| cone.apply_leg(o, x))
        .collect::<Result<_>>()?;

    let point = if d.all_finite() {
        let tuple: Vec<usize> = images
            .iter()
            .map(|p| match p {
                SpacePoint::Finite(i) => Ok(*i),
                _ => Err(Error::NotACone("leg image kind mismatch".into())),
            })
            .collect::<Result<_>>()?;
        LimitPoint::Finite(tuple)
    } else {
        let mut coords: Point = Vec::new();
        for p in &images {
            match p {
                SpacePoint::Poly(c) => coords.extend(c.iter().cloned()),
                _ => return Err(Error::NotACone("leg image kind mismatch".into())),
            }
        }
        LimitPoint::Poly(coords)
    };

    if !limit.contains(&point) {
        return Err(Error::NotInLimit(
            "characteristic image misses the carrier".into(),
        ));
    }
    Ok(point)
}
