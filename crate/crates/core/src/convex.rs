//! The convex-compacta functor on polytopes and its family hyperspaces:
//! projections of convex sets, the hull-projection law, open lifting of
//! characteristic-map targets, pullback surjectivity witnesses, the
//! hull retraction on families, Vietoris basic-set predicates, and linked
//! families of convex sets.
//!
//! Morphisms are affine maps throughout, so images of convex sets stay convex
//! and every predicate is decidable in exact arithmetic.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::category::{Diagram, LimitSpace, MapKind, SpaceKind};
use crate::error::{Error, Result};
use crate::rat::{fmt_point, Point, Rat};
use crate::spaces::{AffineMap, LinearForm, LpProblem, Polytope, Rel};

/// Applies the convex-set action of an affine map: the image polytope.
/// The set must lie in the map's source polytope.
pub fn cc_map(f: &AffineMap, c: &Polytope, source: &Polytope) -> Result<Polytope> {
    if !source.contains_polytope(c) {
        return Err(Error::DimensionMismatch(
            "set is not contained in the map's source".into(),
        ));
    }
    c.affine_image(f)
}

/// Outcome of the hull-projection law check on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullProjectionVerdict {
    /// π₁(B) ⊆ C, decided on the given points.
    pub points_inside: bool,
    /// π₁(conv B) ⊆ C.
    pub hull_inside: bool,
    /// When C's vertices all lie in π₁(B) (so the reverse inclusion holds),
    /// whether π₁(conv B) = C exactly.
    pub equality: Option<bool>,
}

impl HullProjectionVerdict {
    /// The law: points inside forces the hull projection inside, and in the
    /// equality regime the projection is exactly C. A `false` here is a
    /// build-stopping inconsistency.
    pub fn consistent(&self) -> bool {
        (!self.points_inside || self.hull_inside) && self.equality != Some(false)
    }
}

/// Checks the hull-projection law for a finite point set `b` in a product
/// space whose first factor has `first_block` coordinates, against a convex
/// `c` in the first factor.
pub fn hull_projection_check(b: &[Point], first_block: usize, c: &Polytope) -> Result<HullProjectionVerdict> {
    if b.is_empty() {
        return Err(Error::DimensionMismatch("empty point set".into()));
    }
    let total = b[0].len();
    if first_block > total || c.dim() != first_block {
        return Err(Error::DimensionMismatch(
            "projection block does not match the convex set".into(),
        ));
    }
    let projected: Vec<Point> = b.iter().map(|p| p[..first_block].to_vec()).collect();
    let points_inside = projected.iter().all(|p| c.contains_point(p));
    let hull = Polytope::conv_hull(total, b)?;
    let proj = AffineMap::block_projection(total, 0, first_block);
    let hull_projection = hull.affine_image(&proj)?;
    let hull_inside = c.contains_polytope(&hull_projection);
    let reverse = c
        .vertices()
        .iter()
        .all(|v| projected.iter().any(|p| p == v));
    let equality = if points_inside && reverse {
        Some(&hull_projection == c)
    } else {
        None
    };
    Ok(HullProjectionVerdict {
        points_inside,
        hull_inside,
        equality,
    })
}

fn limit_polytope<'a>(limit: &'a LimitSpace) -> Result<(&'a Polytope, &'a [(usize, usize)])> {
    let poly = limit.polytope().ok_or(Error::EmptyLimit)?;
    let blocks = limit
        .blocks()
        .ok_or_else(|| Error::NotInLimit("limit carrier is not a polytope".into()))?;
    Ok((poly, blocks))
}

fn object_polys(d: &Diagram) -> Result<Vec<&Polytope>> {
    d.spaces()
        .iter()
        .map(|s| match &s.kind {
            SpaceKind::Poly(p) => Ok(p),
            _ => Err(Error::InapplicableFunctor {
                functor: "cc".into(),
                reason: format!("object `{}` is not a polytope", s.label),
            }),
        })
        .collect()
}

/// Compatibility of a polytope tuple: images along every morphism match.
pub fn polytope_tuple_compatible(d: &Diagram, tuple: &[Polytope]) -> Result<bool> {
    let objects = object_polys(d)?;
    if tuple.len() != objects.len() {
        return Err(Error::DimensionMismatch(
            "one polytope per object required".into(),
        ));
    }
    for (t, o) in tuple.iter().zip(objects.iter()) {
        if !o.contains_polytope(t) {
            return Ok(false);
        }
    }
    for (mi, m) in d.shape().morphisms().iter().enumerate() {
        if d.shape().is_identity(mi) {
            continue;
        }
        let MapKind::Affine(f) = d.map(mi) else {
            unreachable!("polytope diagrams carry affine maps")
        };
        if tuple[m.src].affine_image(f)? != tuple[m.dst] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Characteristic map of the convex-set functor: projections of a
/// sub-polytope of the limit along every leg. Compatibility of the result is
/// verified exactly.
pub fn chi_cc(d: &Diagram, limit: &LimitSpace, c: &Polytope) -> Result<Vec<Polytope>> {
    let (lim_poly, blocks) = limit_polytope(limit)?;
    if !lim_poly.contains_polytope(c) {
        return Err(Error::NotInLimit(format!(
            "set {} is not inside the limit polytope",
            c
        )));
    }
    let total = lim_poly.dim();
    let tuple: Vec<Polytope> = blocks
        .iter()
        .map(|&(start, len)| c.affine_image(&AffineMap::block_projection(total, start, len)))
        .collect::<Result<_>>()?;
    if !polytope_tuple_compatible(d, &tuple)? {
        return Err(Error::IncompatibleTuple(
            "projection tuple fails a morphism equation".into(),
        ));
    }
    Ok(tuple)
}

/// The pullback of per-object constraint sets through the limit: all carrier
/// points whose every block lies in the prescribed set. `None` when empty.
pub fn pullback_polytope(
    limit: &LimitSpace,
    constraints: &[Polytope],
) -> Result<Option<Polytope>> {
    let (lim_poly, blocks) = limit_polytope(limit)?;
    let total = lim_poly.dim();
    if constraints.len() != blocks.len() {
        return Err(Error::DimensionMismatch(
            "one constraint set per object required".into(),
        ));
    }
    let mut equalities: Vec<LinearForm> = Vec::new();
    let mut inequalities: Vec<LinearForm> = Vec::new();
    let embed = |start: usize, form: &LinearForm| -> LinearForm {
        let mut coeffs = vec![Rat::zero(); total];
        coeffs[start..start + form.coeffs.len()].clone_from_slice(&form.coeffs);
        LinearForm::new(coeffs, form.rhs.clone())
    };
    for (poly, &(start, _)) in constraints.iter().zip(blocks.iter()) {
        let h = poly.hrep();
        equalities.extend(h.equalities.iter().map(|f| embed(start, f)));
        inequalities.extend(h.inequalities.iter().map(|f| embed(start, f)));
    }
    let lim_h = lim_poly.hrep();
    equalities.extend(lim_h.equalities.iter().cloned());
    inequalities.extend(lim_h.inequalities.iter().cloned());
    Polytope::from_hrep(total, &equalities, &inequalities)
}

/// The canonical surjectivity witness for a compatible polytope tuple: the
/// pullback polytope. Its projections are re-checked against the target;
/// a mismatch is reported, never silently accepted — if the maximal
/// candidate misses, no preimage exists at all.
pub fn surjectivity_witness_cc(
    d: &Diagram,
    limit: &LimitSpace,
    targets: &[Polytope],
) -> Result<Polytope> {
    if !polytope_tuple_compatible(d, targets)? {
        return Err(Error::IncompatibleTuple(
            "target tuple fails a morphism equation".into(),
        ));
    }
    let witness = pullback_polytope(limit, targets)?.ok_or(Error::EmptyWitness)?;
    let tuple = chi_cc(d, limit, &witness)?;
    for (o, (got, want)) in tuple.iter().zip(targets.iter()).enumerate() {
        if got != want {
            return Err(Error::WitnessProjectionMismatch {
                object: d.shape().objects()[o].clone(),
                detail: format!("pullback projects to {}, target is {}", got, want),
            });
        }
    }
    Ok(witness)
}

/// Lifts a characteristic-map target near a base set: the base vertices are
/// moved into the target-constrained pullback region by nearest-point
/// programs, one generator point is added on the fiber over every target
/// vertex, and the hull of it all is the lift. Projections of the hull stay
/// inside the targets because the hull is taken inside the pullback, and the
/// added generators force equality. Returns the lift and its distance to the
/// base.
pub fn open_lift_cc(
    d: &Diagram,
    limit: &LimitSpace,
    base: &Polytope,
    targets: &[Polytope],
) -> Result<(Polytope, Rat)> {
    if !polytope_tuple_compatible(d, targets)? {
        return Err(Error::IncompatibleTuple(
            "lift target fails a morphism equation".into(),
        ));
    }
    let (lim_poly, blocks) = limit_polytope(limit)?;
    if !lim_poly.contains_polytope(base) {
        return Err(Error::NotInLimit("lift base is not inside the limit".into()));
    }
    let total = lim_poly.dim();
    let region = pullback_polytope(limit, targets)?
        .ok_or_else(|| Error::LiftFailed("target pullback region is empty".into()))?;

    let mut points: Vec<Point> = base
        .vertices()
        .iter()
        .map(|v| {
            nearest_point_in(&region, None, v).expect("nonempty region has nearest points")
        })
        .collect();

    for (o, target) in targets.iter().enumerate() {
        let (start, len) = blocks[o];
        for u in target.vertices() {
            // Anchor: the moved point whose o-block is closest to u.
            let anchor = points
                .iter()
                .min_by(|a, b| {
                    let da = crate::rat::linf_dist(&a[start..start + len], u);
                    let db = crate::rat::linf_dist(&b[start..start + len], u);
                    da.cmp(&db).then_with(|| a.cmp(b))
                })
                .expect("base polytope has vertices")
                .clone();
            let fiber_point =
                nearest_point_in(&region, Some((start, u)), &anchor).ok_or_else(|| {
                    Error::LiftFailed(format!(
                        "no pullback point over target vertex {} at object `{}`",
                        fmt_point(u),
                        d.shape().objects()[o]
                    ))
                })?;
            points.push(fiber_point);
        }
    }

    let lift = Polytope::conv_hull(total, &points)?;
    let tuple = chi_cc(d, limit, &lift)?;
    for (o, (got, want)) in tuple.iter().zip(targets.iter()).enumerate() {
        if got != want {
            return Err(Error::LiftFailed(format!(
                "lift projects to {} at object `{}`, target is {}",
                got,
                d.shape().objects()[o],
                want
            )));
        }
    }
    let distance = lift.hausdorff_distance(base)?;
    Ok((lift, distance))
}

/// Nearest point to `anchor` within the region (optionally restricted to the
/// fiber `x_block = u`). "Nearest" is staged: least max-norm distance, then
/// least L1 distance among those — so moved points hug the anchor instead of
/// drifting along the optimal face. Deterministic by the fixed pivot order.
/// `None` if the (restricted) region is empty.
fn nearest_point_in(
    region: &Polytope,
    fiber: Option<(usize, &[Rat])>,
    anchor: &[Rat],
) -> Option<Point> {
    let dim = region.dim();
    let n = region.vertices().len();
    // Variables: x (dim, free), λ (n, nonneg), s (dim, nonneg L1 slack), t.
    let nv = dim + n + dim + 1;
    let t = nv - 1;
    let mut lp = LpProblem::new(nv);
    lp.require_nonneg_range(dim..dim + n + dim);
    for coord in 0..dim {
        let mut row = vec![Rat::zero(); nv];
        row[coord] = Rat::one();
        for (j, v) in region.vertices().iter().enumerate() {
            row[dim + j] = -v[coord].clone();
        }
        lp.constrain(row, Rel::Eq, Rat::zero());
    }
    let mut sum = vec![Rat::zero(); nv];
    for c in sum.iter_mut().skip(dim).take(n) {
        *c = Rat::one();
    }
    lp.constrain(sum, Rel::Eq, Rat::one());
    if let Some((start, u)) = fiber {
        for (i, coord_val) in u.iter().enumerate() {
            lp.fix(start + i, coord_val.clone());
        }
    }
    for coord in 0..dim {
        // |x_c − anchor_c| ≤ s_c and s_c ≤ t.
        let s = dim + n + coord;
        let mut up = vec![Rat::zero(); nv];
        up[coord] = Rat::one();
        up[s] = -Rat::one();
        lp.constrain(up, Rel::Le, anchor[coord].clone());
        let mut down = vec![Rat::zero(); nv];
        down[coord] = -Rat::one();
        down[s] = -Rat::one();
        lp.constrain(down, Rel::Le, -anchor[coord].clone());
        let mut cap = vec![Rat::zero(); nv];
        cap[s] = Rat::one();
        cap[t] = -Rat::one();
        lp.constrain(cap, Rel::Le, Rat::zero());
    }
    let mut max_obj = vec![Rat::zero(); nv];
    max_obj[t] = Rat::one();
    let (tstar, _) = lp.minimize(&max_obj).optimal()?;
    lp.fix(t, tstar);
    let mut l1_obj = vec![Rat::zero(); nv];
    for c in l1_obj.iter_mut().skip(dim + n).take(dim) {
        *c = Rat::one();
    }
    let (_, point) = lp.minimize(&l1_obj).optimal()?;
    Some(point[..dim].to_vec())
}

/// An up-closed family of convex closed subsets of an ambient polytope,
/// stored by its minimal-generator antichain.
#[derive(Debug, Clone)]
pub struct ConvexFamily {
    ambient: Polytope,
    generators: Vec<Polytope>,
    is_linked: bool,
    maximal_within_pool: Option<bool>,
}

impl PartialEq for ConvexFamily {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.generators == other.generators
    }
}
impl Eq for ConvexFamily {}

impl std::fmt::Display for ConvexFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", gens.join(", "))
    }
}

impl ConvexFamily {
    pub fn new(ambient: Polytope, generators: Vec<Polytope>) -> Result<ConvexFamily> {
        if generators.is_empty() {
            return Err(Error::DimensionMismatch(
                "a family needs at least one generator".into(),
            ));
        }
        for g in &generators {
            if !ambient.contains_polytope(g) {
                return Err(Error::DimensionMismatch(format!(
                    "generator {} is not inside the ambient polytope",
                    g
                )));
            }
        }
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        // Minimal generators only: drop proper supersets.
        let minimal: Vec<Polytope> = gens
            .iter()
            .filter(|g| {
                !gens
                    .iter()
                    .any(|h| h != *g && g.contains_polytope(h))
            })
            .cloned()
            .collect();
        let is_linked = minimal
            .iter()
            .enumerate()
            .all(|(i, a)| minimal.iter().skip(i + 1).all(|b| a.intersects(b)));
        Ok(ConvexFamily {
            ambient,
            generators: minimal,
            is_linked,
            maximal_within_pool: None,
        })
    }

    pub fn principal(ambient: Polytope, generator: Polytope) -> Result<ConvexFamily> {
        ConvexFamily::new(ambient, vec![generator])
    }

    pub fn ambient(&self) -> &Polytope {
        &self.ambient
    }

    pub fn generators(&self) -> &[Polytope] {
        &self.generators
    }

    pub fn is_linked(&self) -> bool {
        self.is_linked
    }

    pub fn maximal_within_pool(&self) -> Option<bool> {
        self.maximal_within_pool
    }

    /// Membership in the denoted family: the set contains some generator.
    pub fn member(&self, c: &Polytope) -> bool {
        self.ambient.contains_polytope(c)
            && self.generators.iter().any(|g| c.contains_polytope(g))
    }
}

/// The hull retraction: replaces every generator point set by its convex
/// hull and renormalizes to an antichain. Fixes families of convex sets, so
/// applying it to a `ConvexFamily`'s vertex data is the identity.
pub fn r_cc(ambient: &Polytope, generators: &[Vec<Point>]) -> Result<ConvexFamily> {
    let hulls: Vec<Polytope> = generators
        .iter()
        .map(|pts| Polytope::conv_hull(ambient.dim(), pts))
        .collect::<Result<_>>()?;
    ConvexFamily::new(ambient.clone(), hulls)
}

/// `r_cc` applied to the generator vertex sets of an existing family.
pub fn r_cc_family(family: &ConvexFamily) -> Result<ConvexFamily> {
    let gens: Vec<Vec<Point>> = family
        .generators()
        .iter()
        .map(|g| g.vertices().to_vec())
        .collect();
    r_cc(family.ambient(), &gens)
}

/// Functorial action on convex families: up-closure of generator images.
pub fn g_cc_map(
    f: &AffineMap,
    family: &ConvexFamily,
    target_ambient: &Polytope,
) -> Result<ConvexFamily> {
    let images: Vec<Polytope> = family
        .generators()
        .iter()
        .map(|g| g.affine_image(f))
        .collect::<Result<_>>()?;
    ConvexFamily::new(target_ambient.clone(), images)
}

/// Characteristic map of the convex-family functor: per object, the family
/// generated by the projections of the generators.
pub fn chi_g_cc(d: &Diagram, limit: &LimitSpace, family: &ConvexFamily) -> Result<Vec<ConvexFamily>> {
    let (lim_poly, blocks) = limit_polytope(limit)?;
    if family.ambient() != lim_poly {
        return Err(Error::NotInLimit(
            "family does not live on the limit polytope".into(),
        ));
    }
    let objects = object_polys(d)?;
    let total = lim_poly.dim();
    blocks
        .iter()
        .zip(objects.iter())
        .map(|(&(start, len), obj)| {
            let proj = AffineMap::block_projection(total, start, len);
            g_cc_map(&proj, family, obj)
        })
        .collect()
}

/// Compatibility of a tuple of convex families under the diagram maps.
pub fn family_tuple_compatible(d: &Diagram, tuple: &[ConvexFamily]) -> Result<bool> {
    let objects = object_polys(d)?;
    if tuple.len() != objects.len() {
        return Err(Error::DimensionMismatch(
            "one family per object required".into(),
        ));
    }
    for (fam, obj) in tuple.iter().zip(objects.iter()) {
        if fam.ambient() != *obj {
            return Ok(false);
        }
    }
    for (mi, m) in d.shape().morphisms().iter().enumerate() {
        if d.shape().is_identity(mi) {
            continue;
        }
        let MapKind::Affine(f) = d.map(mi) else {
            unreachable!("polytope diagrams carry affine maps")
        };
        let image = g_cc_map(f, &tuple[m.src], objects[m.dst])?;
        if image != tuple[m.dst] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The canonical preimage family for a compatible tuple of convex families:
/// generated by the pullbacks of every choice of generators, one per object.
/// The characteristic image is re-checked exactly; mismatches are reported.
pub fn d_c_witness(
    d: &Diagram,
    limit: &LimitSpace,
    targets: &[ConvexFamily],
) -> Result<ConvexFamily> {
    if !family_tuple_compatible(d, targets)? {
        return Err(Error::IncompatibleTuple(
            "family tuple fails a morphism equation".into(),
        ));
    }
    let (lim_poly, _) = limit_polytope(limit)?;
    let choices: Vec<Vec<&Polytope>> = targets
        .iter()
        .map(|f| f.generators().iter().collect())
        .collect();
    let mut pullbacks: Vec<Polytope> = Vec::new();
    for combo in choices.iter().multi_cartesian_product() {
        let sets: Vec<Polytope> = combo.iter().map(|p| (**p).clone()).collect();
        if let Some(p) = pullback_polytope(limit, &sets)? {
            pullbacks.push(p);
        }
    }
    if pullbacks.is_empty() {
        return Err(Error::EmptyWitness);
    }
    // The pullbacks are convex already; passing their vertex sets through
    // the hull retraction keeps the construction uniform with discrete input.
    let gen_points: Vec<Vec<Point>> = pullbacks.iter().map(|p| p.vertices().to_vec()).collect();
    let witness = r_cc(lim_poly, &gen_points)?;
    let image = chi_g_cc(d, limit, &witness)?;
    for (o, (got, want)) in image.iter().zip(targets.iter()).enumerate() {
        if got != want {
            return Err(Error::WitnessProjectionMismatch {
                object: d.shape().objects()[o].clone(),
                detail: format!("witness projects to {}, target is {}", got, want),
            });
        }
    }
    Ok(witness)
}

/// Distance-controlled preimage of a family tuple near a base family: each
/// base generator is lifted separately into the pullback region of the
/// target generators matched to its own projections (nearest by Hausdorff
/// distance), and the hulls of the moved generators form the preimage
/// family. The characteristic image is verified exactly. Unlike the
/// pullback-product witness, the result stays within a linear distance of
/// the base, which is what an openness modulus measures.
pub fn family_open_lift(
    d: &Diagram,
    limit: &LimitSpace,
    base: &ConvexFamily,
    targets: &[ConvexFamily],
) -> Result<(ConvexFamily, Rat)> {
    if !family_tuple_compatible(d, targets)? {
        return Err(Error::IncompatibleTuple(
            "family lift target fails a morphism equation".into(),
        ));
    }
    let (lim_poly, blocks) = limit_polytope(limit)?;
    if base.ambient() != lim_poly {
        return Err(Error::NotInLimit(
            "base family does not live on the limit polytope".into(),
        ));
    }
    let total = lim_poly.dim();
    let mut lifted: Vec<Polytope> = Vec::new();
    for gen in base.generators() {
        // Match each object's target generator to this generator's own
        // projection, nearest first, ties to the lowest index.
        let mut matched: Vec<Polytope> = Vec::with_capacity(targets.len());
        for (&(start, len), target) in blocks.iter().zip(targets.iter()) {
            let proj = gen.affine_image(&AffineMap::block_projection(total, start, len))?;
            let mut best: Option<(Rat, &Polytope)> = None;
            for cand in target.generators() {
                let dist = proj.hausdorff_distance(cand)?;
                if best.as_ref().map(|(b, _)| dist < *b).unwrap_or(true) {
                    best = Some((dist, cand));
                }
            }
            matched.push(best.expect("families have generators").1.clone());
        }
        let (moved, _) = open_lift_cc(d, limit, gen, &matched)?;
        lifted.push(moved);
    }
    let witness = ConvexFamily::new(lim_poly.clone(), lifted)?;
    let image = chi_g_cc(d, limit, &witness)?;
    for (o, (got, want)) in image.iter().zip(targets.iter()).enumerate() {
        if got != want {
            return Err(Error::LiftFailed(format!(
                "family lift projects to {} at object `{}`, target is {}",
                got,
                d.shape().objects()[o],
                want
            )));
        }
    }
    let distance = family_distance(&witness, base)?;
    Ok((witness, distance))
}

/// Hausdorff-style distance between families: max-min over generator sets
/// under the polytope Hausdorff metric. Generators determine the family, so
/// this metrizes the antichain representation.
pub fn family_distance(a: &ConvexFamily, b: &ConvexFamily) -> Result<Rat> {
    let directed = |from: &ConvexFamily, to: &ConvexFamily| -> Result<Rat> {
        let mut worst = Rat::zero();
        for g in from.generators() {
            let mut best: Option<Rat> = None;
            for h in to.generators() {
                let d = g.hausdorff_distance(h)?;
                if best.as_ref().map(|b| d < *b).unwrap_or(true) {
                    best = Some(d);
                }
            }
            let best = best.expect("families have generators");
            if best > worst {
                worst = best;
            }
        }
        Ok(worst)
    };
    let x = directed(a, b)?;
    let y = directed(b, a)?;
    Ok(if x > y { x } else { y })
}

/// An open region with exact strict-inequality membership.
#[derive(Debug, Clone)]
pub enum OpenRegion {
    /// Open axis-aligned box: lo_i < x_i < hi_i.
    Box { bounds: Vec<(Rat, Rat)> },
    /// Relative interior of a polytope: facet inequalities strict, affine
    /// hull equalities exact.
    RelInterior(Polytope),
}

impl OpenRegion {
    pub fn dim(&self) -> usize {
        match self {
            OpenRegion::Box { bounds } => bounds.len(),
            OpenRegion::RelInterior(p) => p.dim(),
        }
    }

    /// Strict membership of a point.
    pub fn contains_strict(&self, x: &[Rat]) -> bool {
        match self {
            OpenRegion::Box { bounds } => bounds
                .iter()
                .zip(x.iter())
                .all(|((lo, hi), c)| lo < c && c < hi),
            OpenRegion::RelInterior(p) => {
                let h = p.hrep();
                h.equalities.iter().all(|f| f.eval(x) == f.rhs)
                    && h.inequalities.iter().all(|f| f.eval(x) < f.rhs)
            }
        }
    }

    /// Strict containment of a polytope: every vertex strictly inside.
    /// Valid because the region is convex and the strict region contains the
    /// hull of strictly interior points.
    pub fn contains_polytope_strict(&self, p: &Polytope) -> bool {
        p.vertices().iter().all(|v| self.contains_strict(v))
    }

    /// Whether a polytope meets the open region: the maximal slack of a
    /// point of `p` against the strict constraints is positive. Strictness
    /// is decided exactly by margin maximization.
    pub fn meets_polytope(&self, p: &Polytope) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        let n = p.vertices().len();
        let dim = p.dim();
        // Variables: x (dim, free), λ (n, nonneg), t (free).
        let nv = dim + n + 1;
        let mut lp = LpProblem::new(nv);
        lp.require_nonneg_range(dim..dim + n);
        for coord in 0..dim {
            let mut row = vec![Rat::zero(); nv];
            row[coord] = Rat::one();
            for (j, v) in p.vertices().iter().enumerate() {
                row[dim + j] = -v[coord].clone();
            }
            lp.constrain(row, Rel::Eq, Rat::zero());
        }
        let mut sum = vec![Rat::zero(); nv];
        for c in sum.iter_mut().skip(dim).take(n) {
            *c = Rat::one();
        }
        lp.constrain(sum, Rel::Eq, Rat::one());
        let t = nv - 1;
        match self {
            OpenRegion::Box { bounds } => {
                for (coord, (lo, hi)) in bounds.iter().enumerate() {
                    let mut up = vec![Rat::zero(); nv];
                    up[coord] = Rat::one();
                    up[t] = Rat::one();
                    lp.constrain(up, Rel::Le, hi.clone());
                    let mut down = vec![Rat::zero(); nv];
                    down[coord] = -Rat::one();
                    down[t] = Rat::one();
                    lp.constrain(down, Rel::Le, -lo.clone());
                }
            }
            OpenRegion::RelInterior(q) => {
                let h = q.hrep();
                for f in &h.equalities {
                    let mut row = vec![Rat::zero(); nv];
                    row[..dim].clone_from_slice(&f.coeffs);
                    lp.constrain(row, Rel::Eq, f.rhs.clone());
                }
                for f in &h.inequalities {
                    let mut row = vec![Rat::zero(); nv];
                    row[..dim].clone_from_slice(&f.coeffs);
                    row[t] = Rat::one();
                    lp.constrain(row, Rel::Le, f.rhs.clone());
                }
            }
        }
        let mut objective = vec![Rat::zero(); nv];
        objective[t] = Rat::one();
        match lp.maximize(&objective) {
            crate::spaces::LpOutcome::Optimal { value, .. } => value.is_positive(),
            _ => false,
        }
    }

    /// Whether a finite point set meets the region.
    pub fn meets_points(&self, pts: &[Point]) -> bool {
        pts.iter().any(|p| self.contains_strict(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VietorisSign {
    /// Some member is contained in the region.
    Plus,
    /// Every member meets the region.
    Minus,
}

/// A Vietoris subbasic set over an open region.
#[derive(Debug, Clone)]
pub struct VietorisBasicSet {
    pub sign: VietorisSign,
    pub region: OpenRegion,
}

/// Membership of an up-closed convex family in a Vietoris subbasic set,
/// decided on generators: a member inside the region exists iff a generator
/// does (members only grow), and every member meets the region iff every
/// generator does (supersets inherit meeting).
pub fn vietoris_member(family: &ConvexFamily, v: &VietorisBasicSet) -> bool {
    match v.sign {
        VietorisSign::Plus => family
            .generators()
            .iter()
            .any(|g| v.region.contains_polytope_strict(g)),
        VietorisSign::Minus => family
            .generators()
            .iter()
            .all(|g| v.region.meets_polytope(g)),
    }
}

/// Verdict of the linkedness check with a pool-restricted maximality probe.
#[derive(Debug, Clone)]
pub struct LinkedVerdict {
    pub is_linked: bool,
    /// `Some(false)` comes with an extension witness from the pool.
    pub maximal_within_pool: Option<bool>,
    pub extension_witness: Option<Polytope>,
}

/// Checks pairwise intersection of the generators exactly, and probes
/// maximality against a declared finite candidate pool: the family is
/// maximal within the pool when no pool set outside the family meets every
/// generator. Returns the updated family alongside the verdict.
pub fn linked_check(family: &ConvexFamily, pool: &[Polytope]) -> (ConvexFamily, LinkedVerdict) {
    let is_linked = family.is_linked();
    if !is_linked {
        let verdict = LinkedVerdict {
            is_linked,
            maximal_within_pool: None,
            extension_witness: None,
        };
        return (family.clone(), verdict);
    }
    let mut extension = None;
    for cand in pool {
        if !family.ambient().contains_polytope(cand) || family.member(cand) {
            continue;
        }
        if family.generators().iter().all(|g| g.intersects(cand)) {
            extension = Some(cand.clone());
            break;
        }
    }
    let maximal = extension.is_none();
    let mut updated = family.clone();
    updated.maximal_within_pool = Some(maximal);
    let verdict = LinkedVerdict {
        is_linked,
        maximal_within_pool: Some(maximal),
        extension_witness: extension,
    };
    (updated, verdict)
}

/// Report of a continuity probe for the hull retraction at a family.
#[derive(Debug, Clone)]
pub struct RetractionProbeReport {
    pub sign: VietorisSign,
    pub samples: usize,
    /// Samples landing in the probe's source basic set.
    pub in_precondition: usize,
    pub violations: Vec<String>,
    /// Whether a convex refinement box was constructed for the `Plus` case.
    pub refinement_used: bool,
    pub pass: bool,
}

/// Probes continuity of the hull retraction at a discrete-generated family:
/// samples nearby families (generator points jittered by at most `eps`) and
/// checks the transfer of Vietoris membership through the retraction. For a
/// minus-set the same region works; for a plus-set over a box region the
/// probe builds a convex open refinement box around a witness generator hull
/// and checks the implication through that box.
pub fn r_cc_continuity_probe(
    ambient: &Polytope,
    generators: &[Vec<Point>],
    v: &VietorisBasicSet,
    eps: &Rat,
    samples: usize,
    seed: u64,
) -> Result<RetractionProbeReport> {
    let base = r_cc(ambient, generators)?;
    if !vietoris_member(&base, v) {
        return Err(Error::NotInLimit(
            "probe base retraction is outside the basic set".into(),
        ));
    }

    // Source-side region: for Plus, a convex open box refinement around a
    // witness hull when the region is a box; boxes and relative interiors
    // are convex, so the region itself always works as refinement.
    let mut refinement_used = false;
    let source_region: OpenRegion = match (v.sign, &v.region) {
        (VietorisSign::Plus, OpenRegion::Box { bounds }) => {
            let witness = base
                .generators()
                .iter()
                .find(|g| v.region.contains_polytope_strict(g))
                .expect("membership checked above");
            let bb = witness.bounding_box();
            // Margin: half the least slack of the witness inside the box.
            let mut margin: Option<Rat> = None;
            for ((lo, hi), (blo, bhi)) in bounds.iter().zip(bb.iter()) {
                for slack in [blo - lo, hi - bhi] {
                    if margin.as_ref().map(|m| slack < *m).unwrap_or(true) {
                        margin = Some(slack);
                    }
                }
            }
            let margin = margin.expect("nonzero dimension") / crate::rat::rint(2);
            refinement_used = true;
            OpenRegion::Box {
                bounds: bb
                    .into_iter()
                    .map(|(lo, hi)| (lo - &margin, hi + &margin))
                    .collect(),
            }
        }
        _ => v.region.clone(),
    };

    let mut in_precondition = 0;
    let mut violations = Vec::new();
    for i in 0..samples {
        let mut rng = crate::sampling::stream(seed, i as u64);
        let jittered: Vec<Vec<Point>> = generators
            .iter()
            .map(|pts| {
                pts.iter()
                    .map(|p| {
                        let delta = crate::sampling::grid_point(&mut rng, p.len(), -1, 1, 1000);
                        let moved: Point = p
                            .iter()
                            .zip(delta.iter())
                            .map(|(c, d)| c + d * eps)
                            .collect();
                        if ambient.contains_point(&moved) {
                            moved
                        } else {
                            ambient.nearest_point_linf(&moved).0
                        }
                    })
                    .collect()
            })
            .collect();

        let source_holds = match v.sign {
            // Some generator point set inside the refinement region.
            VietorisSign::Plus => jittered
                .iter()
                .any(|pts| pts.iter().all(|p| source_region.contains_strict(p))),
            // Every generator point set meets the region.
            VietorisSign::Minus => jittered
                .iter()
                .all(|pts| source_region.meets_points(pts)),
        };
        if !source_holds {
            continue;
        }
        in_precondition += 1;
        let image = r_cc(ambient, &jittered)?;
        if !vietoris_member(&image, v) {
            violations.push(format!("sample {i}: retraction image left the basic set"));
        }
    }
    let pass = violations.is_empty();
    Ok(RetractionProbeReport {
        sign: v.sign,
        samples,
        in_precondition,
        violations,
        refinement_used,
        pass,
    })
}
