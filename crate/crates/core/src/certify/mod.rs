//! The certification harness: functor-image diagrams, exact surjectivity
//! certificates for characteristic maps, sampled openness moduli, and
//! composition factorization checks.

mod composition;
mod openness;
mod reports;
mod surjective;

pub use composition::{certify_composition, CompositionReport};
pub use openness::{certify_open, BasePoint, OpennessReport, OpennessRow};
pub use reports::{render_report, REPORT_SCHEMA_VERSION};
pub use surjective::{certify_surjective, SurjectivityReport};

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;

use crate::category::{Diagram, FiniteCategory, LimitSpace, MapKind, SpaceKind, SpaceRef};
use crate::error::{Error, Result};
use crate::hyperspace::{cmp_families, cmp_masks, exp_map, exp_space, g_map, g_space, lambda_space, Subset, UpFamily};
use crate::prob::pushforward_matrix;
use crate::rat::{Point, Rat};
use crate::sampling;
use crate::spaces::{AffineMap, Polytope};

/// Default enumeration bound for family hyperspaces.
pub const DEFAULT_ENUM_BOUND: usize = 5;

/// The functors the harness certifies. Composites name their factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctorId {
    Exp,
    G,
    Lambda,
    P,
    Cc,
    GCc,
    LambdaCc,
    CcP,
    GCcP,
    LambdaCcP,
}

impl FunctorId {
    pub fn parse(s: &str) -> Option<FunctorId> {
        match s {
            "exp" => Some(FunctorId::Exp),
            "G" => Some(FunctorId::G),
            "lambda" => Some(FunctorId::Lambda),
            "P" => Some(FunctorId::P),
            "cc" => Some(FunctorId::Cc),
            "G_cc" => Some(FunctorId::GCc),
            "lambda_cc" => Some(FunctorId::LambdaCc),
            "ccP" => Some(FunctorId::CcP),
            "G_ccP" => Some(FunctorId::GCcP),
            "lambda_ccP" => Some(FunctorId::LambdaCcP),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FunctorId::Exp => "exp",
            FunctorId::G => "G",
            FunctorId::Lambda => "lambda",
            FunctorId::P => "P",
            FunctorId::Cc => "cc",
            FunctorId::GCc => "G_cc",
            FunctorId::LambdaCc => "lambda_cc",
            FunctorId::CcP => "ccP",
            FunctorId::GCcP => "G_ccP",
            FunctorId::LambdaCcP => "lambda_ccP",
        }
    }

    /// `(outer, inner)` for registered composites.
    pub fn factors(&self) -> Option<(FunctorId, FunctorId)> {
        match self {
            FunctorId::CcP => Some((FunctorId::Cc, FunctorId::P)),
            FunctorId::GCcP => Some((FunctorId::GCc, FunctorId::P)),
            FunctorId::LambdaCcP => Some((FunctorId::LambdaCc, FunctorId::P)),
            _ => None,
        }
    }

    /// Discrete functors act on finite spaces and have finite image spaces.
    pub fn is_discrete(&self) -> bool {
        matches!(self, FunctorId::Exp | FunctorId::G | FunctorId::Lambda)
    }
}

impl std::fmt::Display for FunctorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Decoding data for a materialized image space.
#[derive(Debug, Clone)]
pub enum Listing {
    Subsets(Vec<u32>),
    Families(Vec<UpFamily>),
}

/// The image of a diagram under a functor.
#[derive(Debug)]
pub enum ImageDiagram {
    /// Fully materialized finite diagram (discrete hyperspace functors),
    /// with per-object decodings of the image points.
    Finite {
        diagram: Diagram,
        listings: Vec<Listing>,
    },
    /// Materialized polytope diagram: simplices and pushforward maps.
    Poly { diagram: Diagram },
    /// Family/convex functors whose image spaces stay symbolic; payloads are
    /// evaluated directly.
    Virtual { functor: FunctorId },
}

/// Builds the image diagram `F(D)`: same shape, images of spaces and maps.
/// Materialized images are re-validated as diagrams, which re-checks the
/// functor laws on every map.
pub fn image_diagram(f: FunctorId, d: &Diagram, bound: usize) -> Result<ImageDiagram> {
    let inapplicable = |reason: &str| Error::InapplicableFunctor {
        functor: f.name().into(),
        reason: reason.into(),
    };
    match f {
        FunctorId::Exp | FunctorId::G | FunctorId::Lambda => {
            if !d.all_finite() {
                return Err(inapplicable("needs finite spaces"));
            }
            let sizes: Vec<usize> = d
                .spaces()
                .iter()
                .map(|s| match &s.kind {
                    SpaceKind::Finite { points } => *points,
                    _ => unreachable!(),
                })
                .collect();
            let listings: Vec<Listing> = sizes
                .iter()
                .map(|&n| match f {
                    FunctorId::Exp => {
                        Ok(Listing::Subsets(exp_space(n)?.iter().map(|s| s.mask).collect()))
                    }
                    FunctorId::G => Ok(Listing::Families(g_space(n, bound)?)),
                    FunctorId::Lambda => Ok(Listing::Families(lambda_space(n, bound)?)),
                    _ => unreachable!(),
                })
                .collect::<Result<_>>()?;
            let spaces: Vec<(String, SpaceRef)> = d
                .shape()
                .objects()
                .iter()
                .zip(listings.iter())
                .map(|(id, listing)| {
                    let len = match listing {
                        Listing::Subsets(v) => v.len(),
                        Listing::Families(v) => v.len(),
                    };
                    (
                        id.clone(),
                        SpaceRef::finite(&format!("{}({})", f.name(), id), len),
                    )
                })
                .collect();
            let mut maps: Vec<(String, MapKind)> = Vec::new();
            for (mi, m) in d.shape().morphisms().iter().enumerate() {
                let MapKind::Table(t) = d.map(mi) else {
                    unreachable!("finite diagrams carry tables")
                };
                let table = image_table(f, t, sizes[m.dst], &listings[m.src], &listings[m.dst])?;
                maps.push((m.id.clone(), MapKind::Table(table)));
            }
            let diagram = Diagram::new(d.shape().clone(), spaces, maps)?;
            Ok(ImageDiagram::Finite { diagram, listings })
        }
        FunctorId::P => {
            if !d.all_finite() {
                return Err(inapplicable("needs finite spaces"));
            }
            let spaces: Vec<(String, SpaceRef)> = d
                .shape()
                .objects()
                .iter()
                .zip(d.spaces().iter())
                .map(|(id, s)| {
                    let SpaceKind::Finite { points } = s.kind else {
                        unreachable!()
                    };
                    (
                        id.clone(),
                        SpaceRef::poly(&format!("P({id})"), Polytope::std_simplex(points)),
                    )
                })
                .collect();
            let mut maps: Vec<(String, MapKind)> = Vec::new();
            for (mi, m) in d.shape().morphisms().iter().enumerate() {
                let MapKind::Table(t) = d.map(mi) else {
                    unreachable!()
                };
                let SpaceKind::Finite { points: target_n } = d.space(m.dst).kind else {
                    unreachable!()
                };
                maps.push((m.id.clone(), MapKind::Affine(pushforward_matrix(t, target_n))));
            }
            let diagram = Diagram::new(d.shape().clone(), spaces, maps)?;
            Ok(ImageDiagram::Poly { diagram })
        }
        FunctorId::Cc | FunctorId::GCc | FunctorId::LambdaCc => {
            if !d.all_poly() {
                return Err(inapplicable("needs polytope spaces"));
            }
            Ok(ImageDiagram::Virtual { functor: f })
        }
        FunctorId::CcP | FunctorId::GCcP | FunctorId::LambdaCcP => {
            if !d.all_finite() {
                return Err(inapplicable("needs finite spaces (the inner factor is P)"));
            }
            Ok(ImageDiagram::Virtual { functor: f })
        }
    }
}

fn image_table(
    f: FunctorId,
    base_table: &[usize],
    target_size: usize,
    src: &Listing,
    dst: &Listing,
) -> Result<Vec<usize>> {
    match (src, dst) {
        (Listing::Subsets(srcs), Listing::Subsets(dsts)) => srcs
            .iter()
            .map(|&mask| {
                let image = exp_map(
                    base_table,
                    target_size,
                    &Subset::new(base_table.len(), mask),
                );
                dsts.binary_search_by(|probe| cmp_masks(*probe, image.mask))
                    .map_err(|_| Error::MalformedDiagram("image subset missing".into()))
            })
            .collect(),
        (Listing::Families(srcs), Listing::Families(dsts)) => srcs
            .iter()
            .map(|fam| {
                let image = g_map(base_table, target_size, fam);
                if f == FunctorId::Lambda && !image.is_maximal_linked() {
                    return Err(Error::MalformedDiagram(
                        "superextension image is not maximal linked".into(),
                    ));
                }
                dsts.binary_search_by(|probe| cmp_families(probe, &image))
                    .map_err(|_| Error::MalformedDiagram("image family missing".into()))
            })
            .collect(),
        _ => Err(Error::MalformedDiagram("listing kinds differ".into())),
    }
}

/// The motivating instance: the square of two finite spaces mapping to a
/// point, whose limit is their product.
pub fn bicommutative_square(nx: usize, ny: usize) -> Diagram {
    Diagram::new(
        FiniteCategory::cospan(),
        vec![
            ("L".into(), SpaceRef::finite("X", nx)),
            ("M".into(), SpaceRef::finite("pt", 1)),
            ("R".into(), SpaceRef::finite("Y", ny)),
        ],
        vec![
            ("id_L".into(), MapKind::Table((0..nx).collect())),
            ("id_M".into(), MapKind::Table(vec![0])),
            ("id_R".into(), MapKind::Table((0..ny).collect())),
            ("f".into(), MapKind::Table(vec![0; nx])),
            ("g".into(), MapKind::Table(vec![0; ny])),
        ],
    )
    .expect("square diagram is well formed")
}

/// Product diagram over a discrete shape: one object per given space.
pub fn product_diagram(spaces: Vec<SpaceRef>) -> Diagram {
    let ids: Vec<String> = (0..spaces.len())
        .map(|i| format!("A{}", i + 1))
        .collect();
    let id_refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
    let shape = FiniteCategory::discrete(&id_refs);
    let maps: Vec<(String, MapKind)> = ids
        .iter()
        .zip(spaces.iter())
        .map(|(id, s)| (format!("id_{id}"), MapKind::identity_for(s)))
        .collect();
    let spaces: Vec<(String, SpaceRef)> = ids.iter().cloned().zip(spaces).collect();
    Diagram::new(shape, spaces, maps).expect("product diagram is well formed")
}

/// Shared per-run context: the diagram, its limit, and the digest.
pub(crate) struct Ctx<'a> {
    pub d: &'a Diagram,
    pub lim: LimitSpace,
    pub digest: String,
}

impl<'a> Ctx<'a> {
    pub fn new(d: &'a Diagram) -> Result<Ctx<'a>> {
        let lim = crate::category::compute_limit(d)?;
        if lim.is_empty() {
            return Err(Error::EmptyLimit);
        }
        Ok(Ctx {
            d,
            lim,
            digest: crate::io::diagram_digest(d),
        })
    }
}

/// Random point inside a polytope: a random convex combination of vertices.
pub(crate) fn random_point_in(rng: &mut ChaCha8Rng, p: &Polytope) -> Point {
    let n = p.vertices().len();
    let weights = sampling::interior_measure(rng, n);
    let mut out = vec![Rat::zero(); p.dim()];
    for (w, v) in weights.weights().iter().zip(p.vertices()) {
        for (o, c) in out.iter_mut().zip(v.iter()) {
            *o += w * c;
        }
    }
    out
}

/// Random sub-polytope: hull of a few random interior points.
pub(crate) fn random_subpolytope(rng: &mut ChaCha8Rng, ambient: &Polytope) -> Polytope {
    use rand::Rng;
    let k = rng.gen_range(1..=(ambient.dim() + 2).min(4));
    let pts: Vec<Point> = (0..k).map(|_| random_point_in(rng, ambient)).collect();
    Polytope::conv_hull(ambient.dim(), &pts).expect("hull of sampled points")
}

/// Random convex family in an ambient polytope; `linked` forces a common
/// point into every generator.
pub(crate) fn random_family(
    rng: &mut ChaCha8Rng,
    ambient: &Polytope,
    linked: bool,
) -> crate::convex::ConvexFamily {
    use rand::Rng;
    let count = rng.gen_range(1..=3);
    let common = if linked {
        Some(random_point_in(rng, ambient))
    } else {
        None
    };
    let gens: Vec<Polytope> = (0..count)
        .map(|_| {
            let mut pts: Vec<Point> = (0..rng.gen_range(1..=3))
                .map(|_| random_point_in(rng, ambient))
                .collect();
            if let Some(c) = &common {
                pts.push(c.clone());
            }
            Polytope::conv_hull(ambient.dim(), &pts).expect("hull of sampled points")
        })
        .collect();
    crate::convex::ConvexFamily::new(ambient.clone(), gens)
        .expect("sampled generators live in the ambient polytope")
}

/// The characteristic map of a measure-polytope under the composite with P:
/// per object, the affine image under the pushforward of the projection.
pub(crate) fn marginal_maps(d: &Diagram, lim: &LimitSpace) -> Result<Vec<AffineMap>> {
    let sizes: Vec<usize> = d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            SpaceKind::Finite { points } => Ok(*points),
            _ => Err(Error::InapplicableFunctor {
                functor: "P".into(),
                reason: "needs finite spaces".into(),
            }),
        })
        .collect::<Result<_>>()?;
    let maps = (0..sizes.len())
        .map(|o| {
            let MapKind::Table(proj) = &lim.projections[o] else {
                unreachable!("finite limits carry table projections")
            };
            pushforward_matrix(proj, sizes[o])
        })
        .collect();
    Ok(maps)
}

/// Stacks the per-object marginal maps into the full characteristic map of
/// the measure functor, `Δ(carrier) → ∏ Δ(objects)`.
pub(crate) fn stacked_marginal_map(maps: &[AffineMap]) -> AffineMap {
    let cols = maps[0].source_dim();
    let mut matrix = Vec::new();
    let mut offset = Vec::new();
    for m in maps {
        assert_eq!(m.source_dim(), cols);
        matrix.extend(m.matrix.iter().cloned());
        offset.extend(m.offset.iter().cloned());
    }
    AffineMap::new(matrix, offset)
}

/// `{x ∈ domain : map(x) ∈ image_set}` as a polytope, `None` when empty.
pub(crate) fn preimage_polytope(
    domain: &Polytope,
    map: &crate::spaces::AffineMap,
    image_set: &Polytope,
) -> Result<Option<Polytope>> {
    use crate::spaces::LinearForm;
    let dim = domain.dim();
    let mut equalities: Vec<LinearForm> = Vec::new();
    let mut inequalities: Vec<LinearForm> = Vec::new();
    let dh = domain.hrep();
    equalities.extend(dh.equalities.iter().cloned());
    inequalities.extend(dh.inequalities.iter().cloned());
    let compose = |form: &LinearForm| -> LinearForm {
        // form.coeffs · (M x + off) REL rhs  ⇒  (Mᵀ form.coeffs) · x REL rhs − coeffs·off
        let coeffs: Vec<_> = (0..dim)
            .map(|j| {
                form.coeffs
                    .iter()
                    .zip(map.matrix.iter())
                    .map(|(c, row)| c * &row[j])
                    .sum()
            })
            .collect();
        let shift: crate::rat::Rat = form
            .coeffs
            .iter()
            .zip(map.offset.iter())
            .map(|(c, o)| c * o)
            .sum();
        LinearForm::new(coeffs, &form.rhs - shift)
    };
    let ih = image_set.hrep();
    equalities.extend(ih.equalities.iter().map(&compose));
    inequalities.extend(ih.inequalities.iter().map(&compose));
    Polytope::from_hrep(dim, &equalities, &inequalities)
}
