//! Sampled openness certificates: empirical linear moduli for
//! characteristic maps.
//!
//! For a base point and each radius in the grid, targets are sampled near
//! the base's characteristic image (the same per-sample direction at every
//! radius, so a genuinely linear map yields a constant fitted modulus), the
//! nearest preimage is computed exactly, and the per-radius modulus
//! K = max(distance)/radius is fitted. The certificate asks the fitted
//! moduli to stay within a declared stability factor across the grid.
//! Between finite discrete spaces openness is automatic and recorded as
//! such.

use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::category::Diagram;
use crate::convex::{
    chi_cc, chi_g_cc, family_distance, family_open_lift, family_tuple_compatible, open_lift_cc,
    polytope_tuple_compatible, ConvexFamily,
};
use crate::error::{Error, Result};
use crate::prob::{chi_p, nearest_coupling, sample_compatible_tuple};
use crate::rat::{fmt_rat, rint, Point, Rat};
use crate::sampling;
use crate::spaces::{Measure, Polytope};

use super::reports::{FINITE_REGIME_NOTE, REPORT_SCHEMA_VERSION};
use super::{image_diagram, preimage_polytope, Ctx, FunctorId, ImageDiagram};

/// Factor by which fitted moduli may drift across the radius grid.
pub const STABILITY_FACTOR: i64 = 2;

/// A base point of `F(limit)` for the openness probe.
#[derive(Debug, Clone)]
pub enum BasePoint {
    Measure(Measure),
    Set(Polytope),
    Family(ConvexFamily),
}

#[derive(Debug, Serialize)]
pub struct OpennessRow {
    pub eps: String,
    pub samples: usize,
    pub successes: usize,
    pub max_distance: String,
    pub mean_distance: String,
    pub fitted_k: String,
}

#[derive(Debug, Serialize)]
pub struct OpennessReport {
    pub schema_version: u32,
    pub functor: String,
    pub diagram_digest: String,
    pub seed: u64,
    pub base: String,
    pub openness_mode: String,
    pub eps_grid: Vec<String>,
    pub rows: Vec<OpennessRow>,
    pub stability_factor: String,
    pub modulus_stable: bool,
    pub image_restricted_samples: usize,
    pub failures: Vec<String>,
    pub note: String,
}

impl OpennessReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.modulus_stable
    }
}

/// Runs the openness probe for `F` over `d` at the given base point
/// (defaults: uniform measure, the whole limit set, or the principal family
/// at it). Deterministic per seed.
pub fn certify_open(
    f: FunctorId,
    d: &Diagram,
    base: Option<BasePoint>,
    eps_grid: &[Rat],
    samples: usize,
    seed: u64,
) -> Result<OpennessReport> {
    let ctx = Ctx::new(d)?;
    if f.is_discrete() {
        return discrete_automatic(f, &ctx, seed, eps_grid);
    }
    let mut report = OpennessReport {
        schema_version: REPORT_SCHEMA_VERSION,
        functor: f.name().into(),
        diagram_digest: ctx.digest.clone(),
        seed,
        base: String::new(),
        openness_mode: "sampled-modulus".into(),
        eps_grid: eps_grid.iter().map(fmt_rat).collect(),
        rows: Vec::new(),
        stability_factor: STABILITY_FACTOR.to_string(),
        modulus_stable: true,
        image_restricted_samples: 0,
        failures: Vec::new(),
        note: FINITE_REGIME_NOTE.into(),
    };

    match f {
        FunctorId::P => probe_measures(&ctx, base, eps_grid, samples, seed, &mut report)?,
        FunctorId::Cc => probe_sets(&ctx, base, eps_grid, samples, seed, &mut report)?,
        FunctorId::GCc | FunctorId::LambdaCc => {
            probe_families(f, &ctx, base, eps_grid, samples, seed, &mut report)?
        }
        FunctorId::CcP => probe_composite_sets(&ctx, base, eps_grid, samples, seed, &mut report)?,
        FunctorId::GCcP | FunctorId::LambdaCcP => {
            probe_composite_families(f, &ctx, base, eps_grid, samples, seed, &mut report)?
        }
        _ => unreachable!("discrete handled above"),
    }

    report.modulus_stable = stable(&report.rows);
    Ok(report)
}

fn discrete_automatic(
    f: FunctorId,
    ctx: &Ctx,
    seed: u64,
    eps_grid: &[Rat],
) -> Result<OpennessReport> {
    // Openness between finite discrete spaces holds for every map; the probe
    // only confirms the image limit is materialized inside the product of
    // the enumerated image spaces.
    let img = image_diagram(f, ctx.d, super::DEFAULT_ENUM_BOUND)?;
    let ImageDiagram::Finite { diagram, .. } = img else {
        unreachable!()
    };
    let img_lim = crate::category::compute_limit(&diagram)?;
    let tuples = img_lim.finite_tuples().expect("finite image").len();
    Ok(OpennessReport {
        schema_version: REPORT_SCHEMA_VERSION,
        functor: f.name().into(),
        diagram_digest: ctx.digest.clone(),
        seed,
        base: format!("{tuples} compatible tuples materialized"),
        openness_mode: "automatic: finite discrete spaces".into(),
        eps_grid: eps_grid.iter().map(fmt_rat).collect(),
        rows: Vec::new(),
        stability_factor: STABILITY_FACTOR.to_string(),
        modulus_stable: true,
        image_restricted_samples: 0,
        failures: Vec::new(),
        note: FINITE_REGIME_NOTE.into(),
    })
}

struct RowAccumulator {
    eps: Rat,
    samples: usize,
    successes: usize,
    max: Rat,
    sum: Rat,
}

impl RowAccumulator {
    fn new(eps: &Rat) -> RowAccumulator {
        RowAccumulator {
            eps: eps.clone(),
            samples: 0,
            successes: 0,
            max: Rat::zero(),
            sum: Rat::zero(),
        }
    }

    fn record(&mut self, distance: Rat) {
        self.successes += 1;
        self.sum += &distance;
        if distance > self.max {
            self.max = distance;
        }
    }

    fn finish(self) -> OpennessRow {
        let mean = if self.successes == 0 {
            Rat::zero()
        } else {
            &self.sum / rint(self.successes as i64)
        };
        let k = if self.eps.is_zero() || self.successes == 0 {
            Rat::zero()
        } else {
            &self.max / &self.eps
        };
        OpennessRow {
            eps: fmt_rat(&self.eps),
            samples: self.samples,
            successes: self.successes,
            max_distance: fmt_rat(&self.max),
            mean_distance: fmt_rat(&mean),
            fitted_k: fmt_rat(&k),
        }
    }
}

fn stable(rows: &[OpennessRow]) -> bool {
    let ks: Vec<Rat> = rows
        .iter()
        .filter_map(|r| crate::rat::parse_rat(&r.fitted_k).ok())
        .filter(|k| k.is_positive())
        .collect();
    match (ks.iter().min(), ks.iter().max()) {
        (Some(lo), Some(hi)) => hi <= &(lo * rint(STABILITY_FACTOR)),
        _ => true,
    }
}

fn sample_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x0100_0000_01b3).wrapping_add(index as u64)
}

fn probe_measures(
    ctx: &Ctx,
    base: Option<BasePoint>,
    eps_grid: &[Rat],
    samples: usize,
    seed: u64,
    report: &mut OpennessReport,
) -> Result<()> {
    let carrier = ctx.lim.finite_tuples().expect("finite carrier").len();
    let base = match base {
        Some(BasePoint::Measure(m)) => m,
        None => Measure::uniform(carrier),
        Some(_) => {
            return Err(Error::InapplicableFunctor {
                functor: "P".into(),
                reason: "openness base must be a measure".into(),
            })
        }
    };
    if base.len() != carrier {
        return Err(Error::BaseMismatch(
            "base measure must live on the limit carrier".into(),
        ));
    }
    report.base = format!("measure {base}");
    let center = chi_p(ctx.d, &ctx.lim, &base)?;
    for eps in eps_grid {
        let mut row = RowAccumulator::new(eps);
        for i in 0..samples {
            row.samples += 1;
            let target = sample_compatible_tuple(ctx.d, &center, eps, sample_seed(seed, i))?;
            match nearest_coupling(ctx.d, &ctx.lim, &target, &base) {
                Ok((_, dist)) => row.record(dist),
                Err(Error::EmptyCorrespondence) => {
                    report
                        .failures
                        .push(format!("eps {}: sample {i}: no preimage", fmt_rat(eps)));
                }
                Err(e) => return Err(e),
            }
        }
        report.rows.push(row.finish());
    }
    Ok(())
}

/// Jitters every vertex by at most `eps/2` per coordinate and projects back
/// into the ambient set, so the result stays within Hausdorff distance `eps`.
fn jitter_polytope(
    rng: &mut ChaCha8Rng,
    p: &Polytope,
    ambient: &Polytope,
    eps: &Rat,
) -> Polytope {
    let half = eps / rint(2);
    let moved: Vec<Point> = p
        .vertices()
        .iter()
        .map(|v| {
            let dir = sampling::grid_point(rng, v.len(), -1, 1, 1000);
            let shifted: Point = v
                .iter()
                .zip(dir.iter())
                .map(|(c, t)| c + t * &half)
                .collect();
            if ambient.contains_point(&shifted) {
                shifted
            } else {
                ambient.nearest_point_linf(&shifted).0
            }
        })
        .collect();
    Polytope::conv_hull(p.dim(), &moved).expect("jittered hull")
}

fn jitter_family(
    rng: &mut ChaCha8Rng,
    fam: &ConvexFamily,
    ambient: &Polytope,
    eps: &Rat,
) -> ConvexFamily {
    let gens: Vec<Polytope> = fam
        .generators()
        .iter()
        .map(|g| jitter_polytope(rng, g, ambient, eps))
        .collect();
    ConvexFamily::new(ambient.clone(), gens).expect("jittered family")
}

fn object_polytopes(ctx: &Ctx) -> Result<Vec<Polytope>> {
    ctx.d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            crate::category::SpaceKind::Poly(p) => Ok(p.clone()),
            _ => Err(Error::InapplicableFunctor {
                functor: "cc".into(),
                reason: "needs polytope spaces".into(),
            }),
        })
        .collect()
}

fn probe_sets(
    ctx: &Ctx,
    base: Option<BasePoint>,
    eps_grid: &[Rat],
    samples: usize,
    seed: u64,
    report: &mut OpennessReport,
) -> Result<()> {
    let objects = object_polytopes(ctx)?;
    let lim_poly = ctx.lim.polytope().ok_or(Error::EmptyLimit)?.clone();
    let base = match base {
        Some(BasePoint::Set(p)) => p,
        None => lim_poly.clone(),
        Some(_) => {
            return Err(Error::InapplicableFunctor {
                functor: "cc".into(),
                reason: "openness base must be a set".into(),
            })
        }
    };
    report.base = format!("set {base}");
    let center = chi_cc(ctx.d, &ctx.lim, &base)?;
    for eps in eps_grid {
        let mut row = RowAccumulator::new(eps);
        for i in 0..samples {
            row.samples += 1;
            let mut rng = sampling::stream(sample_seed(seed, i), 1);
            let jittered: Vec<Polytope> = center
                .iter()
                .zip(objects.iter())
                .map(|(t, ambient)| jitter_polytope(&mut rng, t, ambient, eps))
                .collect();
            let targets = if polytope_tuple_compatible(ctx.d, &jittered)? {
                jittered
            } else {
                report.image_restricted_samples += 1;
                let moved = jitter_polytope(&mut rng, &base, &lim_poly, eps);
                chi_cc(ctx.d, &ctx.lim, &moved)?
            };
            match open_lift_cc(ctx.d, &ctx.lim, &base, &targets) {
                Ok((_, dist)) => row.record(dist),
                Err(Error::LiftFailed(msg)) => {
                    report
                        .failures
                        .push(format!("eps {}: sample {i}: {msg}", fmt_rat(eps)));
                }
                Err(e) => return Err(e),
            }
        }
        report.rows.push(row.finish());
    }
    Ok(())
}

fn probe_families(
    f: FunctorId,
    ctx: &Ctx,
    base: Option<BasePoint>,
    eps_grid: &[Rat],
    samples: usize,
    seed: u64,
    report: &mut OpennessReport,
) -> Result<()> {
    let objects = object_polytopes(ctx)?;
    let lim_poly = ctx.lim.polytope().ok_or(Error::EmptyLimit)?.clone();
    let base = match base {
        Some(BasePoint::Family(fam)) => fam,
        None => ConvexFamily::principal(lim_poly.clone(), lim_poly.clone())?,
        Some(_) => {
            return Err(Error::InapplicableFunctor {
                functor: f.name().into(),
                reason: "openness base must be a family".into(),
            })
        }
    };
    if f == FunctorId::LambdaCc && !base.is_linked() {
        return Err(Error::InapplicableFunctor {
            functor: f.name().into(),
            reason: "base family must be linked".into(),
        });
    }
    report.base = format!("family {base}");
    let center = chi_g_cc(ctx.d, &ctx.lim, &base)?;
    for eps in eps_grid {
        let mut row = RowAccumulator::new(eps);
        for i in 0..samples {
            row.samples += 1;
            let mut rng = sampling::stream(sample_seed(seed, i), 2);
            let jittered: Vec<ConvexFamily> = center
                .iter()
                .zip(objects.iter())
                .map(|(fam, ambient)| jitter_family(&mut rng, fam, ambient, eps))
                .collect();
            let targets = if family_tuple_compatible(ctx.d, &jittered)? {
                jittered
            } else {
                report.image_restricted_samples += 1;
                let moved = jitter_family(&mut rng, &base, &lim_poly, eps);
                chi_g_cc(ctx.d, &ctx.lim, &moved)?
            };
            match family_open_lift(ctx.d, &ctx.lim, &base, &targets) {
                Ok((w, dist)) => {
                    if f == FunctorId::LambdaCc && base.is_linked() && !w.is_linked() {
                        report.failures.push(format!(
                            "eps {}: sample {i}: lift lost linkedness",
                            fmt_rat(eps)
                        ));
                    } else {
                        row.record(dist);
                    }
                }
                Err(Error::LiftFailed(msg)) => {
                    report
                        .failures
                        .push(format!("eps {}: sample {i}: {msg}", fmt_rat(eps)));
                }
                Err(e) => return Err(e),
            }
        }
        report.rows.push(row.finish());
    }
    Ok(())
}

struct CompositeSetup {
    d1: Diagram,
    lim1: crate::category::LimitSpace,
    simplex: Polytope,
    margins: Vec<crate::spaces::AffineMap>,
    stacked: crate::spaces::AffineMap,
    simplices: Vec<Polytope>,
}

fn composite_setup(ctx: &Ctx) -> Result<CompositeSetup> {
    let ImageDiagram::Poly { diagram: d1 } =
        image_diagram(FunctorId::P, ctx.d, super::DEFAULT_ENUM_BOUND)?
    else {
        unreachable!()
    };
    let lim1 = crate::category::compute_limit(&d1)?;
    if lim1.is_empty() {
        return Err(Error::EmptyLimit);
    }
    let carrier = ctx.lim.finite_tuples().expect("finite carrier").len();
    let simplex = Polytope::std_simplex(carrier);
    let margins = super::marginal_maps(ctx.d, &ctx.lim)?;
    let stacked = super::stacked_marginal_map(&margins);
    let simplices: Vec<Polytope> = ctx
        .d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            crate::category::SpaceKind::Finite { points } => Polytope::std_simplex(*points),
            _ => unreachable!("composites need finite bases"),
        })
        .collect();
    Ok(CompositeSetup {
        d1,
        lim1,
        simplex,
        margins,
        stacked,
        simplices,
    })
}

fn probe_composite_sets(
    ctx: &Ctx,
    base: Option<BasePoint>,
    eps_grid: &[Rat],
    samples: usize,
    seed: u64,
    report: &mut OpennessReport,
) -> Result<()> {
    let CompositeSetup {
        d1,
        lim1,
        simplex,
        margins,
        stacked,
        simplices,
    } = composite_setup(ctx)?;
    let base = match base {
        Some(BasePoint::Set(p)) => p,
        None => simplex.clone(),
        Some(_) => {
            return Err(Error::InapplicableFunctor {
                functor: "ccP".into(),
                reason: "openness base must be a set of measures".into(),
            })
        }
    };
    report.base = format!("measure-set {base}");
    let lifted_base = base.affine_image(&stacked)?;
    let center: Vec<Polytope> = margins
        .iter()
        .map(|m| base.affine_image(m))
        .collect::<Result<_>>()?;
    for eps in eps_grid {
        let mut row = RowAccumulator::new(eps);
        for i in 0..samples {
            row.samples += 1;
            let mut rng = sampling::stream(sample_seed(seed, i), 3);
            let jittered: Vec<Polytope> = center
                .iter()
                .zip(simplices.iter())
                .map(|(t, ambient)| jitter_polytope(&mut rng, t, ambient, eps))
                .collect();
            let targets = if polytope_tuple_compatible(&d1, &jittered)? {
                jittered
            } else {
                report.image_restricted_samples += 1;
                let moved = jitter_polytope(&mut rng, &base, &simplex, eps);
                margins
                    .iter()
                    .map(|m| moved.affine_image(m))
                    .collect::<Result<_>>()?
            };
            let lifted = match open_lift_cc(&d1, &lim1, &lifted_base, &targets) {
                Ok((w, _)) => w,
                Err(Error::LiftFailed(msg)) => {
                    report
                        .failures
                        .push(format!("eps {}: sample {i}: {msg}", fmt_rat(eps)));
                    continue;
                }
                Err(e) => return Err(e),
            };
            match preimage_polytope(&simplex, &stacked, &lifted)? {
                Some(c) => {
                    let mut ok = true;
                    for (margin, target) in margins.iter().zip(targets.iter()) {
                        if &c.affine_image(margin)? != target {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        row.record(c.hausdorff_distance(&base)?);
                    } else {
                        report.failures.push(format!(
                            "eps {}: sample {i}: measure-level preimage misses",
                            fmt_rat(eps)
                        ));
                    }
                }
                None => {
                    report.failures.push(format!(
                        "eps {}: sample {i}: empty measure-level preimage",
                        fmt_rat(eps)
                    ));
                }
            }
        }
        report.rows.push(row.finish());
    }
    Ok(())
}

fn probe_composite_families(
    f: FunctorId,
    ctx: &Ctx,
    base: Option<BasePoint>,
    eps_grid: &[Rat],
    samples: usize,
    seed: u64,
    report: &mut OpennessReport,
) -> Result<()> {
    let CompositeSetup {
        d1,
        lim1,
        simplex,
        margins,
        stacked,
        simplices,
    } = composite_setup(ctx)?;
    let base = match base {
        Some(BasePoint::Family(fam)) => fam,
        None => ConvexFamily::principal(simplex.clone(), simplex.clone())?,
        Some(_) => {
            return Err(Error::InapplicableFunctor {
                functor: f.name().into(),
                reason: "openness base must be a family of measure sets".into(),
            })
        }
    };
    report.base = format!("measure-family {base}");
    let center: Vec<ConvexFamily> = margins
        .iter()
        .zip(simplices.iter())
        .map(|(m, amb)| crate::convex::g_cc_map(m, &base, amb))
        .collect::<Result<_>>()?;
    for eps in eps_grid {
        let mut row = RowAccumulator::new(eps);
        for i in 0..samples {
            row.samples += 1;
            let mut rng = sampling::stream(sample_seed(seed, i), 4);
            let jittered: Vec<ConvexFamily> = center
                .iter()
                .zip(simplices.iter())
                .map(|(fam, amb)| jitter_family(&mut rng, fam, amb, eps))
                .collect();
            let targets = if family_tuple_compatible(&d1, &jittered)? {
                jittered
            } else {
                report.image_restricted_samples += 1;
                let moved = jitter_family(&mut rng, &base, &simplex, eps);
                margins
                    .iter()
                    .zip(simplices.iter())
                    .map(|(m, amb)| crate::convex::g_cc_map(m, &moved, amb))
                    .collect::<Result<_>>()?
            };
            let lifted_base = crate::convex::g_cc_map(
                &stacked,
                &base,
                lim1.polytope().expect("nonempty"),
            )?;
            let witness = match family_open_lift(&d1, &lim1, &lifted_base, &targets) {
                Ok((w, _)) => w,
                Err(Error::LiftFailed(msg)) => {
                    report
                        .failures
                        .push(format!("eps {}: sample {i}: {msg}", fmt_rat(eps)));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mut gens: Vec<Polytope> = Vec::new();
            for g in witness.generators() {
                if let Some(u) = preimage_polytope(&simplex, &stacked, g)? {
                    gens.push(u);
                }
            }
            if gens.is_empty() {
                report.failures.push(format!(
                    "eps {}: sample {i}: empty measure-level witness",
                    fmt_rat(eps)
                ));
                continue;
            }
            let fam = ConvexFamily::new(simplex.clone(), gens)?;
            let mut ok = true;
            for ((margin, amb), target) in
                margins.iter().zip(simplices.iter()).zip(targets.iter())
            {
                if &crate::convex::g_cc_map(margin, &fam, amb)? != target {
                    ok = false;
                    break;
                }
            }
            if ok {
                row.record(family_distance(&fam, &base)?);
            } else {
                report.failures.push(format!(
                    "eps {}: sample {i}: measure-level family preimage misses",
                    fmt_rat(eps)
                ));
            }
        }
        report.rows.push(row.finish());
    }
    Ok(())
}
