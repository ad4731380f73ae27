//! Surjectivity certificates for characteristic maps.
//!
//! Discrete functors are certified exhaustively: the image-diagram limit is
//! enumerated and a canonical preimage is produced for every compatible
//! tuple. The canonical candidate is the pullback (for subsets) or the
//! family generated by generator-choice pullbacks (for families); for
//! subsets the pullback is maximal among preimage candidates, so a pullback
//! miss proves no preimage exists. Measure and convex functors are certified
//! on sampled compatible tuples with exact feasibility decisions.

use serde::Serialize;

use crate::category::MapKind;
use crate::convex::{
    chi_cc, chi_g_cc, d_c_witness, family_tuple_compatible, polytope_tuple_compatible,
    surjectivity_witness_cc, ConvexFamily,
};
use crate::error::{Error, Result};
use crate::hyperspace::{cmp_masks, g_space, lambda_space, UpFamily};
use crate::prob::{chi_p, coupling_polytope, sample_compatible_tuple};
use crate::rat::rint;
use crate::sampling;
use crate::spaces::{Measure, Polytope};

use super::reports::{FINITE_REGIME_NOTE, REPORT_SCHEMA_VERSION};
use super::{image_diagram, preimage_polytope, Ctx, FunctorId, ImageDiagram, Listing};

const EXHAUSTIVE_TUPLE_CAP: usize = 250_000;
/// Carrier-size cap for exhaustive maximal-linkedness verification (2^n scan).
const MAXIMALITY_CARRIER_CAP: usize = 20;
/// Carrier-size caps for the exhaustive fallback search over all families.
const G_FALLBACK_CAP: usize = 4;
const LAMBDA_FALLBACK_CAP: usize = 5;

#[derive(Debug, Serialize)]
pub struct SurjectivityReport {
    pub schema_version: u32,
    pub functor: String,
    pub diagram_digest: String,
    pub mode: String,
    pub seed: u64,
    pub tuples_tested: usize,
    pub successes: usize,
    pub misses: Vec<String>,
    /// Tuples whose canonical witness could not be fully verified within the
    /// configured bounds (reported, never silently passed).
    pub unverified: Vec<String>,
    /// Sampled tuples that had to be drawn from the characteristic image
    /// because independent sampling kept violating compatibility.
    pub image_restricted_samples: usize,
    pub note: String,
}

impl SurjectivityReport {
    pub fn pass(&self) -> bool {
        self.misses.is_empty() && self.unverified.is_empty()
    }

    fn new(functor: FunctorId, digest: &str, mode: &str, seed: u64) -> SurjectivityReport {
        SurjectivityReport {
            schema_version: REPORT_SCHEMA_VERSION,
            functor: functor.name().into(),
            diagram_digest: digest.into(),
            mode: mode.into(),
            seed,
            tuples_tested: 0,
            successes: 0,
            misses: Vec::new(),
            unverified: Vec::new(),
            image_restricted_samples: 0,
            note: FINITE_REGIME_NOTE.into(),
        }
    }
}

/// Certifies surjectivity of the characteristic map of `F` over `d`:
/// exhaustive over the enumerated image limit for discrete functors,
/// sampled otherwise. Every miss carries a witness description.
pub fn certify_surjective(
    f: FunctorId,
    d: &crate::category::Diagram,
    budget: usize,
    seed: u64,
    bound: usize,
) -> Result<SurjectivityReport> {
    let ctx = Ctx::new(d)?;
    match f {
        FunctorId::Exp | FunctorId::G | FunctorId::Lambda => {
            exhaustive_discrete(f, &ctx, bound, seed)
        }
        FunctorId::P => sampled_measures(&ctx, budget, seed),
        FunctorId::Cc => sampled_convex(&ctx, budget, seed),
        FunctorId::GCc | FunctorId::LambdaCc => sampled_families(f, &ctx, budget, seed),
        FunctorId::CcP | FunctorId::GCcP | FunctorId::LambdaCcP => {
            sampled_composite(f, &ctx, budget, seed)
        }
    }
}

fn carrier_projections<'c>(ctx: &'c Ctx) -> (usize, Vec<&'c [usize]>) {
    let tuples = ctx.lim.finite_tuples().expect("finite carrier");
    let projections: Vec<&[usize]> = ctx
        .lim
        .projections
        .iter()
        .map(|p| match p {
            MapKind::Table(t) => t.as_slice(),
            _ => unreachable!("finite limits carry tables"),
        })
        .collect();
    (tuples.len(), projections)
}

fn exhaustive_discrete(
    f: FunctorId,
    ctx: &Ctx,
    bound: usize,
    seed: u64,
) -> Result<SurjectivityReport> {
    let img = image_diagram(f, ctx.d, bound)?;
    let ImageDiagram::Finite { diagram, listings } = img else {
        unreachable!("discrete functors materialize")
    };
    let product: usize = listings
        .iter()
        .map(|l| match l {
            Listing::Subsets(v) => v.len(),
            Listing::Families(v) => v.len(),
        })
        .product();
    if product > EXHAUSTIVE_TUPLE_CAP {
        return Err(Error::EnumerationTooLarge(format!(
            "image product has {product} tuples, cap is {EXHAUSTIVE_TUPLE_CAP}"
        )));
    }
    let img_lim = crate::category::compute_limit(&diagram)?;
    let img_tuples = img_lim.finite_tuples().expect("finite image carrier");
    let (carrier_len, projections) = carrier_projections(ctx);

    let mut report = SurjectivityReport::new(f, &ctx.digest, "exhaustive", seed);
    for tuple in img_tuples {
        report.tuples_tested += 1;
        match f {
            FunctorId::Exp => {
                let targets: Vec<u32> = tuple
                    .iter()
                    .zip(listings.iter())
                    .map(|(&i, l)| match l {
                        Listing::Subsets(v) => v[i],
                        _ => unreachable!(),
                    })
                    .collect();
                check_exp_tuple(&targets, carrier_len, &projections, &mut report);
            }
            FunctorId::G | FunctorId::Lambda => {
                let targets: Vec<&UpFamily> = tuple
                    .iter()
                    .zip(listings.iter())
                    .map(|(&i, l)| match l {
                        Listing::Families(v) => &v[i],
                        _ => unreachable!(),
                    })
                    .collect();
                check_family_tuple(f, &targets, carrier_len, &projections, &mut report);
            }
            _ => unreachable!(),
        }
    }
    Ok(report)
}

/// Pullback preimage for a subset tuple. The pullback is the largest set
/// whose projections stay inside the targets, so it witnesses a preimage
/// exactly when one exists.
fn check_exp_tuple(
    targets: &[u32],
    carrier_len: usize,
    projections: &[&[usize]],
    report: &mut SurjectivityReport,
) {
    let pullback: Vec<usize> = (0..carrier_len)
        .filter(|&t| {
            projections
                .iter()
                .zip(targets.iter())
                .all(|(proj, &mask)| mask & (1 << proj[t]) != 0)
        })
        .collect();
    let describe = |note: &str| {
        format!(
            "exp tuple {:?}: {note}",
            targets.iter().map(|m| format!("{m:b}")).collect::<Vec<_>>()
        )
    };
    if pullback.is_empty() {
        report.misses.push(describe("empty pullback"));
        return;
    }
    for (proj, &mask) in projections.iter().zip(targets.iter()) {
        let mut image = 0u32;
        for &t in &pullback {
            image |= 1 << proj[t];
        }
        if image != mask {
            report
                .misses
                .push(describe("pullback projection misses the target"));
            return;
        }
    }
    report.successes += 1;
}

/// Canonical family preimage: the up-closure of the nonempty pullbacks of
/// every generator choice. Misses fall back to an exhaustive search over all
/// families on small carriers, so a reported miss on those is conclusive.
fn check_family_tuple(
    f: FunctorId,
    targets: &[&UpFamily],
    carrier_len: usize,
    projections: &[&[usize]],
    report: &mut SurjectivityReport,
) {
    let describe = |note: &str| {
        let shown: Vec<String> = targets.iter().map(|f| f.to_string()).collect();
        format!("{} tuple ({}): {note}", f.name(), shown.join(", "))
    };

    // All generator choices, one generator per object.
    let mut pullbacks: Vec<Vec<usize>> = Vec::new();
    let mut choice: Vec<usize> = vec![0; targets.len()];
    loop {
        let masks: Vec<u32> = targets
            .iter()
            .zip(choice.iter())
            .map(|(fam, &gi)| fam.generators()[gi])
            .collect();
        let pb: Vec<usize> = (0..carrier_len)
            .filter(|&t| {
                projections
                    .iter()
                    .zip(masks.iter())
                    .all(|(proj, &mask)| mask & (1 << proj[t]) != 0)
            })
            .collect();
        if !pb.is_empty() {
            pullbacks.push(pb);
        }
        let mut pos = targets.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < targets[pos].generators().len() {
                break;
            }
            choice[pos] = 0;
        }
        if choice.iter().all(|&c| c == 0) {
            break;
        }
    }

    let outcome = if pullbacks.is_empty() {
        MatchOutcome::NoMatch
    } else {
        witness_matches(f, &pullbacks, targets, carrier_len, projections)
    };
    match outcome {
        MatchOutcome::Match => {
            report.successes += 1;
            return;
        }
        MatchOutcome::Unverifiable => {
            report
                .unverified
                .push(describe("maximality of the witness exceeds the verification cap"));
            return;
        }
        MatchOutcome::NoMatch => {}
    }

    // Exhaustive fallback on small carriers: scan every family.
    let cap = if f == FunctorId::Lambda {
        LAMBDA_FALLBACK_CAP
    } else {
        G_FALLBACK_CAP
    };
    if carrier_len <= cap {
        let all = if f == FunctorId::Lambda {
            lambda_space(carrier_len, cap).expect("carrier within bound")
        } else {
            g_space(carrier_len, cap).expect("carrier within bound")
        };
        for cand in &all {
            let sets: Vec<Vec<usize>> = cand
                .generators()
                .iter()
                .map(|&mask| (0..carrier_len).filter(|&t| mask & (1 << t) != 0).collect())
                .collect();
            if witness_matches(f, &sets, targets, carrier_len, projections) == MatchOutcome::Match {
                report.successes += 1;
                return;
            }
        }
        report.misses.push(describe("no preimage family exists"));
    } else {
        report
            .misses
            .push(describe("canonical pullback witness failed"));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MatchOutcome {
    Match,
    NoMatch,
    Unverifiable,
}

/// Whether the family generated by `sets` on the carrier maps exactly onto
/// the target tuple, and (for superextensions) is itself maximal linked.
fn witness_matches(
    f: FunctorId,
    sets: &[Vec<usize>],
    targets: &[&UpFamily],
    carrier_len: usize,
    projections: &[&[usize]],
) -> MatchOutcome {
    let antichain = antichain_of_sets(sets);
    for (proj, target) in projections.iter().zip(targets.iter()) {
        let mut images: Vec<u32> = antichain
            .iter()
            .map(|s| {
                let mut mask = 0u32;
                for &t in s {
                    mask |= 1 << proj[t];
                }
                mask
            })
            .collect();
        reduce_mask_antichain(&mut images);
        if images != target.generators() {
            return MatchOutcome::NoMatch;
        }
    }
    if f == FunctorId::Lambda {
        // The witness must be a maximal linked family on the carrier. The
        // generator-choice pullbacks are linked but rarely maximal; any
        // maximal linked completion still maps onto the target, because the
        // image stays linked and already contains a maximal linked family.
        let linked = antichain.iter().enumerate().all(|(i, a)| {
            antichain
                .iter()
                .skip(i + 1)
                .all(|b| a.iter().any(|t| b.contains(t)))
        });
        if !linked {
            return MatchOutcome::NoMatch;
        }
        if carrier_len > MAXIMALITY_CARRIER_CAP {
            return MatchOutcome::Unverifiable;
        }
        let mut gens: Vec<u32> = antichain
            .iter()
            .map(|s| s.iter().fold(0u32, |m, &t| m | (1 << t)))
            .collect();
        greedy_maximal_linked_completion(&mut gens, carrier_len);
        // Re-verify the characteristic image of the completed family.
        for (proj, target) in projections.iter().zip(targets.iter()) {
            let mut images: Vec<u32> = gens
                .iter()
                .map(|&mask| {
                    let mut out = 0u32;
                    for t in 0..carrier_len {
                        if mask & (1 << t) != 0 {
                            out |= 1 << proj[t];
                        }
                    }
                    out
                })
                .collect();
            reduce_mask_antichain(&mut images);
            if images != target.generators() {
                return MatchOutcome::NoMatch;
            }
        }
        // Maximality of the completion, verified by exhaustion.
        let member =
            |gens: &[u32], mask: u32| -> bool { gens.iter().any(|&g| g & mask == g) };
        for mask in 1u32..(1 << carrier_len) {
            if gens.iter().all(|&g| g & mask != 0) && !member(&gens, mask) {
                return MatchOutcome::NoMatch;
            }
        }
    }
    MatchOutcome::Match
}

/// Greedily extends a linked generator antichain to a maximal linked family
/// over an n-point carrier: every subset meeting all current generators that
/// is not yet a member becomes a generator. One pass suffices — the family
/// only grows, so rejected candidates stay rejected.
fn greedy_maximal_linked_completion(gens: &mut Vec<u32>, n: usize) {
    let mut order: Vec<u32> = (1..(1u32 << n)).collect();
    order.sort_by(|a, b| cmp_masks(*a, *b));
    for cand in order {
        let member = gens.iter().any(|&g| g & cand == g);
        if member {
            continue;
        }
        if gens.iter().all(|&g| g & cand != 0) {
            gens.push(cand);
            let snapshot = gens.clone();
            gens.retain(|&g| !snapshot.iter().any(|&h| h != g && h & g == h));
        }
    }
    gens.sort_by(|a, b| cmp_masks(*a, *b));
}

fn antichain_of_sets(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        let redundant = sets
            .iter()
            .any(|t| t != s && t.iter().all(|x| s.contains(x)) && t.len() < s.len());
        if !redundant && !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

fn reduce_mask_antichain(masks: &mut Vec<u32>) {
    masks.sort_by(|a, b| cmp_masks(*a, *b));
    masks.dedup();
    let copy = masks.clone();
    masks.retain(|&m| !copy.iter().any(|&o| o != m && o & m == o));
}

fn sampled_measures(ctx: &Ctx, budget: usize, seed: u64) -> Result<SurjectivityReport> {
    let center = chi_p(ctx.d, &ctx.lim, &Measure::uniform(ctx.lim.finite_tuples().unwrap().len()))?;
    let mut report = SurjectivityReport::new(FunctorId::P, &ctx.digest, "sampled", seed);
    // Radius 2 covers the whole compatible-tuple polytope in L1.
    let radius = rint(2);
    for i in 0..budget {
        report.tuples_tested += 1;
        let tuple = sample_compatible_tuple(ctx.d, &center, &radius, sample_seed(seed, i))?;
        let poly = coupling_polytope(ctx.d, &ctx.lim, &tuple)?;
        if poly.witness().is_some() {
            report.successes += 1;
        } else {
            let shown: Vec<String> = tuple.iter().map(|m| m.to_string()).collect();
            report
                .misses
                .push(format!("no coupling for marginals ({})", shown.join(", ")));
        }
    }
    Ok(report)
}

fn sample_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x0100_0000_01b3).wrapping_add(index as u64)
}

fn object_polytopes(ctx: &Ctx) -> Vec<Polytope> {
    ctx.d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            crate::category::SpaceKind::Poly(p) => p.clone(),
            _ => unreachable!("checked by image_diagram"),
        })
        .collect()
}

fn sampled_convex(ctx: &Ctx, budget: usize, seed: u64) -> Result<SurjectivityReport> {
    super::image_diagram(FunctorId::Cc, ctx.d, DEFAULT_BOUND_FOR_SAMPLING)?;
    let objects = object_polytopes(ctx);
    let lim_poly = ctx.lim.polytope().ok_or(Error::EmptyLimit)?.clone();
    let mut report = SurjectivityReport::new(FunctorId::Cc, &ctx.digest, "sampled", seed);
    for i in 0..budget {
        report.tuples_tested += 1;
        let mut rng = sampling::stream(seed, i as u64);
        // The first probe is the canonical full tuple: every object's whole
        // polytope. On product shapes its witness is the limit itself; on
        // constrained shapes this is exactly where pullback projections can
        // come up short, and that must be reported.
        let candidate: Vec<Polytope> = if i == 0 {
            objects.clone()
        } else {
            objects
                .iter()
                .map(|p| super::random_subpolytope(&mut rng, p))
                .collect()
        };
        let targets = if polytope_tuple_compatible(ctx.d, &candidate)? {
            candidate
        } else {
            report.image_restricted_samples += 1;
            let c = super::random_subpolytope(&mut rng, &lim_poly);
            chi_cc(ctx.d, &ctx.lim, &c)?
        };
        match surjectivity_witness_cc(ctx.d, &ctx.lim, &targets) {
            Ok(_) => report.successes += 1,
            Err(Error::EmptyWitness) => report.misses.push("empty pullback witness".into()),
            Err(Error::WitnessProjectionMismatch { object, detail }) => report
                .misses
                .push(format!("projection mismatch at `{object}`: {detail}")),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

const DEFAULT_BOUND_FOR_SAMPLING: usize = super::DEFAULT_ENUM_BOUND;

fn sampled_families(f: FunctorId, ctx: &Ctx, budget: usize, seed: u64) -> Result<SurjectivityReport> {
    super::image_diagram(f, ctx.d, DEFAULT_BOUND_FOR_SAMPLING)?;
    let objects = object_polytopes(ctx);
    let lim_poly = ctx.lim.polytope().ok_or(Error::EmptyLimit)?.clone();
    let linked = f == FunctorId::LambdaCc;
    let mut report = SurjectivityReport::new(f, &ctx.digest, "sampled", seed);
    for i in 0..budget {
        report.tuples_tested += 1;
        let mut rng = sampling::stream(seed, i as u64);
        // Probe the principal families at the full object polytopes first.
        let candidate: Vec<ConvexFamily> = if i == 0 {
            objects
                .iter()
                .map(|p| ConvexFamily::principal(p.clone(), p.clone()))
                .collect::<Result<_>>()?
        } else {
            objects
                .iter()
                .map(|p| super::random_family(&mut rng, p, linked))
                .collect()
        };
        let targets = if family_tuple_compatible(ctx.d, &candidate)? {
            candidate
        } else {
            report.image_restricted_samples += 1;
            let fam = super::random_family(&mut rng, &lim_poly, linked);
            chi_g_cc(ctx.d, &ctx.lim, &fam)?
        };
        match d_c_witness(ctx.d, &ctx.lim, &targets) {
            Ok(w) => {
                if linked && !w.is_linked() {
                    report
                        .misses
                        .push("canonical witness family is not linked".into());
                } else {
                    report.successes += 1;
                }
            }
            Err(Error::EmptyWitness) => report.misses.push("empty pullback witness".into()),
            Err(Error::WitnessProjectionMismatch { object, detail }) => report
                .misses
                .push(format!("projection mismatch at `{object}`: {detail}")),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

fn sampled_composite(f: FunctorId, ctx: &Ctx, budget: usize, seed: u64) -> Result<SurjectivityReport> {
    let (outer, inner) = f.factors().expect("composites have factors");
    debug_assert_eq!(inner, FunctorId::P);
    let ImageDiagram::Poly { diagram: d1 } = image_diagram(FunctorId::P, ctx.d, DEFAULT_BOUND_FOR_SAMPLING)? else {
        unreachable!("P materializes as a polytope diagram")
    };
    let lim1 = crate::category::compute_limit(&d1)?;
    if lim1.is_empty() {
        return Err(Error::EmptyLimit);
    }
    let carrier = ctx.lim.finite_tuples().expect("finite carrier").len();
    let simplex = Polytope::std_simplex(carrier);
    let margins = super::marginal_maps(ctx.d, &ctx.lim)?;
    let stacked = super::stacked_marginal_map(&margins);
    let simplices: Vec<Polytope> = object_simplices(ctx);
    let mut report = SurjectivityReport::new(f, &ctx.digest, "sampled", seed);

    for i in 0..budget {
        report.tuples_tested += 1;
        let mut rng = sampling::stream(seed, i as u64);
        match outer {
            FunctorId::Cc => {
                let independent: Vec<Polytope> = simplices
                    .iter()
                    .map(|p| super::random_subpolytope(&mut rng, p))
                    .collect();
                let targets = if polytope_tuple_compatible(&d1, &independent)? {
                    independent
                } else {
                    report.image_restricted_samples += 1;
                    let c = super::random_subpolytope(&mut rng, &simplex);
                    margins
                        .iter()
                        .map(|m| c.affine_image(m))
                        .collect::<Result<_>>()?
                };
                match composite_set_preimage(&d1, &lim1, &simplex, &stacked, &margins, &targets) {
                    Ok(_) => report.successes += 1,
                    Err(e) => report.misses.push(format!("{e}")),
                }
            }
            FunctorId::GCc | FunctorId::LambdaCc => {
                let linked = outer == FunctorId::LambdaCc;
                let independent: Vec<ConvexFamily> = simplices
                    .iter()
                    .map(|p| super::random_family(&mut rng, p, linked))
                    .collect();
                let targets = if family_tuple_compatible(&d1, &independent)? {
                    independent
                } else {
                    report.image_restricted_samples += 1;
                    let lim1_poly = lim1.polytope().expect("nonempty").clone();
                    let fam = super::random_family(&mut rng, &lim1_poly, linked);
                    chi_g_cc(&d1, &lim1, &fam)?
                };
                match composite_family_preimage(&d1, &lim1, &simplex, &stacked, &margins, &targets)
                {
                    Ok(w) => {
                        if linked && !w.is_linked() {
                            report
                                .misses
                                .push("composite witness family is not linked".into());
                        } else {
                            report.successes += 1;
                        }
                    }
                    Err(e) => report.misses.push(format!("{e}")),
                }
            }
            _ => unreachable!("registered composites put cc-like functors outside"),
        }
    }
    Ok(report)
}

fn object_simplices(ctx: &Ctx) -> Vec<Polytope> {
    ctx.d
        .spaces()
        .iter()
        .map(|s| match &s.kind {
            crate::category::SpaceKind::Finite { points } => Polytope::std_simplex(*points),
            _ => unreachable!("composites need finite bases"),
        })
        .collect()
}

/// Stage-two preimage for composites over P: pulls a witness set in the
/// compatible-measure polytope back through the marginal map.
fn composite_set_preimage(
    d1: &crate::category::Diagram,
    lim1: &crate::category::LimitSpace,
    simplex: &Polytope,
    stacked: &crate::spaces::AffineMap,
    margins: &[crate::spaces::AffineMap],
    targets: &[Polytope],
) -> Result<Polytope> {
    let w = surjectivity_witness_cc(d1, lim1, targets)?;
    let c = preimage_polytope(simplex, stacked, &w)?.ok_or(Error::EmptyWitness)?;
    for (o, (margin, target)) in margins.iter().zip(targets.iter()).enumerate() {
        let got = c.affine_image(margin)?;
        if &got != target {
            return Err(Error::WitnessProjectionMismatch {
                object: format!("object {o}"),
                detail: format!("measure-level preimage projects to {got}, target {target}"),
            });
        }
    }
    Ok(c)
}

fn composite_family_preimage(
    d1: &crate::category::Diagram,
    lim1: &crate::category::LimitSpace,
    simplex: &Polytope,
    stacked: &crate::spaces::AffineMap,
    margins: &[crate::spaces::AffineMap],
    targets: &[ConvexFamily],
) -> Result<ConvexFamily> {
    let w = d_c_witness(d1, lim1, targets)?;
    let mut gens: Vec<Polytope> = Vec::new();
    for g in w.generators() {
        if let Some(u) = preimage_polytope(simplex, stacked, g)? {
            gens.push(u);
        }
    }
    if gens.is_empty() {
        return Err(Error::EmptyWitness);
    }
    let fam = ConvexFamily::new(simplex.clone(), gens)?;
    for (o, (margin, target)) in margins.iter().zip(targets.iter()).enumerate() {
        let got = crate::convex::g_cc_map(margin, &fam, target.ambient())?;
        if &got != target {
            return Err(Error::WitnessProjectionMismatch {
                object: format!("object {o}"),
                detail: "measure-level preimage family misses the target".into(),
            });
        }
    }
    Ok(fam)
}

