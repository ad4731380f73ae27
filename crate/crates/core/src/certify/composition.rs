//! Composition factorization certificates.
//!
//! For a registered composite `F₁∘F₂`, the characteristic map factors as the
//! image of the inner characteristic map followed by the outer
//! characteristic map over the inner image diagram. Both sides are evaluated
//! exactly on sampled points and compared; the composite's surjectivity is
//! re-certified alongside from the factor constructions.

use serde::Serialize;

use crate::category::Diagram;
use crate::convex::{chi_cc, chi_g_cc, g_cc_map, ConvexFamily};
use crate::error::{Error, Result};
use crate::sampling;
use crate::spaces::Polytope;

use super::reports::{FINITE_REGIME_NOTE, REPORT_SCHEMA_VERSION};
use super::surjective::certify_surjective;
use super::{image_diagram, Ctx, FunctorId, ImageDiagram};

#[derive(Debug, Serialize)]
pub struct CompositionReport {
    pub schema_version: u32,
    pub functor: String,
    pub outer: String,
    pub inner: String,
    pub diagram_digest: String,
    pub seed: u64,
    pub samples: usize,
    pub factorization_equal: usize,
    pub mismatches: Vec<String>,
    pub surjectivity_tested: usize,
    pub surjectivity_misses: Vec<String>,
    pub note: String,
}

impl CompositionReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty() && self.surjectivity_misses.is_empty()
    }
}

/// Certifies the factorization of the composite's characteristic map on
/// sampled points, exactly, and re-runs the composite surjectivity sampling.
pub fn certify_composition(
    f: FunctorId,
    d: &Diagram,
    samples: usize,
    seed: u64,
) -> Result<CompositionReport> {
    let (outer, inner) = f.factors().ok_or_else(|| Error::InapplicableFunctor {
        functor: f.name().into(),
        reason: "not a registered composite".into(),
    })?;
    let ctx = Ctx::new(d)?;
    let ImageDiagram::Poly { diagram: d1 } = image_diagram(inner, d, super::DEFAULT_ENUM_BOUND)?
    else {
        unreachable!("the inner factor is the measure functor")
    };
    let lim1 = crate::category::compute_limit(&d1)?;
    if lim1.is_empty() {
        return Err(Error::EmptyLimit);
    }
    let lim1_poly = lim1.polytope().expect("nonempty").clone();
    let carrier = ctx.lim.finite_tuples().expect("finite carrier").len();
    let simplex = Polytope::std_simplex(carrier);
    let margins = super::marginal_maps(d, &ctx.lim)?;
    let stacked = super::stacked_marginal_map(&margins);

    let mut report = CompositionReport {
        schema_version: REPORT_SCHEMA_VERSION,
        functor: f.name().into(),
        outer: outer.name().into(),
        inner: inner.name().into(),
        diagram_digest: ctx.digest.clone(),
        seed,
        samples,
        factorization_equal: 0,
        mismatches: Vec::new(),
        surjectivity_tested: 0,
        surjectivity_misses: Vec::new(),
        note: FINITE_REGIME_NOTE.into(),
    };

    for i in 0..samples {
        let mut rng = sampling::stream(seed, i as u64);
        match outer {
            FunctorId::Cc => {
                // A sampled set of measures on the carrier.
                let c = super::random_subpolytope(&mut rng, &simplex);
                // Direct side: images under the per-object marginal maps.
                let lhs: Vec<Polytope> = margins
                    .iter()
                    .map(|m| c.affine_image(m))
                    .collect::<Result<_>>()?;
                // Factored side: image of the inner characteristic map, then
                // the outer characteristic map over the inner image diagram.
                let w = c.affine_image(&stacked)?;
                let rhs = chi_cc(&d1, &lim1, &w)?;
                if lhs == rhs {
                    report.factorization_equal += 1;
                } else {
                    report
                        .mismatches
                        .push(format!("sample {i}: set factorization differs"));
                }
            }
            FunctorId::GCc | FunctorId::LambdaCc => {
                let linked = outer == FunctorId::LambdaCc;
                let fam = super::random_family(&mut rng, &simplex, linked);
                let lhs: Vec<ConvexFamily> = margins
                    .iter()
                    .zip(object_simplices(&ctx))
                    .map(|(m, amb)| g_cc_map(m, &fam, &amb))
                    .collect::<Result<_>>()?;
                let w = g_cc_map(&stacked, &fam, &lim1_poly)?;
                let rhs = chi_g_cc(&d1, &lim1, &w)?;
                let flags_ok = !linked
                    || (w.is_linked()
                        && lhs.iter().all(|f| f.is_linked())
                        && rhs.iter().all(|f| f.is_linked()));
                if lhs == rhs && flags_ok {
                    report.factorization_equal += 1;
                } else if lhs != rhs {
                    report
                        .mismatches
                        .push(format!("sample {i}: family factorization differs"));
                } else {
                    report
                        .mismatches
                        .push(format!("sample {i}: linkedness not preserved"));
                }
            }
            _ => {
                return Err(Error::InapplicableFunctor {
                    functor: f.name().into(),
                    reason: "unsupported outer factor".into(),
                })
            }
        }
    }

    // Surjectivity of the composite, re-derived through the factor
    // constructions (pullback witness in the inner image, then the exact
    // preimage of the witness under the inner characteristic map).
    let surj = certify_surjective(f, d, samples, seed, super::DEFAULT_ENUM_BOUND)?;
    report.surjectivity_tested = surj.tuples_tested;
    report.surjectivity_misses = surj.misses;

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
