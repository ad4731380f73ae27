//! End-to-end harness checks on small instances: exact surjectivity
//! certificates, openness probes, composition factorization, and honest
//! reporting of genuine misses.

use omcert_core::category::{Diagram, FiniteCategory, MapKind, SpaceRef};
use omcert_core::certify::{
    bicommutative_square, certify_composition, certify_open, certify_surjective,
    product_diagram, render_report, BasePoint, FunctorId, DEFAULT_ENUM_BOUND,
};
use omcert_core::rat::{rat, rint};
use omcert_core::spaces::{Measure, Polytope};

fn seg01() -> Polytope {
    Polytope::segment(vec![rint(0)], vec![rint(1)]).unwrap()
}

#[test]
fn exp_surjective_on_squares_exhaustively() {
    for (nx, ny) in [(2, 2), (2, 3), (3, 3)] {
        let d = bicommutative_square(nx, ny);
        let report = certify_surjective(FunctorId::Exp, &d, 0, 1, DEFAULT_ENUM_BOUND).unwrap();
        assert_eq!(report.mode, "exhaustive");
        assert!(report.pass(), "misses: {:?}", report.misses);
        assert!(report.tuples_tested > 0);
    }
}

#[test]
fn g_and_lambda_surjective_on_squares() {
    let d = bicommutative_square(2, 2);
    for f in [FunctorId::G, FunctorId::Lambda] {
        let report = certify_surjective(f, &d, 0, 1, DEFAULT_ENUM_BOUND).unwrap();
        assert!(report.pass(), "{}: misses {:?}", f, report.misses);
        assert!(report.tuples_tested > 0);
    }
}

#[test]
fn exp_miss_on_a_parallel_pair_is_reported_not_hidden() {
    // f = (1,1,2), g = (1,2,2): the equalizer carrier is {1,3}, yet the
    // subset tuple ({1,2,3},{1,2}) is compatible — its pullback cannot
    // project onto {1,2,3}, and no preimage exists.
    let d = Diagram::new(
        FiniteCategory::parallel_pair(),
        vec![
            ("A".into(), SpaceRef::finite("A", 3)),
            ("B".into(), SpaceRef::finite("B", 2)),
        ],
        vec![
            ("id_A".into(), MapKind::Table(vec![0, 1, 2])),
            ("id_B".into(), MapKind::Table(vec![0, 1])),
            ("f".into(), MapKind::Table(vec![0, 0, 1])),
            ("g".into(), MapKind::Table(vec![0, 1, 1])),
        ],
    )
    .unwrap();
    let report = certify_surjective(FunctorId::Exp, &d, 0, 1, DEFAULT_ENUM_BOUND).unwrap();
    assert!(!report.misses.is_empty());
    assert!(report.successes > 0);
}

#[test]
fn p_surjective_sampled_on_square() {
    let d = bicommutative_square(2, 3);
    let report = certify_surjective(FunctorId::P, &d, 50, 42, DEFAULT_ENUM_BOUND).unwrap();
    assert_eq!(report.mode, "sampled");
    assert_eq!(report.tuples_tested, 50);
    assert!(report.pass(), "misses: {:?}", report.misses);
}

#[test]
fn cc_and_families_surjective_on_segment_product() {
    let d = product_diagram(vec![
        SpaceRef::poly("A", seg01()),
        SpaceRef::poly("B", seg01()),
    ]);
    for f in [FunctorId::Cc, FunctorId::GCc, FunctorId::LambdaCc] {
        let report = certify_surjective(f, &d, 15, 7, DEFAULT_ENUM_BOUND).unwrap();
        assert!(report.pass(), "{}: misses {:?}", f, report.misses);
        assert_eq!(report.image_restricted_samples, 0, "{f}: products need no fallback");
    }
}

#[test]
fn p_openness_probe_smoke() {
    let d = bicommutative_square(2, 2);
    let base = Measure::new(vec![rat(1, 3), rat(1, 6), rat(1, 3), rat(1, 6)]).unwrap();
    let eps = vec![rat(1, 10), rat(1, 100)];
    let report = certify_open(
        FunctorId::P,
        &d,
        Some(BasePoint::Measure(base)),
        &eps,
        25,
        9,
    )
    .unwrap();
    assert!(report.pass(), "failures: {:?}", report.failures);
    assert_eq!(report.rows.len(), 2);
    for row in &report.rows {
        assert_eq!(row.successes, 25);
    }
    let rendered = render_report(&report);
    assert!(rendered.contains("\"fitted_k\""));
}

#[test]
fn cc_openness_probe_smoke() {
    let d = product_diagram(vec![
        SpaceRef::poly("A", seg01()),
        SpaceRef::poly("B", seg01()),
    ]);
    let base = Polytope::axis_box(&[(rat(1, 4), rat(3, 4)), (rat(1, 4), rat(3, 4))]).unwrap();
    let eps = vec![rat(1, 10), rat(1, 100)];
    let report = certify_open(FunctorId::Cc, &d, Some(BasePoint::Set(base)), &eps, 20, 5).unwrap();
    assert!(report.pass(), "failures: {:?}", report.failures);
    assert_eq!(report.rows.len(), 2);
}

#[test]
fn discrete_openness_is_automatic() {
    let d = bicommutative_square(2, 2);
    let report = certify_open(FunctorId::Exp, &d, None, &[rat(1, 10)], 5, 3).unwrap();
    assert_eq!(report.openness_mode, "automatic: finite discrete spaces");
    assert!(report.pass());
}

#[test]
fn composition_factorization_on_two_point_square() {
    let d = bicommutative_square(2, 2);
    for f in [FunctorId::CcP, FunctorId::GCcP, FunctorId::LambdaCcP] {
        let report = certify_composition(f, &d, 10, 21).unwrap();
        assert_eq!(report.factorization_equal, 10, "{f}: {:?}", report.mismatches);
        assert!(report.pass(), "{f}: {:?}", report.surjectivity_misses);
    }
}

#[test]
fn reports_are_deterministic_per_seed() {
    let d = bicommutative_square(2, 2);
    let a = certify_surjective(FunctorId::P, &d, 20, 77, DEFAULT_ENUM_BOUND).unwrap();
    let b = certify_surjective(FunctorId::P, &d, 20, 77, DEFAULT_ENUM_BOUND).unwrap();
    assert_eq!(render_report(&a), render_report(&b));
    let c = certify_surjective(FunctorId::P, &d, 20, 78, DEFAULT_ENUM_BOUND).unwrap();
    assert_ne!(render_report(&a), render_report(&c));
}

#[test]
fn zero_radius_openness_row_has_zero_distance() {
    let d = bicommutative_square(2, 2);
    let eps = vec![rint(0), rat(1, 10)];
    let report = certify_open(FunctorId::P, &d, None, &eps, 10, 3).unwrap();
    assert!(report.pass());
    assert_eq!(report.rows[0].max_distance, "0");
    assert_eq!(report.rows[0].fitted_k, "0");
}

#[test]
fn marginal_map_membership_matches_coupling_polytope() {
    // χ of a joint measure yields marginals whose coupling polytope contains
    // that measure; and a measure is a coupling of (μ₁, μ₂) exactly when its
    // marginals are (μ₁, μ₂).
    let d = bicommutative_square(2, 2);
    let lim = omcert_core::category::compute_limit(&d).unwrap();
    let lambda = Measure::new(vec![rat(1, 2), rat(1, 5), rat(1, 10), rat(1, 5)]).unwrap();
    let marginals = omcert_core::prob::chi_p(&d, &lim, &lambda).unwrap();
    let poly = omcert_core::prob::coupling_polytope(&d, &lim, &marginals).unwrap();
    let hit = poly
        .equalities()
        .iter()
        .all(|f| f.eval(lambda.weights()) == f.rhs);
    assert!(hit, "a measure couples its own marginals");

    let other = Measure::new(vec![rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)]).unwrap();
    let hit_other = poly
        .equalities()
        .iter()
        .all(|f| f.eval(other.weights()) == f.rhs);
    assert!(!hit_other, "different marginals, not a coupling");
}

#[test]
fn family_openness_probe_smoke() {
    let d = product_diagram(vec![
        SpaceRef::poly("A", seg01()),
        SpaceRef::poly("B", seg01()),
    ]);
    let lim = omcert_core::category::compute_limit(&d).unwrap();
    let square = lim.polytope().unwrap().clone();
    let base = omcert_core::convex::ConvexFamily::new(
        square.clone(),
        vec![
            Polytope::axis_box(&[(rat(1, 4), rat(1, 2)), (rat(1, 4), rat(1, 2))]).unwrap(),
            Polytope::axis_box(&[(rat(3, 8), rat(3, 4)), (rat(3, 8), rat(3, 4))]).unwrap(),
        ],
    )
    .unwrap();
    let eps = vec![rat(1, 10), rat(1, 100)];
    for f in [FunctorId::GCc, FunctorId::LambdaCc] {
        let report = certify_open(f, &d, Some(BasePoint::Family(base.clone())), &eps, 10, 6).unwrap();
        assert!(report.pass(), "{f}: {:?}", report.failures);
        assert_eq!(report.rows.len(), 2);
    }
}

#[test]
fn composite_openness_probe_smoke() {
    let d = bicommutative_square(2, 2);
    let eps = vec![rat(1, 10), rat(1, 100)];
    for f in [FunctorId::CcP, FunctorId::GCcP, FunctorId::LambdaCcP] {
        let report = certify_open(f, &d, None, &eps, 5, 8).unwrap();
        assert!(report.pass(), "{f}: failures {:?}", report.failures);
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.successes, 5, "{f} at eps {}", row.eps);
        }
    }
}

#[test]
fn values_are_safely_shareable_across_threads() {
    // Everything is immutable after construction; concurrent evaluation from
    // plain shared references must agree with sequential evaluation.
    let d = std::sync::Arc::new(bicommutative_square(3, 4));
    let lim = std::sync::Arc::new(omcert_core::category::compute_limit(&d).unwrap());
    let base = Measure::uniform(12);
    let expected = omcert_core::prob::chi_p(&d, &lim, &base).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let d = d.clone();
            let lim = lim.clone();
            let base = base.clone();
            let expected = expected.clone();
            std::thread::spawn(move || {
                for _ in 0..5 {
                    let got = omcert_core::prob::chi_p(&d, &lim, &base).unwrap();
                    assert_eq!(got, expected);
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
}
