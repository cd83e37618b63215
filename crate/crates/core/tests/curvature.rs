//! Curvature laws, the Einstein cross-check and degeneracy handling.

use proptest::prelude::*;
use thermocurv::geometry::{self, hessian_metric, natural_metric, DEGENERACY_EPS};
use thermocurv::thermo::{curvature_grid, entropy, ChaplyginFamily};
use thermocurv::{
    curvature_scan, einstein_residual, gaussian_curvature, parse, Error, MetricKind, Point2,
};

const ALPHAS: [f64; 6] = [-3.0, -2.0, -1.0, -0.5, 2.0, 3.0];

fn family_cases() -> impl Iterator<Item = ChaplyginFamily> {
    ALPHAS.into_iter().flat_map(|alpha| {
        [1.0, 2.5].into_iter().flat_map(move |phi0| {
            [1.0, 3.0]
                .into_iter()
                .map(move |c| ChaplyginFamily::new(alpha, phi0, c).unwrap())
        })
    })
}

#[test]
fn family_has_constant_natural_curvature() {
    for fam in family_cases() {
        let r = curvature_scan(&entropy(&fam), MetricKind::Natural, &curvature_grid()).unwrap();
        let expected = -fam.alpha * fam.alpha / (4.0 * (fam.alpha - 1.0));
        assert_eq!(r.samples, 400, "{fam:?}");
        assert!((r.k_mean - expected).abs() <= 1e-8, "{fam:?}: {}", r.k_mean);
        assert!(r.k_spread <= 1e-8, "{fam:?}: spread {}", r.k_spread);
        assert!(r.max_einstein_residual.unwrap() <= 1e-6, "{fam:?}");
    }
}

#[test]
fn family_hessian_metric_is_flat() {
    for fam in family_cases() {
        let r = curvature_scan(&entropy(&fam), MetricKind::Hessian, &curvature_grid()).unwrap();
        assert!(r.k_mean.abs() <= 1e-8 && r.k_spread <= 1e-8, "{fam:?}");
    }
}

#[test]
fn curvature_does_not_depend_on_outer_function() {
    let w = "(q1^-2 + q2^-2)";
    for f in [
        format!("log({w})"),
        format!("{w}^0.3"),
        format!("log({w}) + 0.1*{w}"),
    ] {
        let r =
            curvature_scan(&parse(&f).unwrap(), MetricKind::Natural, &curvature_grid()).unwrap();
        assert!((r.k_mean - 1.0 / 3.0).abs() <= 1e-8, "{f}: {}", r.k_mean);
    }
}

#[test]
fn einstein_residual_rejects_wrong_constant() {
    let phi = parse("log(q1^2 + q2^2)").unwrap();
    let p = Point2::new(1.3, 0.7);
    let k = gaussian_curvature(&phi, MetricKind::Natural, p).unwrap();
    assert!((k + 1.0).abs() < 1e-10);
    assert!(einstein_residual(&phi, p, k).unwrap().normalized() < 1e-10);
    assert!(einstein_residual(&phi, p, k + 0.1).unwrap().normalized() > 1e-3);
}

#[test]
fn einstein_residual_matches_pointwise_curvature_for_nonconstant_relations() {
    // The reduced equation holds pointwise with the local curvature even when
    // that curvature varies.
    for text in [
        "q1^2*q2 + q2^3",
        "log(q1 + q2^2) + q1^3",
        "exp(q1/2)*q2^2 + q1^4",
    ] {
        let phi = parse(text).unwrap();
        for (a, b) in [(0.8, 1.1), (1.5, 0.6), (2.0, 2.0)] {
            let p = Point2::new(a, b);
            let Ok(k) = gaussian_curvature(&phi, MetricKind::Natural, p) else {
                continue;
            };
            let r = einstein_residual(&phi, p, k).unwrap();
            assert!(r.normalized() <= 1e-9, "{text} at {p:?}: {r:?}");
        }
    }
}

#[test]
fn linear_argument_logarithm_is_degenerate_everywhere() {
    let phi = parse("log(q1+q2)").unwrap();
    for p in curvature_grid().points() {
        assert!(hessian_metric(&phi, p).unwrap().det().abs() <= 1e-12);
    }
    for kind in [MetricKind::Hessian, MetricKind::Natural] {
        let e = curvature_scan(&phi, kind, &curvature_grid()).unwrap_err();
        assert!(
            matches!(e, Error::AllPointsDegenerate { count: 400 }),
            "{e:?}"
        );
    }
    assert!(matches!(
        ChaplyginFamily::standard(1.0),
        Err(Error::InvalidFamily { .. })
    ));
}

#[test]
fn partially_degenerate_grid_is_counted() {
    // det h = 6 q1 * 2 - 0 vanishes on q1 = 0 only.
    let phi = parse("q1^3 + q2^2").unwrap();
    let g = "-1:1:5,1:2:3".parse().unwrap();
    let r = curvature_scan(&phi, MetricKind::Hessian, &g).unwrap();
    assert_eq!((r.samples, r.degenerate_points), (12, 3));
}

#[test]
fn degeneracy_threshold_is_relative() {
    let m = geometry::MetricSample::new(1e6, 1e6 - 1e-7, 1e6);
    assert!(m.is_degenerate(DEGENERACY_EPS));
    let m = geometry::MetricSample::new(1e-6, 0.0, 1e-6);
    assert!(!m.is_degenerate(DEGENERACY_EPS));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn natural_metric_is_a_conformal_rescaling(
        a in 0.5f64..4.0,
        b in 0.5f64..4.0,
        k in prop::sample::select(vec![
            "log(q1^-2 + q2^-2)", "q1^2*q2 + q2^3", "exp(q1/2)*q2^2 + q1^4", "log(q1^3 + 3*q2^3)",
        ]),
    ) {
        let phi = parse(k).unwrap();
        let p = Point2::new(a, b);
        let h = hessian_metric(&phi, p).unwrap();
        let g = natural_metric(&phi, p).unwrap();
        let omega = geometry::conformal_factor(&phi, p).unwrap();
        let scale = (omega * omega * h.det()).abs().max(1e-300);
        prop_assert!((g.det() - omega * omega * h.det()).abs() <= 1e-12 * scale);
        prop_assert!((g.g12 - omega * h.g12).abs() <= 1e-14 * (omega * h.g12).abs().max(1e-300));
    }

    #[test]
    fn curvature_scales_inversely_with_the_relation(
        a in 0.5f64..4.0,
        b in 0.5f64..4.0,
        s in prop::sample::select(vec![0.5, 2.0, 7.0]),
    ) {
        // Scaling Phi by s scales the Hessian metric by s and leaves Omega h invariant.
        let phi = parse("q1^2*q2 + q2^3 + q1^4").unwrap();
        let scaled = s * phi.clone();
        let p = Point2::new(a, b);
        let kh = gaussian_curvature(&phi, MetricKind::Hessian, p).unwrap();
        let khs = gaussian_curvature(&scaled, MetricKind::Hessian, p).unwrap();
        prop_assert!((khs - kh / s).abs() <= 1e-10 * kh.abs().max(1.0));
        let kn = gaussian_curvature(&phi, MetricKind::Natural, p).unwrap();
        let kns = gaussian_curvature(&scaled, MetricKind::Natural, p).unwrap();
        prop_assert!((kns - kn).abs() <= 1e-10 * kn.abs().max(1.0));
    }

    #[test]
    fn family_curvature_law_holds_pointwise(
        alpha in prop::sample::select(ALPHAS.to_vec()),
        a in 0.2f64..10.0,
        b in 0.2f64..10.0,
    ) {
        let fam = ChaplyginFamily::standard(alpha).unwrap();
        let k = gaussian_curvature(&entropy(&fam), MetricKind::Natural, Point2::new(a, b)).unwrap();
        prop_assert!((k - fam.natural_curvature()).abs() <= 1e-8);
    }
}
