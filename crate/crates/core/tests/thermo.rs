//! Radius profiles, heat capacity and classification of the Chaplygin-type family.

use proptest::prelude::*;
use thermocurv::thermo::{
    classification_grid, heat_capacity_cv, pressure, radius_closed_form, radius_profile_at,
    RadiusClass, Sign, Verdict,
};
use thermocurv::{classify, radius_profile, ChaplyginFamily, Grid2, Point2};

#[test]
fn negative_exponents_are_physical() {
    for alpha in [-3.0, -2.0, -1.0] {
        let c = classify(
            &ChaplyginFamily::standard(alpha).unwrap(),
            &classification_grid(),
        )
        .unwrap();
        assert_eq!(c.verdict, Verdict::Physical, "alpha = {alpha}");
        assert!(c.min_r2 > 0.0);
        assert_eq!(c.cv_sign, Sign::Negative);
        assert!((c.k - c.k_expected).abs() <= 1e-8);
    }
}

#[test]
fn exponents_above_one_are_not_physical() {
    for alpha in [2.0, 3.0] {
        let c = classify(
            &ChaplyginFamily::standard(alpha).unwrap(),
            &classification_grid(),
        )
        .unwrap();
        assert_eq!(c.verdict, Verdict::NonPhysical, "alpha = {alpha}");
        assert!(c.min_r2 < 0.0);
    }
}

#[test]
fn heat_capacity_reference_value() {
    assert!((heat_capacity_cv(1.0, 1.0, -1.0).unwrap() + 1.0 / 3.0).abs() <= 1e-12);
}

#[test]
fn numeric_radius_matches_squared_denominator_closed_form() {
    let grid: Grid2 = "log:0.05:20:15".parse().unwrap();
    for alpha in [-3.0, -1.0, -0.5, 0.5, 2.0, 3.0] {
        let p = radius_profile(&ChaplyginFamily::standard(alpha).unwrap(), &grid).unwrap();
        let check = p.closed_form.unwrap();
        assert!(
            check.squared_denominator <= 1e-10,
            "alpha = {alpha}: {check:?}"
        );
        assert!(check.first_power_denominator > 1e-3, "alpha = {alpha}");
    }
}

#[test]
fn mixing_constant_and_prefactor_enter_the_radius() {
    let pts = [Point2::new(1.0, 2.0)];
    let base = radius_profile_at(&ChaplyginFamily::new(-2.0, 1.0, 1.0).unwrap(), &pts).unwrap();
    let scaled = radius_profile_at(&ChaplyginFamily::new(-2.0, 2.5, 1.0).unwrap(), &pts).unwrap();
    assert!(
        (scaled.points[0].r2 - 2.5 * base.points[0].r2).abs() <= 1e-12 * base.points[0].r2.abs()
    );
    assert!(scaled.closed_form.is_none());
}

#[test]
fn radius_profile_rejects_nonpositive_points() {
    let f = ChaplyginFamily::standard(-1.0).unwrap();
    assert!(radius_profile_at(&f, &[Point2::new(0.0, 1.0)]).is_err());
    assert!(radius_profile_at(&f, &[]).is_err());
}

#[test]
fn classification_labels() {
    let g: Grid2 = "log:0.1:10:9".parse().unwrap();
    let p = radius_profile(&ChaplyginFamily::standard(-1.0).unwrap(), &g).unwrap();
    assert_eq!(p.classification, RadiusClass::PositiveDefinite);
    let p = radius_profile(&ChaplyginFamily::standard(2.0).unwrap(), &g).unwrap();
    assert_eq!(p.classification, RadiusClass::Negative);
}

#[test]
fn exponents_between_one_and_two_give_indefinite_radius() {
    assert!(radius_closed_form(1.0, 1.0, 1.5) < 0.0);
    assert!(radius_closed_form(0.01, 0.28, 1.3245904453594681) > 0.0);
    let f = ChaplyginFamily::standard(1.5).unwrap();
    let p = radius_profile(&f, &classification_grid()).unwrap();
    assert_eq!(p.classification, RadiusClass::Indefinite);
    assert_eq!(
        classify(&f, &classification_grid()).unwrap().verdict,
        Verdict::NonPhysical
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn radius_is_symmetric_in_u_and_v(
        alpha in prop::sample::select(vec![-3.0, -2.0, -1.0, -0.5, 0.5, 2.0, 3.0]),
        u in 0.01f64..100.0,
        v in 0.01f64..100.0,
    ) {
        let f = ChaplyginFamily::standard(alpha).unwrap();
        let p = radius_profile_at(&f, &[Point2::new(u, v), Point2::new(v, u)]).unwrap();
        let (a, b) = (p.points[0].r2, p.points[1].r2);
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()));
        prop_assert!((radius_closed_form(u, v, alpha) - radius_closed_form(v, u, alpha)).abs()
            <= 1e-12 * a.abs());
    }

    #[test]
    fn radius_sign_follows_the_exponent(
        alpha in prop_oneof![-4.0f64..-0.05, 0.05f64..0.95, 2.0f64..4.0],
        u in 0.01f64..100.0,
        v in 0.01f64..100.0,
    ) {
        let r2 = radius_closed_form(u, v, alpha);
        if alpha < 0.0 {
            prop_assert!(r2 > 0.0);
        } else {
            prop_assert!(r2 < 0.0);
        }
    }

    #[test]
    fn heat_capacity_is_negative_for_negative_exponents(
        alpha in -4.0f64..-0.05,
        u in 0.01f64..100.0,
        v in 0.01f64..100.0,
    ) {
        prop_assert!(heat_capacity_cv(u, v, alpha).unwrap() < 0.0);
    }

    #[test]
    fn pressure_grows_with_density_for_negative_exponents(
        alpha in -4.0f64..-0.05,
        rho in 0.01f64..100.0,
        step in 0.001f64..10.0,
    ) {
        prop_assert!(pressure(rho + step, alpha).unwrap() > pressure(rho, alpha).unwrap());
    }

    #[test]
    fn verdict_ignores_prefactor_and_mixing(
        alpha in prop::sample::select(vec![-3.0, -1.0, 2.0]),
        phi0 in 0.1f64..5.0,
        c in 0.1f64..5.0,
    ) {
        let g: Grid2 = "log:0.05:20:8".parse().unwrap();
        let a = classify(&ChaplyginFamily::standard(alpha).unwrap(), &g).unwrap();
        let b = classify(&ChaplyginFamily::new(alpha, phi0, c).unwrap(), &g).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.k - b.k).abs() <= 1e-8);
    }
}
