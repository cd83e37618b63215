//! The one-parameter family `s = Phi0 log(u^alpha + c v^alpha)` and its
//! physical classification by the sign of the circumference radius.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Point2};
use crate::geometry::{curvature_scan, MetricKind};
use crate::grid::{Axis, Grid2};
use crate::isothermal::radius_squared;

/// `Phi0 * log(q1^alpha + c * q2^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChaplyginFamily {
    pub alpha: f64,
    pub phi0: f64,
    pub c: f64,
}

impl ChaplyginFamily {
    pub fn new(alpha: f64, phi0: f64, c: f64) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidFamily {
            alpha,
            reason: reason.into(),
        };
        if !alpha.is_finite() {
            return Err(invalid("exponent must be finite"));
        }
        if alpha == 1.0 {
            return Err(invalid("alpha = 1 gives a degenerate metric"));
        }
        if alpha == 0.0 {
            return Err(invalid("alpha = 0 gives a constant relation"));
        }
        if !(phi0.is_finite() && phi0 != 0.0) {
            return Err(invalid("phi0 must be finite and nonzero"));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid("c must be positive"));
        }
        Ok(ChaplyginFamily { alpha, phi0, c })
    }

    /// The entropy `s_alpha = log(u^alpha + v^alpha)`.
    pub fn standard(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 1.0)
    }

    pub fn is_standard(&self) -> bool {
        self.phi0 == 1.0 && self.c == 1.0
    }

    /// Constant Gaussian curvature of the natural metric, `-alpha^2 / (4 (alpha - 1))`.
    pub fn natural_curvature(&self) -> f64 {
        -self.alpha * self.alpha / (4.0 * (self.alpha - 1.0))
    }
}

pub fn entropy(family: &ChaplyginFamily) -> Expr {
    let a = family.alpha;
    let second = if family.c == 1.0 {
        Expr::q2().pow(a)
    } else {
        family.c * Expr::q2().pow(a)
    };
    let log = (Expr::q1().pow(a) + second).ln();
    if family.phi0 == 1.0 {
        log
    } else {
        family.phi0 * log
    }
}

/// Squared radius of `s_alpha` in closed form:
/// `-alpha [u^{2a} v^2 - u^a v^a ((a-1) u^2 - 2 a u v + (a-1) v^2) + v^{2a} u^2]
///   / (u^2 v^2 (u^a + v^a)^2)`.
pub fn radius_closed_form(u: f64, v: f64, alpha: f64) -> f64 {
    radius_closed_form_printed(u, v, alpha) / (u.powf(alpha) + v.powf(alpha))
}

/// The same expression with the sum `u^a + v^a` to the first power in the
/// denominator.
pub fn radius_closed_form_printed(u: f64, v: f64, alpha: f64) -> f64 {
    let a = alpha;
    let (ua, va) = (u.powf(a), v.powf(a));
    let bracket = ua * ua * v * v
        - va * ua * ((a - 1.0) * u * u - 2.0 * a * u * v + (a - 1.0) * v * v)
        + va * va * u * u;
    -a / (u * u * v * v * (ua + va)) * bracket
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusClass {
    PositiveDefinite,
    Indefinite,
    Negative,
}

impl RadiusClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RadiusClass::PositiveDefinite => "positive-definite",
            RadiusClass::Indefinite => "indefinite",
            RadiusClass::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusPoint {
    pub u: f64,
    pub v: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    /// Max relative deviation of the squared-denominator closed form.
    pub squared_denominator: f64,
    /// Max relative deviation of the first-power-denominator closed form.
    pub first_power_denominator: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusProfile {
    pub alpha: f64,
    pub points: Vec<RadiusPoint>,
    #[serde(rename = "min_R2")]
    pub min_r2: f64,
    #[serde(rename = "max_R2")]
    pub max_r2: f64,
    pub classification: RadiusClass,
    /// Only for `Phi0 = c = 1`, where the closed forms apply.
    pub closed_form: Option<ClosedFormCheck>,
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `R^2` of the family at arbitrary points, evaluated from exact derivatives.
pub fn radius_profile_at(family: &ChaplyginFamily, points: &[Point2]) -> Result<RadiusProfile> {
    if points.is_empty() {
        return Err(Error::InvalidGrid("no sample points".into()));
    }
    if let Some(p) = points.iter().find(|p| !(p.q1 > 0.0 && p.q2 > 0.0)) {
        return Err(Error::InvalidGrid(format!(
            "u and v must be positive, got ({}, {})",
            p.q1, p.q2
        )));
    }
    let phi = entropy(family);
    let samples = points
        .iter()
        .map(|&p| {
            Ok(RadiusPoint {
                u: p.q1,
                v: p.q2,
                r2: radius_squared(&phi, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_r2 = samples.iter().map(|s| s.r2).fold(f64::INFINITY, f64::min);
    let max_r2 = samples
        .iter()
        .map(|s| s.r2)
        .fold(f64::NEG_INFINITY, f64::max);
    let classification = if min_r2 > 0.0 {
        RadiusClass::PositiveDefinite
    } else if max_r2 < 0.0 {
        RadiusClass::Negative
    } else {
        RadiusClass::Indefinite
    };
    let closed_form = family.is_standard().then(|| {
        samples.iter().fold(
            ClosedFormCheck {
                squared_denominator: 0.0,
                first_power_denominator: 0.0,
            },
            |acc, s| ClosedFormCheck {
                squared_denominator: acc
                    .squared_denominator
                    .max(relative(radius_closed_form(s.u, s.v, family.alpha), s.r2)),
                first_power_denominator: acc.first_power_denominator.max(relative(
                    radius_closed_form_printed(s.u, s.v, family.alpha),
                    s.r2,
                )),
            },
        )
    });
    Ok(RadiusProfile {
        alpha: family.alpha,
        points: samples,
        min_r2,
        max_r2,
        classification,
        closed_form,
    })
}

pub fn radius_profile(family: &ChaplyginFamily, grid: &Grid2) -> Result<RadiusProfile> {
    radius_profile_at(family, &grid.points())
}

/// Polytropic equation of state `P = rho^(1 - alpha)` with `rho = u / v`.
pub fn pressure(rho: f64, alpha: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain {
            subexpr: "rho".into(),
            reason: format!("density must be positive, got {rho}"),
        });
    }
    Ok(rho.powf(1.0 - alpha))
}

/// `c_v = alpha u^alpha / (u^alpha + (1 - alpha) v^alpha)`.
pub fn heat_capacity_cv(u: f64, v: f64, alpha: f64) -> Result<f64> {
    if !(u > 0.0 && v > 0.0) {
        return Err(Error::Domain {
            subexpr: "c_v".into(),
            reason: format!("u and v must be positive, got ({u}, {v})"),
        });
    }
    let ua = u.powf(alpha);
    let rest = (1.0 - alpha) * v.powf(alpha);
    let den = ua + rest;
    if den.abs() <= 4.0 * f64::EPSILON * (ua.abs() + rest.abs()) {
        return Err(Error::SingularDenominator {
            what: "u^alpha + (1 - alpha) v^alpha".into(),
            q1: u,
            q2: v,
        });
    }
    Ok(alpha * ua / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Physical,
    NonPhysical,
}

/// Evidence behind a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub alpha: f64,
    pub verdict: Verdict,
    #[serde(rename = "min_R2")]
    pub min_r2: f64,
    #[serde(rename = "max_R2")]
    pub max_r2: f64,
    pub radius: RadiusClass,
    /// Mean natural-metric curvature over [`curvature_grid`].
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K_expected")]
    pub k_expected: f64,
    pub cv_sign: Sign,
    /// Grid points where `c_v` has a vanishing denominator.
    pub cv_singular: usize,
}

/// Default grid for classification: 50x50 log-spaced points on `[1e-2, 1e2]^2`.
pub fn classification_grid() -> Grid2 {
    Grid2::square(Axis::log(1e-2, 1e2, 50).expect("static grid"))
}

/// Grid over which the curvature evidence is averaged: 20x20 on `[0.5, 5]^2`.
pub fn curvature_grid() -> Grid2 {
    Grid2::square(Axis::linear(0.5, 5.0, 20).expect("static grid"))
}

/// Physical iff the squared radius is positive at every grid point.
pub fn classify(family: &ChaplyginFamily, grid: &Grid2) -> Result<Classification> {
    let profile = radius_profile(family, grid)?;
    let scan = curvature_scan(&entropy(family), MetricKind::Natural, &curvature_grid())?;

    let (mut negative, mut positive, mut singular) = (0usize, 0usize, 0usize);
    for p in grid.points() {
        match heat_capacity_cv(p.q1, p.q2, family.alpha) {
            Ok(cv) if cv < 0.0 => negative += 1,
            Ok(cv) if cv > 0.0 => positive += 1,
            Ok(_) => {}
            Err(Error::SingularDenominator { .. }) => singular += 1,
            Err(e) => return Err(e),
        }
    }
    let cv_sign = match (negative > 0, positive > 0) {
        (true, false) => Sign::Negative,
        (false, true) => Sign::Positive,
        _ => Sign::Mixed,
    };

    Ok(Classification {
        alpha: family.alpha,
        verdict: if profile.classification == RadiusClass::PositiveDefinite {
            Verdict::Physical
        } else {
            Verdict::NonPhysical
        },
        min_r2: profile.min_r2,
        max_r2: profile.max_r2,
        radius: profile.classification,
        k: scan.k_mean,
        k_expected: family.natural_curvature(),
        cv_sign,
        cv_singular: singular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn entropy_examples() {
        let f = ChaplyginFamily::standard(-1.0).unwrap();
        assert_eq!(entropy(&f), parse("log(q1^-1 + q2^-1)").unwrap());
        let f = ChaplyginFamily::standard(2.0).unwrap();
        assert_eq!(entropy(&f), parse("log(q1^2 + q2^2)").unwrap());
        for bad in [0.0, 1.0] {
            assert!(matches!(
                ChaplyginFamily::standard(bad),
                Err(Error::InvalidFamily { .. })
            ));
        }
        assert!(ChaplyginFamily::new(2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn radius_at_unit_point() {
        let f = ChaplyginFamily::standard(-1.0).unwrap();
        let prof = radius_profile_at(&f, &[Point2::new(1.0, 1.0)]).unwrap();
        assert!((prof.min_r2 - 1.0).abs() < 1e-15);
        assert_eq!(radius_closed_form(1.0, 1.0, -1.0), 1.0);
        assert_eq!(radius_closed_form_printed(1.0, 1.0, -1.0), 2.0);
    }

    #[test]
    fn squared_denominator_matches_direct_evaluation() {
        for alpha in [-3.0, -1.0, -0.5, 0.5, 2.0, 3.0] {
            let f = ChaplyginFamily::standard(alpha).unwrap();
            let grid: Grid2 = "0.3:4:9".parse().unwrap();
            let prof = radius_profile(&f, &grid).unwrap();
            let check = prof.closed_form.unwrap();
            assert!(check.squared_denominator < 1e-10, "{alpha}: {check:?}");
            assert!(check.first_power_denominator > 1e-3, "{alpha}: {check:?}");
        }
    }

    #[test]
    fn pressure_examples() {
        assert_eq!(pressure(1.0, 3.7).unwrap(), 1.0);
        assert_eq!(pressure(2.0, -1.0).unwrap(), 4.0);
        assert_eq!(pressure(4.0, 0.5).unwrap(), 2.0);
        assert!(pressure(0.0, 0.5).is_err());
    }

    #[test]
    fn heat_capacity_examples() {
        assert!((heat_capacity_cv(1.0, 1.0, -1.0).unwrap() + 1.0 / 3.0).abs() < 1e-15);
        for alpha in [-2.0, -0.5, 0.5, 3.0] {
            for w in [0.1, 1.0, 7.0] {
                let cv = heat_capacity_cv(w, w, alpha).unwrap();
                assert!((cv - alpha / (2.0 - alpha)).abs() < 1e-14);
            }
        }
        // alpha = 2: the denominator u^2 - v^2 vanishes on the diagonal
        assert!(matches!(
            heat_capacity_cv(1.5, 1.5, 2.0),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let grid = classification_grid();
        let c = classify(&ChaplyginFamily::standard(-1.0).unwrap(), &grid).unwrap();
        assert_eq!(c.verdict, Verdict::Physical);
        assert!((c.k - 0.125).abs() < 1e-8);
        assert_eq!(c.cv_sign, Sign::Negative);

        let c = classify(&ChaplyginFamily::standard(2.0).unwrap(), &grid).unwrap();
        assert_eq!(c.verdict, Verdict::NonPhysical);
        assert!((c.k + 1.0).abs() < 1e-8);

        let c = classify(&ChaplyginFamily::standard(-0.5).unwrap(), &grid).unwrap();
        assert_eq!(c.verdict, Verdict::Physical);
    }
}
