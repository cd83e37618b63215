//! Isothermal coordinates for relations with a flat Hessian metric.
//!
//! Isothermal coordinates `(x, y)` pull the Euclidean metric back onto the
//! Hessian metric, `x_i x_j + y_i y_j = Phi_{,ij}`. This module evaluates that
//! system, builds closed-form and quadrature charts for the solvable cases, and
//! implements the circumference test `(x_1 + x_2)^2 + (y_1 + y_2)^2 = R^2` with
//! `R^2 = Phi_11 + 2 Phi_12 + Phi_22`.

mod field;
mod integrate;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Point2, Var};
use crate::grid::Grid2;

pub use field::{CoordField, CoordGradient, FieldForm, SampledField, SeparableChart};
pub use integrate::{integrate_coords, IntegrateOptions, IntegratedChart};

/// Residuals of the three pullback equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullbackResiduals {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl PullbackResiduals {
    pub fn max_abs(&self) -> f64 {
        self.r1.abs().max(self.r2.abs()).max(self.r3.abs())
    }
}

fn hessian_components(phi: &Expr, p: Point2) -> Result<(f64, f64, f64)> {
    let s = phi.taylor(p, 2)?;
    Ok((s.derivative(2, 0), s.derivative(1, 1), s.derivative(0, 2)))
}

fn pullback_from_gradient(h: (f64, f64, f64), g: &CoordGradient) -> PullbackResiduals {
    PullbackResiduals {
        r1: g.x1 * g.x1 + g.y1 * g.y1 - h.0,
        r2: g.x1 * g.x2 + g.y1 * g.y2 - h.1,
        r3: g.x2 * g.x2 + g.y2 * g.y2 - h.2,
    }
}

/// `r1 = x1^2 + y1^2 - Phi_11`, `r2 = x1 x2 + y1 y2 - Phi_12`,
/// `r3 = x2^2 + y2^2 - Phi_22`.
pub fn pullback_residuals(phi: &Expr, coords: &CoordField, p: Point2) -> Result<PullbackResiduals> {
    let g = coords.gradient(p)?;
    Ok(pullback_from_gradient(hessian_components(phi, p)?, &g))
}

/// `R^2 = Phi_11 + 2 Phi_12 + Phi_22`; negative values are meaningful.
pub fn radius_squared(phi: &Expr, p: Point2) -> Result<f64> {
    let (h11, h12, h22) = hessian_components(phi, p)?;
    Ok(h11 + 2.0 * h12 + h22)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircumferenceSample {
    #[serde(rename = "X2")]
    pub x2: f64,
    #[serde(rename = "Y2")]
    pub y2: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    /// `X2 + Y2 - R2`.
    pub residual: f64,
}

pub fn circumference_check(
    phi: &Expr,
    coords: &CoordField,
    p: Point2,
) -> Result<CircumferenceSample> {
    let g = coords.gradient(p)?;
    let x2 = (g.x1 + g.x2).powi(2);
    let y2 = (g.y1 + g.y2).powi(2);
    let r2 = radius_squared(phi, p)?;
    Ok(CircumferenceSample {
        x2,
        y2,
        r2,
        residual: x2 + y2 - r2,
    })
}

/// Residuals of the third-order pair
/// `Phi_211 = Phi_222 Phi_12^2 / Phi_22^2` and `Phi_122 = Phi_222 Phi_12 / Phi_22`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintResiduals {
    pub c1: f64,
    pub c2: f64,
}

pub fn constraint_residuals(phi: &Expr, p: Point2) -> Result<ConstraintResiduals> {
    let s = phi.taylor(p, 3)?;
    let p12 = s.derivative(1, 1);
    let p22 = s.derivative(0, 2);
    if p22 == 0.0 {
        return Err(Error::SingularDenominator {
            what: "Phi_22".into(),
            q1: p.q1,
            q2: p.q2,
        });
    }
    let p211 = s.derivative(2, 1);
    let p122 = s.derivative(1, 2);
    let p222 = s.derivative(0, 3);
    Ok(ConstraintResiduals {
        c1: p211 - p222 * p12 * p12 / (p22 * p22),
        c2: p122 - p222 * p12 / p22,
    })
}

/// Residuals of the two equations that determine `x` alone:
/// `Phi_22 x1^2 = 2 Phi_12 x1 x2 + Phi_11 Phi_22 - x2^2 Phi_11 - Phi_12^2` and
/// `x22 = Phi_222 x2 / (2 Phi_22)`, each as `lhs - rhs`.
pub fn x_equation_residuals(phi: &Expr, x: &Expr, p: Point2) -> Result<(f64, f64)> {
    let s = phi.taylor(p, 3)?;
    let (p11, p12, p22, p222) = (
        s.derivative(2, 0),
        s.derivative(1, 1),
        s.derivative(0, 2),
        s.derivative(0, 3),
    );
    if p22 == 0.0 {
        return Err(Error::SingularDenominator {
            what: "Phi_22".into(),
            q1: p.q1,
            q2: p.q2,
        });
    }
    let t = x.taylor(p, 2)?;
    let (x1, x2, x22) = (t.derivative(1, 0), t.derivative(0, 1), t.derivative(0, 2));
    let first = x1 * x1 - (2.0 * p12 * x1 * x2 + p11 * p22 - x2 * x2 * p11 - p12 * p12) / p22;
    let second = x22 - 0.5 * p222 * x2 / p22;
    Ok((first, second))
}

/// Chart for a separable relation `Phi = S(q1) + T(q2)`.
///
/// `domain` fixes the base point (its lower-left corner) and is checked for
/// real square roots at every node.
pub fn separable_coords(s: &Expr, t: &Expr, c: f64, domain: &Grid2) -> Result<CoordField> {
    if !(c.abs() <= 1.0) {
        return Err(Error::InvalidMixing { c });
    }
    if s.depends_on(Var::Q2) {
        return Err(Error::InvalidField("S must depend on q1 only".into()));
    }
    if t.depends_on(Var::Q1) {
        return Err(Error::InvalidField("T must depend on q2 only".into()));
    }
    let s2 = s.partial(2, 0);
    let t2 = t.partial(0, 2);
    let base = domain.origin();
    for v in domain.q1.values() {
        let p = Point2::new(v, base.q2);
        let val = s2.eval(p)?;
        if val < 0.0 {
            return Err(Error::NegativeRadicand {
                what: "S''".into(),
                q1: p.q1,
                q2: p.q2,
                value: val,
            });
        }
    }
    for v in domain.q2.values() {
        let p = Point2::new(base.q1, v);
        let val = t2.eval(p)?;
        if val < 0.0 {
            return Err(Error::NegativeRadicand {
                what: "T''".into(),
                q1: p.q1,
                q2: p.q2,
                value: val,
            });
        }
    }
    Ok(CoordField::Separable(SeparableChart { s2, t2, c, base }))
}

/// Coordinates of the log-linear relation `Phi = log(xi q1 + chi q2)`.
///
/// `x = c log(q2 + (xi/chi) q1)` is real, while `y = i sqrt(1 + c^2) log(xi q1 + chi q2)`
/// is purely imaginary for every real `c`; `y_log` carries the logarithm and
/// `y_coefficient` the magnitude of the imaginary factor.
#[derive(Debug, Clone)]
pub struct LogLinearCoords {
    pub x: Expr,
    pub y_log: Expr,
    pub y_coefficient: f64,
    pub real: bool,
}

pub fn loglinear_relation(xi: f64, chi: f64) -> Expr {
    (xi * Expr::q1() + chi * Expr::q2()).ln()
}

pub fn loglinear_coords(xi: f64, chi: f64, c: f64) -> Result<LogLinearCoords> {
    if chi == 0.0 {
        return Err(Error::SingularDenominator {
            what: "chi".into(),
            q1: f64::NAN,
            q2: f64::NAN,
        });
    }
    let x = c * (Expr::q2() + (xi / chi) * Expr::q1()).ln();
    // y^2 coefficient is -(1 + c^2) < 0 for every real c
    let y_squared_coefficient = -(1.0 + c * c);
    Ok(LogLinearCoords {
        x,
        y_log: loglinear_relation(xi, chi),
        y_coefficient: (-y_squared_coefficient).sqrt(),
        real: y_squared_coefficient >= 0.0,
    })
}

/// One tabulated node of a coordinate field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordRow {
    pub q1: f64,
    pub q2: f64,
    pub x: f64,
    pub y: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

/// Values and pullback residuals of `coords` at every node of `points`.
pub fn tabulate(phi: &Expr, coords: &CoordField, points: &[Point2]) -> Result<Vec<CoordRow>> {
    points
        .iter()
        .map(|&p| {
            let (x, y) = coords.value(p)?;
            let r = pullback_residuals(phi, coords, p)?;
            Ok(CoordRow {
                q1: p.q1,
                q2: p.q2,
                x,
                y,
                r1: r.r1,
                r2: r.r2,
                r3: r.r3,
            })
        })
        .collect()
}
