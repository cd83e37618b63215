//! Hessian and natural metrics on the space of equilibrium states and their
//! Gaussian curvature.
//!
//! Two routes to the curvature are kept deliberately separate:
//!
//! * [`gaussian_curvature`] works intrinsically: it expands the metric
//!   components to second order around the point and applies Brioschi's
//!   determinant formula.
//! * [`einstein_residual`] evaluates the reduced constant-curvature PDE for the
//!   natural metric, written directly in terms of the partial derivatives of
//!   `Phi` up to third order.
//!
//! A relation whose natural metric has constant curvature `K` makes the residual
//! vanish for that `K`, which is how [`curvature_scan`] cross-checks the two.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Jet4, Point2};
use crate::grid::Grid2;
use crate::taylor::Taylor2;

/// Relative determinant threshold below which a metric sample is degenerate.
pub const DEGENERACY_EPS: f64 = 1e-12;
/// Absolute threshold on `|q2 Phi_2|` below which the conformal factor is singular.
pub const CONFORMAL_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// `h = Phi_{,ij} dq^i dq^j`.
    Hessian,
    /// `g = Omega h` with `Omega = 1 / (q2 Phi_{,2})`.
    Natural,
}

impl FromStr for MetricKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hessian" => Ok(MetricKind::Hessian),
            "natural" => Ok(MetricKind::Natural),
            other => Err(format!(
                "unknown metric `{other}` (expected hessian|natural)"
            )),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Hessian => "hessian",
            MetricKind::Natural => "natural",
        })
    }
}

/// Components of a symmetric 2x2 metric at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSample {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl MetricSample {
    pub fn new(g11: f64, g12: f64, g22: f64) -> Self {
        MetricSample { g11, g12, g22 }
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn scaled(&self, k: f64) -> Self {
        MetricSample::new(k * self.g11, k * self.g12, k * self.g22)
    }

    /// `|det| <= eps * max(|g_ij|)^2`; an all-zero metric is degenerate.
    pub fn is_degenerate(&self, eps: f64) -> bool {
        let scale = self.g11.abs().max(self.g12.abs()).max(self.g22.abs());
        scale == 0.0 || self.det().abs() <= eps * scale * scale
    }
}

fn hessian_from_jet(jet: &Jet4) -> MetricSample {
    MetricSample::new(jet.d(2, 0), jet.d(1, 1), jet.d(0, 2))
}

fn conformal_from_jet(jet: &Jet4, p: Point2) -> Result<f64> {
    let denom = p.q2 * jet.d(0, 1);
    if !(denom.abs() >= CONFORMAL_EPS) {
        return Err(Error::SingularConformalFactor {
            q1: p.q1,
            q2: p.q2,
            value: denom,
        });
    }
    Ok(1.0 / denom)
}

pub fn hessian_metric(phi: &Expr, p: Point2) -> Result<MetricSample> {
    let s = phi.taylor(p, 2)?;
    Ok(MetricSample::new(
        s.derivative(2, 0),
        s.derivative(1, 1),
        s.derivative(0, 2),
    ))
}

/// `Omega = 1 / (q2 Phi_{,2})`.
pub fn conformal_factor(phi: &Expr, p: Point2) -> Result<f64> {
    let s = phi.taylor(p, 1)?;
    let denom = p.q2 * s.derivative(0, 1);
    if !(denom.abs() >= CONFORMAL_EPS) {
        return Err(Error::SingularConformalFactor {
            q1: p.q1,
            q2: p.q2,
            value: denom,
        });
    }
    Ok(1.0 / denom)
}

pub fn natural_metric(phi: &Expr, p: Point2) -> Result<MetricSample> {
    let omega = conformal_factor(phi, p)?;
    Ok(hessian_metric(phi, p)?.scaled(omega))
}

pub fn metric_from_jet(jet: &Jet4, kind: MetricKind, p: Point2) -> Result<MetricSample> {
    let h = hessian_from_jet(jet);
    match kind {
        MetricKind::Hessian => Ok(h),
        MetricKind::Natural => Ok(h.scaled(conformal_from_jet(jet, p)?)),
    }
}

/// Second-order expansions of `(g11, g12, g22)` around `p`.
fn metric_series(jet: &Jet4, kind: MetricKind, p: Point2) -> Result<[Taylor2; 3]> {
    let phi = jet.series(4);
    let d1 = phi.partial(0);
    let d2 = phi.partial(1);
    let h = [d1.partial(0), d1.partial(1), d2.partial(1)];
    match kind {
        MetricKind::Hessian => Ok(h),
        MetricKind::Natural => {
            conformal_from_jet(jet, p)?;
            let q2 = Taylor2::variable(1, p.q2, 2);
            let omega = (q2 * d2.truncate(2))
                .recip()
                .map_err(|reason| Error::Domain {
                    subexpr: "q2 * Phi_2".into(),
                    reason,
                })?;
            Ok(h.map(|c| omega * c))
        }
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Brioschi's formula for `K` from `E = g11`, `F = g12`, `G = g22` and their
/// first and second derivatives (`u = q1`, `v = q2`).
fn brioschi(e: &Taylor2, f: &Taylor2, g: &Taylor2) -> f64 {
    let (ee, ff, gg) = (e.value(), f.value(), g.value());
    let (e_u, e_v, e_vv) = (e.derivative(1, 0), e.derivative(0, 1), e.derivative(0, 2));
    let (f_u, f_v, f_uv) = (f.derivative(1, 0), f.derivative(0, 1), f.derivative(1, 1));
    let (g_u, g_v, g_uu) = (g.derivative(1, 0), g.derivative(0, 1), g.derivative(2, 0));
    let m1 = [
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, ee, ff],
        [0.5 * g_v, ff, gg],
    ];
    let m2 = [
        [0.0, 0.5 * e_v, 0.5 * g_u],
        [0.5 * e_v, ee, ff],
        [0.5 * g_u, ff, gg],
    ];
    let det = ee * gg - ff * ff;
    (det3(m1) - det3(m2)) / (det * det)
}

/// Gaussian curvature at `p` from a precomputed jet of `Phi`.
pub fn curvature_from_jet(jet: &Jet4, kind: MetricKind, p: Point2) -> Result<f64> {
    let [e, f, g] = metric_series(jet, kind, p)?;
    let sample = MetricSample::new(e.value(), f.value(), g.value());
    if sample.is_degenerate(DEGENERACY_EPS) {
        return Err(Error::DegenerateMetric {
            q1: p.q1,
            q2: p.q2,
            det: sample.det(),
        });
    }
    Ok(brioschi(&e, &f, &g))
}

/// Gaussian curvature of the chosen metric of `phi` at `p`. The scalar
/// curvature is twice this value.
pub fn gaussian_curvature(phi: &Expr, kind: MetricKind, p: Point2) -> Result<f64> {
    curvature_from_jet(&phi.jet(p)?, kind, p)
}

/// Both sides of the reduced constant-curvature equation for the natural metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EinsteinResidual {
    /// Left-hand side, a polynomial in the derivatives of `Phi`.
    pub lhs: f64,
    /// `4 K rho^2 / Omega^5`.
    pub rhs: f64,
}

impl EinsteinResidual {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|)`, zero when both sides vanish.
    pub fn normalized(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.residual().abs() / scale
        }
    }
}

/// Left-hand side of the reduced equation, written term by term with the
/// coefficient groups `A`..`E`. Indices follow comma notation, so `p211` is
/// `Phi_{,211} = d^3 Phi / dq2 dq1^2`.
fn einstein_lhs(jet: &Jet4, q2: f64, omega: f64, rho: f64) -> f64 {
    let p2 = jet.d(0, 1);
    let p11 = jet.d(2, 0);
    let p12 = jet.d(1, 1);
    let p22 = jet.d(0, 2);
    let p111 = jet.d(3, 0);
    let p211 = jet.d(2, 1);
    let p221 = jet.d(1, 2);
    let p222 = jet.d(0, 3);
    let q2s = q2 * q2;

    let a = -q2 * p222 - 2.0 * p22;
    let b = 2.0 * p12 * p12 + 3.0 * q2 * p12 * p221 - q2 * p211 * p22 + q2s * p221 * p221
        - q2s * p222 * p211;
    let c = -q2s * p221 * p211 + q2s * p111 * p222 + q2 * p22 * p111;
    let d = -q2s * p111 * p221 + q2s * p211 * p211;
    let e = -2.0 * q2s * p22 * p12 * p221 - q2s * p12 * p12 * p222 + q2s * p22 * p22 * p211;

    let first =
        p2 * p2 * (a * p11 * p11 + b * p11 - 2.0 * q2 * p211 * p12 * p12 + c * p12 + d * p22);
    let second = p2
        * (q2s * p22 * p222 * p11 * p11 + e * p11 + 2.0 * q2s * p12.powi(3) * p221
            - q2s * p12 * p12 * p22 * p211);
    let third = 2.0 * q2s * rho * omega.powi(-2) * (p22 * p22 * p11 - p12 * p12 * p22);
    first + second - third
}

pub fn einstein_residual_from_jet(jet: &Jet4, p: Point2, k: f64) -> Result<EinsteinResidual> {
    let omega = conformal_from_jet(jet, p)?;
    let h = hessian_from_jet(jet);
    let rho = omega * omega * h.det();
    Ok(EinsteinResidual {
        lhs: einstein_lhs(jet, p.q2, omega, rho),
        rhs: 4.0 * k * rho * rho / omega.powi(5),
    })
}

/// Evaluates the reduced constant-curvature equation of the natural metric at
/// `p` for a candidate constant `k`.
pub fn einstein_residual(phi: &Expr, p: Point2, k: f64) -> Result<EinsteinResidual> {
    einstein_residual_from_jet(&phi.jet(p)?, p, k)
}

/// Curvature statistics of one metric over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub kind: MetricKind,
    /// Nondegenerate points entering the statistics.
    pub samples: usize,
    #[serde(rename = "K_mean")]
    pub k_mean: f64,
    /// `max K - min K` over the nondegenerate points.
    #[serde(rename = "K_spread")]
    pub k_spread: f64,
    /// Largest normalized Einstein residual using `K_mean`; natural metric only.
    pub max_einstein_residual: Option<f64>,
    pub degenerate_points: usize,
}

fn is_degeneracy(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateMetric { .. } | Error::SingularConformalFactor { .. }
    )
}

/// Evaluates the curvature at every grid point, skipping degenerate ones.
pub fn curvature_scan(phi: &Expr, kind: MetricKind, grid: &Grid2) -> Result<CurvatureReport> {
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::InvalidGrid("grid has no points".into()));
    }
    let evaluated: Vec<Option<(Point2, Jet4, f64)>> = points
        .par_iter()
        .map(|&p| {
            let jet = phi.jet(p)?;
            match curvature_from_jet(&jet, kind, p) {
                Ok(k) => Ok(Some((p, jet, k))),
                Err(e) if is_degeneracy(&e) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let good: Vec<&(Point2, Jet4, f64)> = evaluated.iter().flatten().collect();
    let degenerate_points = points.len() - good.len();
    if good.is_empty() {
        return Err(Error::AllPointsDegenerate {
            count: points.len(),
        });
    }
    let k_mean = good.iter().map(|s| s.2).sum::<f64>() / good.len() as f64;
    let (lo, hi) = good
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.2), hi.max(s.2))
        });

    let max_einstein_residual = match kind {
        MetricKind::Hessian => None,
        MetricKind::Natural => {
            let residuals: Vec<f64> = good
                .par_iter()
                .map(|(p, jet, _)| Ok(einstein_residual_from_jet(jet, *p, k_mean)?.normalized()))
                .collect::<Result<_>>()?;
            Some(residuals.into_iter().fold(0.0, f64::max))
        }
    };

    Ok(CurvatureReport {
        kind,
        samples: good.len(),
        k_mean,
        k_spread: hi - lo,
        max_einstein_residual,
        degenerate_points,
    })
}

/// Einstein residuals of the natural metric over a grid for one `K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EinsteinSummary {
    #[serde(rename = "K")]
    pub k: f64,
    pub samples: usize,
    pub degenerate_points: usize,
    pub max_abs_residual: f64,
    pub max_normalized_residual: f64,
}

/// Evaluates [`einstein_residual`] at every grid point, skipping degenerate ones.
pub fn einstein_scan(phi: &Expr, k: f64, grid: &Grid2) -> Result<EinsteinSummary> {
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::InvalidGrid("grid has no points".into()));
    }
    let evaluated: Vec<Option<EinsteinResidual>> = points
        .par_iter()
        .map(|&p| {
            let jet = phi.jet(p)?;
            let degenerate = match metric_from_jet(&jet, MetricKind::Natural, p) {
                Ok(m) => m.is_degenerate(DEGENERACY_EPS),
                Err(e) if is_degeneracy(&e) => true,
                Err(e) => return Err(e),
            };
            if degenerate {
                return Ok(None);
            }
            einstein_residual_from_jet(&jet, p, k).map(Some)
        })
        .collect::<Result<_>>()?;
    let good: Vec<&EinsteinResidual> = evaluated.iter().flatten().collect();
    if good.is_empty() {
        return Err(Error::AllPointsDegenerate {
            count: points.len(),
        });
    }
    Ok(EinsteinSummary {
        k,
        samples: good.len(),
        degenerate_points: points.len() - good.len(),
        max_abs_residual: good.iter().map(|r| r.residual().abs()).fold(0.0, f64::max),
        max_normalized_residual: good.iter().map(|r| r.normalized()).fold(0.0, f64::max),
    })
}
