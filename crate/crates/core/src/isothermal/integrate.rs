//! Numerical construction of isothermal coordinates for relations obeying the
//! third-order constraint pair.
//!
//! With `x_2 = g1(q1) sqrt(Phi_22)` fixed in closed form, `x_1` is a root of
//!
//! ```text
//! Phi_22 x_1^2 - 2 Phi_12 x_2 x_1 - (Phi_11 Phi_22 - x_2^2 Phi_11 - Phi_12^2) = 0,
//! ```
//!
//! whose discriminant factors as `(Phi_22 - x_2^2) (Phi_11 Phi_22 - Phi_12^2)`.
//! `x` is then assembled by path quadrature from the lower-left grid corner and
//! `y` by the nested quadrature
//!
//! ```text
//! y = int sqrt(s) dq2
//!   + 1/2 int 1/sqrt(s) [ sqrt(s) int (2 x_2 x_12 - Phi_221)/sqrt(s) dq2
//!                         - 2 x_1 x_2 + 2 Phi_12 ] dq1,      s = Phi_22 - x_2^2.
//! ```

use rayon::prelude::*;
use serde::Serialize;

use super::field::SampledField;
use super::{constraint_residuals, pullback_residuals, CoordField, PullbackResiduals};
use crate::error::{Error, Result};
use crate::expr::{Expr, Point2, Var};
use crate::grid::Grid2;
use crate::quadrature::integrate;
use crate::taylor::Taylor2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrateOptions {
    /// Fail with `ConstraintViolated` when the third-order pair does not hold.
    pub require_constraints: bool,
    /// Tolerance on each constraint residual, relative to `1 + |Phi_211|` or `1 + |Phi_122|`.
    pub constraint_tol: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            require_constraints: true,
            constraint_tol: 1e-8,
        }
    }
}

/// Result of [`integrate_coords`].
#[derive(Debug, Clone)]
pub struct IntegratedChart {
    pub field: SampledField,
    /// Pullback residuals at each node (three-point stencils on the grid).
    pub residuals: Vec<PullbackResiduals>,
    /// `max |x_12 - x_21|` over the grid, both sides exact.
    pub max_compatibility: f64,
    /// Largest constraint residual seen on the grid.
    pub max_constraint: f64,
    pub max_pullback: f64,
    /// Sign of the square root chosen for `x_1` at each node.
    pub branches: Vec<i8>,
}

impl IntegratedChart {
    pub fn into_field(self) -> CoordField {
        CoordField::Sampled(self.field)
    }
}

struct Local {
    x1: f64,
    x2: f64,
    x12: f64,
    s: f64,
    phi12: f64,
    phi221: f64,
}

struct Problem<'a> {
    phi: &'a Expr,
    g1: &'a Expr,
}

impl Problem<'_> {
    /// Order-1 expansions of `(Phi_11, Phi_12, Phi_22, x_2)` at `p`.
    fn series(&self, p: Point2) -> Result<[Taylor2; 4]> {
        let phi = self.phi.taylor(p, 3)?;
        let d1 = phi.partial(0);
        let d2 = phi.partial(1);
        let (h11, h12, h22) = (d1.partial(0), d1.partial(1), d2.partial(1));
        if !(h22.value() > 0.0) {
            return Err(Error::NegativeRadicand {
                what: "Phi_22".into(),
                q1: p.q1,
                q2: p.q2,
                value: h22.value(),
            });
        }
        let root = h22.sqrt().map_err(|reason| Error::Domain {
            subexpr: "sqrt(Phi_22)".into(),
            reason,
        })?;
        let x2 = self.g1.taylor(p, 1)? * root;
        Ok([h11, h12, h22, x2])
    }

    fn discriminant(h11: f64, h12: f64, h22: f64, x2: f64, p: Point2) -> Result<f64> {
        let s = h22 - x2 * x2;
        let det = h11 * h22 - h12 * h12;
        let disc = s * det;
        let scale = (h22.abs() + x2 * x2) * (h11 * h22).abs().max(h12 * h12);
        if disc < 0.0 {
            if disc >= -1e-14 * scale {
                return Ok(0.0);
            }
            return Err(Error::NegativeDiscriminant {
                q1: p.q1,
                q2: p.q2,
                value: disc,
            });
        }
        Ok(disc)
    }

    fn roots(&self, p: Point2) -> Result<(f64, f64)> {
        let [h11, h12, h22, x2] = self.series(p)?;
        let (h11, h12, h22, x2) = (h11.value(), h12.value(), h22.value(), x2.value());
        let root = Self::discriminant(h11, h12, h22, x2, p)?.sqrt();
        Ok(((h12 * x2 + root) / h22, (h12 * x2 - root) / h22))
    }

    fn local(&self, p: Point2, sign: i8) -> Result<Local> {
        let [h11, h12, h22, x2s] = self.series(p)?;
        let (v11, v12, v22, x2) = (h11.value(), h12.value(), h22.value(), x2s.value());
        let root = Self::discriminant(v11, v12, v22, x2, p)?.sqrt();
        let s = v22 - x2 * x2;
        if !(s > 0.0) {
            return Err(Error::NegativeRadicand {
                what: "Phi_22 - x_2^2".into(),
                q1: p.q1,
                q2: p.q2,
                value: s,
            });
        }
        let phi221 = self.phi.taylor(p, 3)?.derivative(1, 2);
        Ok(Local {
            x1: (v12 * x2 + f64::from(sign) * root) / v22,
            x2,
            x12: x2s.derivative(1, 0),
            s,
            phi12: v12,
            phi221,
        })
    }

    /// `|d(x_1)/dq2 - d(x_2)/dq1|` with both sides from exact expansions.
    fn compatibility(&self, p: Point2, sign: i8) -> Result<f64> {
        let [h11, h12, h22, x2] = self.series(p)?;
        let disc = (h22 - x2 * x2) * (h11 * h22 - h12 * h12);
        let root = disc.sqrt().map_err(|reason| Error::Domain {
            subexpr: "sqrt(discriminant)".into(),
            reason,
        })?;
        let x1 = (h12 * x2 + root.scale(f64::from(sign)))
            .div(&h22)
            .map_err(|reason| Error::Domain {
                subexpr: "x_1".into(),
                reason,
            })?;
        Ok((x1.derivative(0, 1) - x2.derivative(1, 0)).abs())
    }

    fn inner(&self, t: f64, q2_0: f64, q2: f64, sign: i8) -> Result<f64> {
        integrate(
            |r| {
                let l = self.local(Point2::new(t, r), sign)?;
                Ok((2.0 * l.x2 * l.x12 - l.phi221) / l.s.sqrt())
            },
            q2_0,
            q2,
        )
    }

    /// Integrand of the outer `q1` quadrature for `y`.
    fn bracket(&self, t: f64, q2_0: f64, q2: f64, sign: i8) -> Result<f64> {
        let l = self.local(Point2::new(t, q2), sign)?;
        let root = l.s.sqrt();
        let inner = self.inner(t, q2_0, q2, sign)?;
        Ok(0.5 / root * (root * inner - 2.0 * l.x1 * l.x2 + 2.0 * l.phi12))
    }
}

fn nearest(candidates: (f64, f64), target: f64) -> i8 {
    if (candidates.0 - target).abs() <= (candidates.1 - target).abs() {
        1
    } else {
        -1
    }
}

fn pick(roots: (f64, f64), sign: i8) -> f64 {
    if sign > 0 {
        roots.0
    } else {
        roots.1
    }
}

/// Builds isothermal coordinates on `grid` for a relation satisfying the
/// third-order constraint pair, with gauge `x_2 = g1(q1) sqrt(Phi_22)`.
///
/// The base point is the lower-left grid corner. At the base the root of the
/// quadratic with the smaller `|x_1|` is taken (the `+` root on a tie); every
/// other node takes the root nearest to its already solved neighbour, first
/// along the base row and then up each column.
pub fn integrate_coords(
    phi: &Expr,
    g1: &Expr,
    grid: &Grid2,
    options: IntegrateOptions,
) -> Result<IntegratedChart> {
    if g1.depends_on(Var::Q2) {
        return Err(Error::InvalidField(
            "gauge g1 must depend on q1 only".into(),
        ));
    }
    if grid.q1.count < 3 || grid.q2.count < 3 {
        return Err(Error::InvalidGrid(
            "integration needs at least 3 nodes per axis".into(),
        ));
    }
    let a1 = grid.q1.values();
    let a2 = grid.q2.values();
    let (n1, n2) = (a1.len(), a2.len());
    let idx = |i: usize, j: usize| i * n2 + j;
    let problem = Problem { phi, g1 };

    let mut max_constraint: f64 = 0.0;
    for &q1 in &a1 {
        for &q2 in &a2 {
            let p = Point2::new(q1, q2);
            let c = constraint_residuals(phi, p)?;
            let s = phi.taylor(p, 3)?;
            let t1 = options.constraint_tol * (1.0 + s.derivative(2, 1).abs());
            let t2 = options.constraint_tol * (1.0 + s.derivative(1, 2).abs());
            max_constraint = max_constraint.max(c.c1.abs()).max(c.c2.abs());
            if options.require_constraints && (c.c1.abs() > t1 || c.c2.abs() > t2) {
                return Err(Error::ConstraintViolated {
                    q1,
                    q2,
                    c1: c.c1,
                    c2: c.c2,
                });
            }
        }
    }

    // Root branch at every node, by continuity from the base point.
    let mut branches = vec![0i8; n1 * n2];
    let mut x1_at = vec![0.0; n1 * n2];
    let base_roots = problem.roots(Point2::new(a1[0], a2[0]))?;
    let tie = (base_roots.0.abs() - base_roots.1.abs()).abs()
        <= 1e-12 * base_roots.0.abs().max(base_roots.1.abs());
    branches[0] = if tie || base_roots.0.abs() < base_roots.1.abs() {
        1
    } else {
        -1
    };
    x1_at[0] = pick(base_roots, branches[0]);
    for i in 0..n1 {
        for j in 0..n2 {
            if i == 0 && j == 0 {
                continue;
            }
            let prev = if j == 0 { idx(i - 1, 0) } else { idx(i, j - 1) };
            let roots = problem.roots(Point2::new(a1[i], a2[j]))?;
            let sign = nearest(roots, x1_at[prev]);
            branches[idx(i, j)] = sign;
            x1_at[idx(i, j)] = pick(roots, sign);
        }
    }

    // x along the base row, then up each column.
    let mut x_base = vec![0.0; n1];
    for i in 1..n1 {
        let sign = branches[idx(i - 1, 0)];
        x_base[i] = x_base[i - 1]
            + integrate(
                |t| Ok(problem.local(Point2::new(t, a2[0]), sign)?.x1),
                a1[i - 1],
                a1[i],
            )?;
    }
    let columns: Vec<(Vec<f64>, Vec<f64>)> = (0..n1)
        .into_par_iter()
        .map(|i| {
            let mut xs = vec![x_base[i]; n2];
            let mut ys = vec![0.0; n2];
            for j in 1..n2 {
                let sign = branches[idx(i, j - 1)];
                let (dx, dy) = (
                    integrate(
                        |s| Ok(problem.local(Point2::new(a1[i], s), sign)?.x2),
                        a2[j - 1],
                        a2[j],
                    )?,
                    integrate(
                        |s| Ok(problem.local(Point2::new(a1[i], s), sign)?.s.sqrt()),
                        a2[j - 1],
                        a2[j],
                    )?,
                );
                xs[j] = xs[j - 1] + dx;
                ys[j] = ys[j - 1] + dy;
            }
            Ok((xs, ys))
        })
        .collect::<Result<_>>()?;

    // Outer q1 quadrature of the bracket, one row at a time.
    let rows: Vec<Vec<f64>> = (0..n2)
        .into_par_iter()
        .map(|j| {
            let mut acc = vec![0.0; n1];
            for i in 1..n1 {
                let sign = branches[idx(i - 1, j)];
                acc[i] = acc[i - 1]
                    + integrate(|t| problem.bracket(t, a2[0], a2[j], sign), a1[i - 1], a1[i])?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let mut x = vec![0.0; n1 * n2];
    let mut y = vec![0.0; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            x[idx(i, j)] = columns[i].0[j];
            y[idx(i, j)] = columns[i].1[j] + rows[j][i];
        }
    }

    let max_compatibility = grid
        .points()
        .iter()
        .zip(&branches)
        .map(|(&p, &sign)| problem.compatibility(p, sign))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let field = CoordField::Sampled(SampledField::new(a1, a2, x, y)?);
    let residuals = grid
        .points()
        .iter()
        .map(|&p| pullback_residuals(phi, &field, p))
        .collect::<Result<Vec<_>>>()?;
    let max_pullback = residuals.iter().map(|r| r.max_abs()).fold(0.0, f64::max);
    let CoordField::Sampled(field) = field else {
        unreachable!()
    };
    Ok(IntegratedChart {
        field,
        residuals,
        max_compatibility,
        max_constraint,
        max_pullback,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::grid::Axis;
    use crate::isothermal::separable_coords;

    #[test]
    fn quadratic_with_constant_gauge_is_rotation() {
        let phi = parse("(q1^2 + q2^2)/2").unwrap();
        let c = 0.5;
        let grid = Grid2::square(Axis::linear(0.5, 2.0, 5).unwrap());
        let chart = integrate_coords(&phi, &Expr::constant(c), &grid, Default::default()).unwrap();
        assert!(chart.max_compatibility <= 1e-9);
        assert!(chart.max_pullback <= 1e-9, "{}", chart.max_pullback);
        let k = (1.0 - c * c).sqrt();
        for p in grid.points() {
            let (x, y) = chart.field.value(p).unwrap();
            let (d1, d2) = (p.q1 - 0.5, p.q2 - 0.5);
            assert!((x - (k * d1 + c * d2)).abs() < 1e-12);
            assert!((y - (k * d2 - c * d1)).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_relation_matches_separable_chart() {
        let s = parse("q1^4").unwrap();
        let t = parse("q2^4").unwrap();
        let phi = s.clone() + t.clone();
        let grid = Grid2::square(Axis::linear(0.5, 2.0, 7).unwrap());
        for c in [0.0, 0.5] {
            let chart =
                integrate_coords(&phi, &Expr::constant(c), &grid, Default::default()).unwrap();
            assert!(chart.max_pullback <= 1e-8, "{}", chart.max_pullback);
            let reference = separable_coords(&s, &t, c, &grid).unwrap();
            for p in grid.points() {
                let a = chart.field.value(p).unwrap();
                let b = reference.value(p).unwrap();
                assert!((a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn constraint_violation_is_reported() {
        let phi = parse("log(u^-1 + v^-1)").unwrap();
        let grid = Grid2::square(Axis::linear(1.0, 2.0, 4).unwrap());
        let err =
            integrate_coords(&phi, &Expr::constant(0.5), &grid, Default::default()).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolated { .. }));
    }

    #[test]
    fn gauge_above_one_has_no_real_root() {
        let phi = parse("(q1^2 + q2^2)/2").unwrap();
        let grid = Grid2::square(Axis::linear(0.5, 2.0, 3).unwrap());
        let err =
            integrate_coords(&phi, &Expr::constant(1.5), &grid, Default::default()).unwrap_err();
        assert!(matches!(err, Error::NegativeDiscriminant { .. }));
    }
}
