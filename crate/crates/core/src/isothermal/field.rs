use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Point2};
use crate::quadrature;

/// First partial derivatives of a coordinate pair `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordGradient {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldForm {
    Closed,
    Numeric,
}

/// Candidate isothermal coordinates `x(q1, q2)`, `y(q1, q2)`.
#[derive(Debug, Clone)]
pub enum CoordField {
    /// Both coordinates as differentiable expressions.
    Closed { x: Expr, y: Expr },
    /// Antiderivative chart of a separable relation, evaluated by quadrature.
    Separable(SeparableChart),
    /// Values on a tensor grid, differentiated by three-point stencils.
    Sampled(SampledField),
}

impl CoordField {
    pub fn closed(x: Expr, y: Expr) -> Self {
        CoordField::Closed { x, y }
    }

    pub fn form(&self) -> FieldForm {
        match self {
            CoordField::Closed { .. } => FieldForm::Closed,
            CoordField::Separable(_) | CoordField::Sampled(_) => FieldForm::Numeric,
        }
    }

    pub fn value(&self, p: Point2) -> Result<(f64, f64)> {
        match self {
            CoordField::Closed { x, y } => Ok((x.eval(p)?, y.eval(p)?)),
            CoordField::Separable(chart) => chart.value(p),
            CoordField::Sampled(field) => field.value(p),
        }
    }

    pub fn gradient(&self, p: Point2) -> Result<CoordGradient> {
        match self {
            CoordField::Closed { x, y } => {
                let sx = x.taylor(p, 1)?;
                let sy = y.taylor(p, 1)?;
                Ok(CoordGradient {
                    x1: sx.derivative(1, 0),
                    x2: sx.derivative(0, 1),
                    y1: sy.derivative(1, 0),
                    y2: sy.derivative(0, 1),
                })
            }
            CoordField::Separable(chart) => chart.gradient(p),
            CoordField::Sampled(field) => field.gradient(p),
        }
    }
}

/// `x = sqrt(1-c^2) int sqrt(S'') dq1 + c int sqrt(T'') dq2`,
/// `y = sqrt(1-c^2) int sqrt(T'') dq2 - c int sqrt(S'') dq1`,
/// with both antiderivatives starting at `base`.
#[derive(Debug, Clone)]
pub struct SeparableChart {
    pub(crate) s2: Expr,
    pub(crate) t2: Expr,
    pub(crate) c: f64,
    pub(crate) base: Point2,
}

impl SeparableChart {
    pub fn mixing(&self) -> f64 {
        self.c
    }

    pub fn base(&self) -> Point2 {
        self.base
    }

    fn root(e: &Expr, what: &str, p: Point2) -> Result<f64> {
        let v = e.eval(p)?;
        if v < 0.0 {
            return Err(Error::NegativeRadicand {
                what: what.into(),
                q1: p.q1,
                q2: p.q2,
                value: v,
            });
        }
        Ok(v.sqrt())
    }

    fn antiderivatives(&self, p: Point2) -> Result<(f64, f64)> {
        let b = self.base;
        let is = quadrature::integrate(
            |t| Self::root(&self.s2, "S''", Point2::new(t, b.q2)),
            b.q1,
            p.q1,
        )?;
        let it = quadrature::integrate(
            |s| Self::root(&self.t2, "T''", Point2::new(b.q1, s)),
            b.q2,
            p.q2,
        )?;
        Ok((is, it))
    }

    pub fn value(&self, p: Point2) -> Result<(f64, f64)> {
        let (is, it) = self.antiderivatives(p)?;
        let k = (1.0 - self.c * self.c).sqrt();
        Ok((k * is + self.c * it, k * it - self.c * is))
    }

    pub fn gradient(&self, p: Point2) -> Result<CoordGradient> {
        let rs = Self::root(&self.s2, "S''", p)?;
        let rt = Self::root(&self.t2, "T''", p)?;
        let k = (1.0 - self.c * self.c).sqrt();
        Ok(CoordGradient {
            x1: k * rs,
            x2: self.c * rt,
            y1: -self.c * rs,
            y2: k * rt,
        })
    }
}

/// Coordinate values on a tensor grid, stored with `q1` varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    q1: Vec<f64>,
    q2: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|t| t.is_finite())
}

/// Derivative at `nodes[at]` of the quadratic through three samples.
fn three_point(nodes: [f64; 3], values: [f64; 3], at: usize) -> f64 {
    let x = nodes[at];
    let [a, b, c] = nodes;
    let [fa, fb, fc] = values;
    fa * ((x - b) + (x - c)) / ((a - b) * (a - c))
        + fb * ((x - a) + (x - c)) / ((b - a) * (b - c))
        + fc * ((x - a) + (x - b)) / ((c - a) * (c - b))
}

fn stencil(len: usize, i: usize) -> (usize, usize) {
    // start index of the three-node window and the position of `i` inside it
    if i == 0 {
        (0, 0)
    } else if i == len - 1 {
        (len - 3, 2)
    } else {
        (i - 1, 1)
    }
}

fn locate(axis: &[f64], v: f64) -> Option<usize> {
    axis.iter()
        .position(|&a| (a - v).abs() <= 1e-12 * a.abs().max(v.abs()).max(1.0))
}

impl SampledField {
    pub fn new(q1: Vec<f64>, q2: Vec<f64>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if q1.len() < 3 || q2.len() < 3 {
            return Err(Error::InvalidField(
                "sampled fields need at least 3 nodes per axis".into(),
            ));
        }
        if !strictly_increasing(&q1) || !strictly_increasing(&q2) {
            return Err(Error::InvalidField(
                "grid axes must be finite and strictly increasing".into(),
            ));
        }
        let n = q1.len() * q2.len();
        if x.len() != n || y.len() != n {
            return Err(Error::InvalidField(format!(
                "expected {n} samples, got {} x and {} y",
                x.len(),
                y.len()
            )));
        }
        Ok(SampledField { q1, q2, x, y })
    }

    /// Assembles a field from unordered `(q1, q2, x, y)` rows covering a full grid.
    pub fn from_rows(rows: &[[f64; 4]]) -> Result<Self> {
        let mut q1: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let mut q2: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        for axis in [&mut q1, &mut q2] {
            axis.sort_by(f64::total_cmp);
            axis.dedup();
        }
        let n = q1.len() * q2.len();
        if rows.len() != n {
            return Err(Error::InvalidField(format!(
                "{} rows do not form a full {}x{} grid",
                rows.len(),
                q1.len(),
                q2.len()
            )));
        }
        let mut x = vec![f64::NAN; n];
        let mut y = vec![f64::NAN; n];
        for r in rows {
            let i = q1.iter().position(|&v| v == r[0]).expect("collected above");
            let j = q2.iter().position(|&v| v == r[1]).expect("collected above");
            let k = i * q2.len() + j;
            if !x[k].is_nan() {
                return Err(Error::InvalidField(format!(
                    "duplicate row at ({}, {})",
                    r[0], r[1]
                )));
            }
            x[k] = r[2];
            y[k] = r[3];
        }
        SampledField::new(q1, q2, x, y)
    }

    pub fn q1_nodes(&self) -> &[f64] {
        &self.q1
    }

    pub fn q2_nodes(&self) -> &[f64] {
        &self.q2
    }

    pub fn points(&self) -> Vec<Point2> {
        self.q1
            .iter()
            .flat_map(|&a| self.q2.iter().map(move |&b| Point2::new(a, b)))
            .collect()
    }

    /// Largest node spacing along each axis.
    pub fn spacing(&self) -> (f64, f64) {
        let widest = |v: &[f64]| v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        (widest(&self.q1), widest(&self.q2))
    }

    fn index(&self, p: Point2) -> Result<(usize, usize)> {
        match (locate(&self.q1, p.q1), locate(&self.q2, p.q2)) {
            (Some(i), Some(j)) => Ok((i, j)),
            _ => Err(Error::InvalidField(format!(
                "({}, {}) is not a grid node",
                p.q1, p.q2
            ))),
        }
    }

    fn at(&self, i: usize, j: usize) -> (f64, f64) {
        let k = i * self.q2.len() + j;
        (self.x[k], self.y[k])
    }

    pub fn value(&self, p: Point2) -> Result<(f64, f64)> {
        let (i, j) = self.index(p)?;
        Ok(self.at(i, j))
    }

    pub fn gradient(&self, p: Point2) -> Result<CoordGradient> {
        let (i, j) = self.index(p)?;
        let (s1, k1) = stencil(self.q1.len(), i);
        let n1 = [self.q1[s1], self.q1[s1 + 1], self.q1[s1 + 2]];
        let along1: Vec<(f64, f64)> = (s1..s1 + 3).map(|a| self.at(a, j)).collect();
        let (s2, k2) = stencil(self.q2.len(), j);
        let n2 = [self.q2[s2], self.q2[s2 + 1], self.q2[s2 + 2]];
        let along2: Vec<(f64, f64)> = (s2..s2 + 3).map(|b| self.at(i, b)).collect();
        let xs = |v: &[(f64, f64)]| [v[0].0, v[1].0, v[2].0];
        let ys = |v: &[(f64, f64)]| [v[0].1, v[1].1, v[2].1];
        Ok(CoordGradient {
            x1: three_point(n1, xs(&along1), k1),
            x2: three_point(n2, xs(&along2), k2),
            y1: three_point(n1, ys(&along1), k1),
            y2: three_point(n2, ys(&along2), k2),
        })
    }
}
