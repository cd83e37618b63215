//! Rectangular sample grids, written `min:max:count` or `log:min:max:count`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Sample positions along one coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(min: f64, max: f64, count: usize) -> Result<Self> {
        Axis {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
        .validated()
    }

    pub fn log(min: f64, max: f64, count: usize) -> Result<Self> {
        Axis {
            min,
            max,
            count,
            spacing: Spacing::Log,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if self.count == 0 {
            return Err(Error::InvalidGrid("count must be at least 1".into()));
        }
        if self.min > self.max {
            return Err(Error::InvalidGrid(format!(
                "min {} exceeds max {}",
                self.min, self.max
            )));
        }
        if self.count > 1 && self.min == self.max {
            return Err(Error::InvalidGrid("empty range with count > 1".into()));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::InvalidGrid("log spacing needs min > 0".into()));
        }
        Ok(self)
    }

    /// The sample values; the endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.min;
                }
                if k == n - 1 {
                    return self.max;
                }
                let t = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let (spacing, rest) = match parts.as_slice() {
            ["log", rest @ ..] => (Spacing::Log, rest),
            rest => (Spacing::Linear, rest),
        };
        let [min, max, count] = rest else {
            return Err(Error::InvalidGrid(format!(
                "`{s}`: expected min:max:count or log:min:max:count"
            )));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("`{s}`: `{t}` is not a number")))
        };
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidGrid(format!("`{s}`: `{count}` is not a count")))?;
        Axis {
            min: num(min)?,
            max: num(max)?,
            count,
            spacing,
        }
        .validated()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spacing == Spacing::Log {
            f.write_str("log:")?;
        }
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Tensor-product grid over `(q1, q2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2 {
    pub q1: Axis,
    pub q2: Axis,
}

impl Grid2 {
    pub fn new(q1: Axis, q2: Axis) -> Self {
        Grid2 { q1, q2 }
    }

    /// Same axis in both directions.
    pub fn square(axis: Axis) -> Self {
        Grid2 { q1: axis, q2: axis }
    }

    pub fn len(&self) -> usize {
        self.q1.count * self.q2.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lower-left corner.
    pub fn origin(&self) -> Point2 {
        Point2::new(self.q1.min, self.q2.min)
    }

    /// Points in row-major order: `q1` varies slowest, `q2` fastest.
    pub fn points(&self) -> Vec<Point2> {
        let ys = self.q2.values();
        self.q1
            .values()
            .into_iter()
            .flat_map(|x| ys.iter().map(move |&y| Point2::new(x, y)))
            .collect()
    }
}

impl FromStr for Grid2 {
    type Err = Error;

    /// `SPEC` for a square grid or `SPEC,SPEC` for separate q1 and q2 axes.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(',') {
            Some((a, b)) => Ok(Grid2::new(a.parse()?, b.parse()?)),
            None => Ok(Grid2::square(s.parse()?)),
        }
    }
}

impl fmt::Display for Grid2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q1 == self.q2 {
            write!(f, "{}", self.q1)
        } else {
            write!(f, "{},{}", self.q1, self.q2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_linear_and_log() {
        let a: Axis = "0.5:5:20".parse().unwrap();
        assert_eq!(a.spacing, Spacing::Linear);
        let v = a.values();
        assert_eq!(v.len(), 20);
        assert_eq!(v[0], 0.5);
        assert_eq!(v[19], 5.0);

        let l: Axis = "log:1e-2:1e2:5".parse().unwrap();
        let v = l.values();
        assert_eq!(v[0], 0.01);
        assert_eq!(v[4], 100.0);
        assert!((v[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "1:2",
            "2:1:5",
            "log:0:1:3",
            "a:1:3",
            "0:1:0",
            "1:1:4",
            "0:1:-3",
        ] {
            assert!(bad.parse::<Axis>().is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_order_and_display() {
        let g: Grid2 = "1:2:2,3:5:3".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], Point2::new(1.0, 3.0));
        assert_eq!(pts[1], Point2::new(1.0, 4.0));
        assert_eq!(pts[3], Point2::new(2.0, 3.0));
        assert_eq!(g.to_string(), "1:2:2,3:5:3");
        let sq: Grid2 = "log:0.01:100:50".parse().unwrap();
        assert_eq!(sq.to_string(), "log:0.01:100:50");
    }
}
