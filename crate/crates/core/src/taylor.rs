//! Truncated bivariate Taylor series.
//!
//! A [`Taylor2`] of order `n` stores the coefficients `c[i][j]` of
//! `sum c[i][j] * d1^i * d2^j` for `i + j <= n`, where `d1`, `d2` are
//! displacements from the expansion point. Arithmetic on these series
//! propagates exact partial derivatives (up to rounding) through any
//! composition of the supported elementary functions.

use std::ops::{Add, Mul, Neg, Sub};

/// Highest total order any series can carry.
pub const MAX_ORDER: usize = 4;

const N: usize = MAX_ORDER + 1;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taylor2 {
    order: usize,
    c: [[f64; N]; N],
}

impl Taylor2 {
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(
            order <= MAX_ORDER,
            "series order {order} exceeds {MAX_ORDER}"
        );
        let mut c = [[0.0; N]; N];
        c[0][0] = value;
        Taylor2 { order, c }
    }

    /// The coordinate function `q1` (`axis = 0`) or `q2` (`axis = 1`) expanded at `value`.
    pub fn variable(axis: usize, value: f64, order: usize) -> Self {
        let mut s = Self::constant(value, order);
        if order >= 1 {
            match axis {
                0 => s.c[1][0] = 1.0,
                1 => s.c[0][1] = 1.0,
                _ => panic!("axis must be 0 or 1"),
            }
        }
        s
    }

    /// Builds a series from partial derivatives `d(i, j) = d^{i+j} f / dq1^i dq2^j`.
    pub fn from_derivatives(order: usize, d: impl Fn(usize, usize) -> f64) -> Self {
        let mut s = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                s.c[i][j] = d(i, j) / (factorial(i) * factorial(j));
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0][0]
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        assert!(i + j <= self.order);
        self.c[i][j]
    }

    /// Partial derivative `d^{i+j} f / dq1^i dq2^j` at the expansion point.
    pub fn derivative(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order);
        let mut s = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                s.c[i][j] = self.c[i][j];
            }
        }
        s
    }

    /// Series of the partial derivative along `axis`; the order drops by one.
    pub fn partial(&self, axis: usize) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 series");
        let order = self.order - 1;
        let mut s = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                s.c[i][j] = match axis {
                    0 => (i + 1) as f64 * self.c[i + 1][j],
                    1 => (j + 1) as f64 * self.c[i][j + 1],
                    _ => panic!("axis must be 0 or 1"),
                };
            }
        }
        s
    }

    pub fn is_finite(&self) -> bool {
        (0..=self.order).all(|i| (0..=self.order - i).all(|j| self.c[i][j].is_finite()))
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|v| v * k)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut s = *self;
        for i in 0..=self.order {
            for j in 0..=self.order - i {
                s.c[i][j] = f(self.c[i][j]);
            }
        }
        s
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let order = self.order.min(other.order);
        let mut s = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                s.c[i][j] = f(self.c[i][j], other.c[i][j]);
            }
        }
        s
    }

    fn product(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut s = Self::constant(0.0, order);
        for i in 0..=order {
            for j in 0..=order - i {
                let mut acc = 0.0;
                for a in 0..=i {
                    for b in 0..=j {
                        acc += self.c[a][b] * other.c[i - a][j - b];
                    }
                }
                s.c[i][j] = acc;
            }
        }
        s
    }

    /// Evaluates `sum_k taylor[k] * (self - self(0))^k`, where `taylor[k]` is
    /// `f^(k)(self(0)) / k!` for a univariate function `f`.
    pub fn compose(&self, taylor: &[f64]) -> Self {
        assert!(taylor.len() > self.order);
        let mut t = *self;
        t.c[0][0] = 0.0;
        let mut out = Self::constant(taylor[0], self.order);
        let mut power = Self::constant(1.0, self.order);
        for &a in &taylor[1..=self.order] {
            power = power.product(&t);
            if a != 0.0 {
                out = out.zip(&power, |x, y| x + a * y);
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Self, String> {
        let x0 = self.value();
        if x0 == 0.0 {
            return Err("division by zero".into());
        }
        let coeffs: Vec<f64> = (0..=self.order)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign / x0.powi(k as i32 + 1)
            })
            .collect();
        Ok(self.compose(&coeffs))
    }

    pub fn div(&self, other: &Self) -> Result<Self, String> {
        Ok(*self * other.recip()?)
    }

    pub fn ln(&self) -> Result<Self, String> {
        let x0 = self.value();
        if !(x0 > 0.0) {
            return Err(format!("logarithm of non-positive value {x0}"));
        }
        let mut coeffs = vec![x0.ln()];
        for k in 1..=self.order {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(sign / (k as f64 * x0.powi(k as i32)));
        }
        Ok(self.compose(&coeffs))
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let coeffs: Vec<f64> = (0..=self.order).map(|k| e / factorial(k)).collect();
        self.compose(&coeffs)
    }

    /// Real power with a constant exponent.
    ///
    /// Negative bases are accepted for integer exponents only; a zero base
    /// requires a non-negative integer exponent.
    pub fn powf(&self, p: f64) -> Result<Self, String> {
        let x0 = self.value();
        let integer = p.fract() == 0.0 && p.abs() < i32::MAX as f64;
        if x0 < 0.0 && !integer {
            return Err(format!("non-integer power {p} of negative value {x0}"));
        }
        if x0 == 0.0 && !(integer && p >= 0.0) {
            return Err(format!("power {p} of zero is not differentiable"));
        }
        let mut coeffs = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0; // p choose k
        for k in 0..=self.order {
            if k > 0 {
                binom *= (p - (k as f64 - 1.0)) / k as f64;
            }
            let v = if binom == 0.0 {
                0.0
            } else if integer {
                x0.powi(p as i32 - k as i32)
            } else {
                x0.powf(p - k as f64)
            };
            coeffs.push(binom * v);
        }
        Ok(self.compose(&coeffs))
    }

    pub fn sqrt(&self) -> Result<Self, String> {
        self.powf(0.5)
    }
}

impl Add for Taylor2 {
    type Output = Taylor2;
    fn add(self, rhs: Taylor2) -> Taylor2 {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl Sub for Taylor2 {
    type Output = Taylor2;
    fn sub(self, rhs: Taylor2) -> Taylor2 {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Mul for Taylor2 {
    type Output = Taylor2;
    fn mul(self, rhs: Taylor2) -> Taylor2 {
        self.product(&rhs)
    }
}

impl Neg for Taylor2 {
    type Output = Taylor2;
    fn neg(self) -> Taylor2 {
        self.map(|v| -v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn product_of_variables() {
        let x = Taylor2::variable(0, 3.0, 4);
        let y = Taylor2::variable(1, 5.0, 4);
        let xy = x * y;
        assert_eq!(xy.value(), 15.0);
        assert_eq!(xy.derivative(1, 0), 5.0);
        assert_eq!(xy.derivative(0, 1), 3.0);
        assert_eq!(xy.derivative(1, 1), 1.0);
        assert_eq!(xy.derivative(2, 0), 0.0);
    }

    #[test]
    fn log_derivatives() {
        let x = Taylor2::variable(0, 1.0, 4);
        let l = x.ln().unwrap();
        let expected = [0.0, 1.0, -1.0, 2.0, -6.0];
        for (k, e) in expected.iter().enumerate() {
            assert!(close(l.derivative(k, 0), *e, 1e-15), "order {k}");
        }
    }

    #[test]
    fn power_rule_integer_and_fractional() {
        let x = Taylor2::variable(0, 2.0, 4);
        let cube = x.powf(3.0).unwrap();
        assert_eq!(cube.derivative(0, 0), 8.0);
        assert_eq!(cube.derivative(1, 0), 12.0);
        assert_eq!(cube.derivative(2, 0), 12.0);
        assert_eq!(cube.derivative(3, 0), 6.0);
        assert_eq!(cube.derivative(4, 0), 0.0);

        let r = x.sqrt().unwrap();
        assert!(close(r.derivative(1, 0), 0.5 / 2f64.sqrt(), 1e-15));
        assert!(close(r.derivative(2, 0), -0.25 * 2f64.powf(-1.5), 1e-15));
    }

    #[test]
    fn negative_base_integer_power() {
        let x = Taylor2::variable(0, -2.0, 4);
        let inv = x.powf(-1.0).unwrap();
        assert!(close(inv.value(), -0.5, 1e-15));
        assert!(close(inv.derivative(1, 0), -0.25, 1e-15));
        assert!(x.powf(0.5).is_err());
    }

    #[test]
    fn zero_base() {
        let x = Taylor2::variable(0, 0.0, 4);
        let sq = x.powf(2.0).unwrap();
        assert_eq!(sq.derivative(2, 0), 2.0);
        assert_eq!(sq.derivative(1, 0), 0.0);
        assert!(x.powf(0.5).is_err());
        assert!(x.recip().is_err());
        assert!(x.ln().is_err());
    }

    #[test]
    fn exp_of_sum_mixed_partials() {
        let s = Taylor2::variable(0, 0.3, 4) + Taylor2::variable(1, 0.2, 4);
        let e = s.exp();
        for i in 0..=4 {
            for j in 0..=4 - i {
                assert!(close(e.derivative(i, j), 0.5f64.exp(), 1e-14));
            }
        }
    }

    #[test]
    fn partial_shifts_coefficients() {
        let x = Taylor2::variable(0, 1.5, 4);
        let y = Taylor2::variable(1, 0.5, 4);
        let f = (x * x * y).exp();
        let fx = f.partial(0);
        assert_eq!(fx.order(), 3);
        for i in 0..=3 {
            for j in 0..=3 - i {
                assert!(close(fx.derivative(i, j), f.derivative(i + 1, j), 1e-13));
            }
        }
    }

    #[test]
    fn division_matches_quotient_rule() {
        let x = Taylor2::variable(0, 2.0, 3);
        let y = Taylor2::variable(1, 3.0, 3);
        let q = x.div(&y).unwrap();
        assert!(close(q.derivative(0, 1), -2.0 / 9.0, 1e-15));
        assert!(close(q.derivative(1, 1), -1.0 / 9.0, 1e-15));
        assert!(close(q.derivative(0, 2), 4.0 / 27.0, 1e-15));
    }
}
