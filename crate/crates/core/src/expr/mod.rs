//! Expression trees for fundamental relations `Phi(q1, q2)`.

mod diff;
mod jet;
mod parse;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taylor::Taylor2;

pub use jet::Jet4;
pub use parse::parse;

/// One of the two extensive coordinates of the space of equilibrium states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Q1,
    Q2,
}

impl Var {
    pub fn axis(self) -> usize {
        match self {
            Var::Q1 => 0,
            Var::Q2 => 1,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::Q1 => "q1",
            Var::Q2 => "q2",
        })
    }
}

/// A point `(q1, q2)`. In the entropy representation these are the specific
/// energy `u` and the specific volume `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub q1: f64,
    pub q2: f64,
}

impl Point2 {
    pub fn new(q1: f64, q2: f64) -> Self {
        Point2 { q1, q2 }
    }

    pub fn swapped(self) -> Self {
        Point2::new(self.q2, self.q1)
    }
}

/// Immutable expression tree. Children are reference counted so derivative
/// trees can share structure with their source.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Variable(Var),
    Sum(Arc<Expr>, Arc<Expr>),
    Product(Arc<Expr>, Arc<Expr>),
    Quotient(Arc<Expr>, Arc<Expr>),
    /// Power with a constant real exponent.
    Power(Arc<Expr>, f64),
    Log(Arc<Expr>),
    Exp(Arc<Expr>),
    Negate(Arc<Expr>),
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Constant(v)
    }

    pub fn q1() -> Expr {
        Expr::Variable(Var::Q1)
    }

    pub fn q2() -> Expr {
        Expr::Variable(Var::Q2)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Variable(v)
    }

    pub fn pow(self, p: f64) -> Expr {
        Expr::Power(Arc::new(self), p)
    }

    pub fn sqrt(self) -> Expr {
        self.pow(0.5)
    }

    pub fn ln(self) -> Expr {
        Expr::Log(Arc::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Arc::new(self))
    }

    /// True if the tree mentions `v` anywhere.
    pub fn depends_on(&self, v: Var) -> bool {
        match self {
            Expr::Constant(_) => false,
            Expr::Variable(w) => *w == v,
            Expr::Sum(a, b) | Expr::Product(a, b) | Expr::Quotient(a, b) => {
                a.depends_on(v) || b.depends_on(v)
            }
            Expr::Power(a, _) | Expr::Log(a) | Expr::Exp(a) | Expr::Negate(a) => a.depends_on(v),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Variable(_) => 1,
            Expr::Sum(a, b) | Expr::Product(a, b) | Expr::Quotient(a, b) => 1 + a.size() + b.size(),
            Expr::Power(a, _) | Expr::Log(a) | Expr::Exp(a) | Expr::Negate(a) => 1 + a.size(),
        }
    }

    /// Plain floating-point evaluation.
    pub fn eval(&self, p: Point2) -> Result<f64> {
        Ok(self.taylor(p, 0)?.value())
    }

    /// Truncated Taylor expansion of the expression at `p` up to total order `order`.
    pub fn taylor(&self, p: Point2, order: usize) -> Result<Taylor2> {
        let s = match self {
            Expr::Constant(c) => Taylor2::constant(*c, order),
            Expr::Variable(Var::Q1) => Taylor2::variable(0, p.q1, order),
            Expr::Variable(Var::Q2) => Taylor2::variable(1, p.q2, order),
            Expr::Sum(a, b) => a.taylor(p, order)? + b.taylor(p, order)?,
            Expr::Product(a, b) => a.taylor(p, order)? * b.taylor(p, order)?,
            Expr::Quotient(a, b) => {
                let num = a.taylor(p, order)?;
                let den = b.taylor(p, order)?;
                num.div(&den).map_err(|r| self.domain_error(r))?
            }
            Expr::Power(a, e) => a
                .taylor(p, order)?
                .powf(*e)
                .map_err(|r| self.domain_error(r))?,
            Expr::Log(a) => a.taylor(p, order)?.ln().map_err(|r| self.domain_error(r))?,
            Expr::Exp(a) => a.taylor(p, order)?.exp(),
            Expr::Negate(a) => -a.taylor(p, order)?,
        };
        if !s.is_finite() {
            return Err(self.domain_error(format!("non-finite value at ({}, {})", p.q1, p.q2)));
        }
        Ok(s)
    }

    /// All partial derivatives up to total order four at `p`.
    pub fn jet(&self, p: Point2) -> Result<Jet4> {
        Ok(Jet4::from_series(&self.taylor(p, 4)?))
    }

    fn domain_error(&self, reason: String) -> Error {
        let mut subexpr = self.to_string();
        if subexpr.len() > 120 {
            let mut cut = 117;
            while !subexpr.is_char_boundary(cut) {
                cut -= 1;
            }
            subexpr.truncate(cut);
            subexpr.push_str("...");
        }
        Error::Domain { subexpr, reason }
    }
}

fn fmt_number(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // Debug formatting of f64 is the shortest representation that round-trips.
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        write!(f, "(-{:?})", -v)
    } else {
        write!(f, "{v:?}")
    }
}

/// Fully parenthesised text that [`parse`] reads back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => fmt_number(*c, f),
            Expr::Variable(v) => write!(f, "{v}"),
            Expr::Sum(a, b) => write!(f, "({a} + {b})"),
            Expr::Product(a, b) => write!(f, "({a} * {b})"),
            Expr::Quotient(a, b) => write!(f, "({a} / {b})"),
            Expr::Power(a, e) => write!(f, "({a})^{e:?}"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Negate(a) => write!(f, "(-{a})"),
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Arc::new(self), Arc::new(rhs))
            }
        }
        impl std::ops::$trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::$variant(Arc::new(self), Arc::new(Expr::Constant(rhs)))
            }
        }
        impl std::ops::$trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Arc::new(Expr::Constant(self)), Arc::new(rhs))
            }
        }
    };
}

binary_op!(Add, add, Sum);
binary_op!(Mul, mul, Product);
binary_op!(Div, div, Quotient);

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Negate(Arc::new(self))
    }
}
