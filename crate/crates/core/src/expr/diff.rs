use std::sync::Arc;

use super::{Expr, Var};

// Smart constructors fold the trivial identities so derivative trees stay small.

fn sum(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Constant(x), _) if *x == 0.0 => b,
        (_, Expr::Constant(y)) if *y == 0.0 => a,
        (Expr::Constant(x), Expr::Constant(y)) => Expr::Constant(x + y),
        _ => Expr::Sum(Arc::new(a), Arc::new(b)),
    }
}

fn product(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Constant(x), _) | (_, Expr::Constant(x)) if *x == 0.0 => Expr::Constant(0.0),
        (Expr::Constant(x), _) if *x == 1.0 => b,
        (_, Expr::Constant(y)) if *y == 1.0 => a,
        (Expr::Constant(x), Expr::Constant(y)) => Expr::Constant(x * y),
        _ => Expr::Product(Arc::new(a), Arc::new(b)),
    }
}

fn quotient(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Constant(x), _) if *x == 0.0 => Expr::Constant(0.0),
        (_, Expr::Constant(y)) if *y == 1.0 => a,
        _ => Expr::Quotient(Arc::new(a), Arc::new(b)),
    }
}

fn negate(a: Expr) -> Expr {
    match a {
        Expr::Constant(x) => Expr::Constant(-x),
        Expr::Negate(inner) => Arc::unwrap_or_clone(inner),
        other => Expr::Negate(Arc::new(other)),
    }
}

fn shared(e: &Arc<Expr>) -> Expr {
    (**e).clone()
}

impl Expr {
    /// Exact symbolic partial derivative with respect to `var`.
    pub fn differentiate(&self, var: Var) -> Expr {
        match self {
            Expr::Constant(_) => Expr::Constant(0.0),
            Expr::Variable(v) => Expr::Constant(if *v == var { 1.0 } else { 0.0 }),
            Expr::Sum(a, b) => sum(a.differentiate(var), b.differentiate(var)),
            Expr::Product(a, b) => sum(
                product(a.differentiate(var), shared(b)),
                product(shared(a), b.differentiate(var)),
            ),
            Expr::Quotient(a, b) => {
                // (a'b - ab') / b^2
                let num = sum(
                    product(a.differentiate(var), shared(b)),
                    negate(product(shared(a), b.differentiate(var))),
                );
                quotient(num, Expr::Power(b.clone(), 2.0))
            }
            Expr::Power(a, p) => {
                let da = a.differentiate(var);
                if *p == 0.0 {
                    return Expr::Constant(0.0);
                }
                let lowered = if *p == 1.0 {
                    Expr::Constant(1.0)
                } else {
                    Expr::Power(a.clone(), p - 1.0)
                };
                product(product(Expr::Constant(*p), lowered), da)
            }
            Expr::Log(a) => quotient(a.differentiate(var), shared(a)),
            Expr::Exp(a) => product(self.clone(), a.differentiate(var)),
            Expr::Negate(a) => negate(a.differentiate(var)),
        }
    }

    /// Repeated differentiation: `i` times in `q1`, then `j` times in `q2`.
    pub fn partial(&self, i: usize, j: usize) -> Expr {
        let mut e = self.clone();
        for _ in 0..i {
            e = e.differentiate(Var::Q1);
        }
        for _ in 0..j {
            e = e.differentiate(Var::Q2);
        }
        e
    }
}
