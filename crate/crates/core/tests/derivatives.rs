//! Jets against finite differences, symbolic derivatives and printing round trips.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermocurv::{parse, Expr, Point2, Var};

const EXPRESSIONS: [&str; 10] = [
    "log(q1^-2 + q2^-2)",
    "log(q1^3 + 3*q2^3)",
    "q1*q1/2 + q2*q2/2",
    "exp(q1/3) * sqrt(q2)",
    "q1^2.5 * q2^-0.5",
    "log(q1 + 2*q2) + 0.1*(q1^-2 + q2^-2)",
    "q1*q2 / (q1 + q2)",
    "2.5*log(q1^0.3 + q2^0.3)",
    "-q1^2 + q1*q2^3 - exp(-q2)",
    "(q1^-2 + q2^-2)^0.3",
];

/// Central difference of `f` along `(i, j)` with step `h`, nested per axis.
fn central(f: &dyn Fn(f64, f64) -> f64, p: Point2, i: usize, j: usize, h: f64) -> f64 {
    fn along(f: &dyn Fn(f64) -> f64, x: f64, n: usize, h: f64) -> f64 {
        match n {
            0 => f(x),
            _ => (along(f, x + h, n - 1, h) - along(f, x - h, n - 1, h)) / (2.0 * h),
        }
    }
    along(&|a| along(&|b| f(a, b), p.q2, j, h), p.q1, i, h)
}

fn random_points(seed: u64, n: usize) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point2::new(rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0)))
        .collect()
}

#[test]
fn jet_matches_central_differences() {
    // A first-order difference of the exact jet entry one order below keeps the
    // truncation error at O(h^2) for every order.
    let h = 1e-4;
    for text in EXPRESSIONS {
        let e = parse(text).unwrap();
        for p in random_points(7, 20) {
            let jet = e.jet(p).unwrap();
            for order in 1..=4 {
                for i in 0..=order {
                    let j = order - i;
                    let (di, dj) = if i > 0 { (i - 1, j) } else { (i, j - 1) };
                    let lower = |a: f64, b: f64| e.jet(Point2::new(a, b)).unwrap().d(di, dj);
                    let fd = central(&lower, p, i - di, j - dj, h);
                    let exact = jet.d(i, j);
                    let rel = (fd - exact).abs() / exact.abs().max(1.0);
                    let tol = if order == 4 { 1e-3 } else { 1e-5 };
                    assert!(rel <= tol, "{text} at {p:?}: d({i},{j}) {exact} vs {fd}");
                }
            }
        }
    }
}

#[test]
fn jet_matches_value_differences_to_second_order() {
    let h = 1e-4;
    for text in EXPRESSIONS {
        let e = parse(text).unwrap();
        let f = |a: f64, b: f64| e.eval(Point2::new(a, b)).unwrap();
        for p in random_points(11, 5) {
            let jet = e.jet(p).unwrap();
            for (i, j) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
                let fd = central(&f, p, i, j, h);
                let rel = (fd - jet.d(i, j)).abs() / jet.d(i, j).abs().max(1.0);
                assert!(rel <= 1e-5, "{text}: d({i},{j})");
            }
        }
    }
}

#[test]
fn symbolic_partials_agree_with_jets() {
    for text in EXPRESSIONS {
        let e = parse(text).unwrap();
        for p in random_points(3, 5) {
            let jet = e.jet(p).unwrap();
            for i in 0..=3 {
                for j in 0..=(3 - i) {
                    let v = e.partial(i, j).eval(p).unwrap();
                    let scale = v.abs().max(1.0);
                    assert!(
                        (v - jet.d(i, j)).abs() <= 1e-10 * scale,
                        "{text} d({i},{j})"
                    );
                }
            }
        }
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::q1()),
        Just(Expr::q2()),
        (0.25f64..4.0).prop_map(Expr::constant),
    ]
}

/// Trees built from operations that stay positive on positive arguments.
fn positive_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            (inner.clone(), -2.5f64..2.5).prop_map(|(a, k)| a.pow(k)),
            inner.clone().prop_map(|a| (a + 1.0).ln()),
            inner.clone().prop_map(|a| (0.1 * a).exp()),
        ]
    })
}

fn any_expr() -> impl Strategy<Value = Expr> {
    (positive_expr(), any::<bool>()).prop_map(|(e, neg)| if neg { -e } else { e })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mixed_partials_commute(e in positive_expr(), a in 0.5f64..3.0, b in 0.5f64..3.0) {
        let p = Point2::new(a, b);
        let d12 = e.differentiate(Var::Q1).differentiate(Var::Q2).eval(p).unwrap();
        let d21 = e.differentiate(Var::Q2).differentiate(Var::Q1).eval(p).unwrap();
        let jet = e.jet(p).unwrap();
        let scale = d12.abs().max(1.0);
        prop_assert!((d12 - d21).abs() <= 1e-9 * scale);
        prop_assert!((d12 - jet.d(1, 1)).abs() <= 1e-9 * scale);
    }

    #[test]
    fn printing_round_trips(e in any_expr()) {
        let text = e.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn evaluation_is_the_zeroth_jet_entry(e in positive_expr(), a in 0.5f64..3.0, b in 0.5f64..3.0) {
        let p = Point2::new(a, b);
        prop_assert_eq!(e.eval(p).unwrap(), e.jet(p).unwrap().d(0, 0));
    }
}
