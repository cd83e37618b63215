use crate::taylor::{Taylor2, MAX_ORDER};

/// Partial derivatives `d^{i+j} Phi / dq1^i dq2^j` at a point for `i + j <= 4`.
///
/// One entry per `(i, j)` pair, so mixed partials agree by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet4 {
    d: [[f64; MAX_ORDER + 1]; MAX_ORDER + 1],
}

impl Jet4 {
    pub(crate) fn from_series(s: &Taylor2) -> Self {
        assert_eq!(s.order(), MAX_ORDER);
        let mut d = [[0.0; MAX_ORDER + 1]; MAX_ORDER + 1];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate().take(MAX_ORDER + 1 - i) {
                *v = s.derivative(i, j);
            }
        }
        Jet4 { d }
    }

    /// `d^{i+j} Phi / dq1^i dq2^j`.
    ///
    /// Panics if `i + j > 4`.
    pub fn d(&self, i: usize, j: usize) -> f64 {
        assert!(
            i + j <= MAX_ORDER,
            "jet holds derivatives up to order {MAX_ORDER}"
        );
        self.d[i][j]
    }

    /// Taylor series of the jet truncated at `order`.
    pub fn series(&self, order: usize) -> Taylor2 {
        Taylor2::from_derivatives(order, |i, j| self.d[i][j])
    }

    /// Entries of a given total order, `(k,0), (k-1,1), ..., (0,k)`.
    pub fn order_slice(&self, k: usize) -> Vec<f64> {
        (0..=k).rev().map(|i| self.d(i, k - i)).collect()
    }
}
