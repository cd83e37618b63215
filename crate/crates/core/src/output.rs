//! Deterministic CSV and JSON renderings of results.
//!
//! CSV: header row, comma separated, LF line endings, floats with 17
//! significant digits. JSON: pretty printed with keys in sorted order.

use std::fmt::Write;

use serde::Serialize;

use crate::isothermal::CoordRow;
use crate::thermo::{RadiusClass, RadiusProfile};

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{}", fmt_f64(*v)).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

/// Columns `q1,q2,x,y,r1,r2,r3`.
pub fn coord_csv(rows: &[CoordRow]) -> String {
    csv(
        ["q1", "q2", "x", "y", "r1", "r2", "r3"],
        rows.iter()
            .map(|r| [r.q1, r.q2, r.x, r.y, r.r1, r.r2, r.r3]),
    )
}

/// Columns `u,v,R2`.
pub fn radius_csv(profile: &RadiusProfile) -> String {
    csv(
        ["u", "v", "R2"],
        profile.points.iter().map(|p| [p.u, p.v, p.r2]),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusSummary {
    pub alpha: f64,
    #[serde(rename = "min_R2")]
    pub min_r2: f64,
    #[serde(rename = "max_R2")]
    pub max_r2: f64,
    pub classification: RadiusClass,
}

impl From<&RadiusProfile> for RadiusSummary {
    fn from(p: &RadiusProfile) -> Self {
        RadiusSummary {
            alpha: p.alpha,
            min_r2: p.min_r2,
            max_r2: p.max_r2,
            classification: p.classification,
        }
    }
}

/// Pretty JSON with sorted object keys and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    // serde_json's Map is ordered by key unless `preserve_order` is enabled.
    let v = serde_json::to_value(value).expect("result types serialize infallibly");
    let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
    s.push('\n');
    s
}
