//! Globally adaptive 21-point Gauss–Kronrod quadrature.

use crate::error::{Error, Result};

/// Absolute error target for antiderivatives.
pub const ABS_TOL: f64 = 1e-10;
/// Relative floor that keeps large integrals from chasing round-off.
pub const REL_TOL: f64 = 1e-12;

const MAX_INTERVALS: usize = 400;

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn qk21<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut gauss = 0.0;
    let mut kronrod = fc * WGK[10];
    let mut abs_sum = kronrod.abs();
    let mut samples = [0.0; 20];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        samples[2 * j] = f1;
        samples[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((samples[2 * j] - mean).abs() + (samples[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Ok(Segment { a, b, value, error })
}

/// Integral of `f` over `[a, b]` (either orientation) to [`ABS_TOL`].
///
/// Errors raised by the integrand are propagated unchanged.
pub fn integrate<F>(mut f: F, a: f64, b: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a).map(|v| -v);
    }
    let mut segments = vec![qk21(&mut f, a, b)?];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= ABS_TOL.max(REL_TOL * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailed {
                a,
                b,
                estimate: error,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(qk21(&mut f, s.a, mid)?);
        segments.push(qk21(&mut f, mid, s.b)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| Ok(x * x * x - 2.0 * x), 0.0, 2.0).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
        let v = integrate(|x| Ok(x.powi(8)), 0.0, 1.0).unwrap();
        assert!((v - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_bounds_negate() {
        let fwd = integrate(|x| Ok(x.exp()), 0.0, 1.0).unwrap();
        let rev = integrate(|x| Ok(x.exp()), 1.0, 0.0).unwrap();
        assert_eq!(fwd, -rev);
        assert!((fwd - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn peaked_integrand_adapts() {
        let v = integrate(|x| Ok(1.0 / (1e-4 + x * x)), -1.0, 1.0).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0 / 1e-2f64).atan();
        assert!((v - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate(
            |x| {
                if x > 0.5 {
                    Err(Error::InvalidMixing { c: x })
                } else {
                    Ok(x)
                }
            },
            0.0,
            1.0,
        );
        assert!(matches!(r, Err(Error::InvalidMixing { .. })));
    }
}
