//! Standard normal distribution kernels.
//!
//! The CDF is evaluated through the complementary error function, which stays
//! accurate in both tails. The quantile function is Wichura's AS241 (PPND16)
//! rational approximation, accurate to roughly 1e-16 relative over the whole
//! double-precision range.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// √(2π).
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Standard normal density φ(x).
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal CDF Φ(x).
#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail 1 − Φ(x), without cancellation for large `x`.
#[inline]
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Φ(b) − Φ(a) for a ≤ b, taking the difference in whichever tail keeps
/// the most significant digits.
#[inline]
pub fn std_normal_interval(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        std_normal_sf(a) - std_normal_sf(b)
    } else {
        std_normal_cdf(b) - std_normal_cdf(a)
    }
}

/// Inverse standard normal CDF Φ⁻¹(p) for p in (0, 1).
pub fn std_normal_inv_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(ppnd16(p))
}

/// d Φ⁻¹(p) / dp = √(2π)·exp(½·Φ⁻¹(p)²).
pub fn inv_cdf_derivative(p: f64) -> Result<f64> {
    let z = std_normal_inv_cdf(p)?;
    Ok(SQRT_2PI * (0.5 * z * z).exp())
}

// AS241 (PPND16) coefficients, as published
const SPLIT1: f64 = 0.425;
const SPLIT2: f64 = 5.0;
const CONST1: f64 = 0.180_625;
const CONST2: f64 = 1.6;

#[allow(clippy::excessive_precision)]
const A: [f64; 8] = [
    3.387_132_872_796_366_608,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
#[allow(clippy::excessive_precision)]
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
#[allow(clippy::excessive_precision)]
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_9,
    5.769_497_221_460_691_405_5,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
#[allow(clippy::excessive_precision)]
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_4,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
#[allow(clippy::excessive_precision)]
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2,
    5.463_784_911_164_114_369_9,
    1.784_826_539_917_291_335_8,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
#[allow(clippy::excessive_precision)]
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

#[inline]
fn horner(coeffs: &[f64; 8], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// AS241 core; caller guarantees 0 < p < 1.
#[inline]
pub(crate) fn ppnd16(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= SPLIT1 {
        let r = CONST1 - q * q;
        return q * horner(&A, r) / horner(&B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let z = if r <= SPLIT2 {
        let r = r - CONST2;
        horner(&C, r) / horner(&D, r)
    } else {
        let r = r - SPLIT2;
        horner(&E, r) / horner(&F, r)
    };
    if q < 0.0 {
        -z
    } else {
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// erf via the all-positive series erf(x) = 2/√π·e^{−x²}·Σ 2ⁿx^{2n+1}/(2n+1)!!,
    /// switching to the Lentz continued fraction for erfc when x is large.
    fn erf_oracle(x: f64) -> f64 {
        let ax = x.abs();
        let v = if ax < 3.0 {
            let mut term = ax;
            let mut sum = ax;
            let mut n = 0.0;
            while term > 1e-30 * sum {
                n += 1.0;
                term *= 2.0 * ax * ax / (2.0 * n + 1.0);
                sum += term;
            }
            2.0 / PI.sqrt() * (-ax * ax).exp() * sum
        } else {
            1.0 - erfc_cf(ax)
        };
        v.copysign(x)
    }

    fn erfc_cf(x: f64) -> f64 {
        // erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let mut f = x;
        for k in (1..200).rev() {
            f = x + (k as f64 / 2.0) / f;
        }
        (-x * x).exp() / PI.sqrt() / f
    }

    fn cdf_oracle(x: f64) -> f64 {
        if x < -4.0 {
            0.5 * erfc_cf(-x * FRAC_1_SQRT_2)
        } else {
            0.5 * (1.0 + erf_oracle(x * FRAC_1_SQRT_2))
        }
    }

    #[test]
    fn sqrt_2pi_constant() {
        assert!((SQRT_2PI - (2.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cdf_reference_values() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.0) - 0.841_344_746_068_543).abs() < 1e-12);
        assert!((std_normal_cdf(-1.0) - 0.158_655_253_931_457).abs() < 1e-12);
        assert!((cdf_oracle(1.0) - 0.841_344_746_068_543).abs() < 1e-14);
    }

    #[test]
    fn cdf_matches_series_oracle() {
        let mut x = -8.0;
        while x <= 8.0 {
            let err = (std_normal_cdf(x) - cdf_oracle(x)).abs();
            assert!(err <= 1e-12, "x={x} err={err}");
            assert!((std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))).abs() < 1e-15);
            x += 0.01;
        }
    }

    #[test]
    fn cdf_is_monotone() {
        let mut prev = 0.0;
        for i in -4000..=4000 {
            let v = std_normal_cdf(i as f64 * 0.002);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn inv_cdf_reference_values() {
        assert_eq!(std_normal_inv_cdf(0.5).unwrap(), 0.0);
        assert!((std_normal_inv_cdf(0.841_344_746_068_543).unwrap() - 1.0).abs() < 1e-9);
        for &p in &[2f64.powi(-33), 2f64.powi(-17), 0.01, 0.2, 0.37] {
            let s = std_normal_inv_cdf(p).unwrap() + std_normal_inv_cdf(1.0 - p).unwrap();
            assert!(s.abs() < 1e-12, "p={p} sum={s}");
        }
    }

    #[test]
    fn inv_cdf_rejects_out_of_range() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(std_normal_inv_cdf(p).is_err());
            assert!(inv_cdf_derivative(p).is_err());
        }
    }

    #[test]
    fn inv_cdf_inverts_cdf() {
        // log-spaced in both tails plus a linear sweep of the centre
        let mut ps = Vec::new();
        for i in 0..=1000 {
            let e = -10.0 + 10.0 * i as f64 / 1000.0;
            let p = 10f64.powf(e).min(0.5);
            ps.push(p);
            ps.push(1.0 - p);
        }
        for i in 1..1000 {
            ps.push(i as f64 / 1000.0);
        }
        for p in ps {
            let z = std_normal_inv_cdf(p).unwrap();
            assert!((std_normal_cdf(z) - p).abs() <= 1e-12, "p={p}");
        }
        let mut x = -6.0;
        while x <= 6.0 {
            let back = std_normal_inv_cdf(std_normal_cdf(x)).unwrap();
            assert!((back - x).abs() <= 1e-8, "x={x} back={back}");
            x += 0.005;
        }
    }

    #[test]
    fn derivative_reference_values() {
        assert!((inv_cdf_derivative(0.5).unwrap() - SQRT_2PI).abs() < 1e-15);
        let d = inv_cdf_derivative(0.841_345).unwrap();
        assert!((d - 4.13273).abs() < 1e-4, "{d}");
        for &p in &[0.01, 0.1, 0.3] {
            let a = inv_cdf_derivative(p).unwrap();
            let b = inv_cdf_derivative(1.0 - p).unwrap();
            assert!(((a - b) / a).abs() < 1e-12);
            assert!(a >= SQRT_2PI);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-7;
        for i in 0..=98 {
            let p = 0.01 + 0.01 * i as f64;
            let fd = (std_normal_inv_cdf(p + h).unwrap() - std_normal_inv_cdf(p - h).unwrap())
                / (2.0 * h);
            let d = inv_cdf_derivative(p).unwrap();
            assert!(((fd - d) / d).abs() < 1e-4, "p={p} fd={fd} d={d}");
        }
    }

    #[test]
    fn interval_probability_in_upper_tail() {
        let v = std_normal_interval(9.0, 9.5);
        let expected = std_normal_sf(9.0) - std_normal_sf(9.5);
        assert!(v > 0.0);
        assert_eq!(v, expected);
    }
}
