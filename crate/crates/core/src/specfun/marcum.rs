//! First-order Marcum Q function.
//!
//! Moderate arguments use the Bessel series
//! `Q1(a,b) = e^{-(a^2+b^2)/2} sum_k (a/b)^k I_k(ab)` for `a < b` and the
//! complementary series for `a > b`, with every `I_k` carried in scaled form
//! so nothing overflows. For `ab` above [`MARCUM_ASYMPTOTIC_AB`] the uniform
//! erfc-based expansion from [`AsymptoticCoeffs`] takes over.

use super::bessel::{i0_scaled, scaled_bessel_sequence};
use super::erfcx;
use crate::error::{Error, Result};
use crate::errprob::AsymptoticCoeffs;

/// Product `ab` above which the uniform asymptotic expansion is used.
pub const MARCUM_ASYMPTOTIC_AB: f64 = 400.0;
/// Expansion order used in the asymptotic branch.
pub const MARCUM_ASYMPTOTIC_ORDER: usize = 8;

pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    check(a, b)?;
    if b == 0.0 {
        return Ok(1.0);
    }
    if a == 0.0 {
        return Ok((-b * b / 2.0).exp());
    }
    if a < b {
        let gap = b - a;
        Ok((small_side_scaled(a, b) * (-gap * gap / 2.0).exp()).clamp(0.0, 1.0))
    } else {
        Ok(large_side(a, b).clamp(0.0, 1.0))
    }
}

/// `Q1(a, b) exp((b - a)^2 / 2)`.
///
/// For `a < b` this strips the dominant Gaussian decay, so it stays O(1)
/// where `Q1` itself underflows.
pub fn marcum_q1_scaled(a: f64, b: f64) -> Result<f64> {
    check(a, b)?;
    if a < b {
        if a == 0.0 {
            return Ok(1.0);
        }
        Ok(small_side_scaled(a, b))
    } else {
        let gap = a - b;
        Ok(marcum_q1(a, b)? * (gap * gap / 2.0).exp())
    }
}

/// Scaled `Q1` for `0 < a < b`.
fn small_side_scaled(a: f64, b: f64) -> f64 {
    let x = a * b;
    if x > MARCUM_ASYMPTOTIC_AB {
        return asymptotic_scaled(a, b);
    }
    let q = a / b;
    let kmax = truncation(x, q);
    let seq = scaled_bessel_sequence(x, kmax);
    let mut sum = 0.0;
    let mut qk = 1.0;
    for v in seq {
        sum += qk * v;
        qk *= q;
    }
    sum
}

/// `Q1(a, b)` for `a >= b > 0`.
fn large_side(a: f64, b: f64) -> f64 {
    let x = a * b;
    let gap = a - b;
    if a == b {
        return 0.5 * (1.0 + i0_scaled(x));
    }
    if x > MARCUM_ASYMPTOTIC_AB {
        // Q1(a,b) + Q1(b,a) = 1 + e^{-(a^2+b^2)/2} I0(ab)
        let decay = (-gap * gap / 2.0).exp();
        return 1.0 + decay * (i0_scaled(x) - asymptotic_scaled(b, a));
    }
    let q = b / a;
    let kmax = truncation(x, q);
    let seq = scaled_bessel_sequence(x, kmax);
    let mut sum = 0.0;
    let mut qk = 1.0;
    for v in seq.into_iter().skip(1) {
        qk *= q;
        sum += qk * v;
    }
    1.0 - (-gap * gap / 2.0).exp() * sum
}

/// Uniform expansion, scaled by `exp((b - a)^2 / 2)`, for `a < b`.
fn asymptotic_scaled(a: f64, b: f64) -> f64 {
    let gamma_s = a * a + b * b;
    let gap = b - a;
    let gamma = 2.0 * a * b / gamma_s;
    let one_minus_gamma = gap * gap / gamma_s;
    let coeffs =
        AsymptoticCoeffs::from_parts(gamma, one_minus_gamma, gamma_s, MARCUM_ASYMPTOTIC_ORDER);
    let x = gap * gap / 2.0;
    coeffs.e_sum() + coeffs.f_sum() * erfcx(x.sqrt())
}

/// Number of series terms so that `q^k e^{-k^2/(2x)}` falls below ~1e-18.
fn truncation(x: f64, q: f64) -> usize {
    let l = -q.ln();
    let target = 42.0;
    let k = x * (-l + (l * l + 2.0 * target / x).sqrt());
    (k.ceil() as usize) + 8
}

fn check(a: f64, b: f64) -> Result<()> {
    if a >= 0.0 && b >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Marcum Q1",
            detail: format!("a = {a}, b = {b}"),
        })
    }
}
