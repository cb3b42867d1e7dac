//! Special functions behind the error-probability formulas.
//!
//! Everything here is pure and re-entrant.

pub(crate) mod bessel;
mod marcum;

pub use bessel::{bessel_i0, bessel_i0_scaled, scaled_bessel_sequence, ScaledBessel, I0_OVERFLOW};
pub use marcum::{marcum_q1, marcum_q1_scaled, MARCUM_ASYMPTOTIC_AB, MARCUM_ASYMPTOTIC_ORDER};

use std::f64::consts::PI;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `exp(x^2) erfc(x)` for `x >= 0`.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 26.0 {
        return libm::erfc(x) * (x * x).exp();
    }
    // asymptotic series, terms (2k-1)!! / (2x^2)^k
    let y = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..12 {
        term *= -((2 * k - 1) as f64) * y;
        sum += term;
    }
    sum / (x * PI.sqrt())
}
