use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest argument accepted by the unscaled [`bessel_i0`].
pub const I0_OVERFLOW: f64 = 700.0;

/// Power series below, Hankel expansion above.
const HANKEL_FROM: f64 = 15.0;

/// `e^{-x} I0(x)` at a given `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBessel {
    pub x: f64,
    pub value: f64,
}

impl ScaledBessel {
    pub fn new(x: f64) -> Result<Self> {
        check_arg(x)?;
        Ok(Self {
            x,
            value: i0_scaled(x),
        })
    }
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x > I0_OVERFLOW {
        return Err(Error::Overflow(x));
    }
    if x <= HANKEL_FROM {
        Ok(i0_series(x))
    } else {
        Ok(hankel_scaled(x) * x.exp())
    }
}

/// `e^{-x} I0(x)`; no upper limit on `x`.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(i0_scaled(x))
}

pub(crate) fn i0_scaled(x: f64) -> f64 {
    if x <= HANKEL_FROM {
        i0_series(x) * (-x).exp()
    } else {
        hankel_scaled(x)
    }
}

fn i0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0_f64;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

fn hankel_scaled(x: f64) -> f64 {
    // sum_k ((2k-1)!!)^2 / (k! (8x)^k), stopped at the smallest term
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0_f64;
    loop {
        let next = term * (2.0 * k - 1.0).powi(2) / (k * 8.0 * x);
        if next >= term || next < sum * 1e-17 {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    sum / (2.0 * PI * x).sqrt()
}

/// `e^{-x} I_k(x)` for `k = 0..=kmax`, via backward recurrence of the
/// ratios `I_k / I_{k-1}` normalized by `e^{-x} I0(x)`.
pub fn scaled_bessel_sequence(x: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    out[0] = i0_scaled(x);
    if kmax == 0 || x == 0.0 {
        return out;
    }
    let start = kmax + 20 + (10.0 * x.sqrt()) as usize;
    let mut ratio = 0.0;
    let mut ratios = vec![0.0; kmax + 1];
    for k in (1..=start).rev() {
        ratio = x / (2.0 * k as f64 + x * ratio);
        if k <= kmax {
            ratios[k] = ratio;
        }
    }
    for k in 1..=kmax {
        out[k] = out[k - 1] * ratios[k];
    }
    out
}

fn check_arg(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "I0",
            detail: format!("x = {x} < 0"),
        })
    }
}
