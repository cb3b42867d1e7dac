//! Pairwise error probabilities, union bounds and SNR inversion.

mod asymptotic;
mod bounds;
mod curve;
mod pairwise;

pub use asymptotic::{a_coef, AsymptoticCoeffs};
pub use bounds::{
    solve_snr_at_target, spectral_efficiency, spectral_efficiency_nm, union_bound_bit,
    union_bound_symbol, welch_rankin_bound, BoundKind, UnionBound, SNR_BRACKET_DB,
};
pub use curve::{BerCurve, CurveKind};
pub use pairwise::{
    pairwise_error, pairwise_error_asymptotic, pairwise_error_exact, pairwise_error_simple,
    PairwiseMethod, GAMMA_ZERO, T_SWITCH,
};

use crate::error::{Error, Result};

/// `10 log10(x)`.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Operating point: symbol SNR per SDOF `γ_s`, bit SNR `γ_b = γ_s / k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    pub gamma_s: f64,
    pub gamma_b: f64,
    pub k: f64,
}

impl SnrPoint {
    pub fn from_symbol(gamma_s: f64, k: f64) -> Result<Self> {
        check_k(k)?;
        if !(gamma_s > 0.0) || !gamma_s.is_finite() {
            return Err(Error::InvalidParameter(format!("symbol SNR {gamma_s} must be > 0")));
        }
        Ok(Self {
            gamma_s,
            gamma_b: gamma_s / k,
            k,
        })
    }

    pub fn from_bit(gamma_b: f64, k: f64) -> Result<Self> {
        check_k(k)?;
        Self::from_symbol(gamma_b * k, k)
    }

    pub fn from_symbol_db(db: f64, k: f64) -> Result<Self> {
        Self::from_symbol(from_db(db), k)
    }

    pub fn from_bit_db(db: f64, k: f64) -> Result<Self> {
        Self::from_bit(from_db(db), k)
    }

    /// Noise variance per real quadrature, `σ^2 = 1 / (2 γ_s)`.
    pub fn sigma2(&self) -> f64 {
        1.0 / (2.0 * self.gamma_s)
    }

    pub fn symbol_db(&self) -> f64 {
        to_db(self.gamma_s)
    }

    pub fn bit_db(&self) -> f64 {
        to_db(self.gamma_b)
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("bits per symbol {k} must be > 0")))
    }
}
