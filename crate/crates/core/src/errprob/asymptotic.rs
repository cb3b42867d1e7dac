//! Large-SNR expansion coefficients for the pairwise error probability.
//!
//! The Marcum term is approximated as `e''_n e^{-x} + f''_n erfc(sqrt x)` and
//! the Bessel term as `g_n e^{-x}`, with `x = γ_s (1 - γ) / 2`. The
//! sequences are built by recursion so any order `n` is available:
//!
//! ```text
//! e_0 = 0,                        e_n = ((1-γ)/γ e_{n-1} - (γγ_s/2)^{1/2-n}) / (1/2 - n)
//! f_0 = sqrt(π) sqrt(γ/(1-γ)),    f_n = (1-γ)/γ f_{n-1} / (1/2 - n)
//! A_{n,m} = prod_{i=-n}^{n-1} (m + i + 1/2) / (n! 2^n)
//! λ_n = (-1)^n / (2 sqrt(2π)) (ρ+/ρ- A_{n,0} - A_{n,1})
//! e''_n = sum_{i<=n} λ_i e_i,     f''_n = sum_{i<=n} λ_i f_i
//! g_n = π^{-1/2} sum_{j<=n} ((2j-1)!!)^2 / (4^j j!) (γγ_s)^{-j-1/2}
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{erfc, erfcx};

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoeffs {
    pub order: usize,
    pub gamma: f64,
    pub gamma_s: f64,
    pub e_terms: Vec<f64>,
    pub f_terms: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// `[A_{n,0}, A_{n,1}]` per order.
    pub a_coeffs: Vec<[f64; 2]>,
    /// Truncated Hankel sums `g_0..=g_n`.
    pub g_terms: Vec<f64>,
    one_minus_gamma: f64,
}

impl AsymptoticCoeffs {
    pub fn new(gamma: f64, gamma_s: f64, order: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Domain {
                what: "asymptotic expansion",
                detail: format!("gamma = {gamma} not in (0, 1)"),
            });
        }
        if !(gamma_s > 0.0) {
            return Err(Error::Domain {
                what: "asymptotic expansion",
                detail: format!("gamma_s = {gamma_s}"),
            });
        }
        Ok(Self::from_parts(gamma, 1.0 - gamma, gamma_s, order))
    }

    /// Same as [`new`](Self::new) but with `1 - γ` supplied separately, for
    /// callers that know it more accurately than `1.0 - gamma`.
    pub(crate) fn from_parts(gamma: f64, one_minus_gamma: f64, gamma_s: f64, order: usize) -> Self {
        let delta = (one_minus_gamma * (1.0 + gamma)).sqrt();
        // ρ+/ρ- - 1 = sqrt(2) sqrt((1-γ)/(1-δ)), with 1-δ = γ^2/(1+δ)
        let ratio_minus_one = 2f64.sqrt() * one_minus_gamma.sqrt() * (1.0 + delta).sqrt() / gamma;
        let r = one_minus_gamma / gamma;
        let half_gg = gamma * gamma_s / 2.0;

        let mut e_terms = Vec::with_capacity(order + 1);
        let mut f_terms = Vec::with_capacity(order + 1);
        let mut lambdas = Vec::with_capacity(order + 1);
        let mut a_coeffs = Vec::with_capacity(order + 1);
        let mut g_terms = Vec::with_capacity(order + 1);

        e_terms.push(0.0);
        f_terms.push(PI.sqrt() * (gamma / one_minus_gamma).sqrt());
        for n in 1..=order {
            let k = 0.5 - n as f64;
            let e = (r * e_terms[n - 1] - half_gg.powf(k)) / k;
            let f = r * f_terms[n - 1] / k;
            e_terms.push(e);
            f_terms.push(f);
        }

        let gg = gamma * gamma_s;
        let mut c = 1.0;
        let mut g = 0.0;
        for n in 0..=order {
            let a0 = a_coef(n, 0);
            let a1 = a_coef(n, 1);
            a_coeffs.push([a0, a1]);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            // ρ+/ρ- A0 - A1 written so the n = 0 term has no cancellation
            lambdas.push(sign / (2.0 * (2.0 * PI).sqrt()) * (ratio_minus_one * a0 + (a0 - a1)));
            if n > 0 {
                let nf = n as f64;
                c *= (2.0 * nf - 1.0).powi(2) / (4.0 * nf);
            }
            g += c * gg.powf(-(n as f64) - 0.5);
            g_terms.push(g / PI.sqrt());
        }

        Self {
            order,
            gamma,
            gamma_s,
            e_terms,
            f_terms,
            lambdas,
            a_coeffs,
            g_terms,
            one_minus_gamma,
        }
    }

    /// `e'_n = λ_n e_n`.
    pub fn e_prime(&self, n: usize) -> f64 {
        self.lambdas[n] * self.e_terms[n]
    }

    /// `f'_n = λ_n f_n`.
    pub fn f_prime(&self, n: usize) -> f64 {
        self.lambdas[n] * self.f_terms[n]
    }

    /// `e''_n`, cumulative to order `n`.
    pub fn e_cumulative(&self, n: usize) -> f64 {
        (0..=n).map(|i| self.e_prime(i)).sum()
    }

    /// `f''_n`, cumulative to order `n`.
    pub fn f_cumulative(&self, n: usize) -> f64 {
        (0..=n).map(|i| self.f_prime(i)).sum()
    }

    pub(crate) fn e_sum(&self) -> f64 {
        self.e_cumulative(self.order)
    }

    pub(crate) fn f_sum(&self) -> f64 {
        self.f_cumulative(self.order)
    }

    /// Exponent `x = γ_s (1 - γ) / 2`.
    pub fn exponent(&self) -> f64 {
        self.gamma_s * self.one_minus_gamma / 2.0
    }

    /// Pairwise error probability at this order:
    /// `f''_n erfc(sqrt x) + (e''_n - g_n / 2) e^{-x}`.
    pub fn pairwise(&self) -> f64 {
        let x = self.exponent();
        let n = self.order;
        self.f_cumulative(n) * erfc(x.sqrt()) + (self.e_cumulative(n) - 0.5 * self.g_terms[n]) * (-x).exp()
    }

    /// [`pairwise`](Self::pairwise) multiplied by `e^{x}`.
    pub fn pairwise_scaled(&self) -> f64 {
        let x = self.exponent();
        let n = self.order;
        self.f_cumulative(n) * erfcx(x.sqrt()) + self.e_cumulative(n) - 0.5 * self.g_terms[n]
    }
}

/// `A_{n,m} = Γ(1/2+m+n) / Γ(1/2+m-n) / (n! 2^n)` via its finite product.
pub fn a_coef(n: usize, m: usize) -> f64 {
    let n_i = n as i64;
    let mut p = 1.0;
    for i in -n_i..n_i {
        p *= m as f64 + i as f64 + 0.5;
    }
    let mut denom = 1.0;
    for j in 1..=n {
        denom *= 2.0 * j as f64;
    }
    p / denom
}
