//! Monte-Carlo simulation of the ASE-limited channel `r = e^{iθ} s + n`
//! with maximum-likelihood detection `argmax_m |<r|s_m>|`.
//!
//! Trials are split into fixed blocks of [`BLOCK_TRIALS`]. Block `b` draws
//! from its own ChaCha8 stream (`seed`, stream `b`) and block counts are
//! summed in block order, so results do not depend on the worker count.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::constellation::{fmt_f64, Constellation};
use crate::error::{Error, Result};
use crate::errprob::SnrPoint;
use crate::jones::{inner, JonesVector, PairGeometry};
use crate::par::{map_indexed, Parallelism};

pub const BLOCK_TRIALS: u64 = 65_536;
/// Early stop needs at least this many errors...
pub const EARLY_STOP_ERRORS: u64 = 100;
/// ...and at least this many trials.
pub const EARLY_STOP_TRIALS: u64 = 1_000_000;
const BLOCKS_PER_BATCH: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub snr: SnrPoint,
    pub apply_random_phase: bool,
    pub seed: u64,
    pub trials: u64,
    /// Count bit errors (requires labels).
    pub count_bits: bool,
    /// Stop once enough errors have been seen (checked between batches).
    pub early_stop: bool,
    pub policy: Parallelism,
}

impl ChannelConfig {
    pub fn new(snr: SnrPoint, trials: u64, seed: u64) -> Self {
        Self {
            snr,
            apply_random_phase: false,
            seed,
            trials,
            count_bits: false,
            early_stop: false,
            policy: Parallelism::default(),
        }
    }

    /// Noise standard deviation per real quadrature.
    pub fn sigma(&self) -> f64 {
        self.snr.sigma2().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub symbol_errors: u64,
    pub bit_errors: Option<u64>,
    pub ser: f64,
    pub ber: Option<f64>,
    pub ser_stderr: f64,
    pub ber_stderr: Option<f64>,
    pub seed: u64,
}

impl SimResult {
    fn from_counts(trials: u64, symbol_errors: u64, bit_errors: Option<u64>, k: f64, seed: u64) -> Self {
        let (ser, ser_stderr) = binomial(symbol_errors as f64, trials as f64);
        let bits = bit_errors.map(|b| binomial(b as f64, k * trials as f64));
        Self {
            trials,
            symbol_errors,
            bit_errors,
            ser,
            ber: bits.map(|b| b.0),
            ser_stderr,
            ber_stderr: bits.map(|b| b.1),
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        let opt_int = |v: Option<u64>| v.map_or("null".to_string(), |x| x.to_string());
        let opt_f = |v: Option<f64>| v.map_or("null".to_string(), fmt_f64);
        format!(
            "{{\"trials\": {}, \"symbol_errors\": {}, \"bit_errors\": {}, \"ser\": {}, \"ber\": {}, \"ser_stderr\": {}, \"ber_stderr\": {}, \"seed\": {}}}",
            self.trials,
            self.symbol_errors,
            opt_int(self.bit_errors),
            fmt_f64(self.ser),
            opt_f(self.ber),
            fmt_f64(self.ser_stderr),
            opt_f(self.ber_stderr),
            self.seed
        )
    }
}

/// `(p, sqrt(p(1-p)/n))` for `x` successes out of `n`.
fn binomial(x: f64, n: f64) -> (f64, f64) {
    let p = x / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sigma, im * sigma)
}

/// `N` i.i.d. complex Gaussians with variance `sigma^2` per quadrature.
pub fn noise_vector<R: Rng + ?Sized>(n: usize, sigma: f64, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| gaussian_pair(rng, sigma)).collect()
}

/// One channel use.
pub fn transmit<R: Rng + ?Sized>(s: &JonesVector, cfg: &ChannelConfig, rng: &mut R) -> Vec<Complex64> {
    transmit_with_sigma(s, cfg.sigma(), cfg.apply_random_phase, rng)
}

pub fn transmit_with_sigma<R: Rng + ?Sized>(
    s: &JonesVector,
    sigma: f64,
    random_phase: bool,
    rng: &mut R,
) -> Vec<Complex64> {
    let phase = if random_phase {
        Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
    } else {
        Complex64::new(1.0, 0.0)
    };
    s.entries()
        .iter()
        .map(|z| phase * z + gaussian_pair(rng, sigma))
        .collect()
}

/// `argmax_m |<r|s_m>|`, lowest index on ties.
pub fn detect_ml(r: &[Complex64], c: &Constellation) -> Result<usize> {
    if r.len() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: c.n(),
            got: r.len(),
        });
    }
    Ok(detect_unchecked(r, c.vectors()))
}

fn detect_unchecked(r: &[Complex64], vectors: &[JonesVector]) -> usize {
    let mut best = 0;
    let mut best_metric = f64::NEG_INFINITY;
    for (m, s) in vectors.iter().enumerate() {
        let metric = inner(r, s.entries()).norm_sqr();
        if metric > best_metric {
            best = m;
            best_metric = metric;
        }
    }
    best
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn block_len(total: u64, block: u64) -> u64 {
    (total - block * BLOCK_TRIALS).min(BLOCK_TRIALS)
}

/// Uniform random symbols through the channel, ML decisions, error counts.
pub fn simulate(c: &Constellation, cfg: &ChannelConfig) -> Result<SimResult> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let labels = match (cfg.count_bits, c.bits()) {
        (true, None) => return Err(Error::MissingLabels),
        (true, Some(b)) => Some(b),
        (false, _) => None,
    };
    let sigma = cfg.sigma();
    let m = c.m();
    let run_block = |block: u64| -> (u64, u64, u64) {
        let mut rng = block_rng(cfg.seed, block);
        let len = block_len(cfg.trials, block);
        let mut sym = 0;
        let mut bits = 0;
        for _ in 0..len {
            let sent = rng.random_range(0..m);
            let r = transmit_with_sigma(&c.vectors()[sent], sigma, cfg.apply_random_phase, &mut rng);
            let got = detect_unchecked(&r, c.vectors());
            if got != sent {
                sym += 1;
                if let Some(l) = labels {
                    bits += (l[sent] ^ l[got]).count_ones() as u64;
                }
            }
        }
        (len, sym, bits)
    };
    let blocks = cfg.trials.div_ceil(BLOCK_TRIALS);
    let (mut trials, mut sym, mut bits) = (0u64, 0u64, 0u64);
    let mut next = 0u64;
    while next < blocks {
        let batch = if cfg.early_stop {
            BLOCKS_PER_BATCH.min(blocks - next)
        } else {
            blocks - next
        };
        let counts = map_indexed(batch as usize, cfg.policy, |i| run_block(next + i as u64));
        for (t, s, b) in counts {
            trials += t;
            sym += s;
            bits += b;
        }
        next += batch;
        let errors = if labels.is_some() { bits } else { sym };
        if cfg.early_stop && errors >= EARLY_STOP_ERRORS && trials >= EARLY_STOP_TRIALS {
            break;
        }
    }
    Ok(SimResult::from_counts(
        trials,
        sym,
        labels.map(|_| bits),
        c.bits_per_symbol(),
        cfg.seed,
    ))
}

/// `(|s><s|, |s><n| + |n><s|, |n><n|)`; the three terms sum to `|r><r|`
/// for `r = s + n`.
pub fn received_dyad_decomposition(
    s: &JonesVector,
    noise: &[Complex64],
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>)> {
    let n = s.dim();
    if noise.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: noise.len(),
        });
    }
    let sv = s.entries();
    let outer = |a: &[Complex64], b: &[Complex64]| DMatrix::from_fn(n, n, |i, j| a[i] * b[j].conj());
    let signal = outer(sv, sv);
    let cross = outer(sv, noise);
    let beating = &cross + cross.adjoint();
    Ok((signal, beating, outer(noise, noise)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiceEstimate {
    pub probability: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Monte-Carlo estimate of `P(ψ- >= ψ+)` with
/// `ψ- = |ρ- + x+ + i y+|`, `ψ+ = |ρ+ + x- + i y-|` and four i.i.d.
/// Gaussians of variance `σ^2 = 1/(2γ_s)`.
pub fn pairwise_error_rice_oracle(
    geom: &PairGeometry,
    snr: &SnrPoint,
    trials: u64,
    seed: u64,
    policy: Parallelism,
) -> Result<RiceEstimate> {
    if trials < 10_000 {
        return Err(Error::InvalidParameter("Rice oracle needs >= 1e4 trials".into()));
    }
    let sigma = snr.sigma2().sqrt();
    let (rm, rp) = (geom.rho_minus, geom.rho_plus);
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let counts = map_indexed(blocks as usize, policy, |b| {
        let mut rng = block_rng(seed, b as u64);
        let mut hits = 0u64;
        for _ in 0..block_len(trials, b as u64) {
            let a = gaussian_pair(&mut rng, sigma);
            let c = gaussian_pair(&mut rng, sigma);
            let psi_minus = (a.re + rm).powi(2) + a.im * a.im;
            let psi_plus = (c.re + rp).powi(2) + c.im * c.im;
            if psi_minus >= psi_plus {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = counts.into_iter().sum();
    let (p, se) = binomial(hits as f64, trials as f64);
    Ok(RiceEstimate {
        probability: p,
        stderr: se,
        trials,
    })
}
