//! Bit-to-symbol labeling by simulated annealing.
//!
//! The objective is the bit union bound
//! `ξ = (1/(kM)) Σ_m Σ_{m'≠m} P_bin(γ_{mm'}) h(b_m, b_{m'})`,
//! evaluated against a pairwise error matrix computed once per SNR.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constellation::{is_power_of_two, validate_labels, Constellation};
use crate::error::{Error, Result};
use crate::errprob::{pairwise_error, PairwiseMethod, SnrPoint};
use crate::jones::PairGeometry;
use crate::par::{map_indexed, tree_sum, Parallelism};

/// Floor substituted for a zero initial temperature.
pub const MIN_T0: f64 = 1e-12;

pub fn hamming(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}

/// A permutation of `0..M` assigning a `k`-bit label to every symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMapping {
    labels: Vec<u32>,
}

impl BitMapping {
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        validate_labels(&labels, labels.len())?;
        Ok(Self { labels })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new((0..m as u32).collect())
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Self> {
        let mut labels: Vec<u32> = (0..m as u32).collect();
        labels.shuffle(rng);
        Self::new(labels)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<u32> {
        self.labels
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> u32 {
        self.labels.len().trailing_zeros()
    }

    /// XOR every label with `mask`.
    pub fn xor(&self, mask: u32) -> Self {
        Self {
            labels: self.labels.iter().map(|b| b ^ mask).collect(),
        }
    }

    /// Representative with symbol 0 labelled 0 (Hamming distances unchanged).
    pub fn canonical(&self) -> Self {
        self.xor(self.labels[0])
    }
}

/// Symmetric `M x M` matrix of pairwise error probabilities, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PairErrorMatrix {
    m: usize,
    values: Vec<f64>,
}

impl PairErrorMatrix {
    pub fn new(c: &Constellation, snr: &SnrPoint, policy: Parallelism) -> Self {
        let m = c.m();
        let mut values = vec![0.0; m * m];
        let pairs = c.pair_gammas(policy);
        let p = map_indexed(pairs.len(), policy, |k| {
            pairwise_error(&PairGeometry::from_gamma(pairs[k].2), snr, PairwiseMethod::Auto)
        });
        for (&(i, j, _), v) in pairs.iter().zip(p) {
            values[i * m + j] = v;
            values[j * m + i] = v;
        }
        Self { m, values }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    /// `ξ` for the given labels.
    pub fn xi(&self, labels: &[u32]) -> f64 {
        let m = self.m;
        let rows: Vec<f64> = (0..m)
            .map(|i| {
                let row = &self.values[i * m..(i + 1) * m];
                tree_sum(
                    &row.iter()
                        .zip(labels)
                        .map(|(p, &b)| p * hamming(labels[i], b) as f64)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let k = (m as f64).log2();
        tree_sum(&rows) / (k * m as f64)
    }

    /// Change in `ξ` from swapping the labels of symbols `u` and `v`.
    pub fn swap_delta(&self, labels: &[u32], u: usize, v: usize) -> f64 {
        let m = self.m;
        let (bu, bv) = (labels[u], labels[v]);
        let ru = &self.values[u * m..(u + 1) * m];
        let rv = &self.values[v * m..(v + 1) * m];
        let mut acc = 0.0;
        for w in 0..m {
            if w == u || w == v {
                continue;
            }
            let bw = labels[w];
            acc += (ru[w] - rv[w]) * (hamming(bv, bw) as f64 - hamming(bu, bw) as f64);
        }
        2.0 * acc / ((m as f64).log2() * m as f64)
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 || !is_power_of_two(m) {
        return Err(Error::InvalidLabels(format!("M = {m} is not a power of two >= 2")));
    }
    Ok(())
}

pub fn xi_objective(c: &Constellation, labels: &BitMapping, snr: &SnrPoint) -> Result<f64> {
    check_m(c.m())?;
    if labels.m() != c.m() {
        return Err(Error::DimensionMismatch {
            expected: c.m(),
            got: labels.m(),
        });
    }
    Ok(PairErrorMatrix::new(c, snr, Parallelism::default()).xi(labels.labels()))
}

/// Exponential cooling `T_n = α^n T_0` down to `min_temp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub t0: f64,
    pub alpha: f64,
    pub iters_per_temp: usize,
    pub min_temp: f64,
    pub seed: u64,
}

impl AnnealSchedule {
    /// `α = 0.995`, `M^2` moves per temperature, `T_min = 1e-6 T_0`.
    pub fn with_defaults(m: usize, t0: f64, seed: u64) -> Self {
        let t0 = t0.max(MIN_T0);
        Self {
            t0,
            alpha: 0.995,
            iters_per_temp: m * m,
            min_temp: t0 * 1e-6,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t0 > 0.0 && self.min_temp > 0.0 && self.min_temp <= self.t0) {
            return Err(Error::InvalidParameter("need 0 < minTemp <= t0".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.iters_per_temp == 0 {
            return Err(Error::InvalidParameter("itersPerTemp must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of temperature levels.
    pub fn levels(&self) -> usize {
        ((self.min_temp / self.t0).ln() / self.alpha.ln()).floor() as usize + 1
    }
}

/// Sample standard deviation of `ξ` over uniformly random mappings.
pub fn initial_temperature(c: &Constellation, snr: &SnrPoint, samples: usize, seed: u64) -> Result<f64> {
    check_m(c.m())?;
    if samples < 30 {
        return Err(Error::InvalidParameter("initial temperature needs >= 30 samples".into()));
    }
    let pm = PairErrorMatrix::new(c, snr, Parallelism::default());
    Ok(temperature_from_matrix(&pm, samples, seed))
}

fn temperature_from_matrix(pm: &PairErrorMatrix, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..samples)
        .map(|_| {
            let b = BitMapping::random(pm.m(), &mut rng).expect("permutation");
            pm.xi(b.labels())
        })
        .collect();
    let mean = xs.iter().sum::<f64>() / samples as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
    var.sqrt()
}

/// One row per temperature level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealLevel {
    pub temperature: f64,
    pub current_xi: f64,
    pub best_xi: f64,
    pub accepted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealResult {
    pub mapping: BitMapping,
    pub xi: f64,
    pub start_xi: f64,
    pub seed: u64,
    pub trace: Vec<AnnealLevel>,
}

/// Simulated annealing over pairwise label swaps; returns the best mapping
/// visited.
pub fn anneal_mapping(
    c: &Constellation,
    snr: &SnrPoint,
    sched: &AnnealSchedule,
    start: Option<&BitMapping>,
) -> Result<AnnealResult> {
    check_m(c.m())?;
    sched.validate()?;
    let pm = PairErrorMatrix::new(c, snr, Parallelism::default());
    anneal_with_matrix(&pm, sched, start)
}

pub fn anneal_with_matrix(
    pm: &PairErrorMatrix,
    sched: &AnnealSchedule,
    start: Option<&BitMapping>,
) -> Result<AnnealResult> {
    let m = pm.m();
    check_m(m)?;
    sched.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(sched.seed);
    let mut labels = match start {
        Some(b) if b.m() != m => {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: b.m(),
            })
        }
        Some(b) => b.labels().to_vec(),
        None => BitMapping::random(m, &mut rng)?.into_labels(),
    };
    let start_labels = labels.clone();
    let start_xi = pm.xi(&labels);
    let mut current = start_xi;
    let mut best = (start_xi, labels.clone());
    let mut trace = Vec::with_capacity(sched.levels());
    let mut t = sched.t0;
    while t >= sched.min_temp {
        let mut accepted = 0;
        for _ in 0..sched.iters_per_temp {
            let u = rng.random_range(0..m);
            let mut v = rng.random_range(0..m - 1);
            if v >= u {
                v += 1;
            }
            let delta = pm.swap_delta(&labels, u, v);
            if delta <= 0.0 || rng.random::<f64>() < (-delta / t).exp() {
                labels.swap(u, v);
                current += delta;
                accepted += 1;
                if current < best.0 {
                    best = (current, labels.clone());
                }
            }
        }
        // resynchronize the running value
        current = pm.xi(&labels);
        if current < best.0 {
            best = (current, labels.clone());
        }
        trace.push(AnnealLevel {
            temperature: t,
            current_xi: current,
            best_xi: best.0,
            accepted,
        });
        t *= sched.alpha;
    }
    let mut best_labels = best.1;
    let mut xi = pm.xi(&best_labels);
    if xi > start_xi {
        best_labels = start_labels;
        xi = start_xi;
    }
    Ok(AnnealResult {
        xi,
        mapping: BitMapping::new(best_labels)?,
        start_xi,
        seed: sched.seed,
        trace,
    })
}

/// Independent anneals with seeds `sched.seed + r`; the lowest `ξ` wins,
/// ties going to the lowest seed.
pub fn anneal_restarts(
    c: &Constellation,
    snr: &SnrPoint,
    sched: &AnnealSchedule,
    start: Option<&BitMapping>,
    restarts: usize,
    policy: Parallelism,
) -> Result<AnnealResult> {
    check_m(c.m())?;
    sched.validate()?;
    let pm = PairErrorMatrix::new(c, snr, policy);
    let runs = map_indexed(restarts.max(1), policy, |r| {
        let s = AnnealSchedule {
            seed: sched.seed.wrapping_add(r as u64),
            ..*sched
        };
        anneal_with_matrix(&pm, &s, start)
    });
    let mut best: Option<AnnealResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.xi < b.xi) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Reflected binary Gray code assigned in ring order: symbol `i` gets
/// `i ^ (i >> 1)`.
pub fn gray_code_ring(m: usize) -> Result<BitMapping> {
    check_m(m)?;
    BitMapping::new((0..m as u32).map(|i| i ^ (i >> 1)).collect())
}
