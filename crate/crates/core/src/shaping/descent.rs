use num_complex::Complex64;

use super::potential::{energy_of, gradient_of, gradient_norm, project, Potential};
use crate::constellation::{fmt_f64, Constellation};
use crate::error::{Error, Result};
use crate::jones::{l2_norm, JonesVector};
use crate::par::Parallelism;

/// Smallest step before the descent is declared divergent.
pub const MIN_STEP: f64 = 1e-15;
const STEP_GROWTH: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig {
    pub max_iters: usize,
    /// Length of the first move, measured as the Frobenius norm of the update.
    pub initial_step: f64,
    pub step_shrink: f64,
    pub grad_tolerance: f64,
    pub seed: u64,
    pub policy: Parallelism,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            max_iters: 20_000,
            initial_step: 0.05,
            step_shrink: 0.5,
            grad_tolerance: 1e-6,
            seed: 0,
            policy: Parallelism::default(),
        }
    }
}

impl DescentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "step shrink {} outside (0, 1)",
                self.step_shrink
            )));
        }
        if !(self.grad_tolerance > 0.0) || !(self.initial_step > 0.0) {
            return Err(Error::InvalidParameter(
                "gradient tolerance and initial step must be > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub grad_norm: f64,
    pub step: f64,
}

/// Accepted descent steps only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DescentTrace {
    pub iterations: Vec<TraceRow>,
    pub converged: bool,
    /// Stopped because no step could lower the energy by more than its
    /// rounding error.
    pub stalled: bool,
    pub initial_energy: f64,
    pub final_grad_norm: f64,
}

impl DescentTrace {
    pub fn final_energy(&self) -> f64 {
        self.iterations.last().map_or(self.initial_energy, |r| r.energy)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,energy,grad_norm,step\n");
        for r in &self.iterations {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.iter,
                fmt_f64(r.energy),
                fmt_f64(r.grad_norm),
                fmt_f64(r.step)
            ));
        }
        out
    }
}

/// Projected gradient descent with per-vector renormalization and a
/// halve-on-failure, grow-on-success step rule.
pub fn optimize(c0: &Constellation, p: &Potential, cfg: &DescentConfig) -> Result<(Constellation, DescentTrace)> {
    cfg.validate()?;
    let mut v: Vec<Vec<Complex64>> = c0.vectors().iter().map(|s| s.entries().to_vec()).collect();
    let mut energy = energy_of(&v, p, cfg.policy)?;
    let mut grad = projected(&v, p, cfg.policy)?;
    let mut gnorm = gradient_norm(&grad);
    let mut trace = DescentTrace {
        initial_energy: energy,
        ..Default::default()
    };
    if gnorm <= cfg.grad_tolerance {
        trace.converged = true;
        trace.final_grad_norm = gnorm;
        return Ok((c0.clone(), trace));
    }
    let mut step = cfg.initial_step / gnorm;
    'outer: for iter in 1..=cfg.max_iters {
        let first_try = step;
        loop {
            let candidate = retract(&v, &grad, step);
            match energy_of(&candidate, p, cfg.policy) {
                Ok(e) if e < energy => {
                    v = candidate;
                    energy = e;
                    break;
                }
                Ok(_) | Err(Error::CoincidentPoints(..)) => {
                    step *= cfg.step_shrink;
                    if step < MIN_STEP {
                        if below_resolution(energy, gnorm, first_try) {
                            trace.stalled = true;
                            break 'outer;
                        }
                        return Err(Error::Divergence(iter));
                    }
                }
                Err(e) => return Err(e),
            }
        }
        grad = projected(&v, p, cfg.policy)?;
        gnorm = gradient_norm(&grad);
        trace.iterations.push(TraceRow {
            iter,
            energy,
            grad_norm: gnorm,
            step,
        });
        step *= STEP_GROWTH;
        if gnorm <= cfg.grad_tolerance {
            trace.converged = true;
            break;
        }
    }
    trace.final_grad_norm = gnorm;
    let mut out = c0.clone();
    out.replace_vectors(
        v.into_iter()
            .map(JonesVector::normalized)
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok((out, trace))
}

/// True when even the largest step tried would lower the energy by less
/// than a few hundred ulps of it.
fn below_resolution(energy: f64, gnorm: f64, step: f64) -> bool {
    step * gnorm * gnorm < 256.0 * f64::EPSILON * energy.abs()
}

fn projected(v: &[Vec<Complex64>], p: &Potential, policy: Parallelism) -> Result<Vec<Vec<Complex64>>> {
    let mut g = gradient_of(v, p, policy)?;
    project(v, &mut g);
    Ok(g)
}

fn retract(v: &[Vec<Complex64>], g: &[Vec<Complex64>], step: f64) -> Vec<Vec<Complex64>> {
    v.iter()
        .zip(g)
        .map(|(s, gi)| {
            let mut t: Vec<Complex64> = s.iter().zip(gi).map(|(a, b)| a - b * step).collect();
            let norm = l2_norm(&t);
            t.iter_mut().for_each(|z| *z /= norm);
            t
        })
        .collect()
}
