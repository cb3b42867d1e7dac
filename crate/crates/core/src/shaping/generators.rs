use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lbfgs::{minimize, LbfgsOptions};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::jones::JonesVector;

/// Largest hypercube constellation produced.
pub const HYPERCUBE_MAX_M: usize = 4096;
/// Accepted SIC-POVM residual `max |γ^2 - 1/(N+1)|`.
pub const SIC_TOLERANCE: f64 = 1e-6;
pub const SIC_MAX_N: usize = 16;
const SIC_RESTARTS: usize = 50;

/// `[1, c_2, ..., c_n] / sqrt(n)` with `c_k ∈ {1, i, -1, -i}`, `M = 4^{n-1}`.
/// Index `m` encodes the phases as base-4 digits, last component fastest.
pub fn standard_hypercube(n: usize) -> Result<Constellation> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let m = 4usize
        .checked_pow(n as u32 - 1)
        .filter(|&m| m <= HYPERCUBE_MAX_M)
        .ok_or_else(|| Error::InvalidParameter(format!("hypercube for N={n} exceeds M={HYPERCUBE_MAX_M}")))?;
    const PHASES: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let scale = 1.0 / (n as f64).sqrt();
    let vectors = (0..m)
        .map(|idx| {
            let mut e = vec![Complex64::new(scale, 0.0); n];
            let mut rest = idx;
            for k in (1..n).rev() {
                e[k] = PHASES[rest % 4] * scale;
                rest /= 4;
            }
            JonesVector::normalized(e)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Constellation::new(vectors)?.with_meta("generator", "hypercube"))
}

/// First `m` standard basis vectors of `C^n`.
pub fn orthogonal_set(n: usize, m: usize) -> Result<Constellation> {
    if m > n {
        return Err(Error::InvalidParameter(format!("orthogonal set needs M <= N (got M={m}, N={n})")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("empty constellation".into()));
    }
    let vectors = (0..m).map(|k| JonesVector::basis(n, k)).collect::<Result<Vec<_>>>()?;
    Ok(Constellation::new(vectors)?.with_meta("generator", "orthogonal"))
}

/// `m` i.i.d. uniform points on the unit sphere of `C^n`.
pub fn random_constellation(n: usize, m: usize, seed: u64) -> Result<Constellation> {
    if m == 0 {
        return Err(Error::InvalidParameter("empty constellation".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = (0..m)
        .map(|_| JonesVector::random(n, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(Constellation::new(vectors)?
        .with_meta("generator", "random")
        .with_meta("seed", seed))
}

/// `N^2` equiangular unit vectors with `|<s_i|s_j>|^2 = 1/(N+1)`.
///
/// The vectors are the Weyl-Heisenberg orbit `X^p Z^q ψ` of a fiducial `ψ`
/// found by minimizing `Σ_{(p,q)≠0} (|<ψ|X^p Z^q ψ>|^2 - 1/(N+1))^2` from
/// seeded random starts.
pub fn sic_povm(n: usize, seed: u64) -> Result<Constellation> {
    if !(2..=SIC_MAX_N).contains(&n) {
        return Err(Error::InvalidParameter(format!("SIC-POVM supported for N in 2..={SIC_MAX_N}")));
    }
    let restarts = if n == 8 { 10 * SIC_RESTARTS } else { SIC_RESTARTS };
    let wh = WeylHeisenberg::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for _ in 0..restarts {
        let start = JonesVector::random(n, &mut rng)?;
        let x0: Vec<f64> = start.entries().iter().flat_map(|z| [z.re, z.im]).collect();
        let opts = LbfgsOptions {
            memory: 12,
            max_iters: 400,
            grad_tol: 1e-12,
            value_tol: 1e-26,
        };
        let r = minimize(x0, &opts, |x, g| wh.objective(x, g));
        let psi = to_complex(&r.x);
        let residual = wh.residual(&psi);
        if best.as_ref().is_none_or(|b| residual < b.0) {
            best = Some((residual, psi));
        }
        if residual <= SIC_TOLERANCE * 1e-3 {
            break;
        }
        let _ = r.value;
    }
    let (residual, psi) = best.expect("at least one restart");
    if residual > SIC_TOLERANCE {
        return Err(Error::NoConvergence { best_residual: residual });
    }
    let fid = JonesVector::normalized(psi)?;
    let mut vectors = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            vectors.push(JonesVector::normalized(wh.displace(p, q, fid.entries()))?);
        }
    }
    Ok(Constellation::new(vectors)?
        .with_meta("generator", "sic")
        .with_meta("seed", seed)
        .with_meta("residual", format!("{residual:.3e}")))
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

struct WeylHeisenberg {
    d: usize,
    omega: Vec<Complex64>,
    target: f64,
}

impl WeylHeisenberg {
    fn new(d: usize) -> Self {
        let omega = (0..d)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64))
            .collect();
        Self {
            d,
            omega,
            target: 1.0 / (d as f64 + 1.0),
        }
    }

    /// `(X^p Z^q ψ)_j = ω^{q(j-p)} ψ_{j-p}`.
    fn displace(&self, p: usize, q: usize, psi: &[Complex64]) -> Vec<Complex64> {
        let d = self.d;
        (0..d)
            .map(|j| {
                let src = (j + d - p) % d;
                self.omega[(q * src) % d] * psi[src]
            })
            .collect()
    }

    #[cfg(test)]
    /// `(X^p Z^q)^† ψ`: `(Z^{-q} X^{-p} ψ)_j = ω^{-qj} ψ_{j+p}`.
    fn displace_adjoint(&self, p: usize, q: usize, psi: &[Complex64]) -> Vec<Complex64> {
        let d = self.d;
        (0..d)
            .map(|j| self.omega[(q * j) % d].conj() * psi[(j + p) % d])
            .collect()
    }

    fn overlaps(&self, psi: &[Complex64]) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let psi = psi.to_vec();
        (0..self.d * self.d).skip(1).map(move |k| {
            let (p, q) = (k / self.d, k % self.d);
            let dpsi = self.displace(p, q, &psi);
            (p, q, crate::jones::inner(&psi, &dpsi))
        })
    }

    fn residual(&self, psi: &[Complex64]) -> f64 {
        let n2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        self.overlaps(psi)
            .map(|(_, _, a)| (a.norm_sqr() / (n2 * n2) - self.target).abs())
            .fold(0.0, f64::max)
    }

    /// Objective and gradient over the unnormalized real coordinates.
    fn objective(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let d = self.d;
        let psi = to_complex(x);
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let n2 = n * n;
        let mut g = vec![Complex64::new(0.0, 0.0); d];
        let mut dpsi = vec![Complex64::new(0.0, 0.0); d];
        let mut dapsi = vec![Complex64::new(0.0, 0.0); d];
        let mut value = 0.0;
        for k in 1..d * d {
            let (p, q) = (k / d, k % d);
            for j in 0..d {
                let src = (j + d - p) % d;
                dpsi[j] = self.omega[(q * src) % d] * psi[src];
                dapsi[j] = self.omega[(q * j) % d].conj() * psi[(j + p) % d];
            }
            let a = crate::jones::inner(&psi, &dpsi);
            let c2 = a.norm_sqr() / n2;
            let dev = c2 - self.target;
            value += dev * dev;
            // real gradient of |a|^2 / n^2
            let w = 2.0 * dev;
            let ac = a.conj() * (2.0 * w / n2);
            let aa = a * (2.0 * w / n2);
            let radial = w * 4.0 * c2 / n;
            for j in 0..d {
                g[j] += ac * dpsi[j] + aa * dapsi[j] - psi[j] * radial;
            }
        }
        for (j, z) in g.iter().enumerate() {
            grad[2 * j] = z.re;
            grad[2 * j + 1] = z.im;
        }
        value
    }
}
