//! Generalized Jones/Stokes algebra.
//!
//! A symbol is a unit vector in `C^N` defined up to a global phase. Its
//! image in generalized Stokes space is the real `(N^2 - 1)`-vector
//! `C_N <s|Λ|s>` where `Λ` is the Gell-Mann spin vector (see
//! [`GellMannBasis`] for the ordering) and `C_N = sqrt(N / (2(N-1)))`.

mod gellmann;
pub(crate) mod geometry;

pub use gellmann::GellMannBasis;
pub use geometry::{
    dist_coherent, dist_dd, dist_hs, dist_stokes, pair_geometry, PairGeometry,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance on the unit norm at construction.
pub const NORM_TOL: f64 = 1e-12;
/// Below this norm a vector is treated as zero.
pub const ZERO_NORM: f64 = 1e-9;

/// Stokes normalization constant `C_N = sqrt(N / (2(N-1)))`.
pub fn stokes_constant(n: usize) -> f64 {
    let n = n as f64;
    (n / (2.0 * (n - 1.0))).sqrt()
}

/// A unit Jones vector: one equipower MVM symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct JonesVector {
    entries: Vec<Complex64>,
}

impl JonesVector {
    /// Wrap entries that already have unit norm (within [`NORM_TOL`]).
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        check_dim(entries.len())?;
        let norm = l2_norm(&entries);
        if norm < ZERO_NORM {
            return Err(Error::ZeroVector);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { entries })
    }

    /// Scale arbitrary nonzero entries to unit norm.
    pub fn normalized(mut entries: Vec<Complex64>) -> Result<Self> {
        check_dim(entries.len())?;
        let norm = l2_norm(&entries);
        if norm < ZERO_NORM {
            return Err(Error::ZeroVector);
        }
        entries.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { entries })
    }

    /// Uniformly distributed on the unit sphere of `C^n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_dim(n)?;
        loop {
            let entries: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if l2_norm(&entries) >= ZERO_NORM {
                return Self::normalized(entries);
            }
        }
    }

    /// `e_k`, the k-th standard basis vector.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        check_dim(n)?;
        if k >= n {
            return Err(Error::InvalidParameter(format!("basis index {k} >= {n}")));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); n];
        entries[k] = Complex64::new(1.0, 0.0);
        Ok(Self { entries })
    }

    pub fn from_hyperspherical(coords: &HypersphericalCoords) -> Result<Self> {
        let n = coords.dim();
        let mut entries = Vec::with_capacity(n);
        let mut sin_prod = 1.0;
        for k in 0..n {
            let amp = if k + 1 < n {
                sin_prod * coords.phis[k].cos()
            } else {
                sin_prod
            };
            let phase = if k == 0 { 0.0 } else { coords.thetas[k - 1] };
            entries.push(Complex64::from_polar(amp, phase));
            if k + 1 < n {
                sin_prod *= coords.phis[k].sin();
            }
        }
        Self::normalized(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &JonesVector) -> Complex64 {
        inner(&self.entries, &other.entries)
    }

    pub fn with_global_phase(&self, theta: f64) -> JonesVector {
        let p = Complex64::from_polar(1.0, theta);
        JonesVector {
            entries: self.entries.iter().map(|z| z * p).collect(),
        }
    }

    /// Rotate so the first nonzero entry is real positive.
    pub fn canonicalized(&self) -> JonesVector {
        match self.entries.iter().find(|z| z.norm() > ZERO_NORM) {
            Some(z) => self.with_global_phase(-z.arg()),
            None => self.clone(),
        }
    }

    /// Generalized Stokes vector `C_N <s|Λ|s>`.
    ///
    /// Evaluated in closed form per Gell-Mann generator; agrees with
    /// [`GellMannBasis::expectation`] to rounding.
    pub fn stokes(&self) -> StokesVector {
        let n = self.dim();
        let c = stokes_constant(n);
        let s = &self.entries;
        let pairs = n * (n - 1) / 2;
        let mut out = vec![0.0; n * n - 1];
        let mut p = 0;
        for j in 0..n {
            for k in j + 1..n {
                let z = s[j].conj() * s[k];
                out[p] = 2.0 * c * z.re;
                out[pairs + p] = 2.0 * c * z.im;
                p += 1;
            }
        }
        let mut partial = 0.0;
        for l in 1..n {
            partial += s[l - 1].norm_sqr();
            let lf = l as f64;
            let w = (2.0 / (lf * (lf + 1.0))).sqrt();
            out[2 * pairs + l - 1] = c * w * (partial - lf * s[l].norm_sqr());
        }
        StokesVector { components: out }
    }

    /// Projection dyad `|s><s|`.
    pub fn dyad(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| self.entries[r] * self.entries[c].conj())
    }
}

/// Hyperspherical coordinates of a unit Jones vector up to phase.
#[derive(Debug, Clone, PartialEq)]
pub struct HypersphericalCoords {
    phis: Vec<f64>,
    thetas: Vec<f64>,
}

impl HypersphericalCoords {
    pub fn new(phis: Vec<f64>, thetas: Vec<f64>) -> Result<Self> {
        if phis.len() != thetas.len() {
            return Err(Error::DimensionMismatch {
                expected: phis.len(),
                got: thetas.len(),
            });
        }
        if phis.is_empty() {
            return Err(Error::InvalidDimension(1));
        }
        Ok(Self { phis, thetas })
    }

    /// Jones dimension `N` (one more than the angle count).
    pub fn dim(&self) -> usize {
        self.phis.len() + 1
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }
}

/// Real generalized Stokes vector, length `N^2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesVector {
    pub components: Vec<f64>,
}

impl StokesVector {
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &StokesVector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn distance(&self, other: &StokesVector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Inverse Stokes map for `N = 2`: the Jones vector whose Poincaré-sphere
/// image is the direction of `(s1, s2, s3)`.
pub fn jones_from_poincare(s: [f64; 3]) -> Result<JonesVector> {
    let r = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    if r < ZERO_NORM {
        return Err(Error::ZeroVector);
    }
    let polar = (s[2] / r).clamp(-1.0, 1.0).acos();
    let azimuth = s[1].atan2(s[0]);
    let coords = HypersphericalCoords::new(vec![polar / 2.0], vec![azimuth])?;
    JonesVector::from_hyperspherical(&coords)
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidDimension(n))
    } else {
        Ok(())
    }
}
