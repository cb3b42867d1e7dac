use super::{stokes_constant, JonesVector};
use crate::error::{Error, Result};

/// Scalars that fully describe a symbol pair for error-probability purposes.
///
/// `gamma = |<s|t>|`, `delta = sqrt(1 - gamma^2)`,
/// `rho_minus/plus = sqrt((1 ∓ delta) / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub gamma: f64,
    pub delta: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
}

impl PairGeometry {
    /// Build from the coherence alone. `gamma` is clamped to `[0, 1]`.
    pub fn from_gamma(gamma: f64) -> Self {
        let gamma = gamma.clamp(0.0, 1.0);
        let delta = ((1.0 - gamma) * (1.0 + gamma)).sqrt();
        // 1 - delta = gamma^2 / (1 + delta) avoids cancellation at small gamma
        let rho_minus = gamma / (2.0 * (1.0 + delta)).sqrt();
        let rho_plus = ((1.0 + delta) / 2.0).sqrt();
        Self {
            gamma,
            delta,
            rho_minus,
            rho_plus,
        }
    }
}

pub fn pair_geometry(s: &JonesVector, t: &JonesVector) -> Result<PairGeometry> {
    same_dim(s, t)?;
    Ok(PairGeometry::from_gamma(s.inner(t).norm()))
}

/// Coherent (Euclidean Jones) distance `sqrt(2) sqrt(1 - Re<s|t>)`.
pub fn dist_coherent(s: &JonesVector, t: &JonesVector) -> Result<f64> {
    same_dim(s, t)?;
    Ok((2.0 * (1.0 - s.inner(t).re).max(0.0)).sqrt())
}

/// Incoherent / direct-detection distance `sqrt(2) sqrt(1 - gamma)`.
pub fn dist_dd(s: &JonesVector, t: &JonesVector) -> Result<f64> {
    Ok(dd_from_gamma(pair_geometry(s, t)?.gamma))
}

/// Hilbert-Schmidt distance between the dyads, `sqrt(2) sqrt(1 - gamma^2)`.
pub fn dist_hs(s: &JonesVector, t: &JonesVector) -> Result<f64> {
    Ok(2f64.sqrt() * pair_geometry(s, t)?.delta)
}

/// Euclidean distance between Stokes images, `2 C_N sqrt(1 - gamma^2)`.
pub fn dist_stokes(s: &JonesVector, t: &JonesVector) -> Result<f64> {
    Ok(stokes_from_gamma(s.dim(), pair_geometry(s, t)?.gamma))
}

pub(crate) fn dd_from_gamma(gamma: f64) -> f64 {
    (2.0 * (1.0 - gamma).max(0.0)).sqrt()
}

pub(crate) fn stokes_from_gamma(n: usize, gamma: f64) -> f64 {
    2.0 * stokes_constant(n) * ((1.0 - gamma) * (1.0 + gamma)).max(0.0).sqrt()
}

fn same_dim(s: &JonesVector, t: &JonesVector) -> Result<()> {
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: t.dim(),
        });
    }
    Ok(())
}
