use num_complex::Complex64;

use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::errprob::{pairwise_error, PairwiseMethod, SnrPoint, GAMMA_ZERO};
use crate::jones::{inner, stokes_constant, PairGeometry};
use crate::par::{map_indexed, pair_index, tree_sum, Parallelism};

/// Minimum Stokes distance tolerated by the Coulomb potential.
pub const COINCIDENT_DIST: f64 = 1e-9;
/// Finite-difference step on `γ` for the union-bound gradient.
pub const UB_FD_STEP: f64 = 1e-5;

/// Pair potential driving the descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// `Σ_{i<j} 1 / d_Stokes(s_i, s_j)`.
    CoulombStokes,
    /// The symbol union bound at a fixed operating point.
    UnionBound(SnrPoint),
}

/// Per-vector complex gradient, `(∂/∂x + i ∂/∂y)` for each entry.
pub type Gradient = Vec<Vec<Complex64>>;

pub fn potential_energy(c: &Constellation, p: &Potential, policy: Parallelism) -> Result<f64> {
    energy_of(&entries_of(c), p, policy)
}

/// Gradient with respect to the unconstrained real and imaginary parts of
/// every entry.
pub fn potential_gradient(c: &Constellation, p: &Potential, policy: Parallelism) -> Result<Gradient> {
    gradient_of(&entries_of(c), p, policy)
}

/// Gradient with the radial component of each vector removed.
pub fn projected_gradient(c: &Constellation, p: &Potential, policy: Parallelism) -> Result<Gradient> {
    let v = entries_of(c);
    let mut g = gradient_of(&v, p, policy)?;
    project(&v, &mut g);
    Ok(g)
}

pub fn gradient_norm(g: &Gradient) -> f64 {
    g.iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn entries_of(c: &Constellation) -> Vec<Vec<Complex64>> {
    c.vectors().iter().map(|v| v.entries().to_vec()).collect()
}

pub(crate) fn project(v: &[Vec<Complex64>], g: &mut Gradient) {
    for (s, gi) in v.iter().zip(g.iter_mut()) {
        let radial = inner(s, gi).re;
        for (x, y) in gi.iter_mut().zip(s) {
            *x -= y * radial;
        }
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter("potential needs M >= 2".into()));
    }
    Ok(())
}

pub(crate) fn energy_of(v: &[Vec<Complex64>], p: &Potential, policy: Parallelism) -> Result<f64> {
    check_m(v.len())?;
    let pairs = pair_index(v.len());
    match p {
        Potential::CoulombStokes => {
            let c2 = 2.0 * stokes_constant(v[0].len());
            let terms = map_indexed(pairs.len(), policy, |k| {
                let (i, j) = pairs[k];
                let g2 = inner(&v[i], &v[j]).norm_sqr().min(1.0);
                let d = c2 * (1.0 - g2).sqrt();
                if d <= COINCIDENT_DIST {
                    Err(Error::CoincidentPoints(i, j))
                } else {
                    Ok(1.0 / d)
                }
            });
            let terms = terms.into_iter().collect::<Result<Vec<_>>>()?;
            Ok(tree_sum(&terms))
        }
        Potential::UnionBound(snr) => {
            let terms = map_indexed(pairs.len(), policy, |k| {
                let (i, j) = pairs[k];
                pair_term(inner(&v[i], &v[j]).norm(), snr)
            });
            Ok(2.0 * tree_sum(&terms) / v.len() as f64)
        }
    }
}

fn pair_term(gamma: f64, snr: &SnrPoint) -> f64 {
    pairwise_error(&PairGeometry::from_gamma(gamma.clamp(0.0, 1.0)), snr, PairwiseMethod::Auto)
}

/// `P'(γ) / γ` by central differences, with the small-`γ` limit handled
/// through the even expansion `P(γ) ≈ P(0) + c γ^2`.
fn ub_weight(gamma: f64, snr: &SnrPoint) -> f64 {
    let h = UB_FD_STEP;
    if gamma < h.max(GAMMA_ZERO) {
        return 2.0 * (pair_term(h, snr) - pair_term(0.0, snr)) / (h * h);
    }
    // shrink the step near γ = 1, where P' grows like (1 - γ)^{-1/2}
    let h = h.min(0.01 * (1.0 - gamma));
    let derivative = if h < 1e-15 {
        let h = UB_FD_STEP.min(gamma);
        (pair_term(gamma, snr) - pair_term(gamma - h, snr)) / h
    } else {
        (pair_term(gamma + h, snr) - pair_term(gamma - h, snr)) / (2.0 * h)
    };
    derivative / gamma
}

pub(crate) fn gradient_of(v: &[Vec<Complex64>], p: &Potential, policy: Parallelism) -> Result<Gradient> {
    let m = v.len();
    check_m(m)?;
    let n = v[0].len();
    let weight = |i: usize, j: usize| -> Result<(f64, Complex64)> {
        let ov = inner(&v[j], &v[i]);
        let w = match p {
            Potential::CoulombStokes => {
                let c = stokes_constant(n);
                let d = 2.0 * c * (1.0 - ov.norm_sqr().min(1.0)).sqrt();
                if d <= COINCIDENT_DIST {
                    return Err(Error::CoincidentPoints(i.min(j), i.max(j)));
                }
                4.0 * c * c / (d * d * d)
            }
            Potential::UnionBound(snr) => 2.0 / m as f64 * ub_weight(ov.norm(), snr),
        };
        Ok((w, ov))
    };
    let rows = map_indexed(m, policy, |i| -> Result<Vec<Complex64>> {
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        for j in (0..m).filter(|&j| j != i) {
            let (w, ov) = weight(i, j)?;
            let scale = ov * w;
            for (a, b) in acc.iter_mut().zip(&v[j]) {
                *a += scale * b;
            }
        }
        Ok(acc)
    });
    rows.into_iter().collect()
}
