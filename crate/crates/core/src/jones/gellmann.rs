use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{stokes_constant, JonesVector, StokesVector};
use crate::error::{Error, Result};

/// Generalized Gell-Mann matrices for `SU(N)`.
///
/// Ordering: the `N(N-1)/2` symmetric off-diagonal generators
/// `|j><k| + |k><j|`, then the antisymmetric ones `-i|j><k| + i|k><j|`,
/// both with `(j, k)`, `j < k`, in lexicographic order, then the `N-1`
/// diagonal generators `sqrt(2/(l(l+1))) (sum_{j<l} |j><j| - l|l><l|)` for
/// `l = 1..N-1`. Normalization is `tr(Λ_a Λ_b) = 2 δ_ab`.
#[derive(Debug, Clone)]
pub struct GellMannBasis {
    n: usize,
    matrices: Vec<DMatrix<Complex64>>,
}

impl GellMannBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let mut matrices = Vec::with_capacity(n * n - 1);
        for j in 0..n {
            for k in j + 1..n {
                let mut m = DMatrix::from_element(n, n, zero);
                m[(j, k)] = one;
                m[(k, j)] = one;
                matrices.push(m);
            }
        }
        for j in 0..n {
            for k in j + 1..n {
                let mut m = DMatrix::from_element(n, n, zero);
                m[(j, k)] = -i;
                m[(k, j)] = i;
                matrices.push(m);
            }
        }
        for l in 1..n {
            let lf = l as f64;
            let w = (2.0 / (lf * (lf + 1.0))).sqrt();
            let mut m = DMatrix::from_element(n, n, zero);
            for j in 0..l {
                m[(j, j)] = Complex64::new(w, 0.0);
            }
            m[(l, l)] = Complex64::new(-w * lf, 0.0);
            matrices.push(m);
        }
        Ok(Self { n, matrices })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.matrices
    }

    /// `<s|Λ_a|s>` for every generator.
    pub fn expectation(&self, s: &JonesVector) -> Result<Vec<f64>> {
        if s.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: s.dim(),
            });
        }
        let e = s.entries();
        Ok(self
            .matrices
            .iter()
            .map(|m| {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..self.n {
                    for c in 0..self.n {
                        acc += e[r].conj() * m[(r, c)] * e[c];
                    }
                }
                acc.re
            })
            .collect())
    }

    /// Stokes vector computed directly from the basis matrices.
    pub fn stokes(&self, s: &JonesVector) -> Result<StokesVector> {
        let c = stokes_constant(self.n);
        Ok(StokesVector {
            components: self.expectation(s)?.into_iter().map(|x| c * x).collect(),
        })
    }

    /// Expansion coefficients `tr(A Λ_a) / 2` of a Hermitian matrix.
    pub fn coefficients(&self, a: &DMatrix<Complex64>) -> Vec<f64> {
        self.matrices
            .iter()
            .map(|m| (a * m).trace().re / 2.0)
            .collect()
    }

    /// Recover the Stokes vector from a projection dyad via
    /// `S = I/N + (1/(2 C_N)) ŝ·Λ`.
    pub fn stokes_from_dyad(&self, dyad: &DMatrix<Complex64>) -> StokesVector {
        let c = stokes_constant(self.n);
        let shifted =
            dyad - DMatrix::<Complex64>::identity(self.n, self.n) / Complex64::new(self.n as f64, 0.0);
        StokesVector {
            components: self
                .coefficients(&(shifted * Complex64::new(2.0 * c, 0.0)))
                .into_iter()
                .collect(),
        }
    }

    /// Rebuild `I/N + (1/(2 C_N)) ŝ·Λ` from a Stokes vector.
    pub fn dyad_from_stokes(&self, s: &StokesVector) -> DMatrix<Complex64> {
        let c = stokes_constant(self.n);
        let mut out =
            DMatrix::<Complex64>::identity(self.n, self.n) / Complex64::new(self.n as f64, 0.0);
        for (m, &x) in self.matrices.iter().zip(&s.components) {
            out += m * Complex64::new(x / (2.0 * c), 0.0);
        }
        out
    }
}
