use super::pairwise::{pairwise_error, PairwiseMethod};
use super::SnrPoint;
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::jones::PairGeometry;
use crate::par::{map_indexed, tree_sum, Parallelism};

/// Search bracket in dB used by [`solve_snr_at_target`].
pub const SNR_BRACKET_DB: (f64, f64) = (-10.0, 60.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Symbol,
    Bit,
}

/// Pair table of a constellation, reusable across SNR points.
#[derive(Debug, Clone)]
pub struct UnionBound {
    m: usize,
    k: f64,
    geoms: Vec<PairGeometry>,
    hamming: Option<Vec<u32>>,
    policy: Parallelism,
}

impl UnionBound {
    pub fn new(c: &Constellation, policy: Parallelism) -> Self {
        let pairs = c.pair_gammas(policy);
        let hamming = c.bits().map(|bits| {
            pairs
                .iter()
                .map(|&(i, j, _)| (bits[i] ^ bits[j]).count_ones())
                .collect()
        });
        Self {
            m: c.m(),
            k: c.bits_per_symbol(),
            geoms: pairs.iter().map(|&(_, _, g)| PairGeometry::from_gamma(g)).collect(),
            hamming,
            policy,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn has_labels(&self) -> bool {
        self.hamming.is_some()
    }

    fn pair_terms(&self, snr: &SnrPoint, method: PairwiseMethod) -> Vec<f64> {
        map_indexed(self.geoms.len(), self.policy, |p| {
            pairwise_error(&self.geoms[p], snr, method)
        })
    }

    /// `(1/M) Σ_m Σ_{m'≠m} P_bin`, clipped to `[0, 1]`.
    pub fn symbol(&self, snr: &SnrPoint, method: PairwiseMethod) -> f64 {
        let sum = tree_sum(&self.pair_terms(snr, method));
        (2.0 * sum / self.m as f64).clamp(0.0, 1.0)
    }

    /// `(1/(kM)) Σ_m Σ_{m'≠m} P_bin h_{mm'}`, clipped to `[0, 1]`.
    pub fn bit(&self, snr: &SnrPoint, method: PairwiseMethod) -> Result<f64> {
        let h = self.hamming.as_ref().ok_or(Error::MissingLabels)?;
        let mut terms = self.pair_terms(snr, method);
        for (t, &w) in terms.iter_mut().zip(h) {
            *t *= w as f64;
        }
        let sum = tree_sum(&terms);
        Ok((2.0 * sum / (self.k * self.m as f64)).clamp(0.0, 1.0))
    }

    pub fn evaluate(&self, snr: &SnrPoint, kind: BoundKind, method: PairwiseMethod) -> Result<f64> {
        match kind {
            BoundKind::Symbol => Ok(self.symbol(snr, method)),
            BoundKind::Bit => self.bit(snr, method),
        }
    }

    /// SNR point on the axis matching `kind`: symbol SNR for symbol bounds,
    /// bit SNR for bit bounds.
    pub fn snr_at_db(&self, db: f64, kind: BoundKind) -> Result<SnrPoint> {
        match kind {
            BoundKind::Symbol => SnrPoint::from_symbol_db(db, self.k),
            BoundKind::Bit => SnrPoint::from_bit_db(db, self.k),
        }
    }
}

pub fn union_bound_symbol(c: &Constellation, snr: &SnrPoint, method: PairwiseMethod) -> f64 {
    UnionBound::new(c, Parallelism::default()).symbol(snr, method)
}

pub fn union_bound_bit(c: &Constellation, snr: &SnrPoint, method: PairwiseMethod) -> Result<f64> {
    if c.bits().is_none() {
        return Err(Error::MissingLabels);
    }
    UnionBound::new(c, Parallelism::default()).bit(snr, method)
}

/// Finds the SNR at which the union bound equals `target`.
///
/// Bisects in dB (symbol SNR for `Symbol`, bit SNR for `Bit`) over
/// [`SNR_BRACKET_DB`] until the bracket is below 1e-9 dB.
pub fn solve_snr_at_target(c: &Constellation, target: f64, kind: BoundKind) -> Result<SnrPoint> {
    if !(target > 0.0 && target < 0.4) {
        return Err(Error::InvalidParameter(format!("target {target} outside (0, 0.4)")));
    }
    let ub = UnionBound::new(c, Parallelism::default());
    if kind == BoundKind::Bit && !ub.has_labels() {
        return Err(Error::MissingLabels);
    }
    let eval = |db: f64| -> Result<f64> {
        let snr = ub.snr_at_db(db, kind)?;
        ub.evaluate(&snr, kind, PairwiseMethod::Auto)
    };
    let (mut lo, mut hi) = SNR_BRACKET_DB;
    let unreachable = || Error::TargetUnreachable {
        target,
        lo_db: SNR_BRACKET_DB.0,
        hi_db: SNR_BRACKET_DB.1,
    };
    if eval(lo)? < target || eval(hi)? > target {
        return Err(unreachable());
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ub.snr_at_db(0.5 * (lo + hi), kind)
}

/// `η = log2(M) / N` bits per second per hertz per spatial degree of freedom.
pub fn spectral_efficiency(c: &Constellation) -> f64 {
    spectral_efficiency_nm(c.n(), c.m())
}

pub fn spectral_efficiency_nm(n: usize, m: usize) -> f64 {
    (m as f64).log2() / n as f64
}

/// Lower bound on the maximum coherence of `m` unit vectors in `C^n`.
pub fn welch_rankin_bound(n: usize, m: usize) -> Result<f64> {
    if n == 0 || m <= n {
        return Err(Error::InvalidParameter(format!(
            "Welch-Rankin bound needs M > N (got N={n}, M={m})"
        )));
    }
    let (n, m) = (n as f64, m as f64);
    Ok(((m - n) / (n * (m - 1.0))).sqrt())
}
