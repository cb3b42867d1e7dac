//! The constellation type and its JSON interchange format.
//!
//! ```text
//! { "n": N, "m": M,
//!   "vectors": [ [[re, im], ... N pairs], ... M rows ],
//!   "bits": [b_0, ..., b_{M-1}],          // optional
//!   "metadata": { "key": "value", ... } }
//! ```
//!
//! Numbers are written with 17 significant digits so a write/read cycle is
//! lossless. Stokes coordinates, where reported, follow the Gell-Mann
//! ordering of [`crate::jones::GellMannBasis`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::jones::JonesVector;
use crate::par::{self, Parallelism};

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    n: usize,
    vectors: Vec<JonesVector>,
    bits: Option<Vec<u32>>,
    pub metadata: BTreeMap<String, String>,
}

impl Constellation {
    pub fn new(vectors: Vec<JonesVector>) -> Result<Self> {
        let n = vectors
            .first()
            .map(JonesVector::dim)
            .ok_or_else(|| Error::InvalidParameter("empty constellation".into()))?;
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.dim(),
            });
        }
        Ok(Self {
            n,
            vectors,
            bits: None,
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_bits(mut self, bits: Vec<u32>) -> Result<Self> {
        validate_labels(&bits, self.m())?;
        self.bits = Some(bits);
        Ok(self)
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    /// Bits per symbol, `log2 M` (real-valued when `M` is not a power of two).
    pub fn bits_per_symbol(&self) -> f64 {
        (self.m() as f64).log2()
    }

    pub fn vectors(&self) -> &[JonesVector] {
        &self.vectors
    }

    pub fn bits(&self) -> Option<&[u32]> {
        self.bits.as_deref()
    }

    pub fn clear_bits(&mut self) {
        self.bits = None;
    }

    /// Replace all vectors, keeping labels and metadata. Dimensions and count
    /// must match.
    pub fn replace_vectors(&mut self, vectors: Vec<JonesVector>) -> Result<()> {
        if vectors.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                got: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != self.n) {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.dim(),
            });
        }
        self.vectors = vectors;
        Ok(())
    }

    /// `|<s_i|s_j>|` for all `i < j`, in [`par::pair_index`] order.
    pub fn pair_gammas(&self, policy: Parallelism) -> Vec<(usize, usize, f64)> {
        let pairs = par::pair_index(self.m());
        par::map_indexed(pairs.len(), policy, |p| {
            let (i, j) = pairs[p];
            (i, j, self.vectors[i].inner(&self.vectors[j]).norm().min(1.0))
        })
    }

    /// Full symmetric coherence matrix with unit diagonal.
    pub fn gamma_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.m();
        let mut g = vec![vec![1.0; m]; m];
        for (i, j, x) in self.pair_gammas(Parallelism::Sequential) {
            g[i][j] = x;
            g[j][i] = x;
        }
        g
    }

    pub fn max_coherence(&self) -> f64 {
        self.pair_gammas(Parallelism::Sequential)
            .iter()
            .map(|t| t.2)
            .fold(0.0, f64::max)
    }

    pub fn min_coherence(&self) -> f64 {
        self.pair_gammas(Parallelism::Sequential)
            .iter()
            .map(|t| t.2)
            .fold(1.0, f64::min)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{{\n  \"n\": {},\n  \"m\": {},\n  \"vectors\": [\n", self.n, self.m());
        for (r, v) in self.vectors.iter().enumerate() {
            out.push_str("    [");
            for (c, z) in v.entries().iter().enumerate() {
                if c > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "[{}, {}]", fmt_f64(z.re), fmt_f64(z.im));
            }
            out.push(']');
            if r + 1 < self.m() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
        if let Some(bits) = &self.bits {
            let list: Vec<String> = bits.iter().map(u32::to_string).collect();
            let _ = write!(out, ",\n  \"bits\": [{}]", list.join(", "));
        }
        out.push_str(",\n  \"metadata\": {");
        for (i, (k, v)) in self.metadata.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(
                out,
                "\n    {}: {}",
                serde_json::to_string(k).expect("string serializes"),
                serde_json::to_string(v).expect("string serializes")
            );
        }
        if !self.metadata.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("}\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConstellation =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if raw.vectors.len() != raw.m {
            return Err(Error::Format(format!(
                "m = {} but {} vectors given",
                raw.m,
                raw.vectors.len()
            )));
        }
        let mut vectors = Vec::with_capacity(raw.m);
        for (r, row) in raw.vectors.into_iter().enumerate() {
            if row.len() != raw.n {
                return Err(Error::Format(format!(
                    "vector {r} has {} entries, n = {}",
                    row.len(),
                    raw.n
                )));
            }
            let entries: Vec<Complex64> =
                row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
            // Entries within tolerance are kept bit-exact; others are rescaled.
            let v = match JonesVector::new(entries.clone()) {
                Err(Error::NotNormalized(_)) => JonesVector::normalized(entries),
                other => other,
            }
            .map_err(|e| Error::Format(format!("vector {r}: {e}")))?;
            vectors.push(v);
        }
        let mut c = Constellation::new(vectors).map_err(|e| Error::Format(e.to_string()))?;
        if let Some(bits) = raw.bits {
            c = c.with_bits(bits)?;
        }
        c.metadata = raw.metadata;
        Ok(c)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Deserialize)]
struct RawConstellation {
    n: usize,
    m: usize,
    vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    bits: Option<Vec<u32>>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn is_power_of_two(m: usize) -> bool {
    m >= 1 && m & (m - 1) == 0
}

pub(crate) fn validate_labels(bits: &[u32], m: usize) -> Result<()> {
    if bits.len() != m {
        return Err(Error::InvalidLabels(format!("{} labels for {m} symbols", bits.len())));
    }
    if !is_power_of_two(m) {
        return Err(Error::InvalidLabels(format!("M = {m} is not a power of two")));
    }
    let mut seen = vec![false; m];
    for &b in bits {
        let b = b as usize;
        if b >= m || seen[b] {
            return Err(Error::InvalidLabels(format!("labels are not a permutation of 0..{m}")));
        }
        seen[b] = true;
    }
    Ok(())
}
