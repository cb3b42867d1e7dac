use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::jones::geometry::{dd_from_gamma, stokes_from_gamma};
use crate::par::Parallelism;

/// Distance used by the packing diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMetric {
    DirectDetection,
    Stokes,
}

impl DistanceMetric {
    pub fn from_gamma(self, n: usize, gamma: f64) -> f64 {
        match self {
            DistanceMetric::DirectDetection => dd_from_gamma(gamma),
            DistanceMetric::Stokes => stokes_from_gamma(n, gamma),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    /// Lower edge of the first bin; bins start at the smallest distance.
    pub origin: f64,
    pub counts: Vec<usize>,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Histogram {
    /// `(lower edge, count)` for non-empty bins.
    pub fn occupied(&self) -> Vec<(f64, usize)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.origin + i as f64 * self.bin_width, c))
            .collect()
    }
}

/// All pair distances, in pair order.
pub fn pair_distances(c: &Constellation, metric: DistanceMetric) -> Vec<f64> {
    c.pair_gammas(Parallelism::default())
        .into_iter()
        .map(|(_, _, g)| metric.from_gamma(c.n(), g))
        .collect()
}

pub fn coherence_histogram(c: &Constellation, metric: DistanceMetric, bin_width: f64) -> Result<Histogram> {
    if c.m() < 2 {
        return Err(Error::InvalidParameter("histogram needs M >= 2".into()));
    }
    if !(bin_width > 0.0) {
        return Err(Error::InvalidParameter("bin width must be > 0".into()));
    }
    let d = pair_distances(c, metric);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let origin = min;
    let bins = (((max - origin) / bin_width).floor() as usize) + 1;
    let mut counts = vec![0; bins];
    for x in d {
        let i = (((x - origin) / bin_width).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    Ok(Histogram {
        bin_width,
        origin,
        counts,
        min,
        max,
        mean,
    })
}

/// Undirected edges of the symmetrized `k`-nearest-neighbor graph as
/// `(i, j, distance)` with `i < j`, sorted by distance.
pub fn knn_edges(c: &Constellation, k: usize, metric: DistanceMetric) -> Vec<(usize, usize, f64)> {
    let m = c.m();
    let g = c.gamma_matrix();
    let dist = |i: usize, j: usize| metric.from_gamma(c.n(), g[i][j]);
    let mut edges = Vec::new();
    for i in 0..m {
        let mut others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| dist(i, a).total_cmp(&dist(i, b)).then(a.cmp(&b)));
        for &j in others.iter().take(k) {
            edges.push((i.min(j), i.max(j)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut out: Vec<(usize, usize, f64)> = edges.into_iter().map(|(i, j)| (i, j, dist(i, j))).collect();
    out.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    out
}

/// Sorted edge lengths of the `k`-nearest-neighbor graph.
pub fn nearest_neighbor_edges(c: &Constellation, k: usize, metric: DistanceMetric) -> Vec<f64> {
    knn_edges(c, k, metric).into_iter().map(|e| e.2).collect()
}

/// Edges whose length is within `factor` of the minimum pair distance,
/// plus the resulting vertex degrees.
pub fn contact_graph(c: &Constellation, metric: DistanceMetric, factor: f64) -> (Vec<(usize, usize, f64)>, Vec<usize>) {
    let pairs = c.pair_gammas(Parallelism::default());
    let d: Vec<f64> = pairs.iter().map(|p| metric.from_gamma(c.n(), p.2)).collect();
    let dmin = d.iter().copied().fold(f64::INFINITY, f64::min);
    let mut degree = vec![0; c.m()];
    let mut edges = Vec::new();
    for ((i, j, _), &x) in pairs.iter().zip(&d) {
        if x <= dmin * factor {
            degree[*i] += 1;
            degree[*j] += 1;
            edges.push((*i, *j, x));
        }
    }
    (edges, degree)
}
