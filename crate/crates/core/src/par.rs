//! Data-parallel helpers with a sequential fallback.
//!
//! Every reduction here is order-fixed: values are produced into a buffer
//! indexed by item, then summed with a pairwise tree. The result is
//! bit-identical whether the buffer was filled by one thread or many.

/// Execution policy for the heavy loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    /// Rayon when the `parallel` feature is compiled in, sequential otherwise.
    #[default]
    Rayon,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Rayon
    }
}

/// Evaluate `f(i)` for `i in 0..n`, preserving index order.
pub fn map_indexed<T, F>(n: usize, policy: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = policy;
    (0..n).map(f).collect()
}

/// Pairwise (tree) summation. Deterministic for a given slice.
pub fn tree_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    tree_sum(&values[..mid]) + tree_sum(&values[mid..])
}

/// `sum_i f(i)` with deterministic reduction order.
pub fn sum_indexed<F>(n: usize, policy: Parallelism, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    tree_sum(&map_indexed(n, policy, f))
}

/// Enumerate unordered pairs `(i, j)`, `i < j < m`, in row-major order.
pub fn pair_index(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sum_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=100).map(|x| x as f64).collect();
        assert_eq!(tree_sum(&v), 5050.0);
        assert_eq!(tree_sum(&[]), 0.0);
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let f = |i: usize| (i as f64 * 0.37).sin() / (1.0 + i as f64);
        let a = sum_indexed(10_000, Parallelism::Sequential, f);
        let b = sum_indexed(10_000, Parallelism::Rayon, f);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn pair_index_counts() {
        assert_eq!(pair_index(5).len(), 10);
        assert_eq!(pair_index(1).len(), 0);
        assert_eq!(pair_index(3), vec![(0, 1), (0, 2), (1, 2)]);
    }
}
