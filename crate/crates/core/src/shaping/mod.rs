//! Geometric constellation shaping.
//!
//! Pair potentials, projected gradient descent on the product of unit
//! spheres, deterministic generators and packing diagnostics.

mod descent;
mod diagnostics;
mod generators;
mod lbfgs;
mod potential;

pub use descent::{optimize, DescentConfig, DescentTrace, TraceRow, MIN_STEP};
pub use diagnostics::{
    coherence_histogram, contact_graph, knn_edges, nearest_neighbor_edges, pair_distances,
    DistanceMetric, Histogram,
};
pub use generators::{
    orthogonal_set, random_constellation, sic_povm, standard_hypercube, HYPERCUBE_MAX_M,
    SIC_MAX_N, SIC_TOLERANCE,
};
pub use potential::{
    gradient_norm, potential_energy, potential_gradient, projected_gradient, Gradient, Potential,
    COINCIDENT_DIST, UB_FD_STEP,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jones::JonesVector;
    use crate::par::Parallelism;
    use crate::Constellation;

    #[test]
    fn coulomb_small_cases() {
        let c = orthogonal_set(2, 2).unwrap();
        let e = potential_energy(&c, &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
        assert!((e - 0.5).abs() < 1e-15);
        let g = potential_gradient(&c, &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
        assert_eq!(gradient_norm(&g), 0.0);

        let c = orthogonal_set(3, 3).unwrap();
        let e = potential_energy(&c, &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
        assert!((e - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn coincident_points_rejected() {
        let v = JonesVector::basis(2, 0).unwrap();
        let c = Constellation::new(vec![v.clone(), v.with_global_phase(0.3)]).unwrap();
        assert!(potential_energy(&c, &Potential::CoulombStokes, Parallelism::Sequential).is_err());
    }

    #[test]
    fn equilibrium_start_is_unchanged() {
        let c = orthogonal_set(2, 2).unwrap();
        let (out, trace) = optimize(&c, &Potential::CoulombStokes, &DescentConfig::default()).unwrap();
        assert_eq!(out, c);
        assert!(trace.iterations.is_empty());
        assert!(trace.converged);
    }

    #[test]
    fn bad_config_rejected() {
        let c = orthogonal_set(2, 2).unwrap();
        let cfg = DescentConfig {
            step_shrink: 1.0,
            ..Default::default()
        };
        assert!(optimize(&c, &Potential::CoulombStokes, &cfg).is_err());
    }
}
