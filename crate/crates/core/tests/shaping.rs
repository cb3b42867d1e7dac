mod common;

use std::f64::consts::PI;

use common::{coulomb_energy_overlap, coulomb_energy_raw, flatten, gradient_fd, unflatten};
use mvm::errprob::{welch_rankin_bound, SnrPoint};
use mvm::jones::{jones_from_poincare, stokes_constant};
use mvm::par::Parallelism;
use mvm::shaping::*;
use mvm::{Complex64, Constellation, JonesVector};
use proptest::prelude::*;

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den
}

fn flat_grad(g: &Gradient) -> Vec<f64> {
    g.iter().flat_map(|r| r.iter().flat_map(|z| [z.re, z.im])).collect()
}

#[test]
fn coulomb_gradient_matches_raw_differences() {
    for &n in &[2, 4] {
        for &m in &[8, 16, 32] {
            let c = random_constellation(n, m, 100 + (n * m) as u64).unwrap();
            let x = flatten(&c);
            // radial curvature scales with 1 - γ^2, so the raw form needs a finer step
            let fd = gradient_fd(&x, 1e-7, |y| coulomb_energy_overlap(&unflatten(y, n, false)));
            let g = potential_gradient(&c, &Potential::CoulombStokes, Parallelism::default()).unwrap();
            let err = rel_err(&flat_grad(&g), &fd);
            assert!(err < 1e-5, "n={n} m={m}: {err}");
        }
    }
}

#[test]
fn projected_gradient_matches_renormalized_differences() {
    for &n in &[2, 4] {
        for &m in &[8, 16] {
            let c = random_constellation(n, m, 7 + (n * m) as u64).unwrap();
            let x = flatten(&c);
            let fd = gradient_fd(&x, 1e-5, |y| coulomb_energy_raw(&unflatten(y, n, true)));
            let g = projected_gradient(&c, &Potential::CoulombStokes, Parallelism::default()).unwrap();
            let err = rel_err(&flat_grad(&g), &fd);
            assert!(err < 1e-5, "n={n} m={m}: {err}");
        }
    }
}

#[test]
fn union_bound_gradient_matches_differences() {
    let c = random_constellation(2, 8, 3).unwrap();
    let snr = SnrPoint::from_symbol_db(12.0, 3.0).unwrap();
    let p = Potential::UnionBound(snr);
    let x = flatten(&c);
    let fd = gradient_fd(&x, 1e-5, |y| {
        let v = unflatten(y, 2, true)
            .into_iter()
            .map(|e| JonesVector::normalized(e).unwrap())
            .collect();
        potential_energy(&Constellation::new(v).unwrap(), &p, Parallelism::Sequential).unwrap()
    });
    let g = projected_gradient(&c, &p, Parallelism::default()).unwrap();
    let err = rel_err(&flat_grad(&g), &fd);
    assert!(err < 1e-3, "{err}");
}

#[test]
fn energy_is_bitwise_policy_independent() {
    let c = random_constellation(4, 48, 5).unwrap();
    let a = potential_energy(&c, &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
    let b = potential_energy(&c, &Potential::CoulombStokes, Parallelism::Rayon).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

fn cube() -> Constellation {
    let s = 1.0 / 3f64.sqrt();
    let mut v = Vec::new();
    for &x in &[-s, s] {
        for &y in &[-s, s] {
            for &z in &[-s, s] {
                v.push(jones_from_poincare([x, y, z]).unwrap());
            }
        }
    }
    Constellation::new(v).unwrap()
}

/// Cube with the top face rotated about the z axis.
fn twisted_cube(angle: f64) -> Constellation {
    let h = 1.0 / 3f64.sqrt();
    let r = (2.0f64 / 3.0).sqrt();
    let mut v = Vec::new();
    for k in 0..4 {
        let a = PI / 4.0 + k as f64 * PI / 2.0;
        v.push(jones_from_poincare([r * a.cos(), r * a.sin(), -h]).unwrap());
        let b = a + angle;
        v.push(jones_from_poincare([r * b.cos(), r * b.sin(), h]).unwrap());
    }
    Constellation::new(v).unwrap()
}

#[test]
fn exact_cube_is_a_critical_point() {
    let g = projected_gradient(&cube(), &Potential::CoulombStokes, Parallelism::default()).unwrap();
    assert!(gradient_norm(&g) < 1e-12);
}

#[test]
fn twisted_cube_is_not_an_equilibrium() {
    let tol = DescentConfig::default().grad_tolerance;
    let c = twisted_cube(15f64.to_radians());
    let g = projected_gradient(&c, &Potential::CoulombStokes, Parallelism::default()).unwrap();
    assert!(gradient_norm(&g) > 10.0 * tol, "{}", gradient_norm(&g));
}

#[test]
fn perturbed_cube_descends_below_cube() {
    let cube_energy = potential_energy(&cube(), &Potential::CoulombStokes, Parallelism::default()).unwrap();
    let c = twisted_cube(1f64.to_radians());
    let (out, trace) = optimize(&c, &Potential::CoulombStokes, &DescentConfig::default()).unwrap();
    assert!(trace.converged);
    assert!(trace.final_energy() < cube_energy - 1e-3);
    let anti = potential_energy(&common::square_antiprism(), &Potential::CoulombStokes, Parallelism::default()).unwrap();
    assert!((trace.final_energy() - anti).abs() < 1e-9);
    let edges = nearest_neighbor_edges(&out, 4, DistanceMetric::Stokes);
    assert_eq!(edges.len(), 16);
}

#[test]
fn descent_keeps_unit_norm_and_monotone_energy() {
    for seed in 0..4 {
        let c = random_constellation(3, 12, seed).unwrap();
        let cfg = DescentConfig { max_iters: 300, ..Default::default() };
        let (out, trace) = optimize(&c, &Potential::CoulombStokes, &cfg).unwrap();
        let mut prev = trace.initial_energy;
        for row in &trace.iterations {
            assert!(row.energy < prev);
            prev = row.energy;
        }
        for v in out.vectors() {
            let n: f64 = v.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn union_bound_descent_lowers_the_bound() {
    let c = random_constellation(2, 8, 1).unwrap();
    let snr = SnrPoint::from_symbol_db(14.0, 3.0).unwrap();
    let p = Potential::UnionBound(snr);
    let cfg = DescentConfig { max_iters: 200, ..Default::default() };
    let (_, trace) = optimize(&c, &p, &cfg).unwrap();
    assert!(trace.final_energy() < 0.5 * trace.initial_energy);
}

#[test]
fn trace_csv_layout() {
    let c = random_constellation(2, 4, 2).unwrap();
    let cfg = DescentConfig { max_iters: 5, ..Default::default() };
    let (_, trace) = optimize(&c, &Potential::CoulombStokes, &cfg).unwrap();
    let csv = trace.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iter,energy,grad_norm,step"));
    assert_eq!(lines.count(), trace.iterations.len());
}

#[test]
fn hypercube_structure() {
    for n in 2..=5 {
        let c = standard_hypercube(n).unwrap();
        assert_eq!(c.m(), 4usize.pow(n as u32 - 1));
        let scale = (n as f64).sqrt();
        for v in c.vectors() {
            let e = v.entries();
            assert!((e[0] * scale - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            for z in &e[1..] {
                let w = z * scale;
                let on_axis = (w.re.abs() - 1.0).abs() < 1e-15 && w.im.abs() < 1e-15
                    || (w.im.abs() - 1.0).abs() < 1e-15 && w.re.abs() < 1e-15;
                assert!(on_axis);
            }
        }
        assert!(c.max_coherence() < 1.0 - 1e-9);
    }
    let h4 = standard_hypercube(4).unwrap();
    assert!((h4.max_coherence() - 10f64.sqrt() / 4.0).abs() < 1e-14);
    // n = 2: the four points are pairwise orthogonal or at 1/sqrt 2
    let h2 = standard_hypercube(2).unwrap();
    for (_, _, g) in h2.pair_gammas(Parallelism::Sequential) {
        assert!(g.abs() < 1e-15 || (g - 0.5f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn sic_two_is_a_tetrahedron() {
    let c = sic_povm(2, 0).unwrap();
    let s: Vec<_> = c.vectors().iter().map(|v| v.stokes()).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            assert!((s[i].dot(&s[j]) + 1.0 / 3.0).abs() < 1e-6);
        }
    }
}

#[test]
fn sic_equal_distances() {
    for n in 2..=4 {
        let c = sic_povm(n, 1).unwrap();
        let h = coherence_histogram(&c, DistanceMetric::Stokes, 1e-4).unwrap();
        assert_eq!(h.occupied().len(), 1, "n={n}");
        let nf = n as f64;
        let want = (2.0 * nf * nf / (nf * nf - 1.0)).sqrt();
        assert!((h.mean - want).abs() < 1e-4);
        assert!(c.metadata.contains_key("seed"));
    }
}

#[test]
fn sic_is_deterministic() {
    assert_eq!(sic_povm(3, 5).unwrap(), sic_povm(3, 5).unwrap());
}

#[test]
fn generators_respect_welch() {
    let mut all = vec![standard_hypercube(2).unwrap(), standard_hypercube(3).unwrap(), standard_hypercube(4).unwrap()];
    for n in 2..=5 {
        all.push(sic_povm(n, 0).unwrap());
    }
    for seed in 0..5 {
        all.push(random_constellation(3, 20, seed).unwrap());
    }
    let (thomson, _) = optimize(&random_constellation(3, 16, 0).unwrap(), &Potential::CoulombStokes, &DescentConfig::default()).unwrap();
    all.push(thomson);
    for c in &all {
        if c.m() > c.n() {
            let wb = welch_rankin_bound(c.n(), c.m()).unwrap();
            assert!(c.max_coherence() >= wb - 1e-9);
        }
    }
}

#[test]
fn orthogonal_set_has_zero_coherence() {
    let c = orthogonal_set(5, 3).unwrap();
    assert_eq!(c.max_coherence(), 0.0);
    assert!(orthogonal_set(3, 4).is_err());
}

#[test]
fn contact_graph_of_antiprism() {
    let c = common::square_antiprism();
    let (edges, degrees) = contact_graph(&c, DistanceMetric::Stokes, 1.05);
    assert_eq!(edges.len(), 8);
    assert!(degrees.iter().all(|&d| d == 2));
    let knn = knn_edges(&c, 4, DistanceMetric::Stokes);
    assert_eq!(knn.len(), 16);
}

fn unitary_apply(u: &[Vec<Complex64>], c: &Constellation) -> Constellation {
    let v = c
        .vectors()
        .iter()
        .map(|s| {
            let e = s.entries();
            JonesVector::normalized(
                u.iter()
                    .map(|row| row.iter().zip(e).map(|(a, b)| a * b).sum())
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    Constellation::new(v).unwrap()
}

/// Random 2x2 unitary from angles.
fn su2(a: f64, b: f64, c: f64) -> Vec<Vec<Complex64>> {
    let x = Complex64::from_polar(a.cos(), b);
    let y = Complex64::from_polar(a.sin(), c);
    vec![vec![x, -y.conj()], vec![y, x.conj()]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energy_is_unitarily_invariant(seed in 0u64..1000, a in 0.0f64..PI, b in 0.0f64..PI, c in 0.0f64..PI) {
        let k = random_constellation(2, 10, seed).unwrap();
        let u = su2(a, b, c);
        let e0 = potential_energy(&k, &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
        let e1 = potential_energy(&unitary_apply(&u, &k), &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
        prop_assert!((e0 - e1).abs() <= 1e-11 * e0);
    }

    #[test]
    fn gradient_is_phase_covariant(seed in 0u64..1000, theta in 0.0f64..(2.0 * PI)) {
        let k = random_constellation(3, 6, seed).unwrap();
        let rotated = Constellation::new(k.vectors().iter().map(|v| v.with_global_phase(theta)).collect()).unwrap();
        let g0 = projected_gradient(&k, &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
        let g1 = projected_gradient(&rotated, &Potential::CoulombStokes, Parallelism::Sequential).unwrap();
        let ph = Complex64::from_polar(1.0, theta);
        for (r0, r1) in g0.iter().zip(&g1) {
            for (z0, z1) in r0.iter().zip(r1) {
                prop_assert!((z0 * ph - z1).norm() <= 1e-9 * (1.0 + z0.norm()));
            }
        }
    }

    #[test]
    fn random_constellations_respect_welch(n in 2usize..5, extra in 1usize..20, seed in 0u64..10_000) {
        let m = n + extra;
        let c = random_constellation(n, m, seed).unwrap();
        prop_assert!(c.max_coherence() >= welch_rankin_bound(n, m).unwrap() - 1e-9);
        let cn = stokes_constant(n);
        for d in pair_distances(&c, DistanceMetric::Stokes) {
            prop_assert!(d <= 2.0 * cn + 1e-12);
        }
    }
}
