use mvm::jones::*;
use mvm::{Complex64, JonesVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(n: usize, seed: u64) -> (JonesVector, JonesVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        JonesVector::random(n, &mut rng).unwrap(),
        JonesVector::random(n, &mut rng).unwrap(),
    )
}

#[test]
fn poincare_sphere_examples() {
    let h = JonesVector::basis(2, 0).unwrap();
    assert_eq!(h.stokes().components, vec![0.0, 0.0, 1.0]);
    let r = 1.0 / 2f64.sqrt();
    let d = JonesVector::new(vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)]).unwrap();
    let s = d.stokes().components;
    assert!((s[0] - 1.0).abs() < 1e-15 && s[1].abs() < 1e-15 && s[2].abs() < 1e-15);
    let c = JonesVector::new(vec![Complex64::new(r, 0.0), Complex64::new(0.0, r)]).unwrap();
    let s = c.stokes().components;
    assert!((s[1] - 1.0).abs() < 1e-15);
}

#[test]
fn poincare_round_trip() {
    for k in 0..50 {
        let (s, _) = pair(2, k);
        let back = jones_from_poincare(s.stokes().components.try_into().unwrap()).unwrap();
        assert!((back.inner(&s).norm() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn stokes_vectors_are_unit(n in 2usize..=8, seed in any::<u64>()) {
        let (s, _) = pair(n, seed);
        prop_assert!((s.stokes().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stokes_inner_product_law(n in 2usize..=8, seed in any::<u64>()) {
        let (s, t) = pair(n, seed);
        let g2 = s.inner(&t).norm_sqr();
        let nf = n as f64;
        let dot = s.stokes().dot(&t.stokes());
        prop_assert!((dot - (nf * g2 - 1.0) / (nf - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_gell_mann(n in 2usize..=6, seed in any::<u64>()) {
        let (s, _) = pair(n, seed);
        let basis = GellMannBasis::new(n).unwrap();
        let a = s.stokes();
        let b = basis.stokes(&s).unwrap();
        prop_assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn global_phase_invariance(n in 2usize..=8, seed in any::<u64>(), theta in 0.0f64..6.3) {
        let (s, t) = pair(n, seed);
        let u = s.with_global_phase(theta);
        prop_assert!(s.stokes().distance(&u.stokes()) < 1e-12);
        prop_assert!((dist_dd(&s, &t).unwrap() - dist_dd(&u, &t).unwrap()).abs() < 1e-12);
        prop_assert!((dist_stokes(&s, &t).unwrap() - dist_stokes(&u, &t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn distance_relations(n in 2usize..=8, seed in any::<u64>()) {
        let (s, t) = pair(n, seed);
        let g = pair_geometry(&s, &t).unwrap();
        prop_assert!((g.gamma * g.gamma + g.delta * g.delta - 1.0).abs() < 1e-12);
        prop_assert!((g.rho_minus * g.rho_minus + g.rho_plus * g.rho_plus - 1.0).abs() < 1e-12);
        prop_assert!((2.0 * g.rho_minus * g.rho_plus - g.gamma).abs() < 1e-12);
        let dd = dist_dd(&s, &t).unwrap();
        let hs = dist_hs(&s, &t).unwrap();
        let st = dist_stokes(&s, &t).unwrap();
        let co = dist_coherent(&s, &t).unwrap();
        prop_assert!(dd <= co + 1e-12);
        prop_assert!(dd <= hs + 1e-12);
        prop_assert!((st - stokes_constant(n) * 2f64.sqrt() * hs).abs() < 1e-12);
        prop_assert!((st - s.stokes().distance(&t.stokes())).abs() < 1e-12);
    }

    #[test]
    fn hyperspherical_vectors_are_unit(phis in prop::collection::vec(0.0f64..1.6, 1..6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let thetas: Vec<f64> = phis.iter().map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let c = HypersphericalCoords::new(phis, thetas).unwrap();
        let v = JonesVector::from_hyperspherical(&c).unwrap();
        let norm: f64 = v.entries().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }
}
