use std::f64::consts::PI;

use super::asymptotic::AsymptoticCoeffs;
use super::SnrPoint;
use crate::error::{Error, Result};
use crate::jones::PairGeometry;
use crate::specfun::{marcum_q1_scaled, bessel::i0_scaled};

/// Coherences below this are treated as orthogonal.
pub const GAMMA_ZERO: f64 = 1e-12;
/// Hand-off point `γγ_s/2` between the exact and the order-1 asymptotic form.
pub const T_SWITCH: f64 = 50.0;

/// How each pairwise term is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairwiseMethod {
    Exact,
    /// Exact below [`T_SWITCH`], order-1 asymptotic above.
    #[default]
    Auto,
    Asymptotic0,
    Asymptotic1,
    Simple,
}

/// Binary error probability between two equiprobable unit vectors:
/// `Q1(sqrt(γ_s) ρ-, sqrt(γ_s) ρ+) - e^{-γ_s/2} I0(γγ_s/2) / 2`.
///
/// Both terms are evaluated with the common factor `exp(-γ_s(1-γ)/2)`
/// pulled out, so the subtraction happens between O(1) numbers.
pub fn pairwise_error_exact(geom: &PairGeometry, snr: &SnrPoint) -> f64 {
    let gamma = geom.gamma;
    let gamma_s = snr.gamma_s;
    if gamma < GAMMA_ZERO {
        return orthogonal(gamma_s);
    }
    if gamma >= 1.0 {
        return 0.5;
    }
    let root = gamma_s.sqrt();
    let a = root * geom.rho_minus;
    let b = root * geom.rho_plus;
    let x = gamma_s * (1.0 - gamma) / 2.0;
    let gap = b - a;
    let marcum = marcum_q1_scaled(a, b).expect("non-negative arguments") * (x - gap * gap / 2.0).exp();
    let bessel = 0.5 * i0_scaled(gamma * gamma_s / 2.0);
    ((marcum - bessel) * (-x).exp()).clamp(0.0, 0.5)
}

/// Large-SNR expansion of the pairwise error at the given order (0 or 1 in
/// practice; higher orders come from the same recursion).
pub fn pairwise_error_asymptotic(geom: &PairGeometry, snr: &SnrPoint, order: usize) -> Result<f64> {
    if geom.gamma < GAMMA_ZERO {
        return Err(Error::Domain {
            what: "asymptotic pairwise error",
            detail: "orthogonal pair (gamma = 0)".into(),
        });
    }
    if geom.gamma >= 1.0 {
        return Ok(0.5);
    }
    let c = AsymptoticCoeffs::new(geom.gamma, snr.gamma_s, order)?;
    Ok(c.pairwise().clamp(0.0, 0.5))
}

/// `(1/(2 sqrt π)) sqrt((1+γ)/(1-γ)) (γγ_s)^{-1/2} exp(-γ_s(1-γ)/2)`.
pub fn pairwise_error_simple(geom: &PairGeometry, snr: &SnrPoint) -> Result<f64> {
    let gamma = geom.gamma;
    if !(GAMMA_ZERO..1.0).contains(&gamma) {
        return Err(Error::Domain {
            what: "simple asymptotic pairwise error",
            detail: format!("gamma = {gamma}"),
        });
    }
    let gs = snr.gamma_s;
    Ok(1.0 / (2.0 * PI.sqrt()) * ((1.0 + gamma) / (1.0 - gamma)).sqrt() / (gamma * gs).sqrt()
        * (-gs * (1.0 - gamma) / 2.0).exp())
}

/// Pairwise term under `method`. Orthogonal pairs always use the closed
/// form `e^{-γ_s/2}/2` and identical pairs give `1/2`.
pub fn pairwise_error(geom: &PairGeometry, snr: &SnrPoint, method: PairwiseMethod) -> f64 {
    if geom.gamma < GAMMA_ZERO {
        return orthogonal(snr.gamma_s);
    }
    if geom.gamma >= 1.0 {
        return 0.5;
    }
    match method {
        PairwiseMethod::Exact => pairwise_error_exact(geom, snr),
        PairwiseMethod::Auto => {
            if geom.gamma * snr.gamma_s / 2.0 <= T_SWITCH {
                pairwise_error_exact(geom, snr)
            } else {
                asymptotic_ok(geom, snr, 1)
            }
        }
        PairwiseMethod::Asymptotic0 => asymptotic_ok(geom, snr, 0),
        PairwiseMethod::Asymptotic1 => asymptotic_ok(geom, snr, 1),
        PairwiseMethod::Simple => pairwise_error_simple(geom, snr).expect("gamma checked above"),
    }
}

fn asymptotic_ok(geom: &PairGeometry, snr: &SnrPoint, order: usize) -> f64 {
    pairwise_error_asymptotic(geom, snr, order).expect("gamma checked above")
}

fn orthogonal(gamma_s: f64) -> f64 {
    0.5 * (-gamma_s / 2.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snr(gs: f64) -> SnrPoint {
        SnrPoint::from_symbol(gs, 1.0).unwrap()
    }

    fn geom(g: f64) -> PairGeometry {
        PairGeometry::from_gamma(g)
    }

    #[test]
    fn orthogonal_and_identical() {
        let p = pairwise_error_exact(&geom(0.0), &snr(10.0));
        assert!((p - 0.5 * (-5.0f64).exp()).abs() < 1e-18);
        assert!((p - 3.36897e-3).abs() < 1e-8);
        for &gs in &[0.1, 1.0, 10.0, 1000.0] {
            assert_eq!(pairwise_error_exact(&geom(1.0), &snr(gs)), 0.5);
        }
        // nearly identical pair goes through the series
        let p = pairwise_error_exact(&geom(1.0 - 1e-14), &snr(10.0));
        assert!((p - 0.5).abs() < 1e-6);
    }

    #[test]
    fn tiny_gamma_is_orthogonal_branch() {
        let p0 = pairwise_error_exact(&geom(0.0), &snr(7.0));
        let p1 = pairwise_error_exact(&geom(1e-13), &snr(7.0));
        assert_eq!(p0, p1);
        let p2 = pairwise_error_exact(&geom(1e-6), &snr(7.0));
        assert!((p2 / p0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn monotone_in_snr_and_gamma() {
        for &g in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let mut prev = 1.0;
            for i in 1..200 {
                let p = pairwise_error_exact(&geom(g), &snr(i as f64 * 0.5));
                assert!(p < prev, "g={g} gs={}", i as f64 * 0.5);
                prev = p;
            }
        }
        for &gs in &[1.0, 5.0, 20.0, 80.0] {
            let mut prev = 0.0;
            for i in 1..100 {
                let p = pairwise_error_exact(&geom(i as f64 / 100.0), &snr(gs));
                assert!(p > prev, "gs={gs} g={}", i as f64 / 100.0);
                prev = p;
            }
        }
    }

    #[test]
    fn asymptotic_examples() {
        let exact = pairwise_error_exact(&geom(0.5), &snr(200.0));
        let a1 = pairwise_error_asymptotic(&geom(0.5), &snr(200.0), 1).unwrap();
        assert!((a1 / exact - 1.0).abs() < 1e-3);

        let exact = pairwise_error_exact(&geom(0.95), &snr(500.0));
        let a1 = pairwise_error_asymptotic(&geom(0.95), &snr(500.0), 1).unwrap();
        assert!((a1 / exact - 1.0).abs() < 1e-2);

        let mut prev = f64::INFINITY;
        for &gs in &[50.0, 100.0, 200.0, 400.0] {
            let a0 = pairwise_error_asymptotic(&geom(0.5), &snr(gs), 0).unwrap();
            let a1 = pairwise_error_asymptotic(&geom(0.5), &snr(gs), 1).unwrap();
            let diff = ((a0 - a1) / a1).abs();
            assert!(diff < prev);
            prev = diff;
        }
        assert!(pairwise_error_asymptotic(&geom(0.0), &snr(10.0), 1).is_err());
    }

    #[test]
    fn simple_asymptote() {
        let g = 0.5;
        let gs = 100.0;
        let exact = pairwise_error_exact(&geom(g), &snr(gs));
        let s = pairwise_error_simple(&geom(g), &snr(gs)).unwrap();
        assert!((s / exact - 1.0).abs() < 5e-2, "{s} vs {exact}");
        // leading exponent is exp(-γ_s d_dd^2 / 4)
        let d_dd2 = 2.0 * (1.0 - g);
        let prefactor = 1.0 / (2.0 * PI.sqrt()) * ((1.0 + g) / (1.0 - g)).sqrt() / (g * gs).sqrt();
        assert!((s / prefactor - (-gs * d_dd2 / 4.0).exp()).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 1..100 {
            let v = pairwise_error_simple(&geom(0.4), &snr(i as f64)).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(pairwise_error_simple(&geom(0.0), &snr(10.0)).is_err());
        assert!(pairwise_error_simple(&geom(1.0), &snr(10.0)).is_err());
    }

    #[test]
    fn truncation_remark_effect_vanishes() {
        // dropping the (γγ_s)^{-3/2} term from the order-1 form
        let g = 0.5;
        let mut prev = f64::INFINITY;
        for &gs in &[1e2, 1e3, 1e4] {
            let c = AsymptoticCoeffs::new(g, gs, 1).unwrap();
            let full = c.pairwise_scaled();
            let dropped = full + (g * gs).powf(-1.5) / (8.0 * PI.sqrt());
            let rel = ((dropped - full) / full).abs();
            assert!(rel < prev);
            prev = rel;
        }
    }

    #[test]
    fn auto_switch_continuity() {
        for i in 0..=17 {
            let g = 0.1 + 0.05 * i as f64;
            let gs = 2.0 * T_SWITCH / g;
            let exact = pairwise_error_exact(&geom(g), &snr(gs));
            let a1 = pairwise_error_asymptotic(&geom(g), &snr(gs), 1).unwrap();
            assert!(((exact - a1) / exact).abs() <= 1e-2, "g={g}");
            let below = pairwise_error(&geom(g), &snr(gs * (1.0 - 1e-9)), PairwiseMethod::Auto);
            let above = pairwise_error(&geom(g), &snr(gs * (1.0 + 1e-9)), PairwiseMethod::Auto);
            assert!(((below - above) / exact).abs() <= 1e-2);
        }
    }
}
