use std::f64::consts::PI;

use fig8_jones::special_functions::{fig8_volume, lobachevsky, theta_r, Angle, ThetaVariant};
use proptest::prelude::*;

/// `-∫₀^θ log|2 sin t| dt` by tanh-sinh quadrature, which absorbs the
/// logarithmic endpoint singularities at `0` and `π`.
fn lobachevsky_tanh_sinh(theta: f64) -> f64 {
    let half = 0.5 * theta;
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    for k in -448i32..=448 {
        let s = f64::from(k) * h;
        let u = 0.5 * PI * s.sinh();
        let w = 0.5 * PI * s.cosh() / u.cosh().powi(2);
        // Distance to the nearer endpoint, computed without cancellation.
        let e = (-2.0 * u.abs()).exp();
        let near = half * 2.0 * e / (1.0 + e);
        if near <= 0.0 || w == 0.0 {
            continue;
        }
        let t = if u < 0.0 { near } else { theta - near };
        sum += w * (2.0 * t.sin().abs()).ln();
    }
    -half * h * sum
}

#[test]
fn matches_quadrature_on_grid() {
    for i in 1..=100 {
        let theta = PI * f64::from(i) / 101.0;
        let series = lobachevsky(Angle(theta), 1e-14).unwrap();
        let quad = lobachevsky_tanh_sinh(theta);
        assert!((series - quad).abs() < 1e-11, "θ = {theta}: {series} vs {quad}");
    }
}

#[test]
fn known_values() {
    assert_eq!(lobachevsky(Angle(0.0), 1e-14).unwrap(), 0.0);
    assert!(lobachevsky(Angle(PI / 2.0), 1e-14).unwrap().abs() < 1e-14);
    // Λ(π/6) = (3/2) Λ(π/3), from the duplication formula Λ(2θ) = 2Λ(θ) + 2Λ(θ + π/2).
    let a = lobachevsky(Angle(PI / 6.0), 1e-15).unwrap();
    let b = lobachevsky(Angle(PI / 3.0), 1e-15).unwrap();
    assert!((a - 1.5 * b).abs() < 1e-14);
    assert!((a - 0.507_470_803_204_826_8).abs() < 1e-14);
}

#[test]
fn volume_constant() {
    let v = fig8_volume();
    assert!((v - 2.029883213).abs() < 1e-8);
    assert!((v - 2.029_883_212_819_307).abs() < 1e-14);
    assert!((v - 6.0 * lobachevsky(Angle(PI / 3.0), 1e-15).unwrap()).abs() < 1e-10);
}

#[test]
fn theta_at_r_one() {
    // cos θ = 1/2 at r = 1.
    let th = theta_r(1.0, ThetaVariant::Minus).unwrap().radians();
    assert!((th - PI / 3.0).abs() < 1e-15);
    assert!(theta_r(0.5, ThetaVariant::Minus).is_err());
    assert!(theta_r(0.5, ThetaVariant::Plus).is_ok());
    assert!(theta_r(f64::NAN, ThetaVariant::Plus).is_err());
}

#[test]
fn rejects_bad_tolerance() {
    assert!(lobachevsky(Angle(1.0), 0.0).is_err());
    assert!(lobachevsky(Angle(f64::INFINITY), 1e-10).is_err());
}

proptest! {
    #[test]
    fn odd(theta in -10.0f64..10.0) {
        let a = lobachevsky(Angle(theta), 1e-14).unwrap();
        let b = lobachevsky(Angle(-theta), 1e-14).unwrap();
        prop_assert!((a + b).abs() < 1e-14);
    }

    #[test]
    fn pi_periodic(theta in -5.0f64..5.0, k in -4i32..4) {
        let a = lobachevsky(Angle(theta), 1e-14).unwrap();
        let b = lobachevsky(Angle(theta + f64::from(k) * PI), 1e-14).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn bounded_by_sixth_volume(theta in -5.0f64..5.0) {
        // max Λ = Λ(π/6).
        let v = lobachevsky(Angle(theta), 1e-14).unwrap();
        prop_assert!(v.abs() <= fig8_volume() / 4.0 + 1e-14);
    }
}
