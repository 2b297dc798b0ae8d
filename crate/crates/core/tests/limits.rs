use fig8_jones::limits::{
    convergence_table, limit_theorem3, limit_v, limit_w, mahler_growth_integral, predicted_limit, PiecewiseLimitSpec,
    RecordStatus,
};
use fig8_jones::special_functions::fig8_volume;
use proptest::prelude::*;

/// `(x, V(x), W(x))` from `Λ(θ) = Im Li₂(e^{2iθ})/2` at 30 digits.
const FROZEN: [(f64, f64, f64); 6] = [
    (0.1, 0.0, 1.7085709482982861),
    (0.3, 0.93720685476052251, 0.93720685476052251),
    (0.5, 2.0298832128193073, 2.0298832128193073),
    (0.7, 0.93720685476052251, 0.93720685476052251),
    (0.8, 0.93720685476052251, 0.93720685476052251),
    (0.95, 1.9457820509077824, 1.9457820509077824),
];

#[test]
fn matches_polylog_values() {
    for (x, v, w) in FROZEN {
        assert!((limit_v(x).unwrap() - v).abs() < 1e-12, "V({x})");
        assert!((limit_w(x).unwrap() - w).abs() < 1e-12, "W({x})");
    }
}

#[test]
fn endpoints() {
    let vol = fig8_volume();
    assert_eq!(limit_v(0.0).unwrap(), 0.0);
    assert!((limit_v(1.0).unwrap() - vol).abs() < 1e-12);
    assert!((limit_w(0.0).unwrap() - vol).abs() < 1e-12);
    assert!((limit_w(1.0).unwrap() - vol).abs() < 1e-12);
    assert!(limit_v(1.5).is_err());
    assert!(predicted_limit(-0.1).is_err());
}

#[test]
fn integral_of_w() {
    // 1.4501915165305148 by adaptive quadrature at 30 digits.
    let v = mahler_growth_integral(1 << 12).unwrap();
    assert!((v - 1.450191516).abs() < 1e-9);
    assert!((v - 1.4501915165305148).abs() < 1e-10);
}

#[test]
fn tables_validate() {
    PiecewiseLimitSpec::v().validate().unwrap();
    PiecewiseLimitSpec::w().validate().unwrap();
}

#[test]
fn finite_n_near_r_one() {
    let rows = convergence_table(&[0.9, 1.01, 1.1], 8000).unwrap();
    for row in rows {
        assert_eq!(row.status, RecordStatus::Resolved);
        assert!(row.delta.unwrap().abs() < 0.01, "{row:?}");
    }
}

#[test]
fn rejects_negative_r() {
    assert!(convergence_table(&[-1.0], 100).is_err());
    assert!(convergence_table(&[0.5], 1).is_err());
}

proptest! {
    #[test]
    fn proved_limit_agrees_with_tables(r in 0.834f64..1.166) {
        let expected = predicted_limit(r).unwrap();
        prop_assert!((r * limit_theorem3(r).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn integer_limits(k in 1u32..50) {
        let r = f64::from(k);
        prop_assert!((limit_theorem3(r).unwrap() - fig8_volume() / r).abs() < 1e-14);
    }

    #[test]
    fn bounded_by_volume(x in 0.0f64..=1.0) {
        let vol = fig8_volume() + 1e-12;
        let v = limit_v(x).unwrap();
        let w = limit_w(x).unwrap();
        prop_assert!((0.0..=vol).contains(&v));
        prop_assert!((0.0..=vol).contains(&w));
    }
}
