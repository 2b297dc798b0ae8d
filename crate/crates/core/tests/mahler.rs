use fig8_jones::checks::{cyclotomic_samples, random_polynomials};
use fig8_jones::error::Error;
use fig8_jones::mahler::{
    homology_order, homology_order_float, is_alexander_normalized, log_mahler_quadrature, mahler_from_roots, mahler_report,
    silver_williams_convergence, ConstantSampler, JonesSampler, LaurentPolynomialZ,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn poly(s: &str) -> LaurentPolynomialZ {
    s.parse().unwrap()
}

/// `L_{2N} - 2` from the Lucas recurrence.
fn lucas_order(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::from(2u32), BigUint::from(1u32));
    for _ in 0..2 * n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a - 2u32
}

#[test]
fn figure_eight_measure() {
    let golden = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let f = LaurentPolynomialZ::figure_eight();
    assert!(is_alexander_normalized(&f));
    assert!((mahler_from_roots(&f, 1e-9).unwrap() - golden).abs() < 1e-13);
    assert!((log_mahler_quadrature(&f, 512).unwrap() - golden).abs() < 1e-12);
}

#[test]
fn constants() {
    assert_eq!(log_mahler_quadrature(&ConstantSampler(1.0), 16).unwrap(), 0.0);
    assert!((log_mahler_quadrature(&ConstantSampler(-3.0), 16).unwrap() - 3f64.ln()).abs() < 1e-15);
    assert!(matches!(log_mahler_quadrature(&ConstantSampler(0.0), 16), Err(Error::Singular { .. })));
}

#[test]
fn cyclotomic_products_vanish() {
    let samples = cyclotomic_samples();
    for f in &samples {
        assert!(mahler_from_roots(f, 1e-9).unwrap().abs() < 1e-9, "{f}");
    }
    let product = samples[3].checked_mul(&samples[5]).unwrap().checked_mul(&samples[0]).unwrap();
    assert!(mahler_from_roots(&product, 1e-9).unwrap().abs() < 1e-9);
    let squared = samples[6].checked_mul(&samples[6]).unwrap();
    assert!(mahler_from_roots(&squared, 1e-9).unwrap().abs() < 1e-9);
}

#[test]
fn root_and_quadrature_paths_agree() {
    // Roots on the circle make the integrand singular and the rule first order.
    for f in random_polynomials(40, 7) {
        let report = mahler_report(&f, 1e-6).unwrap();
        let b = log_mahler_quadrature(&f, 1 << 14).unwrap();
        let tol = if report.near_unit_circle == 0 { 1e-9 } else { 1e-3 };
        assert!((report.value - b).abs() < tol, "{f}: {} vs {b}", report.value);
    }
}

#[test]
fn lucas_orders() {
    let f = LaurentPolynomialZ::figure_eight();
    for (n, expected) in [(2u64, 5u32), (3, 16), (4, 45), (5, 121), (6, 320)] {
        assert_eq!(homology_order(&f, n).unwrap(), BigUint::from(expected));
        assert_eq!(homology_order_float(&f, n).unwrap(), f64::from(expected));
    }
    for n in 2..=500u64 {
        let order = homology_order(&f, n).unwrap();
        assert_ne!(order, BigUint::from(0u32));
        assert_eq!(order, lucas_order(n), "N = {n}");
    }
}

#[test]
fn float_homology_refuses_large_orders() {
    let f = LaurentPolynomialZ::figure_eight();
    assert!(matches!(homology_order_float(&f, 60), Err(Error::Precision(_))));
}

#[test]
fn branched_cover_growth() {
    let rows = silver_williams_convergence(&LaurentPolynomialZ::figure_eight(), &[10, 100]).unwrap();
    assert!(rows[1].delta.unwrap().abs() < 0.02);
    assert!(rows[1].delta.unwrap().abs() < rows[0].delta.unwrap().abs());
}

#[test]
fn jones_quadrature_matches_polynomial() {
    // J_2 and J_3 expanded in t.
    let j2 = poly("1,-1,1,-1,1@-2");
    let j3 = poly("1,-1,-1,2,-1,-1,3,-1,-1,2,-1,-1,1@-6");
    for (n, f) in [(2, j2), (3, j3)] {
        let exact = mahler_from_roots(&f, 1e-9).unwrap();
        for extended in [false, true] {
            let q = log_mahler_quadrature(&JonesSampler { n, extended }, 1 << 14).unwrap();
            assert!((q - exact).abs() < 1e-3, "N = {n}: {q} vs {exact}");
        }
    }
}

fn small_poly() -> impl Strategy<Value = LaurentPolynomialZ> {
    (prop::collection::vec(-5i64..=5, 2..6), -2i64..=0).prop_filter_map("non-zero ends", |(c, low)| {
        (c[0] != 0 && *c.last().unwrap() != 0).then(|| LaurentPolynomialZ::new(low, c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplicative(f in small_poly(), g in small_poly()) {
        let fg = f.checked_mul(&g).unwrap();
        let lhs = mahler_from_roots(&fg, 1e-9).unwrap();
        let rhs = mahler_from_roots(&f, 1e-9).unwrap() + mahler_from_roots(&g, 1e-9).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9, "{} * {}: {} vs {}", f, g, lhs, rhs);
    }

    #[test]
    fn at_least_log_leading(f in small_poly()) {
        let m = mahler_from_roots(&f, 1e-9).unwrap();
        prop_assert!(m >= (f.leading().abs() as f64).ln() - 1e-12);
        prop_assert!(m >= (f.coefficients()[0].abs() as f64).ln() - 1e-12);
    }

    #[test]
    fn parse_round_trip(f in small_poly()) {
        prop_assert_eq!(f.to_string().parse::<LaurentPolynomialZ>().unwrap(), f);
    }
}
