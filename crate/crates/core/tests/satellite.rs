use fig8_jones::jones_fig8::{volume_normalized_log, EvaluationPoint};
use fig8_jones::satellite::{argmax_color, cable_profile};

#[test]
fn profile_at_eight_hundred() {
    // Maximum over odd c <= 1599 from 1500-digit sums: 0.030424036036845,
    // attained at c = 269, 531, 1069 and 1331.
    let p = cable_profile(800, 1.0).unwrap();
    assert_eq!(p.rows.len(), 800);
    let best = p.rows.iter().filter_map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    assert!((best - 0.030424036036845).abs() < 1e-12);
    let ties: Vec<u64> = p
        .rows
        .iter()
        .filter(|r| r.value.is_some_and(|v| (v - best).abs() < 1e-12))
        .map(|r| r.c)
        .collect();
    assert_eq!(ties, [269, 531, 1069, 1331]);
    assert_eq!(p.argmax(), Some(1331));
    assert!(p.rows.iter().all(|r| r.resolved));
}

#[test]
fn odd_n_peaks_at_n() {
    assert_eq!(argmax_color(101, 1.0).unwrap(), 101);
    let p = cable_profile(101, 1.0).unwrap();
    let direct = volume_normalized_log(&EvaluationPoint::from_r(101, 1.0).unwrap()).unwrap();
    assert_eq!(p.row(101).and_then(|r| r.value), Some(direct));
}

#[test]
fn first_color_is_trivial() {
    let p = cable_profile(30, 0.7).unwrap();
    assert_eq!(p.rows[0].c, 1);
    assert_eq!(p.rows[0].value, Some(0.0));
    assert_eq!(p.rows.last().unwrap().c, 59);
}
