//! The Lobachevsky function and the angle `θ(r)` entering the limit formulas.
//!
//! `Λ(θ) = -∫₀^θ log|2 sin x| dx` is odd and π-periodic. It is evaluated by
//! reducing `θ` to `[-π/2, π/2]` and summing
//!
//! ```text
//! Λ(t) = t - t·log|2t| + t · Σ_{n≥1} ζ(2n) / (n(2n+1)) · (t/π)^{2n}
//! ```
//!
//! whose ratio is at most `1/4` on the reduced interval.

use std::f64::consts::{FRAC_PI_6, PI};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// A real angle in radians. Any finite value is admissible.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Angle(pub f64);

impl Angle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle(v)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Selects the equation `cos θ = cos(2rπ) + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaVariant {
    /// `offset = -1/2`, defined for `r mod 1 ∈ [0, 1/3] ∪ [2/3, 1]`.
    Minus,
    /// `offset = +1/2`, defined for `r mod 1 ∈ [1/6, 5/6]`.
    Plus,
}

impl ThetaVariant {
    pub fn offset(self) -> f64 {
        match self {
            ThetaVariant::Minus => -0.5,
            ThetaVariant::Plus => 0.5,
        }
    }

    fn admissible(self) -> &'static str {
        match self {
            ThetaVariant::Minus => "r mod 1 in [0, 1/3] or [2/3, 1]",
            ThetaVariant::Plus => "r mod 1 in [1/6, 5/6]",
        }
    }
}

const ZETA_TERMS: usize = 64;

/// `ζ(2n)` for `n = 1..=ZETA_TERMS`.
fn zeta_even() -> &'static [f64; ZETA_TERMS] {
    static TABLE: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; ZETA_TERMS];
        for (i, z) in table.iter_mut().enumerate() {
            *z = zeta_even_value(2 * (i + 1) as i32);
        }
        table
    })
}

fn zeta_even_value(s: i32) -> f64 {
    match s {
        2 => PI * PI / 6.0,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        _ => {
            // Euler–Maclaurin with the head summed exactly; the remainder is
            // below 1e-20 for s >= 8 and K = 40.
            const K: i32 = 40;
            let sf = f64::from(s);
            let kf = f64::from(K);
            let head: f64 = (1..K).rev().map(|k| f64::from(k).powi(-s)).sum();
            head + kf.powi(1 - s) / (sf - 1.0)
                + 0.5 * kf.powi(-s)
                + sf * kf.powi(-s - 1) / 12.0
                - sf * (sf + 1.0) * (sf + 2.0) * kf.powi(-s - 3) / 720.0
        }
    }
}

/// `Λ(θ) = -∫₀^θ log|2 sin x| dx`, accurate to `tol`.
pub fn lobachevsky(theta: Angle, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let th = theta.radians();
    if !th.is_finite() {
        return Err(Error::InvalidArgument(format!("angle must be finite, got {th}")));
    }
    let t = th - PI * (th / PI).round();
    if t == 0.0 {
        return Ok(0.0);
    }
    let a = t.abs();
    let q = (a / PI) * (a / PI);
    let zeta = zeta_even();
    let mut series = 0.0;
    let mut power = 1.0;
    for (i, z) in zeta.iter().enumerate() {
        let n = (i + 1) as f64;
        power *= q;
        series += z / (n * (2.0 * n + 1.0)) * power;
        // Coefficients are decreasing, so the tail is dominated by a geometric series.
        let next = zeta_even_value_bound(i + 1) / ((n + 1.0) * (2.0 * n + 3.0)) * power * q;
        if a * next / (1.0 - q) < 0.5 * tol {
            break;
        }
    }
    let value = a - a * (2.0 * a).ln() + a * series;
    Ok(value.copysign(t))
}

fn zeta_even_value_bound(i: usize) -> f64 {
    zeta_even().get(i).copied().unwrap_or(1.0 + 1e-12)
}

/// Smallest non-negative `θ` with `cos θ = cos(2rπ) + offset`, i.e. the arccosine.
pub fn theta_r(r: f64, variant: ThetaVariant) -> Result<Angle> {
    if !r.is_finite() {
        return Err(domain("r", r, variant.admissible()));
    }
    let c = (2.0 * PI * r).cos() + variant.offset();
    // Rounding in cos(2rπ) must not push the exact endpoints out of the domain.
    const SLACK: f64 = 1e-12;
    if c.abs() > 1.0 + SLACK {
        return Err(domain("r", r, variant.admissible()));
    }
    Ok(Angle(c.clamp(-1.0, 1.0).acos()))
}

/// Hyperbolic volume of the figure-eight knot complement, `4Λ(π/6)`.
pub fn fig8_volume() -> f64 {
    let lam = |z: f64| lobachevsky(Angle(z), 1e-15).expect("positive tolerance");
    2.0 * (lam(PI + FRAC_PI_6) - lam(PI - FRAC_PI_6))
}

/// `Λ` with the working tolerance used throughout the crate.
pub(crate) fn lambda(z: f64) -> f64 {
    lobachevsky(Angle(z), 1e-14).expect("positive tolerance")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn lobachevsky_at_zero_and_pi() {
        assert_eq!(lobachevsky(Angle(0.0), 1e-12).unwrap(), 0.0);
        assert_abs_diff_eq!(lobachevsky(Angle(PI), 1e-12).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(matches!(
            lobachevsky(Angle(1.0), 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(lobachevsky(Angle(1.0), -1.0).is_err());
        assert!(lobachevsky(Angle(f64::NAN), 1e-9).is_err());
    }

    #[test]
    fn zeta_table_matches_closed_forms() {
        let z = zeta_even();
        assert_abs_diff_eq!(z[3], PI.powi(8) / 9450.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z[4], PI.powi(10) / 93555.0, epsilon = 1e-15);
        assert!(z.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(z[ZETA_TERMS - 1], 1.0);
    }

    #[test]
    fn lobachevsky_at_pi_over_six() {
        // Frozen from adaptive quadrature of -log(2 sin x) on [0, π/6].
        assert_abs_diff_eq!(
            lobachevsky(Angle(FRAC_PI_6), 1e-10).unwrap(),
            0.507_470_803_204_827,
            epsilon = 1e-10
        );
    }

    #[test]
    fn volume_constant() {
        assert_abs_diff_eq!(fig8_volume(), 2.029883213, epsilon = 1e-8);
        assert_abs_diff_eq!(fig8_volume(), 4.0 * lambda(FRAC_PI_6), epsilon = 1e-13);
        assert_abs_diff_eq!(fig8_volume(), -4.0 * lambda(5.0 * FRAC_PI_6), epsilon = 1e-10);
        assert_abs_diff_eq!(fig8_volume(), 6.0 * lambda(PI / 3.0), epsilon = 1e-10);
    }

    #[test]
    fn theta_examples() {
        assert_abs_diff_eq!(theta_r(1.0, ThetaVariant::Minus).unwrap().0, PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            theta_r(5.0 / 6.0, ThetaVariant::Minus).unwrap().0,
            FRAC_PI_2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(theta_r(1.0 / 6.0, ThetaVariant::Plus).unwrap().0, 0.0, epsilon = 1e-7);
    }

    #[test]
    fn theta_domain_errors_carry_interval() {
        match theta_r(0.5, ThetaVariant::Minus) {
            Err(Error::Domain { admissible, .. }) => assert!(admissible.contains("2/3")),
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(theta_r(0.0, ThetaVariant::Plus).is_err());
        assert!(theta_r(0.5, ThetaVariant::Plus).is_ok());
    }
}
