//! Extended-precision evaluation of `J_N(E; e^{2πix})` at rational `x`.
//!
//! Where the signed terms cancel below the double-precision floor, the sum
//! is badly conditioned in `x` as well, so it is recomputed at the rational
//! number the `f64` stands for. Precision is doubled until the result clears
//! its own rounding floor.

use std::f64::consts::LN_2;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::error::{Error, Result};
use crate::jones_fig8::{colored_jones_sum, EvaluationPoint};
use crate::signed_log::{CompensatedSum, SignedLogValue};

const RM: RoundingMode = RoundingMode::ToEven;
const MAX_DENOMINATOR: u128 = 1 << 40;

/// Bits used before giving up in [`colored_jones_adaptive`] by default.
pub const DEFAULT_MAX_BITS: usize = 1 << 15;

/// The simplest fraction `p/q` within `4ε|v|` of `v >= 0`, via continued fractions.
pub fn rational_approximation(v: f64) -> Option<(u64, u64)> {
    if !(v >= 0.0 && v.is_finite()) {
        return None;
    }
    let tol = 4.0 * f64::EPSILON * v;
    let (mut p0, mut p1) = (0u128, 1u128);
    let (mut q0, mut q1) = (1u128, 0u128);
    let mut rem = v;
    for _ in 0..64 {
        let a = rem.floor();
        if a > 1e15 {
            return None;
        }
        let a_int = a as u128;
        let (p2, q2) = (a_int * p1 + p0, a_int * q1 + q0);
        if q2 > MAX_DENOMINATOR {
            return None;
        }
        if (v - p2 as f64 / q2 as f64).abs() <= tol {
            return Some((p2 as u64, q2 as u64));
        }
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
        let frac = rem - a;
        if frac <= 0.0 {
            return None;
        }
        rem = 1.0 / frac;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedSum {
    pub value: SignedLogValue,
    pub bits: usize,
    pub noise_floor_log: f64,
}

impl ExtendedSum {
    pub fn is_resolved(&self) -> bool {
        !self.value.is_zero() && self.value.logabs() > self.noise_floor_log
    }
}

fn ln_abs(v: &BigFloat) -> SignedLogValue {
    if v.is_zero() {
        return SignedLogValue::ZERO;
    }
    let e = v.exponent().expect("finite value");
    let top = *v.mantissa_digits().and_then(|m| m.last()).expect("normalized mantissa");
    let logabs = f64::from(e) * LN_2 + (top as f64 / 2f64.powi(64)).ln();
    let sign = if v.sign() == Some(Sign::Neg) { -1 } else { 1 };
    SignedLogValue::new(sign, logabs).expect("finite logarithm")
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `J_N(E; e^{2πi·num/den})` summed with `bits` of working precision.
pub fn colored_jones_rational(n: u64, num: u64, den: u64, bits: usize) -> Result<ExtendedSum> {
    if n == 0 {
        return Err(Error::InvalidArgument("color N must be at least 1".into()));
    }
    if den == 0 || num >= den {
        return Err(Error::InvalidArgument(format!("need 0 <= num < den, got {num}/{den}")));
    }
    if bits < 64 {
        return Err(Error::InvalidArgument(format!("need at least 64 bits, got {bits}")));
    }
    let g = gcd(num, den);
    let (mut num, den) = (num / g, den / g);
    if 2 * u128::from(num) > u128::from(den) {
        num = den - num;
    }
    // f(k) = 0 from the first j with den | N - j or den | N + j.
    let first = |r: u64| if r == 0 { den } else { r };
    let j0 = first(n % den).min(first((den - n % den) % den));
    let terms = n.min(j0);

    let wp = bits + 64 + 2 * (64 - n.leading_zeros() as usize);
    let mut cc = Consts::new().map_err(|e| Error::Numeric(format!("constant cache: {e:?}")))?;
    let two_pi = cc.pi(wp, RM).mul(&BigFloat::from_u64(2, wp), wp, RM);
    let angle = |m: u64, cc: &mut Consts| {
        two_pi
            .mul(&BigFloat::from_u64(m, wp), wp, RM)
            .div(&BigFloat::from_u64(den, wp), wp, RM)
            .cos(wp, RM, cc)
    };
    let two = BigFloat::from_u64(2, wp);
    // d_j = 2cos(jθ) obeys d_{j+1} = d_1·d_j - d_{j-1}.
    let d1 = angle(num, &mut cc).mul(&two, wp, RM);
    let a = angle(((u128::from(num) * u128::from(n)) % u128::from(den)) as u64, &mut cc).mul(&two, wp, RM);

    let mut f = BigFloat::from_u64(1, wp);
    let mut sum = f.clone();
    let mut logs = Vec::with_capacity(terms as usize);
    logs.push(0.0);
    let (mut d_prev, mut d_cur) = (two, d1.clone());
    for _ in 1..terms {
        f = f.mul(&a.sub(&d_cur, wp, RM), wp, RM);
        sum = sum.add(&f, wp, RM);
        logs.push(ln_abs(&f).logabs());
        let next = d1.mul(&d_cur, wp, RM).sub(&d_prev, wp, RM);
        (d_prev, d_cur) = (d_cur, next);
    }
    if sum.is_nan() || sum.is_inf() {
        return Err(Error::Numeric(format!("extended sum overflowed at N = {n}")));
    }
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weight: CompensatedSum = logs
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_finite())
        .map(|(k, l)| (l - top).exp() * (2.0 + 2.0 * k as f64))
        .collect();
    Ok(ExtendedSum {
        value: ln_abs(&sum),
        bits,
        noise_floor_log: top + weight.value().ln() - bits as f64 * LN_2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended { bits: usize },
}

/// `J_N` at the best precision needed, with its provenance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: SignedLogValue,
    pub resolved: bool,
    pub precision: Precision,
}

/// Double precision when that resolves the sum, otherwise the rational
/// recomputation with `128, 256, ...` bits up to `max_bits`.
pub fn colored_jones_adaptive(p: &EvaluationPoint, max_bits: usize) -> Evaluation {
    let double = colored_jones_sum(p);
    let fallback = Evaluation {
        value: double.value,
        resolved: double.is_resolved(),
        precision: Precision::Double,
    };
    if fallback.resolved {
        return fallback;
    }
    let Some((num, den)) = rational_approximation(p.x()) else {
        return fallback;
    };
    let mut bits = 128;
    let mut last = None;
    while bits <= max_bits {
        match colored_jones_rational(p.n(), num, den, bits) {
            Ok(s) if s.is_resolved() => {
                return Evaluation {
                    value: s.value,
                    resolved: true,
                    precision: Precision::Extended { bits },
                }
            }
            Ok(s) => last = Some(s),
            Err(_) => return fallback,
        }
        bits *= 2;
    }
    match last {
        Some(s) => Evaluation {
            value: s.value,
            resolved: false,
            precision: Precision::Extended { bits: s.bits },
        },
        None => fallback,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn recovers_intended_fractions() {
        assert_eq!(rational_approximation(0.0), Some((0, 1)));
        assert_eq!(rational_approximation(0.95 / 2000.0), Some((19, 40000)));
        assert_eq!(rational_approximation(1.0 / 800.0), Some((1, 800)));
        assert_eq!(rational_approximation(4.37 / 8000.0), Some((437, 800000)));
        assert_eq!(rational_approximation(-1.0), None);
    }

    #[test]
    fn logs_of_big_floats() {
        let v = BigFloat::from_f64(-3.0, 128);
        let l = ln_abs(&v);
        assert_eq!(l.sign(), -1);
        assert_abs_diff_eq!(l.logabs(), 3f64.ln(), epsilon = 1e-15);
        assert!(ln_abs(&BigFloat::from_u64(0, 128)).is_zero());
    }

    #[test]
    fn small_exact_values() {
        // J_2 at t = -1 is 5, J_3 at a primitive cube root is 13.
        let j2 = colored_jones_rational(2, 1, 2, 128).unwrap();
        assert_abs_diff_eq!(j2.value.to_f64(), 5.0, epsilon = 1e-12);
        let j3 = colored_jones_rational(3, 1, 3, 128).unwrap();
        assert_abs_diff_eq!(j3.value.to_f64(), 13.0, epsilon = 1e-12);
        assert!(j3.is_resolved());
    }

    #[test]
    fn agrees_with_double_where_resolved() {
        let p = EvaluationPoint::from_r(500, 0.9).unwrap();
        let d = colored_jones_sum(&p);
        assert!(d.is_resolved());
        let e = colored_jones_rational(500, 9, 5000, 256).unwrap();
        assert_eq!(e.value.sign(), d.value.sign());
        assert!((e.value.logabs() - d.value.logabs()).abs() < 1e-9);
    }

    #[test]
    fn adaptive_path_reports_precision() {
        let easy = colored_jones_adaptive(&EvaluationPoint::from_r(200, 1.0).unwrap(), DEFAULT_MAX_BITS);
        assert_eq!(easy.precision, Precision::Double);
        let hard = colored_jones_adaptive(&EvaluationPoint::from_r(2000, 0.5).unwrap(), DEFAULT_MAX_BITS);
        assert!(hard.resolved);
        assert!(matches!(hard.precision, Precision::Extended { .. }));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(colored_jones_rational(0, 0, 1, 128).is_err());
        assert!(colored_jones_rational(3, 3, 3, 128).is_err());
        assert!(colored_jones_rational(3, 1, 3, 8).is_err());
    }
}
