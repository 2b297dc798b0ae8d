//! Real numbers stored as `(sign, ln|value|)`.
//!
//! Products of tens of thousands of factors of size `O(1)` leave the range of
//! `f64` long before the interesting structure shows up, so every quantity
//! built from the Habiro–Le products is carried in this form. Sums are formed
//! by peeling off the largest magnitude and accumulating the signed ratios
//! with Neumaier's compensated summation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    logabs: f64,
}

impl SignedLogValue {
    pub const ZERO: Self = Self {
        sign: 0,
        logabs: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        logabs: 0.0,
    };

    /// `sign` must be -1, 0 or +1; `logabs` must be finite unless `sign` is 0.
    pub fn new(sign: i8, logabs: f64) -> Result<Self> {
        match sign {
            0 => Ok(Self::ZERO),
            -1 | 1 if logabs.is_finite() => Ok(Self { sign, logabs }),
            -1 | 1 => Err(Error::InvalidArgument(format!(
                "non-finite log-magnitude {logabs} for a non-zero value"
            ))),
            _ => Err(Error::InvalidArgument(format!("sign {sign} not in {{-1, 0, 1}}"))),
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || v.is_nan() {
            Self::ZERO
        } else {
            Self {
                sign: if v > 0.0 { 1 } else { -1 },
                logabs: v.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `ln|value|`, or negative infinity for zero.
    pub fn logabs(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.logabs
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Converts back to `f64`; overflows to `±inf` for large magnitudes.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logabs.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            sign: self.sign.abs(),
            logabs: self.logabs,
        }
    }

    /// Compares magnitudes; zero is smaller than everything else.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.logabs().total_cmp(&other.logabs())
    }
}

impl Mul for SignedLogValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign: self.sign * rhs.sign,
                logabs: self.logabs + rhs.logabs,
            }
        }
    }
}

impl fmt::Display for SignedLogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "+exp({})", self.logabs),
            _ => write!(f, "-exp({})", self.logabs),
        }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// Signed log-sum-exp: `Σ terms` as a `SignedLogValue`.
///
/// The largest magnitude is factored out and the ratios are summed left to
/// right with compensation, so the reduction order is fixed by the slice order.
pub fn signed_log_sum(terms: &[SignedLogValue]) -> SignedLogValue {
    let peak = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.logabs)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return SignedLogValue::ZERO;
    }
    let ratio: CompensatedSum = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| f64::from(t.sign) * (t.logabs - peak).exp())
        .collect();
    let s = ratio.value();
    if s == 0.0 {
        SignedLogValue::ZERO
    } else {
        SignedLogValue {
            sign: if s > 0.0 { 1 } else { -1 },
            logabs: peak + s.abs().ln(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert!(SignedLogValue::ZERO.is_zero());
        assert_eq!(SignedLogValue::ONE.to_f64(), 1.0);
        assert_eq!(SignedLogValue::from_f64(0.0), SignedLogValue::ZERO);
        assert!(SignedLogValue::new(2, 0.0).is_err());
        assert!(SignedLogValue::new(1, f64::NAN).is_err());
        assert_eq!(SignedLogValue::new(0, f64::NAN).unwrap(), SignedLogValue::ZERO);
    }

    #[test]
    fn product_far_beyond_f64_range() {
        let big = SignedLogValue::new(-1, 800.0).unwrap();
        let p = big * big * big;
        assert_eq!(p.sign(), -1);
        assert!((p.logabs() - 2400.0).abs() < 1e-12);
        assert_eq!((p * SignedLogValue::ZERO).sign(), 0);
    }

    #[test]
    fn cancelling_sum_is_exactly_zero() {
        let a = SignedLogValue::new(1, 1000.0).unwrap();
        let b = SignedLogValue::new(-1, 1000.0).unwrap();
        assert!(signed_log_sum(&[a, b]).is_zero());
        assert!(signed_log_sum(&[]).is_zero());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    proptest! {
        #[test]
        fn sum_matches_plain_arithmetic(values in prop::collection::vec(-1e6f64..1e6, 1..40)) {
            let terms: Vec<_> = values.iter().map(|&v| SignedLogValue::from_f64(v)).collect();
            let expected: f64 = values.iter().sum();
            let got = signed_log_sum(&terms).to_f64();
            let scale: f64 = values.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
            prop_assert!((got - expected).abs() <= 1e-12 * scale);
        }

        #[test]
        fn scaling_shifts_the_log(values in prop::collection::vec(-10f64..10.0, 1..20), shift in -700f64..700.0) {
            let terms: Vec<_> = values.iter().map(|&v| SignedLogValue::from_f64(v)).collect();
            let scale = SignedLogValue::new(1, shift).unwrap();
            let scaled: Vec<_> = terms.iter().map(|&t| t * scale).collect();
            let a = signed_log_sum(&terms);
            let b = signed_log_sum(&scaled);
            prop_assert_eq!(a.sign(), b.sign());
            if !a.is_zero() {
                prop_assert!((b.logabs() - a.logabs() - shift).abs() < 1e-9);
            }
        }
    }
}
