//! The colored Jones polynomial of the figure-eight knot on the unit circle.
//!
//! With `t = exp(2πix)` the Habiro–Le expansion becomes a sum of products of
//! real factors,
//!
//! ```text
//! J_N(E; t) = Σ_{k=0}^{N-1} f(k),   f(k) = Π_{j=1}^{k} g(j),
//! g(j) = 2cos(2πxN) - 2cos(2πxj) = -4 sin(πx(N+j)) sin(πx(N-j)).
//! ```
//!
//! Every `f(k)` is carried as a [`SignedLogValue`]. The factors are computed
//! from the product form so that the zeros at `x(N ± j) ∈ ℤ` come out exactly.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::signed_log::{signed_log_sum, CompensatedSum, SignedLogValue};
use crate::special_functions::{theta_r, ThetaVariant};

/// A color `N` and a point `t = exp(2πix)` on the unit circle.
///
/// The parameter `r = N·x` gives `t = exp(2πir/N)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvaluationPoint {
    n: u64,
    x: f64,
}

impl EvaluationPoint {
    pub fn new(n: u64, x: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("color N must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&x) {
            return Err(domain("x", x, "[0, 1)"));
        }
        Ok(Self { n, x })
    }

    /// The point `t = exp(2πir/N)`; requires `0 <= r < N`.
    pub fn from_r(n: u64, r: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("color N must be at least 1".into()));
        }
        if !(0.0..n as f64).contains(&r) {
            return Err(domain("r", r, format!("[0, {n})")));
        }
        Self::new(n, r / n as f64)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn r(&self) -> f64 {
        self.n as f64 * self.x
    }

    /// `x` folded into `[0, 1/2]`; `J_N` is invariant under `x ↦ 1 - x`.
    fn folded_x(&self) -> f64 {
        if self.x > 0.5 {
            1.0 - self.x
        } else {
            self.x
        }
    }

    fn factor(&self, j: u64) -> SignedLogValue {
        let x = self.folded_x();
        let (n, j) = (self.n as f64, j as f64);
        let s_plus = sin_pi(x * (n + j));
        let s_minus = sin_pi(x * (n - j));
        if s_plus == 0.0 || s_minus == 0.0 {
            return SignedLogValue::ZERO;
        }
        let sign = if s_plus * s_minus > 0.0 { -1 } else { 1 };
        SignedLogValue::new(sign, 4f64.ln() + s_plus.abs().ln() + s_minus.abs().ln())
            .expect("non-zero factor has finite log")
    }
}

/// `sin(πy)`, exactly zero when `y` is an integer up to a few ulps of rounding.
fn sin_pi(y: f64) -> f64 {
    let n = y.round();
    let d = y - n;
    if d.abs() <= 4.0 * f64::EPSILON * y.abs() {
        return 0.0;
    }
    let s = (PI * d).sin();
    if (n % 2.0).abs() == 1.0 {
        -s
    } else {
        s
    }
}

/// The `j`-th real factor `g(j) = 2cos(2πxN) - 2cos(2πxj)`, for `1 <= j <= N`.
pub fn term_g(j: u64, p: &EvaluationPoint) -> Result<f64> {
    if j == 0 || j > p.n {
        return Err(Error::InvalidArgument(format!(
            "factor index {j} outside 1..={}",
            p.n
        )));
    }
    Ok(p.factor(j).to_f64())
}

/// `f(0), …, f(N-1)`. Log-magnitudes are accumulated with compensation.
pub fn partial_products(p: &EvaluationPoint) -> Vec<SignedLogValue> {
    let n = p.n as usize;
    let mut out = Vec::with_capacity(n);
    out.push(SignedLogValue::ONE);
    let mut logs = CompensatedSum::new();
    let mut sign = 1i8;
    for j in 1..p.n {
        let g = p.factor(j);
        if g.is_zero() {
            out.resize(n, SignedLogValue::ZERO);
            break;
        }
        logs.add(g.logabs());
        sign *= g.sign();
        out.push(SignedLogValue::new(sign, logs.value()).expect("finite partial log"));
    }
    out
}

/// `f(k) = Π_{j=1}^{k} g(j)` for `0 <= k <= N-1`.
pub fn partial_product_f(k: u64, p: &EvaluationPoint) -> Result<SignedLogValue> {
    if k >= p.n {
        return Err(Error::InvalidArgument(format!(
            "partial product index {k} outside 0..{}",
            p.n
        )));
    }
    let mut logs = CompensatedSum::new();
    let mut sign = 1i8;
    for j in 1..=k {
        let g = p.factor(j);
        if g.is_zero() {
            return Ok(SignedLogValue::ZERO);
        }
        logs.add(g.logabs());
        sign *= g.sign();
    }
    SignedLogValue::new(sign, logs.value())
}

/// `J_N` together with the largest term and an estimate of the rounding floor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JonesSum {
    pub value: SignedLogValue,
    /// `f(k*)` with `|f(k*)| = max_k |f(k)|`.
    pub peak: SignedLogValue,
    pub peak_index: usize,
    /// `ln` of the estimated absolute rounding error of the computed sum.
    pub noise_floor_log: f64,
}

impl JonesSum {
    /// False when `|J_N|` is not above the rounding floor. The signed terms
    /// then cancel beyond what double precision resolves, and `value` only
    /// bounds `|J_N|` from above.
    pub fn is_resolved(&self) -> bool {
        !self.value.is_zero() && self.value.logabs() > self.noise_floor_log
    }

    /// `ln(max_k |f(k)| / |J_N|)`, the number of nats lost to cancellation.
    pub fn cancellation(&self) -> f64 {
        self.peak.logabs() - self.value.logabs()
    }
}

/// Sum with diagnostics; see [`colored_jones`].
pub fn colored_jones_sum(p: &EvaluationPoint) -> JonesSum {
    let terms = partial_products(p);
    let (peak_index, peak) = argmax_abs(&terms);
    let value = signed_log_sum(&terms);
    let top = peak.logabs();
    // Each f(k) carries a relative error of roughly (k + |ln f(k)|) ulps from
    // the factor logs, their running sum and the final exponential.
    let weight: f64 = terms
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero())
        .map(|(k, t)| (t.logabs() - top).exp() * (2.0 + k as f64 + t.logabs().abs()))
        .sum();
    JonesSum {
        value,
        peak,
        peak_index,
        noise_floor_log: top + (f64::EPSILON * weight).ln(),
    }
}

/// `J_N(E; exp(2πix))`, exactly real on the unit circle.
pub fn colored_jones(p: &EvaluationPoint) -> SignedLogValue {
    signed_log_sum(&partial_products(p))
}

/// `2rπ·ln|J_N| / N` with `r = N·x`; its limit in `N` is `V(r)` or `W(r - ⌊r⌋)`.
pub fn normalized_log(p: &EvaluationPoint) -> Result<f64> {
    let j = colored_jones(p);
    if j.is_zero() {
        return Err(Error::Vanishing(format!("N = {}, x = {}", p.n, p.x)));
    }
    Ok(2.0 * p.r() * PI * j.logabs() / p.n as f64)
}

/// `2π·ln|J_N| / N`, the normalization whose limit at integer `r` is `Vol/r`.
pub fn volume_normalized_log(p: &EvaluationPoint) -> Result<f64> {
    let j = colored_jones(p);
    if j.is_zero() {
        return Err(Error::Vanishing(format!("N = {}, x = {}", p.n, p.x)));
    }
    Ok(2.0 * PI * j.logabs() / p.n as f64)
}

/// Index-scale positions `A < B < C` of the sign change and the two `|g| = 1` crossings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalIndices {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `A = N(1-r)/r`, `B = Nθ(r)/(2rπ)`, `C = N(2π-θ(r))/(2rπ)` for `5/6 < r < 1`.
pub fn critical_indices(r: f64, n: u64) -> Result<CriticalIndices> {
    if !(r > 5.0 / 6.0 && r < 1.0) {
        return Err(domain("r", r, "(5/6, 1)"));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("color N must be at least 1".into()));
    }
    let theta = theta_r(r, ThetaVariant::Minus)?.radians();
    let nf = n as f64;
    let idx = CriticalIndices {
        a: nf * (1.0 - r) / r,
        b: nf * theta / (2.0 * r * PI),
        c: nf * (2.0 * PI - theta) / (2.0 * r * PI),
    };
    if !(0.0 < idx.a && idx.a < idx.b && idx.b < idx.c && idx.c < nf) {
        return Err(Error::Numeric(format!(
            "critical indices out of order at r = {r}: {idx:?}"
        )));
    }
    Ok(idx)
}

/// Index and value of `max_k |f(k)|` over `0 <= k <= N-1`, by exhaustive scan.
pub fn f_max(p: &EvaluationPoint) -> (usize, SignedLogValue) {
    argmax_abs(&partial_products(p))
}

fn argmax_abs(terms: &[SignedLogValue]) -> (usize, SignedLogValue) {
    let mut best = (0, terms[0]);
    for (k, t) in terms.iter().enumerate().skip(1) {
        if t.logabs() > best.1.logabs() {
            best = (k, *t);
        }
    }
    best
}
