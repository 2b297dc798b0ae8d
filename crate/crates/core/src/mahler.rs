//! Logarithmic Mahler measures, homology orders of cyclic branched covers and
//! the growth of `m(J_N)`.
//!
//! `m(f)` is computed two ways: from the roots (`log|lead| + Σ log⁺|α|`) and
//! by midpoint quadrature of `log|f|` on the unit circle. Roots come from
//! the companion matrix of each square-free factor, so repeated cyclotomic
//! factors do not smear into clusters straddling the circle.
//!
//! `|H₁(M_N)| = |Π_{d=1}^{N-1} Δ(ζ^d)|` is evaluated exactly as an integer
//! determinant; a floating product with a rounding check is kept alongside.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Schur};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extended::{colored_jones_adaptive, DEFAULT_MAX_BITS};
use crate::jones_fig8::{colored_jones_sum, EvaluationPoint};
use crate::limits::{ConvergenceRecord, RecordStatus};
use crate::signed_log::{CompensatedSum, SignedLogValue};

/// `Σ_i coefficients[i]·t^{low_exponent + i}` with non-zero end coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomialZ {
    low_exponent: i64,
    coefficients: Vec<i64>,
}

impl LaurentPolynomialZ {
    /// Strips zero end coefficients; rejects the zero polynomial.
    pub fn new(low_exponent: i64, coefficients: Vec<i64>) -> Result<Self> {
        let first = coefficients
            .iter()
            .position(|&c| c != 0)
            .ok_or_else(|| Error::InvalidArgument("zero polynomial".into()))?;
        let last = coefficients.iter().rposition(|&c| c != 0).expect("non-zero entry exists");
        Ok(Self {
            low_exponent: low_exponent + first as i64,
            coefficients: coefficients[first..=last].to_vec(),
        })
    }

    /// Alexander polynomial of the figure-eight knot, `-t + 3 - t⁻¹`.
    pub fn figure_eight() -> Self {
        Self {
            low_exponent: -1,
            coefficients: vec![-1, 3, -1],
        }
    }

    pub fn constant(c: i64) -> Result<Self> {
        Self::new(0, vec![c])
    }

    pub fn low_exponent(&self) -> i64 {
        self.low_exponent
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// Span `high - low` of the exponents.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coefficients.last().expect("non-empty")
    }

    pub fn value_at_one(&self) -> i128 {
        self.coefficients.iter().map(|&c| i128::from(c)).sum()
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        let p = self
            .coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c as f64);
        p * t.powi(self.low_exponent as i32)
    }

    /// `|f(e^{2πix})|`, which ignores the monomial shift.
    pub fn abs_on_circle(&self, x: f64) -> f64 {
        let t = Complex64::from_polar(1.0, 2.0 * PI * x);
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c as f64)
            .norm()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = vec![0i64; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            for (j, &b) in other.coefficients.iter().enumerate() {
                out[i + j] = a
                    .checked_mul(b)
                    .and_then(|p| out[i + j].checked_add(p))
                    .ok_or_else(|| Error::InvalidArgument("coefficient overflow in product".into()))?;
            }
        }
        Self::new(self.low_exponent + other.low_exponent, out)
    }

    fn big_coefficients(&self) -> Vec<BigInt> {
        self.coefficients.iter().map(|&c| BigInt::from(c)).collect()
    }
}

impl fmt::Display for LaurentPolynomialZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.coefficients.iter().map(i64::to_string).collect();
        write!(f, "{}@{}", body.join(","), self.low_exponent)
    }
}

/// Parses `c0,c1,...,ck@low`; `@low` defaults to `@0`.
impl FromStr for LaurentPolynomialZ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, low) = match s.split_once('@') {
            Some((b, l)) => (
                b,
                l.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad low exponent {l:?}: {e}")))?,
            ),
            None => (s, 0),
        };
        let coefficients = body
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coefficient {c:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(low, coefficients)
    }
}

/// Root-product Mahler measure with the number of roots found within `tol`
/// of the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MahlerReport {
    pub value: f64,
    pub near_unit_circle: usize,
}

/// `m(f) = log|lead| + Σ_{|α|>1} log|α|`.
pub fn mahler_from_roots(f: &LaurentPolynomialZ, tol: f64) -> Result<f64> {
    mahler_report(f, tol).map(|r| r.value)
}

pub fn mahler_report(f: &LaurentPolynomialZ, tol: f64) -> Result<MahlerReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut value = CompensatedSum::new();
    value.add((f.leading().unsigned_abs() as f64).ln());
    let mut near = 0;
    for (factor, multiplicity) in squarefree_factors(&f.big_coefficients()) {
        for root in roots_of_squarefree(&factor)? {
            let l = root.norm().ln();
            if (root.norm() - 1.0).abs() <= tol {
                near += multiplicity;
            }
            value.add(multiplicity as f64 * l.max(0.0));
        }
    }
    Ok(MahlerReport {
        value: value.value(),
        near_unit_circle: near,
    })
}

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn deg(p: &[BigInt]) -> usize {
    p.len() - 1
}

fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() == 1 {
        return vec![BigInt::zero()];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn is_zero_poly(p: &[BigInt]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Divides out the content and makes the leading coefficient positive.
fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    trim(&mut p);
    let g = p.iter().fold(BigInt::zero(), |g, c| num_integer_gcd(&g, c));
    if g.is_zero() {
        return p;
    }
    let g = if p.last().expect("non-empty").is_negative() { -g } else { g };
    p.iter().map(|c| c / &g).collect()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().expect("non-empty").clone();
    while !is_zero_poly(&r) && deg(&r) >= deg(b) {
        let shift = deg(&r) - deg(b);
        let lr = r.last().expect("non-empty").clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &lr * c;
        }
        r.pop();
        if r.is_empty() {
            r.push(BigInt::zero());
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (mut a, mut b) = (primitive(a.to_vec()), primitive(b.to_vec()));
    if is_zero_poly(&b) {
        return a;
    }
    loop {
        let r = pseudo_remainder(&a, &b);
        if is_zero_poly(&r) {
            return b;
        }
        a = b;
        b = primitive(r);
    }
}

/// Exact quotient in `ℤ[t]`; `b` must be primitive and divide `a`.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    if is_zero_poly(&r) || deg(&r) < deg(b) {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); deg(&r) - deg(b) + 1];
    let lb = b.last().expect("non-empty");
    for k in (0..q.len()).rev() {
        let c = &r[k + deg(b)] / lb;
        for (i, bc) in b.iter().enumerate() {
            r[i + k] -= &c * bc;
        }
        q[k] = c;
    }
    q
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

/// Yun's algorithm: `p = content · Π q_k^k` with square-free, pairwise coprime `q_k`.
fn squarefree_factors(p: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let a = primitive(p.to_vec());
    if deg(&a) == 0 {
        return Vec::new();
    }
    let da = derivative(&a);
    let b = poly_gcd(&a, &da);
    let mut c = exact_div(&a, &b);
    let mut d = sub(&exact_div(&da, &b), &derivative(&c));
    let mut out = Vec::new();
    let mut k = 1;
    while deg(&c) > 0 {
        let g = poly_gcd(&c, &d);
        c = exact_div(&c, &g);
        d = sub(&exact_div(&d, &g), &derivative(&c));
        if deg(&g) > 0 {
            out.push((g, k));
        }
        k += 1;
    }
    out
}

fn to_f64(c: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
}

fn roots_of_squarefree(q: &[BigInt]) -> Result<Vec<Complex64>> {
    let coeffs: Vec<f64> = q.iter().map(to_f64).collect();
    let d = coeffs.len() - 1;
    if d == 1 {
        return Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]);
    }
    let lead = coeffs[d];
    let companion = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    // QR stalls on orthogonal companions such as that of t^4 + 1; a real
    // shift breaks the symmetry of the moduli without moving the roots.
    let roots = [0.0, 0.5, -0.75, 1.25]
        .iter()
        .find_map(|&sigma| {
            let shifted = &companion + DMatrix::identity(d, d) * sigma;
            Schur::try_new(shifted, f64::EPSILON, 10_000)
                .map(|s| s.complex_eigenvalues().map(|z| z - sigma))
        })
        .ok_or_else(|| Error::Numeric(format!("eigenvalue iteration did not converge for degree {d}")))?;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        coeffs.iter().rev().fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(p, dp), &c| {
            (p * z + c, dp * z + p)
        })
    };
    Ok(roots
        .iter()
        .map(|&z0| {
            // Newton polishing; the roots are simple, so this only tightens digits.
            let mut z = z0;
            for _ in 0..3 {
                let (p, dp) = eval(z);
                if dp.norm() == 0.0 {
                    break;
                }
                let next = z - p / dp;
                if eval(next).0.norm() >= p.norm() {
                    break;
                }
                z = next;
            }
            z
        })
        .collect())
}

/// Evaluates `log|g|` of some function `g` at `e^{2πix}`.
pub trait CircleSampler: Sync {
    fn sample(&self, x: f64) -> SignedLogValue;

    /// The sample and whether it is trustworthy to working precision.
    fn sample_checked(&self, x: f64) -> (SignedLogValue, bool) {
        (self.sample(x), true)
    }
}

impl CircleSampler for LaurentPolynomialZ {
    fn sample(&self, x: f64) -> SignedLogValue {
        SignedLogValue::from_f64(self.abs_on_circle(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantSampler(pub f64);

impl CircleSampler for ConstantSampler {
    fn sample(&self, _x: f64) -> SignedLogValue {
        SignedLogValue::from_f64(self.0)
    }
}

/// `t ↦ J_N(E; t)` on the unit circle. With `extended`, nodes where the
/// double sum is unresolved are recomputed in extended precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JonesSampler {
    pub n: u64,
    pub extended: bool,
}

impl CircleSampler for JonesSampler {
    fn sample(&self, x: f64) -> SignedLogValue {
        self.sample_checked(x).0
    }

    fn sample_checked(&self, x: f64) -> (SignedLogValue, bool) {
        match EvaluationPoint::new(self.n, x) {
            Ok(p) if self.extended => {
                let e = colored_jones_adaptive(&p, DEFAULT_MAX_BITS);
                (e.value, e.resolved)
            }
            Ok(p) => {
                let s = colored_jones_sum(&p);
                (s.value, s.is_resolved())
            }
            Err(_) => (SignedLogValue::ZERO, false),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureReport {
    pub value: f64,
    pub samples: usize,
    /// Midpoints where the sampler vanished and the panel was refined.
    pub zero_samples: usize,
    pub unresolved_samples: usize,
}

const REFINE: usize = 8;

/// Midpoint rule for `∫₀¹ log|g(e^{2πix})| dx` over `n` panels.
pub fn log_mahler_quadrature<S: CircleSampler + ?Sized>(s: &S, n: usize) -> Result<f64> {
    log_mahler_quadrature_report(s, n).map(|r| r.value)
}

pub fn log_mahler_quadrature_report<S: CircleSampler + ?Sized>(s: &S, n: usize) -> Result<QuadratureReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {n}")));
    }
    let h = 1.0 / n as f64;
    let panels: Vec<(Option<f64>, bool, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (v, ok) = s.sample_checked((i as f64 + 0.5) * h);
            if !v.is_zero() {
                return (Some(v.logabs()), false, ok);
            }
            // Log singularities are integrable: average over finer sub-midpoints.
            let mut acc = CompensatedSum::new();
            let mut hits = 0;
            let mut all_ok = true;
            for k in 0..REFINE {
                let (v, ok) = s.sample_checked((i as f64 + (k as f64 + 0.5) / REFINE as f64) * h);
                all_ok &= ok;
                if !v.is_zero() {
                    acc.add(v.logabs());
                    hits += 1;
                }
            }
            let value = (hits > 0).then(|| acc.value() / hits as f64);
            (value, true, all_ok)
        })
        .collect();
    let zeros = panels.iter().filter(|p| p.1).count();
    if zeros > n / 10 || panels.iter().any(|p| p.0.is_none()) {
        return Err(Error::Singular { zeros, samples: n });
    }
    let sum: CompensatedSum = panels.iter().map(|p| p.0.expect("checked above")).collect();
    Ok(QuadratureReport {
        value: sum.value() * h,
        samples: n,
        zero_samples: zeros,
        unresolved_samples: panels.iter().filter(|p| !p.2).count(),
    })
}

/// `true` when `f(1) = ±1`, as for every Alexander polynomial.
pub fn is_alexander_normalized(f: &LaurentPolynomialZ) -> bool {
    f.value_at_one().abs() == 1
}

/// `|Π_{d=1}^{N-1} f(e^{2πid/N})|` exactly; `0` when some factor vanishes.
pub fn homology_order(f: &LaurentPolynomialZ, n: u64) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    let mut q = f.big_coefficients();
    // Factors of t - 1 never meet a non-trivial root of unity; each adds |Π(ζ - 1)| = N.
    let mut ones = 0u32;
    while deg(&q) > 0 && q.iter().sum::<BigInt>().is_zero() {
        let mut quotient = vec![BigInt::zero(); q.len() - 1];
        let mut carry = BigInt::zero();
        for k in (0..q.len() - 1).rev() {
            carry += &q[k + 1];
            quotient[k] = carry.clone();
        }
        q = quotient;
        ones += 1;
    }
    let d = deg(&q);
    let lead = q[d].clone();
    let n_usize = usize::try_from(n).map_err(|_| Error::InvalidArgument(format!("N = {n} too large")))?;
    let full = if d == 0 {
        // Π over all N-th roots; divided by q(1) below.
        num_traits::pow(lead.clone(), n_usize)
    } else {
        // Π_{ζ^N=1} q(ζ) = (-1)^{Nd} det(M^N - l^N I) / l^{N(d-1)} with M = l·C.
        let m = DMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -q[i].clone()
            } else if i == j + 1 {
                lead.clone()
            } else {
                BigInt::zero()
            }
        });
        let mut power = big_matrix_pow(&m, n);
        let ln = num_traits::pow(lead.clone(), n_usize);
        for i in 0..d {
            power[(i, i)] -= &ln;
        }
        let det = bareiss_det(power);
        let scale = num_traits::pow(lead.clone(), n_usize * (d - 1));
        if !(&det % &scale).is_zero() {
            return Err(Error::Numeric("resultant not divisible by the leading power".into()));
        }
        det / scale
    };
    let at_one: BigInt = q.iter().sum();
    if !(&full % &at_one).is_zero() {
        return Err(Error::Numeric("product over roots of unity not divisible by f(1)".into()));
    }
    let order = (full / at_one).abs() * num_traits::pow(BigInt::from(n), ones as usize);
    Ok(order.to_biguint().expect("absolute value"))
}

fn big_matrix_mul(a: &DMatrix<BigInt>, b: &DMatrix<BigInt>) -> DMatrix<BigInt> {
    let d = a.nrows();
    DMatrix::from_fn(d, d, |i, j| (0..d).map(|k| &a[(i, k)] * &b[(k, j)]).sum())
}

fn big_matrix_pow(m: &DMatrix<BigInt>, mut e: u64) -> DMatrix<BigInt> {
    let d = m.nrows();
    let mut result = DMatrix::from_fn(d, d, |i, j| if i == j { BigInt::one() } else { BigInt::zero() });
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = big_matrix_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = big_matrix_mul(&base, &base);
        }
    }
    result
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut a: DMatrix<BigInt>) -> BigInt {
    let n = a.nrows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Floating evaluation of the same product: must land within `0.25` of an
/// integer below `2^53`, else a precision error.
pub fn homology_order_float(f: &LaurentPolynomialZ, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    let mut log_sum = CompensatedSum::new();
    for d in 1..n {
        let a = f.abs_on_circle(d as f64 / n as f64);
        if a == 0.0 {
            return Ok(0.0);
        }
        log_sum.add(a.ln());
    }
    let value = log_sum.value().exp();
    if !(value < 9.007_199_254_740_992e15) {
        return Err(Error::Precision(format!(
            "product {value:e} beyond the exactly representable integers"
        )));
    }
    let rounded = value.round();
    if (value - rounded).abs() > 0.25 {
        return Err(Error::Precision(format!(
            "product {value} is not within 0.25 of an integer"
        )));
    }
    Ok(rounded)
}

/// Natural logarithm of a large unsigned integer.
pub fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    let shift = bits.saturating_sub(64);
    let top = num_traits::ToPrimitive::to_f64(&(v >> shift)).expect("fits in f64");
    top.ln() + shift as f64 * LN_2
}

/// `log|H₁(M_N)|/N` against `m(f)`.
pub fn silver_williams_convergence(f: &LaurentPolynomialZ, n_list: &[u64]) -> Result<Vec<ConvergenceRecord>> {
    let predicted = mahler_from_roots(f, 1e-9)?;
    if let Some(&bad) = n_list.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {bad}")));
    }
    n_list
        .par_iter()
        .map(|&n| {
            let order = homology_order(f, n)?;
            Ok(if order.is_zero() {
                ConvergenceRecord::new(n, None, None, predicted, RecordStatus::Vanishing)
            } else {
                let finite = ln_biguint(&order) / n as f64;
                ConvergenceRecord::new(n, None, Some(finite), predicted, RecordStatus::Resolved)
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthRecord {
    pub n: u64,
    pub mahler: f64,
    /// `m(J_N)/log N`; absent for `N = 1`.
    pub ratio: Option<f64>,
    /// `2π·m(J_N)/log N`.
    pub scaled_ratio: Option<f64>,
    /// Share of quadrature nodes left below the rounding floor.
    pub unresolved_fraction: f64,
}

/// `m(J_N)` by quadrature for each `N`, in extended precision where needed.
pub fn jones_mahler_growth(n_list: &[u64], n_quad: usize) -> Result<Vec<GrowthRecord>> {
    if let Some(&bad) = n_list.iter().find(|&&n| n == 0) {
        return Err(Error::InvalidArgument(format!("N must be positive, got {bad}")));
    }
    n_list
        .iter()
        .map(|&n| {
            let report = log_mahler_quadrature_report(&JonesSampler { n, extended: true }, n_quad)?;
            let ratio = (n > 1).then(|| report.value / (n as f64).ln());
            Ok(GrowthRecord {
                n,
                mahler: report.value,
                ratio,
                scaled_ratio: ratio.map(|r| 2.0 * PI * r),
                unresolved_fraction: report.unresolved_samples as f64 / report.samples as f64,
            })
        })
        .collect()
}
