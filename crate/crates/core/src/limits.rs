//! Limit formulas for `2rπ·ln|J_N(E; e^{2πir/N})|/N` and their comparison
//! with finite `N`.
//!
//! `V` covers `0 <= r <= 1` and `W(r - ⌊r⌋)` covers `r > 1`. Each non-zero
//! branch has the shape
//!
//! ```text
//! scale · [Λ(xπ + s + θ/2) - Λ(xπ + s - θ/2)],   θ = θ₋(x + s/π)
//! ```
//!
//! with shift `s ∈ {0, -π/2}`. The shifted branches reuse the unshifted
//! formula at `x - 1/2`, which keeps every branch real on its interval and
//! makes `V` and `W` continuous. With `scale = 2`, `V(1) = W(0) = W(1)` is the
//! volume and `∫₀¹ W = 1.4501915…`.
//!
//! On the shifted branches the terms of the Habiro–Le sum alternate in sign
//! and cancel by hundreds of nats. The formula there tracks the largest term
//! `max_k |f(k)|`, while `|J_N|` itself is far smaller. A double-precision
//! sum at such points returns rounding noise close to the largest term, so
//! [`convergence_table`] recomputes them in extended precision.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::extended::{colored_jones_adaptive, Precision, DEFAULT_MAX_BITS};
use crate::jones_fig8::{f_max, partial_products, EvaluationPoint};
use crate::special_functions::{fig8_volume, lambda, theta_r, ThetaVariant};

/// How `θ` is chosen on a branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaChoice {
    pub variant: ThetaVariant,
    /// `θ = theta_r(x + argument_shift, variant)`.
    pub argument_shift: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BranchForm {
    Zero,
    /// `Λ(xπ + shift + θ/2) - Λ(xπ + shift - θ/2)`.
    Lobachevsky { shift: f64, theta: ThetaChoice },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitBranch {
    /// Half-open `[lo, hi)`; the last branch of a table also contains `hi`.
    pub lo: f64,
    pub hi: f64,
    pub form: BranchForm,
    pub scale: f64,
}

impl LimitBranch {
    pub fn is_shifted(&self) -> bool {
        matches!(self.form, BranchForm::Lobachevsky { shift, .. } if shift != 0.0)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        match self.form {
            BranchForm::Zero => Ok(0.0),
            BranchForm::Lobachevsky { shift, theta } => {
                let th = theta_r(x + theta.argument_shift, theta.variant)?.radians();
                let z = x * PI + shift;
                Ok(self.scale * (lambda(z + 0.5 * th) - lambda(z - 0.5 * th)))
            }
        }
    }
}

/// Which `θ` the π/2-shifted branches use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftedTheta {
    /// `θ₋(x - 1/2)`, equal to `π - θ₊(x)`.
    ShiftedArgument,
    /// `θ₊(x)` plugged into the shifted Λ arguments.
    PlusVariant,
}

impl ShiftedTheta {
    fn choice(self) -> ThetaChoice {
        match self {
            ShiftedTheta::ShiftedArgument => ThetaChoice {
                variant: ThetaVariant::Minus,
                argument_shift: -0.5,
            },
            ShiftedTheta::PlusVariant => ThetaChoice {
                variant: ThetaVariant::Plus,
                argument_shift: 0.0,
            },
        }
    }
}

const UNSHIFTED: ThetaChoice = ThetaChoice {
    variant: ThetaVariant::Minus,
    argument_shift: 0.0,
};

/// Ordered branch table for `V` or `W` over `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLimitSpec {
    pub branches: Vec<LimitBranch>,
}

impl PiecewiseLimitSpec {
    /// The calibrated `V`.
    pub fn v() -> Self {
        Self::v_with(ShiftedTheta::ShiftedArgument, 2.0)
    }

    /// The calibrated `W`.
    pub fn w() -> Self {
        Self::w_with(ShiftedTheta::ShiftedArgument, 2.0)
    }

    pub fn v_with(shifted: ShiftedTheta, scale: f64) -> Self {
        Self::from_breakpoints(&[(0.0, 1.0 / 6.0, None), (1.0 / 6.0, 0.75, Some(true)), (0.75, 1.0, Some(false))], shifted, scale)
    }

    pub fn w_with(shifted: ShiftedTheta, scale: f64) -> Self {
        Self::from_breakpoints(&[(0.0, 0.25, Some(false)), (0.25, 0.75, Some(true)), (0.75, 1.0, Some(false))], shifted, scale)
    }

    fn from_breakpoints(rows: &[(f64, f64, Option<bool>)], shifted: ShiftedTheta, scale: f64) -> Self {
        let branches = rows
            .iter()
            .map(|&(lo, hi, kind)| LimitBranch {
                lo,
                hi,
                scale,
                form: match kind {
                    None => BranchForm::Zero,
                    Some(false) => BranchForm::Lobachevsky {
                        shift: 0.0,
                        theta: UNSHIFTED,
                    },
                    Some(true) => BranchForm::Lobachevsky {
                        shift: -FRAC_PI_2,
                        theta: shifted.choice(),
                    },
                },
            })
            .collect();
        Self { branches }
    }

    /// Checks that the intervals partition `[0, 1]` and that `θ` exists on each.
    pub fn validate(&self) -> Result<()> {
        let first = self.branches.first().ok_or_else(|| Error::InvalidArgument("empty branch table".into()))?;
        if first.lo != 0.0 || self.branches.last().map(|b| b.hi) != Some(1.0) {
            return Err(Error::InvalidArgument("branches must start at 0 and end at 1".into()));
        }
        for pair in self.branches.windows(2) {
            if pair[0].hi != pair[1].lo {
                return Err(Error::InvalidArgument(format!(
                    "gap or overlap between branches at {} and {}",
                    pair[0].hi, pair[1].lo
                )));
            }
        }
        for b in &self.branches {
            if !(b.lo < b.hi) {
                return Err(Error::InvalidArgument(format!("empty interval [{}, {})", b.lo, b.hi)));
            }
            for i in 0..=64 {
                let x = b.lo + (b.hi - b.lo) * f64::from(i) / 64.0;
                b.eval(x)?;
            }
        }
        Ok(())
    }

    pub fn branch_at(&self, x: f64) -> Result<&LimitBranch> {
        if !(0.0..=1.0).contains(&x) {
            return Err(domain("x", x, "[0, 1]"));
        }
        self.branches
            .iter()
            .find(|b| b.lo <= x && x < b.hi)
            .or_else(|| self.branches.last().filter(|b| x == b.hi))
            .ok_or_else(|| domain("x", x, "covered by the branch table"))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.branch_at(x)?.eval(x)
    }
}

/// Calibrated `V(x)` for `x ∈ [0, 1]`.
pub fn limit_v(x: f64) -> Result<f64> {
    PiecewiseLimitSpec::v().eval(x)
}

/// Calibrated `W(x)` for `x ∈ [0, 1]`.
pub fn limit_w(x: f64) -> Result<f64> {
    PiecewiseLimitSpec::w().eval(x)
}

/// Predicted `lim 2rπ·ln|J_N|/N`: `V(r)` for `r <= 1`, `W(r - ⌊r⌋)` beyond.
pub fn predicted_limit(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(domain("r", r, "[0, inf)"));
    }
    if r <= 1.0 {
        limit_v(r)
    } else {
        limit_w(r - r.floor())
    }
}

/// `lim 2π·ln|J_N(E; e^{2πir/N})|/N` where it is proved: positive integers
/// and `5/6 < r < 7/6`.
pub fn limit_theorem3(r: f64) -> Result<f64> {
    if r >= 1.0 && r.fract() == 0.0 && r.is_finite() {
        return Ok(fig8_volume() / r);
    }
    if !(r > 5.0 / 6.0 && r < 7.0 / 6.0) {
        return Err(domain("r", r, "a positive integer or (5/6, 7/6)"));
    }
    let th = theta_r(r, ThetaVariant::Minus)?.radians();
    Ok(2.0 * (lambda(r * PI + 0.5 * th) - lambda(r * PI - 0.5 * th)) / r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordStatus {
    Resolved,
    /// The signed sum cancels below the double-precision rounding floor.
    PrecisionLimited,
    /// The finite-`N` quantity is exactly zero (or the homology group is infinite).
    Vanishing,
}

/// One row of a convergence experiment. `delta = finite_value - predicted`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub n: u64,
    pub r: Option<f64>,
    pub finite_value: Option<f64>,
    pub predicted: f64,
    pub delta: Option<f64>,
    pub status: RecordStatus,
    pub precision: Precision,
}

impl ConvergenceRecord {
    pub(crate) fn new(n: u64, r: Option<f64>, finite_value: Option<f64>, predicted: f64, status: RecordStatus) -> Self {
        Self {
            n,
            r,
            finite_value,
            predicted,
            delta: finite_value.map(|v| v - predicted),
            status,
            precision: Precision::Double,
        }
    }
}

/// Finite-`N` normalized logs against [`predicted_limit`], one record per grid point.
pub fn convergence_table(r_grid: &[f64], n: u64) -> Result<Vec<ConvergenceRecord>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    let points = r_grid
        .iter()
        .map(|&r| {
            if !(r >= 0.0) {
                return Err(domain("r", r, "[0, inf)"));
            }
            Ok((r, EvaluationPoint::from_r(n, r)?, predicted_limit(r)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(points
        .into_par_iter()
        .map(|(r, p, predicted)| {
            let eval = colored_jones_adaptive(&p, DEFAULT_MAX_BITS);
            let mut record = if eval.value.is_zero() {
                ConvergenceRecord::new(n, Some(r), None, predicted, RecordStatus::Vanishing)
            } else {
                let finite = 2.0 * r * PI * eval.value.logabs() / n as f64;
                let status = if eval.resolved {
                    RecordStatus::Resolved
                } else {
                    RecordStatus::PrecisionLimited
                };
                ConvergenceRecord::new(n, Some(r), Some(finite), predicted, status)
            };
            record.precision = eval.precision;
            record
        })
        .collect())
}

/// `∫₀¹ W(x) dx` by composite Simpson on the smooth pieces of `W`.
pub fn mahler_growth_integral(quad_points: usize) -> Result<f64> {
    if quad_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 quadrature points, got {quad_points}"
        )));
    }
    let w = PiecewiseLimitSpec::w();
    let mut total = 0.0;
    for b in &w.branches {
        let len = b.hi - b.lo;
        let mut m = ((quad_points as f64 * len).round() as usize).max(2);
        m += m % 2;
        let h = len / m as f64;
        let mut acc = b.eval(b.lo)? + b.eval(b.hi)?;
        for i in 1..m {
            let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += weight * b.eval(b.lo + h * i as f64)?;
        }
        total += acc * h / 3.0;
    }
    Ok(total)
}

/// Finite-`N` agreement on one branch of `V` or `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchVerdict {
    pub table: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub shifted: bool,
    pub samples: usize,
    pub resolved: usize,
    /// Samples where an exact zero factor cuts the sum short; left out of the deltas.
    pub truncated: usize,
    /// Max `|finite - formula|` over resolved samples, for scale 1 and 2.
    pub max_delta_scale1: f64,
    pub max_delta_scale2: f64,
    /// Max `|2rπ·log max_k|f(k)|/N - formula|` at scale 2.
    pub max_peak_delta_scale2: f64,
}

/// Compares each branch against `N`-colored data at interior points
/// (`r = x` for `V`, `r = 1 + x` for `W`). Points where `r` shares a factor
/// with `N` so that some `g(j)` vanishes exactly are counted but not compared.
pub fn branch_calibration(n: u64, samples_per_branch: usize) -> Result<Vec<BranchVerdict>> {
    if samples_per_branch == 0 {
        return Err(Error::InvalidArgument("need at least one sample per branch".into()));
    }
    let mut out = Vec::new();
    for (table, calibrated, offset) in [("V", PiecewiseLimitSpec::v(), 0.0), ("W", PiecewiseLimitSpec::w(), 1.0)] {
        let unit = match table {
            "V" => PiecewiseLimitSpec::v_with(ShiftedTheta::ShiftedArgument, 1.0),
            _ => PiecewiseLimitSpec::w_with(ShiftedTheta::ShiftedArgument, 1.0),
        };
        for (b, b1) in calibrated.branches.iter().zip(&unit.branches) {
            if matches!(b.form, BranchForm::Zero) {
                continue;
            }
            let xs: Vec<f64> = (1..=samples_per_branch)
                .map(|i| b.lo + (b.hi - b.lo) * i as f64 / (samples_per_branch + 1) as f64)
                .collect();
            let grid: Vec<f64> = xs.iter().map(|x| x + offset).collect();
            let rows = convergence_table(&grid, n)?;
            let mut verdict = BranchVerdict {
                table,
                lo: b.lo,
                hi: b.hi,
                shifted: b.is_shifted(),
                samples: rows.len(),
                resolved: 0,
                truncated: 0,
                max_delta_scale1: 0.0,
                max_delta_scale2: 0.0,
                max_peak_delta_scale2: 0.0,
            };
            for ((row, &x), &r) in rows.iter().zip(&xs).zip(&grid) {
                let p = EvaluationPoint::from_r(n, r)?;
                if partial_products(&p).last().is_some_and(|f| f.is_zero()) {
                    verdict.truncated += 1;
                    continue;
                }
                let (_, peak) = f_max(&p);
                let peak_value = 2.0 * r * PI * peak.logabs() / n as f64;
                verdict.max_peak_delta_scale2 = verdict.max_peak_delta_scale2.max((peak_value - b.eval(x)?).abs());
                if row.status != RecordStatus::Resolved {
                    continue;
                }
                let finite = row.finite_value.expect("resolved rows carry a value");
                verdict.resolved += 1;
                verdict.max_delta_scale1 = verdict.max_delta_scale1.max((finite - b1.eval(x)?).abs());
                verdict.max_delta_scale2 = verdict.max_delta_scale2.max((finite - b.eval(x)?).abs());
            }
            out.push(verdict);
        }
    }
    Ok(out)
}
