//! Color profiles `c ↦ 2π·log|J_c(E; e^{2πir/N})|/N` over odd colors
//! `c ≤ 2N - 1`, with `t` held fixed while the color varies.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::extended::{colored_jones_adaptive, DEFAULT_MAX_BITS};
use crate::jones_fig8::EvaluationPoint;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileRow {
    pub c: u64,
    /// `None` when `J_c` vanishes at this point.
    pub value: Option<f64>,
    /// `false` when even the extended-precision sum stays below its rounding floor.
    pub resolved: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColorProfile {
    pub n: u64,
    pub r: f64,
    /// Sorted by `c`, one row per odd color.
    pub rows: Vec<ProfileRow>,
}

impl ColorProfile {
    pub fn row(&self, c: u64) -> Option<&ProfileRow> {
        if c.is_multiple_of(2) {
            return None;
        }
        self.rows.get(((c - 1) / 2) as usize)
    }

    /// The odd color with the largest value; the last one wins ties.
    pub fn argmax(&self) -> Option<u64> {
        self.rows
            .iter()
            .filter_map(|row| row.value.map(|v| (row.c, v)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(c, _)| c)
    }
}

fn check(n: u64, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    if !r.is_finite() {
        return Err(domain("r", r, "finite reals"));
    }
    Ok((r / n as f64).rem_euclid(1.0))
}

pub fn cable_profile(n: u64, r: f64) -> Result<ColorProfile> {
    let x = check(n, r)?;
    let colors: Vec<u64> = (1..2 * n).step_by(2).collect();
    let rows = colors
        .into_par_iter()
        .map(|c| {
            let eval = colored_jones_adaptive(&EvaluationPoint::new(c, x)?, DEFAULT_MAX_BITS);
            Ok(ProfileRow {
                c,
                value: (!eval.value.is_zero()).then(|| 2.0 * PI * eval.value.logabs() / n as f64),
                resolved: eval.resolved,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ColorProfile { n, r, rows })
}

/// [`ColorProfile::argmax`] of [`cable_profile`].
pub fn argmax_color(n: u64, r: f64) -> Result<u64> {
    cable_profile(n, r)?
        .argmax()
        .ok_or_else(|| Error::Vanishing(format!("every odd color at N = {n}, r = {r}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jones_fig8::volume_normalized_log;

    #[test]
    fn two_colors_at_n_two() {
        let p = cable_profile(2, 1.0).unwrap();
        let cs: Vec<u64> = p.rows.iter().map(|r| r.c).collect();
        assert_eq!(cs, vec![1, 3]);
        assert_eq!(p.rows[0].value, Some(0.0));
        assert_eq!(argmax_color(2, 1.0).unwrap(), 3);
    }

    #[test]
    fn odd_n_row_matches_direct_evaluation() {
        let p = cable_profile(101, 1.0).unwrap();
        let direct = volume_normalized_log(&EvaluationPoint::from_r(101, 1.0).unwrap()).unwrap();
        assert_eq!(p.row(101).unwrap().value, Some(direct));
        assert_eq!(p.rows.len(), 101);
        assert!(p.row(100).is_none());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(cable_profile(1, 1.0).is_err());
        assert!(cable_profile(10, f64::NAN).is_err());
    }
}
