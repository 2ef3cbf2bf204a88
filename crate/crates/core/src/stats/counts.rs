use std::f64::consts::PI;

use super::{CountReport, IntervalSpec};
use crate::error::{Error, Result};
use crate::kloosterman::{AngleTable, TOL_ZERO};

/// Positive and negative sign counts. Both share the zero bucket: sums with
/// `|S| <= TOL_ZERO sqrt(p)` and residues `a ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignReport {
    pub positive: CountReport,
    pub negative: CountReport,
}

pub fn sign_count(angles: &AngleTable, interval: IntervalSpec) -> SignReport {
    let tol = TOL_ZERO * angles.modulus().sqrt();
    let sums = angles.sums();
    let (mut pos, mut neg, mut zero) = (0u64, 0u64, 0u64);
    for r in interval.residues(angles.modulus()) {
        let s = sums[r];
        if r == 0 || s.abs() <= tol {
            zero += 1;
        } else if s > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    let half = interval.len as f64 / 2.0;
    SignReport {
        positive: CountReport::new(pos, half, zero),
        negative: CountReport::new(neg, half, zero),
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("delta must lie in (0, 1], got {delta}")))
    }
}

/// Sato-Tate mass of `|cos θ| <= δ`.
fn small_fraction(delta: f64) -> f64 {
    2.0 / PI * (delta.asin() + delta * (1.0 - delta * delta).sqrt())
}

/// Sato-Tate mass of `|cos θ| >= δ`.
fn large_fraction(delta: f64) -> f64 {
    2.0 / PI * (delta.acos() - delta * (1.0 - delta * delta).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeReport {
    pub delta: f64,
    pub small: CountReport,
    pub large: CountReport,
    /// Residues with `|cos θ| = δ` exactly, counted by both.
    pub boundary: u64,
}

/// Counts of `|S(a, h; p)| <= 2δ sqrt(p)` and `>= 2δ sqrt(p)` in one pass.
///
/// Comparisons use the clamped `cos θ`, so with `δ = 1` every residue is
/// small.
pub fn extreme_counts(angles: &AngleTable, interval: IntervalSpec, delta: f64) -> Result<ExtremeReport> {
    check_delta(delta)?;
    let cos = angles.cosines();
    let (mut small, mut large, mut boundary) = (0u64, 0u64, 0u64);
    for r in interval.residues(angles.modulus()) {
        let c = cos[r].abs();
        if c <= delta {
            small += 1;
        }
        if c >= delta {
            large += 1;
        }
        if c == delta {
            boundary += 1;
        }
    }
    let n = interval.len as f64;
    Ok(ExtremeReport {
        delta,
        small: CountReport::new(small, small_fraction(delta) * n, 0),
        large: CountReport::new(large, large_fraction(delta) * n, 0),
        boundary,
    })
}

pub fn small_value_count(angles: &AngleTable, interval: IntervalSpec, delta: f64) -> Result<CountReport> {
    Ok(extreme_counts(angles, interval, delta)?.small)
}

pub fn large_value_count(angles: &AngleTable, interval: IntervalSpec, delta: f64) -> Result<CountReport> {
    Ok(extreme_counts(angles, interval, delta)?.large)
}
