use std::f64::consts::PI;

use super::IntervalSpec;
use crate::error::{Error, Result};
use crate::kloosterman::AngleTable;

/// Number of equally spaced points of `[0, π]` at which discrepancy is sampled.
pub const CDF_GRID: usize = 4096;

/// Sato-Tate mass of `[α, β]`: `(2/π) ∫_α^β sin^2 u du`.
pub fn st_cdf(alpha: f64, beta: f64) -> Result<f64> {
    if !(0.0 <= alpha && alpha <= beta && beta <= PI) {
        return Err(Error::domain(format!(
            "need 0 <= alpha <= beta <= pi, got [{alpha}, {beta}]"
        )));
    }
    Ok((beta - alpha) / PI - ((2.0 * beta).sin() - (2.0 * alpha).sin()) / (2.0 * PI))
}

/// `max_t |#{a : theta_p(h a) <= t} / N - st_cdf(0, t)|` over a grid of
/// [`CDF_GRID`] points.
pub fn empirical_cdf_discrepancy(angles: &AngleTable, interval: IntervalSpec) -> Result<f64> {
    if interval.is_empty() {
        return Err(Error::domain("discrepancy of an empty interval"));
    }
    let thetas = angles.thetas();
    let mut sample: Vec<f64> = interval.residues(angles.modulus()).map(|r| thetas[r]).collect();
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut below = 0usize;
    let mut worst = 0.0f64;
    for j in 0..CDF_GRID {
        let t = if j + 1 == CDF_GRID { PI } else { PI * j as f64 / (CDF_GRID - 1) as f64 };
        while below < sample.len() && sample[below] <= t {
            below += 1;
        }
        let gap = (below as f64 / n - st_cdf(0.0, t)?).abs();
        worst = worst.max(gap);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeModulus;
    use crate::kloosterman::{build_angles, KloostermanTable, Method};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn cdf_examples() {
        assert_abs_diff_eq!(st_cdf(0.0, PI).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(st_cdf(0.0, PI / 2.0).unwrap(), 0.5, epsilon = 1e-15);
        let expect = 1.0 / 3.0 + 3f64.sqrt() / (2.0 * PI);
        assert_abs_diff_eq!(st_cdf(PI / 3.0, 2.0 * PI / 3.0).unwrap(), expect, epsilon = 1e-14);
        assert_abs_diff_eq!(expect, 0.60900, epsilon = 1e-5);
        assert!(st_cdf(1.0, 0.5).is_err());
        assert!(st_cdf(-0.1, 0.5).is_err());
        assert!(st_cdf(0.0, 3.2).is_err());
    }

    #[test]
    fn single_point_discrepancy() {
        let q = PrimeModulus::new(101).unwrap();
        let ang = build_angles(&KloostermanTable::build(1, q, Method::Dft).unwrap(), 1).unwrap();
        let d = empirical_cdf_discrepancy(&ang, IntervalSpec::new(4, 1)).unwrap();
        let theta = ang.theta(5);
        assert!(d >= 1.0 - st_cdf(0.0, theta).unwrap() - 1e-3);
        assert!(d <= 1.0);
        assert!(empirical_cdf_discrepancy(&ang, IntervalSpec::new(4, 0)).is_err());
    }

    proptest! {
        #[test]
        fn cdf_is_monotone(a in 0.0f64..PI, b in 0.0f64..PI) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(st_cdf(0.0, lo).unwrap() <= st_cdf(0.0, hi).unwrap() + 1e-15);
            let mass = st_cdf(lo, hi).unwrap();
            prop_assert!((-1e-15..=1.0 + 1e-15).contains(&mass));
        }
    }
}
