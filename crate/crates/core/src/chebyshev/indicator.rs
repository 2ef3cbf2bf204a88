use std::f64::consts::PI;

use super::ChebyshevSeries;
use crate::error::{Error, Result};

/// Sato-Tate coefficients of the indicator of `[c, d]`:
/// `f̂(l) = (2/π) ∫_c^d sqrt(1 - x^2) U_l(x) dx`, for `l = 0..=L`.
///
/// Substituting `x = cos φ` gives `(1/π) ∫ (cos lφ - cos (l+2)φ) dφ` over
/// `[arccos d, arccos c]`, so every coefficient has a closed form.
pub fn expand_indicator(c: f64, d: f64, truncation: usize) -> Result<ChebyshevSeries> {
    if !(-1.0..=1.0).contains(&c) || !(-1.0..=1.0).contains(&d) {
        return Err(Error::domain(format!("interval [{c}, {d}] is not inside [-1, 1]")));
    }
    if c >= d {
        return Err(Error::domain(format!("empty interval [{c}, {d}]")));
    }
    let (lo, hi) = (d.acos(), c.acos());
    let antiderivative = |l: usize, phi: f64| -> f64 {
        if l == 0 {
            phi - (2.0 * phi).sin() / 2.0
        } else {
            let l = l as f64;
            (l * phi).sin() / l - ((l + 2.0) * phi).sin() / (l + 2.0)
        }
    };
    let coefficients = (0..=truncation)
        .map(|l| (antiderivative(l, hi) - antiderivative(l, lo)) / PI)
        .collect();
    Ok(ChebyshevSeries::new(coefficients))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mass_examples() {
        let delta: f64 = 0.5;
        let expect = 2.0 / PI * (delta.asin() + delta * (1.0 - delta * delta).sqrt());
        let s = expand_indicator(-delta, delta, 0).unwrap();
        assert_abs_diff_eq!(s.coefficient(0), expect, epsilon = 1e-14);
        assert_abs_diff_eq!(s.coefficient(0), 0.608998, epsilon = 1e-6);
        assert_abs_diff_eq!(expand_indicator(-1.0, 1.0, 0).unwrap().coefficient(0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(expand_indicator(0.0, 1.0, 0).unwrap().coefficient(0), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(expand_indicator(0.5, 0.5, 3).is_err());
        assert!(expand_indicator(0.6, 0.5, 3).is_err());
        assert!(expand_indicator(-1.5, 0.5, 3).is_err());
    }

    #[test]
    fn full_interval_is_orthogonal_to_higher_terms() {
        let s = expand_indicator(-1.0, 1.0, 20).unwrap();
        for l in 1..=20 {
            assert_abs_diff_eq!(s.coefficient(l), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn coefficient_decay_shapes() {
        // half-line indicator: |f̂(l)| <= C / l
        let half = expand_indicator(0.0, 1.0, 400).unwrap();
        for l in 1..=400 {
            assert!(half.coefficient(l).abs() * l as f64 <= 1.0);
        }
        // narrow window: |f̂(l)| <= C l δ
        for delta in [0.01, 0.05, 0.1] {
            let s = expand_indicator(-delta, delta, 50).unwrap();
            for l in 1..=50 {
                assert!(s.coefficient(l).abs() <= 3.0 * l as f64 * delta);
            }
        }
    }
}
