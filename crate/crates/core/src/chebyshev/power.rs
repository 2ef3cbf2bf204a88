//! Expansions of `x^α` and `|x|^α` in the `U` basis.
//!
//! With `C(α) = Γ(α+1) / (Γ(α/2+2) Γ(α/2+1))`:
//!
//! ```text
//! a_{α,l} = (1 + (-1)^{α+l}) (l+1) / 2^{α+1} · Γ(α+1) / (Γ((α+l)/2+2) Γ((α-l)/2+1))
//! b_{α,l} = (2l+1) / 2^α · Γ(α+1) / (Γ(α/2+l+2) Γ(α/2-l+1))
//! x^α   = sum_l a_{α,l} U_l(x)
//! |x|^α = sum_l b_{α,l} U_{2l}(x)
//! ```
//!
//! At `l = 0` both formulas reduce to the constant terms, so `coeff_a(α, 0)`
//! and `coeff_b(α, 0)` are those constants. Reciprocal Gamma factors vanish at
//! the poles of Γ; those are detected by integer tests before any evaluation.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::{ChebyshevSeries, DEFAULT_TRUNCATION};
use crate::error::{Error, Result};

const INTEGER_TOL: f64 = 1e-12;

fn as_integer(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= INTEGER_TOL).then_some(r as i64)
}

fn is_pole(x: f64) -> bool {
    matches!(as_integer(x), Some(n) if n <= 0)
}

/// `(ln |Γ(x)|, sign Γ(x))` for `x` off the poles.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (ln_gamma(x), 1.0)
    } else {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let s = (PI * x).sin();
        ((PI / s.abs()).ln() - ln_gamma(1.0 - x), s.signum())
    }
}

/// `Γ(num) / (Γ(d1) Γ(d2))`, zero when either denominator sits on a pole.
fn gamma_ratio(num: f64, d1: f64, d2: f64) -> f64 {
    if is_pole(d1) || is_pole(d2) {
        return 0.0;
    }
    let (ln, sn) = ln_gamma_signed(num);
    let (l1, s1) = ln_gamma_signed(d1);
    let (l2, s2) = ln_gamma_signed(d2);
    sn * s1 * s2 * (ln - l1 - l2).exp()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 || alpha.is_infinite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// `Γ(α+1) / (Γ(α/2+2) Γ(α/2+1))`, the moment constant of the Sato-Tate law.
pub fn moment_constant(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(gamma_ratio(alpha + 1.0, alpha / 2.0 + 2.0, alpha / 2.0 + 1.0))
}

/// Coefficient of `U_l` in the expansion of the signed power `x^α`.
///
/// Only integer `α` is accepted: for other `α` the signed power is not real
/// on `x < 0`.
pub fn coeff_a(alpha: f64, l: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let n = as_integer(alpha).ok_or_else(|| {
        Error::Unsupported(format!("signed expansion needs integer alpha, got {alpha}"))
    })?;
    if (n + l as i64) % 2 != 0 {
        return Ok(0.0);
    }
    let l_f = l as f64;
    let prefactor = 2.0 * (l_f + 1.0) / 2f64.powf(alpha + 1.0);
    Ok(prefactor * gamma_ratio(alpha + 1.0, (alpha + l_f) / 2.0 + 2.0, (alpha - l_f) / 2.0 + 1.0))
}

/// Coefficient of `U_{2l}` in the expansion of `|x|^α`, for real `α > 0`.
pub fn coeff_b(alpha: f64, l: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let l_f = l as f64;
    let prefactor = (2.0 * l_f + 1.0) / 2f64.powf(alpha);
    Ok(prefactor * gamma_ratio(alpha + 1.0, alpha / 2.0 + l_f + 2.0, alpha / 2.0 - l_f + 1.0))
}

/// Expansion of `x^α` (signed) or `|x|^α` for a positive integer `α`.
///
/// Signed powers and even absolute powers are polynomials and come out
/// exact, of degree `α`. An odd absolute power has an infinite expansion,
/// which is cut at `U_{2L}` with `L =` [`DEFAULT_TRUNCATION`].
pub fn expand_power(alpha: u32, signed: bool) -> Result<ChebyshevSeries> {
    if alpha == 0 {
        return Err(Error::domain("alpha must be a positive integer"));
    }
    let a = alpha as f64;
    if signed {
        let c = (0..=alpha as usize).map(|l| coeff_a(a, l)).collect::<Result<Vec<_>>>()?;
        return Ok(ChebyshevSeries::new(c));
    }
    let terms = if alpha.is_multiple_of(2) {
        alpha as usize / 2 + 1
    } else {
        DEFAULT_TRUNCATION + 1
    };
    expand_abs_power(a, terms)
}

/// First `terms` coefficients of `|x|^α`, placed at even indices.
pub fn expand_abs_power(alpha: f64, terms: usize) -> Result<ChebyshevSeries> {
    let mut c = vec![0.0; 2 * terms.max(1) - 1];
    for l in 0..terms {
        c[2 * l] = coeff_b(alpha, l)?;
    }
    Ok(ChebyshevSeries::new(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::u_unchecked;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficient_examples() {
        assert_abs_diff_eq!(coeff_a(2.0, 2).unwrap(), 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(coeff_a(1.0, 1).unwrap(), 0.5, epsilon = 1e-14);
        assert_eq!(coeff_a(2.0, 1).unwrap(), 0.0);
        assert_abs_diff_eq!(coeff_b(1.0, 0).unwrap(), 4.0 / (3.0 * PI), epsilon = 1e-14);
        assert_abs_diff_eq!(coeff_b(2.0, 1).unwrap(), 0.25, epsilon = 1e-14);
        assert_eq!(coeff_b(2.0, 2).unwrap(), 0.0);
        assert!(matches!(coeff_a(1.5, 1), Err(Error::Unsupported(_))));
        assert!(matches!(coeff_b(0.0, 1), Err(Error::Domain(_))));
        assert!(matches!(coeff_a(-2.0, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn signed_coefficients_vanish_beyond_alpha() {
        for alpha in 1..=9u32 {
            for l in 0..=30 {
                let c = coeff_a(alpha as f64, l).unwrap();
                if l > alpha as usize || (l + alpha as usize) % 2 == 1 {
                    assert_eq!(c, 0.0, "alpha={alpha} l={l}");
                } else {
                    assert!(c > 0.0);
                }
            }
        }
    }

    #[test]
    fn power_expansion_examples() {
        let two = expand_power(2, true).unwrap();
        for (c, e) in two.coefficients().iter().zip([0.25, 0.0, 0.25]) {
            assert_abs_diff_eq!(*c, e, epsilon = 1e-14);
        }
        let one = expand_power(1, true).unwrap();
        assert_abs_diff_eq!(one.coefficient(0), 0.0);
        assert_abs_diff_eq!(one.coefficient(1), 0.5, epsilon = 1e-13);
        let three = expand_power(3, true).unwrap();
        for l in [0, 2] {
            assert_eq!(three.coefficient(l), 0.0);
        }
        assert!(three.coefficient(1) > 0.0 && three.coefficient(3) > 0.0);
    }

    #[test]
    fn moment_constants() {
        assert_abs_diff_eq!(moment_constant(1.0).unwrap(), 8.0 / (3.0 * PI), epsilon = 1e-14);
        assert_abs_diff_eq!(moment_constant(2.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(moment_constant(4.0).unwrap(), 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(moment_constant(6.0).unwrap(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn reflection_signs() {
        let (l, s) = ln_gamma_signed(-0.5);
        assert_abs_diff_eq!(s * l.exp(), -2.0 * PI.sqrt(), epsilon = 1e-12);
        let (l, s) = ln_gamma_signed(-1.5);
        assert_abs_diff_eq!(s * l.exp(), 4.0 * PI.sqrt() / 3.0, epsilon = 1e-12);
    }

    /// Midpoint rule in φ for (2/π)∫ sqrt(1-x^2) |x|^α U_{2l}(x) dx.
    fn abs_power_coefficient_by_quadrature(alpha: f64, l: usize) -> f64 {
        let n = 200_000;
        let h = PI / n as f64;
        (0..n)
            .map(|i| {
                let phi = (i as f64 + 0.5) * h;
                let x = phi.cos();
                phi.sin().powi(2) * x.abs().powf(alpha) * u_unchecked(2 * l, x)
            })
            .sum::<f64>()
            * h
            * 2.0
            / PI
    }

    #[test]
    fn abs_coefficients_match_quadrature_for_real_alpha() {
        for alpha in [0.5, 1.0, 1.7, 3.0, 4.0] {
            for l in 0..6 {
                let q = abs_power_coefficient_by_quadrature(alpha, l);
                assert_abs_diff_eq!(coeff_b(alpha, l).unwrap(), q, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn odd_abs_power_is_truncated_but_close() {
        let s = expand_power(3, false).unwrap();
        assert_eq!(s.degree(), 2 * DEFAULT_TRUNCATION);
        for i in 0..=50 {
            let x = -1.0 + 0.04 * i as f64;
            assert_abs_diff_eq!(s.eval(x), x.abs().powi(3), epsilon = 1e-4);
        }
        let even = expand_power(4, false).unwrap();
        for i in 0..=50 {
            let x = -1.0 + 0.04 * i as f64;
            assert_abs_diff_eq!(even.eval(x), x.powi(4), epsilon = 1e-12);
        }
    }
}
