use super::IntervalSpec;
use crate::bounds::best_omega;
use crate::chebyshev::moment_constant;
use crate::error::{Error, Result};
use crate::kloosterman::AngleTable;

/// Power moment of `S(a, h; p)` over an interval, with its predicted main term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub alpha: f64,
    pub signed: bool,
    pub observed: f64,
    pub main_term: f64,
    /// `observed / (N p^{α/2})`.
    pub normalized: f64,
    /// `p^{α/2} omega_r(p, N)` at the best `r`.
    pub error_scale: f64,
    /// `observed / main_term`, or `|observed| / error_scale` when the main
    /// term vanishes.
    pub ratio: f64,
}

fn report(angles: &AngleTable, interval: IntervalSpec, alpha: f64, signed: bool, observed: f64) -> Result<MomentReport> {
    let p = angles.modulus().get() as f64;
    let n = interval.len as f64;
    let scale = n * p.powf(alpha / 2.0);
    let mut main_term = moment_constant(alpha)? * scale;
    if signed && (alpha as u64) % 2 == 1 {
        main_term = 0.0;
    }
    let error_scale = p.powf(alpha / 2.0) * best_omega(p, n.max(1.0)).1;
    let ratio = if main_term != 0.0 {
        observed / main_term
    } else {
        observed.abs() / error_scale
    };
    Ok(MomentReport {
        alpha,
        signed,
        observed,
        main_term,
        normalized: if scale > 0.0 { observed / scale } else { 0.0 },
        error_scale,
        ratio,
    })
}

/// `V_α = sum_{M < a <= M+N} S(a, h; p)^α` for integer `α >= 1`.
pub fn moment_v(angles: &AngleTable, interval: IntervalSpec, alpha: f64) -> Result<MomentReport> {
    if alpha.is_nan() || alpha < 1.0 || alpha.fract() != 0.0 {
        return Err(Error::Unsupported(format!(
            "signed moments need a positive integer alpha, got {alpha}"
        )));
    }
    let sums = angles.sums();
    let e = alpha as i32;
    let observed = interval.residues(angles.modulus()).map(|r| sums[r].powi(e)).sum();
    report(angles, interval, alpha, true, observed)
}

/// `Ṽ_α = sum_{M < a <= M+N} |S(a, h; p)|^α` for real `α > 0`.
pub fn moment_v_abs(angles: &AngleTable, interval: IntervalSpec, alpha: f64) -> Result<MomentReport> {
    if alpha.is_nan() || alpha <= 0.0 || alpha.is_infinite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    let sums = angles.sums();
    let observed = interval
        .residues(angles.modulus())
        .map(|r| sums[r].abs().powf(alpha))
        .sum();
    report(angles, interval, alpha, false, observed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeModulus;
    use crate::kloosterman::{build_angles, KloostermanTable, Method};
    use approx::assert_abs_diff_eq;

    fn angles(p: u64) -> AngleTable {
        let q = PrimeModulus::new(p).unwrap();
        build_angles(&KloostermanTable::build(1, q, Method::Dft).unwrap(), 1).unwrap()
    }

    #[test]
    fn second_moment_identity() {
        for p in [5u64, 101, 1009] {
            let ang = angles(p);
            let iv = IntervalSpec::units(ang.modulus());
            let pf = p as f64;
            let r = moment_v(&ang, iv, 2.0).unwrap();
            assert_abs_diff_eq!(r.observed, pf * pf - pf - 1.0, epsilon = 1e-6 * pf);
            assert_abs_diff_eq!(r.main_term, (pf - 1.0) * pf, epsilon = 1e-9 * pf * pf);
            let a = moment_v_abs(&ang, iv, 2.0).unwrap();
            assert_abs_diff_eq!(a.observed, r.observed, epsilon = 1e-9 * pf * pf);
        }
    }

    #[test]
    fn fourth_moment_at_10007() {
        let ang = angles(10_007);
        let r = moment_v(&ang, IntervalSpec::units(ang.modulus()), 4.0).unwrap();
        assert!((0.95..=1.05).contains(&(r.normalized / 2.0)), "{}", r.normalized);
        // 2p^3 - 3p^2 - 3p - 1 over the units
        let p = 10_007f64;
        assert_abs_diff_eq!(r.observed, 2.0 * p.powi(3) - 3.0 * p * p - 3.0 * p - 1.0, epsilon = 1e-6 * p.powi(3));
    }

    #[test]
    fn odd_signed_moment_has_no_main_term() {
        let ang = angles(101);
        let iv = IntervalSpec::new(7, 40);
        for alpha in [1.0, 3.0, 5.0] {
            let r = moment_v(&ang, iv, alpha).unwrap();
            assert_eq!(r.main_term, 0.0);
            assert_abs_diff_eq!(r.ratio, r.observed.abs() / r.error_scale, epsilon = 1e-15);
        }
        assert!(matches!(moment_v(&ang, iv, 1.5), Err(Error::Unsupported(_))));
        assert!(moment_v_abs(&ang, iv, 1.5).is_ok());
        assert!(moment_v_abs(&ang, iv, 0.0).is_err());
    }
}
