//! Sums over a window of `a` and a dyadic range of primes at once.

use rayon::prelude::*;

use super::IntervalSpec;
use crate::arith::{primes_in, PrimeModulus};
use crate::chebyshev::u_unchecked;
use crate::error::{Error, Result};
use crate::kloosterman::{kloosterman_naive, KloostermanTable, Method, TOL_ZERO};

/// Largest `x` accepted by [`horizontal_scan`]; every prime in `(x, 2x]` needs a table.
pub const HORIZONTAL_LIMIT: u64 = 100_000;

/// Below this window length the few sums needed per prime are evaluated directly.
const DIRECT_WINDOW: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizontalReport {
    /// `sum_{M < a <= M+N} sum_{x < p <= 2x, p ∤ a} U_k(cos theta_p(h a))`.
    pub sum: f64,
    pub positive: u64,
    pub negative: u64,
    /// Pairs with `|S(a,h;p)| <= tol_zero * sqrt(p)`.
    pub zero: u64,
    /// Pairs `(a, p)` entering the sums, i.e. with `p ∤ a`.
    pub pairs: u64,
    /// Primes in `(x, 2x]` not dividing `h`.
    pub primes: u64,
    /// `N * primes / 2`.
    pub main_term: f64,
}

#[derive(Default)]
struct Partial {
    sum: f64,
    positive: u64,
    negative: u64,
    zero: u64,
    pairs: u64,
}

fn scan_prime(p: PrimeModulus, interval: IntervalSpec, h: i64, k: usize) -> Result<Partial> {
    let root = p.sqrt();
    let values: Box<dyn Fn(u64) -> f64> = if interval.len >= DIRECT_WINDOW {
        let table = KloostermanTable::build(h, p, Method::Dft)?;
        Box::new(move |a| table.values()[a as usize])
    } else {
        Box::new(move |a| kloosterman_naive(a as i64, h, p))
    };
    let mut out = Partial::default();
    for a in interval.iter() {
        let a = p.reduce(a);
        if a == 0 {
            continue;
        }
        let s = values(a);
        out.pairs += 1;
        out.sum += u_unchecked(k, (s / (2.0 * root)).clamp(-1.0, 1.0));
        if s.abs() <= TOL_ZERO * root {
            out.zero += 1;
        } else if s > 0.0 {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
    }
    Ok(out)
}

/// Double sum over `a` in `interval` and primes `x < p <= 2x` with `p ∤ h`,
/// together with sign counts of `S(a, h; p)`.
pub fn horizontal_scan(interval: IntervalSpec, x: u64, h: i64, k: usize) -> Result<HorizontalReport> {
    if x < 3 {
        return Err(Error::domain(format!("x = {x} must be at least 3")));
    }
    if x > HORIZONTAL_LIMIT {
        return Err(Error::CostGuard(format!(
            "horizontal scan needs a table per prime up to 2x; x = {x} exceeds {HORIZONTAL_LIMIT}"
        )));
    }
    let primes: Vec<PrimeModulus> = primes_in(x, 2 * x).into_iter().filter(|p| !p.divides(h)).collect();
    let partials = primes
        .par_iter()
        .map(|&p| scan_prime(p, interval, h, k))
        .collect::<Result<Vec<_>>>()?;
    let mut total = Partial::default();
    for part in partials {
        total.sum += part.sum;
        total.positive += part.positive;
        total.negative += part.negative;
        total.zero += part.zero;
        total.pairs += part.pairs;
    }
    Ok(HorizontalReport {
        sum: total.sum,
        positive: total.positive,
        negative: total.negative,
        zero: total.zero,
        pairs: total.pairs,
        primes: primes.len() as u64,
        main_term: 0.5 * interval.len as f64 * primes.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn four_primes_by_direct_sums() {
        let r = horizontal_scan(IntervalSpec::new(0, 1), 10, 1, 1).unwrap();
        let oracle: f64 = [11u64, 13, 17, 19]
            .iter()
            .map(|&p| {
                let q = PrimeModulus::new(p).unwrap();
                kloosterman_naive(1, 1, q) / q.sqrt()
            })
            .sum();
        assert_abs_diff_eq!(r.sum, oracle, epsilon = 1e-9);
        assert_eq!(r.primes, 4);
        assert_eq!(r.pairs, 4);
        assert_eq!(r.positive + r.negative + r.zero, 4);
        assert_eq!(r.main_term, 2.0);
    }

    #[test]
    fn empty_window() {
        let r = horizontal_scan(IntervalSpec::new(5, 0), 50, 1, 2).unwrap();
        assert_eq!(r.sum, 0.0);
        assert_eq!(r.pairs, 0);
    }

    #[test]
    fn table_and_direct_routes_agree() {
        // 70 >= DIRECT_WINDOW uses tables; split into windows below it
        let long = horizontal_scan(IntervalSpec::new(-5, 70), 40, 3, 2).unwrap();
        let a = horizontal_scan(IntervalSpec::new(-5, 35), 40, 3, 2).unwrap();
        let b = horizontal_scan(IntervalSpec::new(30, 35), 40, 3, 2).unwrap();
        assert_abs_diff_eq!(long.sum, a.sum + b.sum, epsilon = 1e-9);
        assert_eq!(long.positive, a.positive + b.positive);
        assert_eq!(long.pairs, a.pairs + b.pairs);
    }

    #[test]
    fn multiples_of_p_and_h_are_excluded() {
        // a = 11 is skipped for p = 11; p = 13 divides h = 13
        let r = horizontal_scan(IntervalSpec::new(10, 1), 10, 13, 1).unwrap();
        assert_eq!(r.primes, 3);
        assert_eq!(r.pairs, 2);
    }

    #[test]
    fn guards() {
        assert!(matches!(horizontal_scan(IntervalSpec::new(0, 1), 2, 1, 1), Err(Error::Domain(_))));
        assert!(matches!(horizontal_scan(IntervalSpec::new(0, 1), 100_001, 1, 1), Err(Error::CostGuard(_))));
    }
}
