//! Chebyshev expansions against independent numerical oracles.

use kloosterlab::chebyshev::{expand_indicator, expand_power, linearize_product, u_unchecked};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Adaptive Simpson on `[a, b]`.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 40)
}

/// `(2/π) ∫_c^d sqrt(1-x^2) U_l(x) dx`, integrated in `φ` with `x = cos φ`
/// and `U_l` from the three-term recurrence.
fn indicator_by_quadrature(c: f64, d: f64, l: usize) -> f64 {
    let f = |phi: f64| phi.sin().powi(2) * u_unchecked(l, phi.cos());
    2.0 / std::f64::consts::PI * adaptive_simpson(&f, d.acos(), c.acos(), 1e-12)
}

#[test]
fn indicator_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let (c, d) = if x < y { (x, y) } else { (y, x) };
        let l = rng.random_range(0..=50usize);
        let series = expand_indicator(c, d, l).unwrap();
        let oracle = indicator_by_quadrature(c, d, l);
        assert!(
            (series.coefficient(l) - oracle).abs() <= 1e-8,
            "c={c} d={d} l={l}: {} vs {oracle}",
            series.coefficient(l)
        );
    }
}

#[test]
fn power_expansion_reconstructs_monomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points: Vec<f64> = (0..1000).map(|_| rng.random_range(-1.0..=1.0)).collect();
    for alpha in 1..=8u32 {
        let signed = expand_power(alpha, true).unwrap();
        for &x in &points {
            assert!((signed.eval(x) - x.powi(alpha as i32)).abs() <= 1e-10, "alpha={alpha} x={x}");
        }
        if alpha % 2 == 0 {
            let abs = expand_power(alpha, false).unwrap();
            for &x in &points {
                assert!((abs.eval(x) - x.abs().powi(alpha as i32)).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn linearization_matches_pointwise_products_exhaustively_for_pairs() {
    let xs: Vec<f64> = (0..=40).map(|i| -1.0 + i as f64 / 20.0).collect();
    for m in 0..=12 {
        for n in 0..=12 {
            let s = linearize_product(&[m, n]).unwrap().to_series();
            for &x in &xs {
                let prod = u_unchecked(m, x) * u_unchecked(n, x);
                assert!((s.eval(x) - prod).abs() <= 1e-9 * (1.0 + prod.abs()));
            }
        }
    }
}

proptest! {
    #[test]
    fn linearization_matches_pointwise_products(
        orders in prop::collection::vec(0usize..=12, 1..=4),
        x in -1.0f64..=1.0,
    ) {
        let lin = linearize_product(&orders).unwrap();
        let prod: f64 = orders.iter().map(|&k| u_unchecked(k, x)).product();
        prop_assert!((lin.to_series().eval(x) - prod).abs() <= 1e-9 * (1.0 + prod.abs()));
        if orders.iter().sum::<usize>() % 2 == 1 {
            prop_assert!(lin.beta()[0].is_zero());
        }
    }
}
