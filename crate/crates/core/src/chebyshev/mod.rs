//! Chebyshev polynomials of the second kind.
//!
//! `U_0 = 1`, `U_1 = 2x`, `U_{k+1} = 2x U_k - U_{k-1}`, equivalently
//! `U_k(cos φ) = sin((k+1)φ) / sin φ`. They are orthonormal on `[-1, 1]` for
//! the Sato-Tate weight `(2/π) sqrt(1 - x^2)`, which is why sums of
//! `U_k(cos theta_p(a))` measure equidistribution of Kloosterman angles.

mod indicator;
mod power;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use indicator::expand_indicator;
pub use power::{coeff_a, coeff_b, expand_abs_power, expand_power, ln_gamma_signed, moment_constant};

/// Truncation degree used for infinite expansions unless told otherwise.
pub const DEFAULT_TRUNCATION: usize = 64;

/// `x ↦ sum_l c_l U_l(x)` with finitely many coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    coefficients: Vec<f64>,
}

impl ChebyshevSeries {
    pub fn new(coefficients: Vec<f64>) -> Self {
        ChebyshevSeries { coefficients }
    }

    /// The series `U_k`.
    pub fn basis(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        ChebyshevSeries::new(c)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Index of the last stored coefficient.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficient(&self, l: usize) -> f64 {
        self.coefficients.get(l).copied().unwrap_or(0.0)
    }

    /// Clenshaw evaluation. Defined for every real `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            let b0 = c + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        b1
    }

    /// `l,coefficient` lines, one per stored coefficient.
    pub fn csv_rows(&self) -> Vec<String> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(l, c)| format!("{l},{c:.12e}"))
            .collect()
    }
}

/// `U_k(x)` by the three-term recurrence.
pub fn u_eval(k: usize, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("U_k is evaluated on [-1, 1], got x = {x}")));
    }
    Ok(u_unchecked(k, x))
}

/// Recurrence without the range check; hot loops call this on values that
/// are already clamped.
#[inline]
pub fn u_unchecked(k: usize, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let two_x = 2.0 * x;
            let (mut prev, mut cur) = (1.0, two_x);
            for _ in 1..k {
                let next = two_x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Exact coefficients of a product `prod_j U_{k_j} = sum_l beta_l U_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linearization {
    orders: Vec<usize>,
    beta: Vec<BigUint>,
}

impl Linearization {
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// `K = sum_j k_j`.
    pub fn total_degree(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self) -> &[BigUint] {
        &self.beta
    }

    pub fn to_series(&self) -> ChebyshevSeries {
        ChebyshevSeries::new(self.beta.iter().map(|b| b.to_f64().unwrap_or(f64::INFINITY)).collect())
    }

    /// Smallest `c` with `beta_l <= c / (K + 1) * prod_j (k_j + 1)` for all `l`.
    pub fn minimal_constant(&self) -> f64 {
        let k_plus_1 = (self.total_degree() + 1) as f64;
        let prod: f64 = self.orders.iter().map(|&k| (k + 1) as f64).product();
        let max_beta = self
            .beta
            .iter()
            .map(|b| b.to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        max_beta * k_plus_1 / prod
    }
}

pub const MAX_LINEARIZATION_DEGREE: usize = 10_000;

/// Linearize a product of `U`'s with `U_m U_n = sum_{j=0}^{min(m,n)} U_{m+n-2j}`,
/// folding the factors in from left to right. The empty product is `U_0`.
pub fn linearize_product(orders: &[usize]) -> Result<Linearization> {
    let total: usize = orders.iter().sum();
    if total > MAX_LINEARIZATION_DEGREE {
        return Err(Error::domain(format!(
            "total degree {total} exceeds {MAX_LINEARIZATION_DEGREE}"
        )));
    }
    let mut beta = vec![BigUint::one()];
    for &k in orders {
        let mut next = vec![BigUint::zero(); beta.len() + k];
        for (l, coeff) in beta.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for j in 0..=l.min(k) {
                next[l + k - 2 * j] += coeff;
            }
        }
        beta = next;
    }
    Ok(Linearization {
        orders: orders.to_vec(),
        beta,
    })
}
