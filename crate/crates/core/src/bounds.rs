//! Closed-form bound shapes, all with implied constants set to 1.
//!
//! Statistics report `observed / bound`; that ratio is then an empirical
//! value of the implied constant.

use std::fmt;

/// Largest `r` tried when optimising [`omega_r`] over `r`.
pub const MAX_R: u32 = 8;

/// One inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub label: String,
    pub observed: f64,
    pub bound: f64,
    pub ratio: f64,
    pub params: Vec<(String, String)>,
}

impl BoundReport {
    pub fn new(label: impl Into<String>, observed: f64, bound: f64) -> Self {
        BoundReport {
            label: label.into(),
            observed,
            bound,
            ratio: ratio(observed, bound),
            params: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    /// `observed <= bound * (1 + tol)`.
    pub fn holds(&self, tol: f64) -> bool {
        self.ratio <= 1.0 + tol
    }
}

/// `observed / bound`, with `+inf` for a positive observation against a zero
/// bound and `0` when both vanish.
pub fn ratio(observed: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        observed / bound
    } else if observed > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// `N^{1-1/r} p^{(r+1)/(4r^2)} ln p`.
pub fn omega_r(p: f64, n: f64, r: u32) -> f64 {
    let r = r as f64;
    n.powf(1.0 - 1.0 / r) * p.powf((r + 1.0) / (4.0 * r * r)) * p.ln()
}

/// `(r*, omega_{r*})` minimising `omega_r(p, N)` over `r = 1..=MAX_R`.
/// Ties go to the smaller `r`.
pub fn best_omega(p: f64, n: f64) -> (u32, f64) {
    (1..=MAX_R)
        .map(|r| (r, omega_r(p, n, r)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

/// Weil: `2 sqrt(p)`.
pub fn weil_bound(p: f64) -> f64 {
    2.0 * p.sqrt()
}

/// Katz: `(k+1) sqrt(p) / 2` for the complete sum of `U_k(cos theta_p(a))`.
pub fn katz_bound(p: f64, k: usize) -> f64 {
    0.5 * (k + 1) as f64 * p.sqrt()
}

/// Multi-linear sum with pairwise distinct linear polynomials:
/// `prod (k_i + 1) sqrt(p)`.
pub fn lemma5_bound(p: f64, orders: &[usize]) -> f64 {
    orders.iter().map(|&k| (k + 1) as f64).product::<f64>() * p.sqrt()
}

/// Multi-linear sum in general: `prod (k_i + 1)^2 sqrt(p)`.
pub fn lemma6_bound(p: f64, orders: &[usize]) -> f64 {
    orders.iter().map(|&k| ((k + 1) as f64).powi(2)).product::<f64>() * p.sqrt()
}

/// Moment of window sums: `k^{2r} h^r p + k^{4r} h^{2r} sqrt(p)`.
pub fn lemma7_bound(p: f64, h: f64, r: u32, k: usize) -> f64 {
    let (k, r) = (k as f64, r as i32);
    k.powi(2 * r) * h.powi(r) * p + k.powi(4 * r) * h.powi(2 * r) * p.sqrt()
}

/// Maximal moment of window sums. For `r = 1` the first term picks up
/// `(log 2h)^2`.
pub fn lemma8_bound(p: f64, h: f64, r: u32, k: usize) -> f64 {
    if r == 1 {
        let k = k as f64;
        k * k * h * p * (2.0 * h).ln().powi(2) + k.powi(4) * h * h * p.sqrt()
    } else {
        lemma7_bound(p, h, r, k)
    }
}

/// Window-moment and maximal-window-moment shapes together.
pub fn gm_bounds(p: f64, h: f64, r: u32, k: usize) -> (f64, f64) {
    (lemma7_bound(p, h, r, k), lemma8_bound(p, h, r, k))
}

/// Sum over disjoint intervals of length in `(h, 2h]` of maximal `2r`-th powers.
pub fn lemma9_bound(p: f64, h: f64, r: u32, k: usize) -> f64 {
    let k = k as f64;
    if r == 1 {
        k * k * p * (2.0 * h).ln().powi(2) + k.powi(4) * h * p.sqrt()
    } else {
        let r = r as i32;
        k.powi(2 * r) * h.powi(r - 1) * p + k.powi(4 * r) * h.powi(2 * r - 1) * p.sqrt()
    }
}

/// Main term of the short-interval estimate: `k^2 omega_r(p, N)`, at the best `r`.
pub fn short_interval_bound(p: f64, n: f64, k: usize) -> (u32, f64) {
    let (r, w) = best_omega(p, n);
    (r, (k * k) as f64 * w)
}
