//! Statistics of Kloosterman angles over short intervals and full periods.
//!
//! Every scan runs over an [`IntervalSpec`] `(M, M+N]`; indices are reduced
//! mod `p`, so an interval may wrap or exceed a period. Residues `a ≡ 0` are
//! kept (their sum is `-1`) and reported separately where a statistic cares.

mod cdf;
mod counts;
mod gm;
mod horizontal;
mod interval;
mod moments;
mod multisum;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::PrimeModulus;
use crate::error::{Error, Result};

pub use cdf::{empirical_cdf_discrepancy, st_cdf, CDF_GRID};
pub use counts::{extreme_counts, large_value_count, sign_count, small_value_count, ExtremeReport, SignReport};
pub use gm::{
    dyadic_partition, gm_max_moment, gm_moment, gm_reports, w_k_sum, GmMomentSpec, GM_WORK_LIMIT, W_EXHAUSTIVE_LIMIT,
    W_SAMPLES,
};
pub use horizontal::{horizontal_scan, HorizontalReport, HORIZONTAL_LIMIT};
pub use interval::{
    d_k_max_over_h, d_k_sum, d_k_sum_table, d_k_twisted, full_sum, vst_full_sum, IntervalSum, MaxOverH, H_EXHAUSTIVE_LIMIT, H_SAMPLES,
};
pub use moments::{moment_v, moment_v_abs, MomentReport};
pub use multisum::{multi_sum, multi_sum_interval, MultiSumReport, MultiSumSpec, MULTISUM_LIMIT};

/// The integers `a` with `M < a <= M + N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalSpec {
    pub start: i64,
    pub len: u64,
}

impl IntervalSpec {
    pub fn new(start: i64, len: u64) -> Self {
        IntervalSpec { start, len }
    }

    /// `(0, p - 1]`: every nonzero residue once.
    pub fn units(p: PrimeModulus) -> Self {
        IntervalSpec::new(0, p.get() - 1)
    }

    /// `(0, p]`: every residue once, including `a ≡ 0`.
    pub fn period(p: PrimeModulus) -> Self {
        IntervalSpec::new(0, p.get())
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        (self.start + 1)..=(self.start + self.len as i64)
    }

    /// Residues `a mod p` for `a` in the interval, in order.
    pub fn residues(&self, p: PrimeModulus) -> impl Iterator<Item = usize> {
        let m = p.get();
        let first = p.reduce(self.start + 1);
        (0..self.len).map(move |i| ((first + i % m) % m) as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// A count together with its predicted main term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountReport {
    pub observed: u64,
    pub main_term: f64,
    pub error: f64,
    /// Residues excluded from the count (numerically zero sums, `a ≡ 0`).
    pub zero_bucket: u64,
}

impl CountReport {
    pub fn new(observed: u64, main_term: f64, zero_bucket: u64) -> Self {
        CountReport {
            observed,
            main_term,
            error: observed as f64 - main_term,
            zero_bucket,
        }
    }
}

/// Draws `(M, h)` pairs with `0 <= M < p`, `1 <= h < p`. Sample `i` comes from
/// stream `i` of a ChaCha8 generator keyed by `seed`, so any prefix of the
/// sample list is the same whatever the total count.
pub fn sample_shifts(p: PrimeModulus, count: usize, seed: u64) -> Vec<(i64, i64)> {
    let m = p.get();
    (0..count)
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            (rng.random_range(0..m) as i64, rng.random_range(1..m) as i64)
        })
        .collect()
}

pub(crate) fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `count` distinct units mod `p`, sampled from stream `tag` of `seed`.
pub(crate) fn sample_units(p: PrimeModulus, count: usize, seed: u64, tag: u64) -> Vec<u64> {
    let m = p.get();
    let mut rng = stream(seed, tag);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count.min(m as usize - 1) {
        let a = rng.random_range(1..m);
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

pub(crate) fn require_unit(p: PrimeModulus, x: i64, name: &str) -> Result<()> {
    if p.divides(x) {
        Err(Error::domain(format!("{name} = {x} is divisible by p = {p}")))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_residues_wrap() {
        let p = PrimeModulus::new(5).unwrap();
        let r: Vec<usize> = IntervalSpec::new(3, 7).residues(p).collect();
        assert_eq!(r, vec![4, 0, 1, 2, 3, 4, 0]);
        let r: Vec<usize> = IntervalSpec::new(-7, 3).residues(p).collect();
        assert_eq!(r, vec![4, 0, 1]);
        assert_eq!(IntervalSpec::new(-7, 3).iter().collect::<Vec<_>>(), vec![-6, -5, -4]);
        assert_eq!(IntervalSpec::new(0, 0).residues(p).count(), 0);
    }

    #[test]
    fn shift_sampling_is_prefix_stable() {
        let p = PrimeModulus::new(1_000_003).unwrap();
        let short = sample_shifts(p, 5, 42);
        let long = sample_shifts(p, 100, 42);
        assert_eq!(&long[..5], &short[..]);
        assert_ne!(sample_shifts(p, 5, 43), short);
        assert!(long.iter().all(|&(m, h)| (0..1_000_003).contains(&m) && (1..1_000_003).contains(&h)));
    }

    #[test]
    fn unit_sampling_is_distinct() {
        let p = PrimeModulus::new(7).unwrap();
        let mut v = sample_units(p, 64, 1, 0);
        v.sort();
        assert_eq!(v, vec![1, 2, 3, 4, 5, 6]);
    }
}
