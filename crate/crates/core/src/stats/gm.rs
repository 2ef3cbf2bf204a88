//! Moments of window sums of `U_k(cos theta_p(m n))`.

use super::{require_unit, sample_units, IntervalSpec};
use crate::arith::PrimeModulus;
use crate::bounds::{lemma7_bound, lemma8_bound, lemma9_bound, BoundReport};
use crate::chebyshev::u_unchecked;
use crate::error::{Error, Result};
use crate::kloosterman::KloostermanTable;

/// Above this modulus the max over `a` in [`w_k_sum`] is taken over
/// [`W_SAMPLES`] seeded units instead of all of them.
pub const W_EXHAUSTIVE_LIMIT: u64 = 2003;
pub const W_SAMPLES: usize = 64;
/// Largest `p h` accepted by the window moments.
pub const GM_WORK_LIMIT: u64 = 100_000_000;

/// Window length `h`, moment order `r`, dilation `m`, Chebyshev order `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GmMomentSpec {
    pub h: u64,
    pub r: u32,
    pub m: i64,
    pub k: usize,
}

impl GmMomentSpec {
    fn validate(&self, p: PrimeModulus) -> Result<()> {
        if self.h < 1 || self.h > p.get() {
            return Err(Error::domain(format!("window h = {} must lie in [1, p]", self.h)));
        }
        if self.r < 1 || self.k < 1 {
            return Err(Error::domain("r and k must be positive"));
        }
        if p.get().saturating_mul(self.h) > GM_WORK_LIMIT {
            return Err(Error::CostGuard(format!(
                "window moments with p h = {} exceed the limit {GM_WORK_LIMIT}",
                p.get() as u128 * self.h as u128
            )));
        }
        require_unit(p, self.m, "m")
    }
}

fn cosines(table: &KloostermanTable) -> Result<Vec<f64>> {
    if table.twist() != 1 {
        return Err(Error::domain("window moments need a table with twist 1"));
    }
    let scale = 1.0 / (2.0 * table.modulus().sqrt());
    Ok(table.values().iter().map(|s| (s * scale).clamp(-1.0, 1.0)).collect())
}

/// `u[n] = U_k(cos theta_p(m n))` for `n = 0..p`.
fn dilated(table: &KloostermanTable, m: i64, k: usize) -> Result<Vec<f64>> {
    let p = table.modulus();
    let cos = cosines(table)?;
    let m = p.reduce(m) as u128;
    let modulus = p.get() as u128;
    Ok((0..p.get())
        .map(|n| u_unchecked(k, cos[(m * n as u128 % modulus) as usize]))
        .collect())
}

/// `S_k(h, r; m) = sum_{a=1}^{p} |sum_{a < n <= a+h} U_k(cos theta_p(m n))|^{2r}`.
pub fn gm_moment(spec: &GmMomentSpec, table: &KloostermanTable) -> Result<f64> {
    let p = table.modulus();
    spec.validate(p)?;
    let u = dilated(table, spec.m, spec.k)?;
    let n = p.len();
    let h = spec.h as usize;
    let e = 2 * spec.r as i32;
    // window (a, a+h] for a = 1, then slide
    let mut window: f64 = (2..=h + 1).map(|j| u[j % n]).sum();
    let mut total = 0.0;
    for a in 1..=n {
        total += window.powi(e);
        window += u[(a + h + 1) % n] - u[(a + 1) % n];
    }
    Ok(total)
}

/// `S*_k(h, r; m) = sum_{a=1}^{p} max_{h' < h} |sum_{a < n <= a+h'} U_k(...)|^{2r}`.
pub fn gm_max_moment(spec: &GmMomentSpec, table: &KloostermanTable) -> Result<f64> {
    let p = table.modulus();
    spec.validate(p)?;
    let u = dilated(table, spec.m, spec.k)?;
    let n = p.len();
    let e = 2 * spec.r as i32;
    let mut total = 0.0;
    for a in 1..=n {
        let mut partial = 0.0f64;
        let mut best = 0.0f64;
        for j in 1..spec.h as usize {
            partial += u[(a + j) % n];
            best = best.max(partial.abs());
        }
        total += best.powi(e);
    }
    Ok(total)
}

/// Both window moments against their bound shapes scaled by `16^r`.
/// `min_constant` in the params is `observed / shape`.
pub fn gm_reports(spec: &GmMomentSpec, table: &KloostermanTable) -> Result<(BoundReport, BoundReport)> {
    let p = table.modulus();
    let pf = p.get() as f64;
    let hf = spec.h as f64;
    let c = 16f64.powi(spec.r as i32);
    let make = |label: &str, observed: f64, shape: f64| {
        BoundReport::new(label, observed, c * shape)
            .with_param("p", p)
            .with_param("h", spec.h)
            .with_param("r", spec.r)
            .with_param("k", spec.k)
            .with_param("m", spec.m)
            .with_param("min_constant", observed / shape)
    };
    let s = gm_moment(spec, table)?;
    let s_max = gm_max_moment(spec, table)?;
    Ok((
        make("lemma7", s, lemma7_bound(pf, hf, spec.r, spec.k)),
        make("lemma8", s_max, lemma8_bound(pf, hf, spec.r, spec.k)),
    ))
}

/// Consecutive intervals of length `2h` covering `[0, p)`; a final piece is
/// kept only if it is longer than `h`.
pub fn dyadic_partition(p: PrimeModulus, h: u64) -> Vec<IntervalSpec> {
    let mut out = Vec::new();
    if h == 0 {
        return out;
    }
    let mut start = -1i64;
    let end = p.get() as i64 - 1;
    while start < end {
        let len = ((end - start) as u64).min(2 * h);
        if len > h {
            out.push(IntervalSpec::new(start, len));
        }
        start += len as i64;
    }
    out
}

fn validate_partition(partition: &[IntervalSpec], p: PrimeModulus, h: u64) -> Result<()> {
    let mut sorted = partition.to_vec();
    sorted.sort();
    for iv in &sorted {
        if iv.start < -1 || iv.start + iv.len as i64 > p.get() as i64 - 1 {
            return Err(Error::domain(format!("interval {iv:?} leaves [0, p)")));
        }
        if iv.len <= h || iv.len > 2 * h {
            return Err(Error::domain(format!(
                "interval {iv:?} has length {} outside ({h}, {}]",
                iv.len,
                2 * h
            )));
        }
    }
    for pair in sorted.windows(2) {
        if pair[0].start + pair[0].len as i64 > pair[1].start {
            return Err(Error::domain(format!("intervals {:?} and {:?} overlap", pair[0], pair[1])));
        }
    }
    Ok(())
}

/// `W_k(r) = sum_t max_{(a,p)=1} |sum_{m in I_t} U_k(cos theta_p(a m))|^{2r}`
/// against the `16^r`-scaled shape. The max over `a` is exhaustive up to
/// [`W_EXHAUSTIVE_LIMIT`], otherwise over [`W_SAMPLES`] seeded units.
pub fn w_k_sum(
    partition: &[IntervalSpec],
    table: &KloostermanTable,
    r: u32,
    k: usize,
    h: u64,
    seed: u64,
) -> Result<BoundReport> {
    let p = table.modulus();
    if r < 1 || k < 1 {
        return Err(Error::domain("r and k must be positive"));
    }
    validate_partition(partition, p, h)?;
    let cos = cosines(table)?;
    let u: Vec<f64> = cos.iter().map(|&c| u_unchecked(k, c)).collect();
    let units: Vec<u64> = if p.get() <= W_EXHAUSTIVE_LIMIT {
        (1..p.get()).collect()
    } else {
        sample_units(p, W_SAMPLES, seed, 1)
    };
    let modulus = p.get() as u128;
    let e = 2 * r as i32;
    let observed: f64 = partition
        .iter()
        .map(|iv| {
            units
                .iter()
                .map(|&a| {
                    iv.iter()
                        .map(|m| u[(a as u128 * m as u128 % modulus) as usize])
                        .sum::<f64>()
                        .abs()
                        .powi(e)
                })
                .fold(0.0, f64::max)
        })
        .sum();
    let shape = lemma9_bound(p.get() as f64, h as f64, r, k);
    Ok(
        BoundReport::new("lemma9", observed, 16f64.powi(r as i32) * shape)
            .with_param("p", p)
            .with_param("h", h)
            .with_param("r", r)
            .with_param("k", k)
            .with_param("intervals", partition.len())
            .with_param("min_constant", observed / shape),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::Method;
    use approx::assert_abs_diff_eq;

    fn table(p: u64) -> KloostermanTable {
        KloostermanTable::build(1, PrimeModulus::new(p).unwrap(), Method::Dft).unwrap()
    }

    fn spec(h: u64, r: u32, m: i64, k: usize) -> GmMomentSpec {
        GmMomentSpec { h, r, m, k }
    }

    /// Direct transcription of the definition.
    fn gm_moment_oracle(t: &KloostermanTable, s: &GmMomentSpec) -> f64 {
        let p = t.modulus().get() as i64;
        let root = t.modulus().sqrt();
        (1..=p)
            .map(|a| {
                ((a + 1)..=(a + s.h as i64))
                    .map(|n| u_unchecked(s.k, (t.value(s.m * n) / (2.0 * root)).clamp(-1.0, 1.0)))
                    .sum::<f64>()
                    .powi(2 * s.r as i32)
            })
            .sum()
    }

    #[test]
    fn p5_window_one() {
        let t = table(5);
        let v = gm_moment(&spec(1, 1, 1, 1), &t).unwrap();
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-9);
    }

    #[test]
    fn sliding_window_matches_definition() {
        let t = table(101);
        for s in [spec(1, 1, 1, 1), spec(7, 2, 3, 2), spec(101, 1, 5, 3), spec(50, 3, -2, 1)] {
            assert_abs_diff_eq!(gm_moment(&s, &t).unwrap(), gm_moment_oracle(&t, &s), epsilon = 1e-7);
        }
    }

    #[test]
    fn max_moment_dominates_shorter_window() {
        let t = table(211);
        for h in [1u64, 5, 20] {
            for r in [1, 2] {
                let plain = gm_moment(&spec(h, r, 1, 2), &t).unwrap();
                let max = gm_max_moment(&spec(h + 1, r, 1, 2), &t).unwrap();
                assert!(max >= plain - 1e-9);
            }
        }
        assert_eq!(gm_max_moment(&spec(1, 1, 1, 1), &t).unwrap(), 0.0);
    }

    #[test]
    fn spec_validation() {
        let t = table(11);
        assert!(gm_moment(&spec(0, 1, 1, 1), &t).is_err());
        assert!(gm_moment(&spec(12, 1, 1, 1), &t).is_err());
        assert!(gm_moment(&spec(3, 1, 22, 1), &t).is_err());
        assert!(gm_moment(&spec(3, 0, 1, 1), &t).is_err());
    }

    #[test]
    fn work_guard() {
        let t = table(1_000_003);
        assert!(matches!(gm_moment(&spec(101, 1, 1, 1), &t), Err(Error::CostGuard(_))));
        assert!(gm_moment(&spec(99, 1, 1, 1), &t).is_ok());
    }

    #[test]
    fn w_k_single_interval_by_lookup() {
        let t = table(5);
        let root = 5f64.sqrt();
        let u1 = |x: i64| t.value(x) / root;
        let iv = IntervalSpec::new(1, 2); // m in {2, 3}
        let r = w_k_sum(&[iv], &t, 1, 1, 1, 0).unwrap();
        let oracle = (1..5)
            .map(|a| (u1(2 * a) + u1(3 * a)).powi(2))
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(r.observed, oracle, epsilon = 1e-9);
    }

    #[test]
    fn partition_rules() {
        let q = PrimeModulus::new(101).unwrap();
        let part = dyadic_partition(q, 10);
        assert_eq!(part.len(), 5);
        assert!(part.iter().all(|iv| iv.len == 20));
        assert_eq!(part[0], IntervalSpec::new(-1, 20));
        let t = table(101);
        assert!(w_k_sum(&part, &t, 1, 1, 10, 0).is_ok());

        let overlapping = [IntervalSpec::new(0, 15), IntervalSpec::new(10, 15)];
        assert!(w_k_sum(&overlapping, &t, 1, 1, 10, 0).is_err());
        let short = [IntervalSpec::new(0, 5)];
        assert!(w_k_sum(&short, &t, 1, 1, 10, 0).is_err());
        let outside = [IntervalSpec::new(90, 15)];
        assert!(w_k_sum(&outside, &t, 1, 1, 10, 0).is_err());
        // remainder of 11 > h = 10 is kept
        let q = PrimeModulus::new(71).unwrap();
        let part = dyadic_partition(q, 10);
        assert_eq!(part.last().unwrap().len, 11);
    }
}
