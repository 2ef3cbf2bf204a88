use std::f64::consts::PI;

use num_complex::Complex64;

use super::{require_unit, sample_units, IntervalSpec};
use crate::bounds::{katz_bound, BoundReport};
use crate::chebyshev::u_unchecked;
use crate::error::{Error, Result};
use crate::kloosterman::{AngleTable, KloostermanTable};

/// `max_{(h,p)=1}` is taken over every `h` up to this modulus, and over
/// [`H_SAMPLES`] seeded draws above it.
pub const H_EXHAUSTIVE_LIMIT: u64 = 2003;
pub const H_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSum {
    pub value: f64,
    /// How many `a` in the interval were `≡ 0 (mod p)`.
    pub zero_hits: u64,
}

/// `D_k(M, N; p, h) = sum_{M < a <= M+N} U_k(cos theta_p(h a))`.
pub fn d_k_sum(angles: &AngleTable, interval: IntervalSpec, k: usize) -> IntervalSum {
    let cos = angles.cosines();
    let mut value = 0.0;
    let mut zero_hits = 0;
    for r in interval.residues(angles.modulus()) {
        if r == 0 {
            zero_hits += 1;
        }
        value += u_unchecked(k, cos[r]);
    }
    IntervalSum { value, zero_hits }
}

/// `sum_{M < a <= M+N} U_k(cos theta_p(h a)) e(m a / p)`.
pub fn d_k_twisted(angles: &AngleTable, interval: IntervalSpec, m: i64, k: usize) -> Complex64 {
    let p = angles.modulus();
    let modulus = p.get();
    let m = p.reduce(m);
    let cos = angles.cosines();
    interval
        .residues(p)
        .map(|r| {
            let phase = (m as u128 * r as u128 % modulus as u128) as f64;
            Complex64::from_polar(u_unchecked(k, cos[r]), 2.0 * PI * phase / modulus as f64)
        })
        .sum()
}

fn unit_cosines(table: &KloostermanTable) -> Result<impl Iterator<Item = f64> + '_> {
    if table.twist() != 1 {
        return Err(Error::domain("complete sums need a table with twist 1"));
    }
    let scale = 1.0 / (2.0 * table.modulus().sqrt());
    Ok(table.values()[1..].iter().map(move |s| (s * scale).clamp(-1.0, 1.0)))
}

/// Signed complete sum `sum_{a=1}^{p-1} U_k(cos theta_p(a))`.
pub fn full_sum(table: &KloostermanTable, k: usize) -> Result<f64> {
    Ok(unit_cosines(table)?.map(|c| u_unchecked(k, c)).sum())
}

/// `|sum_{a=1}^{p-1} U_k(cos theta_p(a))|` against `(k+1) sqrt(p) / 2`.
pub fn vst_full_sum(table: &KloostermanTable, k: usize) -> Result<BoundReport> {
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let p = table.modulus();
    let observed = full_sum(table, k)?.abs();
    Ok(BoundReport::new("vst", observed, katz_bound(p.get() as f64, k))
        .with_param("p", p)
        .with_param("k", k))
}

/// [`d_k_sum`] read straight from a twist-1 table, without building the
/// angle table for `h`.
pub fn d_k_sum_table(table: &KloostermanTable, interval: IntervalSpec, h: i64, k: usize) -> Result<IntervalSum> {
    let p = table.modulus();
    if table.twist() != 1 {
        return Err(Error::domain("interval sums need a table with twist 1"));
    }
    require_unit(p, h, "h")?;
    let h = p.reduce(h) as u128;
    let modulus = p.get() as u128;
    let scale = 1.0 / (2.0 * p.sqrt());
    let values = table.values();
    let mut out = IntervalSum {
        value: 0.0,
        zero_hits: 0,
    };
    for r in interval.residues(p) {
        if r == 0 {
            out.zero_hits += 1;
        }
        let ha = (h * r as u128 % modulus) as usize;
        out.value += u_unchecked(k, (values[ha] * scale).clamp(-1.0, 1.0));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxOverH {
    pub max_abs: f64,
    pub argmax_h: u64,
    pub exhaustive: bool,
}

/// `max_{(h,p)=1} |D_k(M, N; p, h)|`, exhaustive for small `p` and sampled
/// (seeded) above [`H_EXHAUSTIVE_LIMIT`].
pub fn d_k_max_over_h(table: &KloostermanTable, interval: IntervalSpec, k: usize, seed: u64) -> Result<MaxOverH> {
    let p = table.modulus();
    if table.twist() != 1 {
        return Err(Error::domain("max over h needs a table with twist 1"));
    }
    let exhaustive = p.get() <= H_EXHAUSTIVE_LIMIT;
    let hs: Vec<u64> = if exhaustive {
        (1..p.get()).collect()
    } else {
        sample_units(p, H_SAMPLES, seed, 0)
    };
    let mut best = MaxOverH {
        max_abs: -1.0,
        argmax_h: 0,
        exhaustive,
    };
    for h in hs {
        let v = d_k_sum_table(table, interval, h as i64, k)?.value;
        if v.abs() > best.max_abs {
            best.max_abs = v.abs();
            best.argmax_h = h;
        }
    }
    Ok(best)
}
