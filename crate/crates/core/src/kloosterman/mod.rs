//! Kloosterman sums `S(a, b; p)` and Kloosterman angles.
//!
//! For a prime `p` and `p ∤ b`,
//!
//! ```text
//! S(a, b; p) = sum_{x=1}^{p-1} e((a x + b x̄) / p),     e(t) = exp(2 pi i t)
//! ```
//!
//! is real, and `|S(a, 1; p)| <= 2 sqrt(p)` (Weil), so every sum has an angle
//! `theta_p(a) ∈ [0, pi]` with `S(a, 1; p) = 2 sqrt(p) cos theta_p(a)`.
//!
//! Read as a function of `a`, `S(·, b; p)` is the DFT of `x ↦ e(b x̄ / p)`,
//! which is how [`Method::Dft`] builds a full table in `O(p log p)`.

mod cache;
mod dft;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{batch_inverses, mod_inverse, PrimeModulus, Residue};
use crate::error::{Error, Result};

pub use cache::{cache_file_name, read_table, write_table, CACHE_MAGIC, CACHE_VERSION};
pub use dft::dft_positive;

/// Largest modulus for which an `O(p^2)` naive table is attempted.
pub const NAIVE_LIMIT: u64 = 100_000;

/// Relative threshold (in units of `sqrt(p)`) below which a sum counts as zero.
/// Largest modulus for which a DFT table (8 bytes per residue) is built.
pub const DFT_LIMIT: u64 = 100_000_000;

pub const TOL_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Naive,
    Dft,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Dft => "dft",
        }
    }

    pub(crate) fn to_byte(self) -> u8 {
        match self {
            Method::Naive => 0,
            Method::Dft => 1,
        }
    }

    pub(crate) fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Method::Naive),
            1 => Some(Method::Dft),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "dft" => Ok(Method::Dft),
            other => Err(Error::domain(format!("unknown method {other:?}"))),
        }
    }
}

/// `cos(2 pi j / p)` for `j = 0..p`.
fn cos_table(p: PrimeModulus) -> Vec<f64> {
    let n = p.len();
    (0..n)
        .map(|j| (2.0 * PI * j as f64 / n as f64).cos())
        .collect()
}

/// `S(a, b; p)` from its defining sum, taking the real part term by term.
pub fn kloosterman_naive(a: i64, b: i64, p: PrimeModulus) -> f64 {
    let m = p.get();
    let (a, b) = (p.reduce(a), p.reduce(b));
    let inv = batch_inverses(p);
    (1..m)
        .map(|x| {
            let phase = (a as u128 * x as u128 + b as u128 * inv[x as usize] as u128) % m as u128;
            (2.0 * PI * phase as f64 / m as f64).cos()
        })
        .sum()
}

/// The defining sum with explicit complex terms. Its imaginary part is zero
/// up to rounding; kept for checking that.
pub fn kloosterman_complex(a: i64, b: i64, p: PrimeModulus) -> Complex64 {
    let m = p.get();
    let (a, b) = (p.reduce(a), p.reduce(b));
    (1..m)
        .map(|x| {
            let xbar = mod_inverse(Residue::new(x as i64, p)).unwrap().value();
            let phase = (a as u128 * x as u128 + b as u128 * xbar as u128) % m as u128;
            Complex64::from_polar(1.0, 2.0 * PI * phase as f64 / m as f64)
        })
        .sum()
}

/// All values `S(a, b; p)` for `a = 0..p-1` at a fixed twist `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct KloostermanTable {
    p: PrimeModulus,
    b: u64,
    method: Method,
    values: Vec<f64>,
}

impl KloostermanTable {
    pub fn build(b: i64, p: PrimeModulus, method: Method) -> Result<Self> {
        if p.divides(b) {
            return Err(Error::domain(format!("twist {b} is divisible by p = {p}")));
        }
        let b = p.reduce(b);
        let values = match method {
            Method::Naive => {
                if p.get() > NAIVE_LIMIT {
                    return Err(Error::CostGuard(format!(
                        "naive table for p = {p} exceeds the limit {NAIVE_LIMIT}"
                    )));
                }
                naive_values(b, p)
            }
            Method::Dft => {
                if p.get() > DFT_LIMIT {
                    return Err(Error::CostGuard(format!(
                        "table for p = {p} exceeds the limit {DFT_LIMIT}"
                    )));
                }
                dft_values(b, p)
            }
        };
        Ok(KloostermanTable {
            p,
            b,
            method,
            values,
        })
    }

    /// Reassemble a table from stored values, e.g. a cache file.
    pub fn from_values(p: PrimeModulus, b: u64, method: Method, values: Vec<f64>) -> Result<Self> {
        if values.len() != p.len() {
            return Err(Error::domain(format!(
                "expected {} values for p = {p}, got {}",
                p.len(),
                values.len()
            )));
        }
        if p.divides(b as i64) {
            return Err(Error::domain(format!("twist {b} is divisible by p = {p}")));
        }
        Ok(KloostermanTable {
            p,
            b,
            method,
            values,
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn twist(&self) -> u64 {
        self.b
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `S(a, b; p)` for any integer `a`.
    #[inline]
    pub fn value(&self, a: i64) -> f64 {
        self.values[self.p.reduce(a) as usize]
    }

    /// `max_{a >= 1} |S(a, b; p)|`.
    pub fn max_abs(&self) -> f64 {
        self.values[1..].iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn naive_values(b: u64, p: PrimeModulus) -> Vec<f64> {
    let m = p.get();
    let inv = batch_inverses(p);
    let cos = cos_table(p);
    // b x̄ mod p, shared by every a
    let twisted: Vec<u64> = (0..m).map(|x| (b as u128 * inv[x as usize] as u128 % m as u128) as u64).collect();
    (0..m)
        .into_par_iter()
        .map(|a| {
            let mut ax = 0u64;
            let mut acc = 0.0;
            for &tx in &twisted[1..] {
                ax += a;
                if ax >= m {
                    ax -= m;
                }
                let mut phase = ax + tx;
                if phase >= m {
                    phase -= m;
                }
                acc += cos[phase as usize];
            }
            acc
        })
        .collect()
}

fn dft_values(b: u64, p: PrimeModulus) -> Vec<f64> {
    let m = p.get();
    let n = p.len();
    let inv = batch_inverses(p);
    let mut input = vec![Complex64::new(0.0, 0.0); n];
    for x in 1..n {
        let phase = (b as u128 * inv[x] as u128 % m as u128) as f64;
        input[x] = Complex64::from_polar(1.0, 2.0 * PI * phase / m as f64);
    }
    dft_positive(&input).into_iter().map(|z| z.re).collect()
}

/// Kloosterman angles `theta_p(h a)` for every residue `a`.
///
/// Built from a table with twist 1, using `S(a, h; p) = S(h a, 1; p)`.
/// Angles are defined at `a ≡ 0` too, where the sum is `-1`.
#[derive(Debug, Clone)]
pub struct AngleTable {
    p: PrimeModulus,
    h: u64,
    sums: Vec<f64>,
    cos_theta: Vec<f64>,
    theta: Vec<f64>,
}

pub fn build_angles(table: &KloostermanTable, h: i64) -> Result<AngleTable> {
    AngleTable::new(table, h)
}

impl AngleTable {
    pub fn new(table: &KloostermanTable, h: i64) -> Result<Self> {
        let p = table.modulus();
        if table.twist() != 1 {
            return Err(Error::domain(format!(
                "angle tables need a table with twist 1, got {}",
                table.twist()
            )));
        }
        if p.divides(h) {
            return Err(Error::domain(format!("h = {h} is divisible by p = {p}")));
        }
        let m = p.get();
        let h = p.reduce(h);
        let scale = 1.0 / (2.0 * p.sqrt());
        let sums: Vec<f64> = (0..m)
            .map(|a| table.values()[(a as u128 * h as u128 % m as u128) as usize])
            .collect();
        let cos_theta: Vec<f64> = sums.iter().map(|s| (s * scale).clamp(-1.0, 1.0)).collect();
        let theta = cos_theta.iter().map(|c| c.acos()).collect();
        Ok(AngleTable {
            p,
            h,
            sums,
            cos_theta,
            theta,
        })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    /// `S(a, h; p)` for any integer `a`.
    #[inline]
    pub fn sum(&self, a: i64) -> f64 {
        self.sums[self.p.reduce(a) as usize]
    }

    /// `cos theta_p(h a)`, clamped into `[-1, 1]`.
    #[inline]
    pub fn cos_theta(&self, a: i64) -> f64 {
        self.cos_theta[self.p.reduce(a) as usize]
    }

    #[inline]
    pub fn theta(&self, a: i64) -> f64 {
        self.theta[self.p.reduce(a) as usize]
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn cosines(&self) -> &[f64] {
        &self.cos_theta
    }
}
