//! Modular arithmetic for prime moduli: primality, inverses, prime ranges.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus for which [`is_prime`] is certified deterministic.
pub const PRIMALITY_LIMIT: u64 = 341_550_071_728_321;

const MR_WITNESSES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];

/// A prime `p`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p >= PRIMALITY_LIMIT {
            return Err(Error::Unsupported(format!(
                "modulus {p} is above the certified primality range"
            )));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `p` as a `usize`, for indexing tables.
    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.0 as usize
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, a: i64) -> u64 {
        a.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn divides(self, a: i64) -> bool {
        self.reduce(a) == 0
    }

    pub fn sqrt(self) -> f64 {
        (self.0 as f64).sqrt()
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `Z/pZ`, always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: PrimeModulus,
}

impl Residue {
    pub fn new(a: i64, modulus: PrimeModulus) -> Self {
        Residue {
            value: modulus.reduce(a),
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

}

impl std::ops::Mul for Residue {
    type Output = Residue;

    fn mul(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue {
            value: mul_mod(self.value, other.value, self.modulus.get()),
            modulus: self.modulus,
        }
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for `n < PRIMALITY_LIMIT`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &MR_WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Inverse of a nonzero residue, by the extended Euclidean algorithm.
pub fn mod_inverse(x: Residue) -> Result<Residue> {
    let p = x.modulus.get() as i64;
    let (mut r0, mut r1) = (p, x.value as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    if r1 == 0 {
        return Err(Error::ZeroInverse);
    }
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(Residue::new(t0, x.modulus))
}

/// All inverses `x^{-1} mod p` for `x = 0..p-1` (slot 0 holds 0).
///
/// Prefix products plus a single extended-Euclid inversion, so `3p`
/// multiplications in total.
pub fn batch_inverses(p: PrimeModulus) -> Vec<u64> {
    let n = p.len();
    let m = p.get();
    let mut inv = vec![0u64; n];
    if n <= 2 {
        if n == 2 {
            inv[1] = 1;
        }
        return inv;
    }
    // prefix[x] = 1 * 2 * ... * x
    let mut prefix = vec![1u64; n];
    for x in 2..n {
        prefix[x] = mul_mod(prefix[x - 1], x as u64, m);
    }
    let mut running = mod_inverse(Residue::new(prefix[n - 1] as i64, p))
        .expect("product of units is a unit")
        .value();
    for x in (1..n).rev() {
        inv[x] = mul_mod(running, prefix[x - 1], m);
        running = mul_mod(running, x as u64, m);
    }
    inv
}

fn small_primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const SEGMENT: u64 = 1 << 16;

/// The primes `q` with `lo < q <= hi`, ascending. Empty when `hi <= lo`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<PrimeModulus> {
    if hi <= lo || hi < 2 {
        return Vec::new();
    }
    let start = (lo + 1).max(2);
    let base = small_primes_upto((hi as f64).sqrt() as u64 + 1);
    let mut out = Vec::new();
    let mut seg_lo = start;
    let mut mark = vec![false; SEGMENT as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + SEGMENT - 1).min(hi);
        let width = (seg_hi - seg_lo + 1) as usize;
        mark[..width].fill(true);
        for &q in &base {
            if q * q > seg_hi {
                break;
            }
            let mut j = (seg_lo.div_ceil(q) * q).max(q * q);
            while j <= seg_hi {
                mark[(j - seg_lo) as usize] = false;
                j += q;
            }
        }
        out.extend(
            mark[..width]
                .iter()
                .enumerate()
                .filter(|(_, &is_p)| is_p)
                .map(|(i, _)| PrimeModulus(seg_lo + i as u64)),
        );
        seg_lo = seg_hi + 1;
    }
    out
}
