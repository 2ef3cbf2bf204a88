use std::f64::consts::PI;

use num_complex::Complex64;

use super::IntervalSpec;
use crate::arith::PrimeModulus;
use crate::bounds::{lemma5_bound, lemma6_bound, BoundReport};
use crate::chebyshev::u_unchecked;
use crate::error::{Error, Result};
use crate::kloosterman::KloostermanTable;

/// Largest modulus accepted for complete multi-linear sums.
pub const MULTISUM_LIMIT: u64 = 1_000_000;

/// `s` linear polynomials `f_i(x) = a_i x + b_i`, Chebyshev orders `k_i`,
/// and an additive twist `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSumSpec {
    pub polys: Vec<(i64, i64)>,
    pub orders: Vec<usize>,
    pub h: i64,
}

impl MultiSumSpec {
    pub fn new(polys: Vec<(i64, i64)>, orders: Vec<usize>, h: i64) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::domain("need at least one polynomial"));
        }
        if polys.len() != orders.len() {
            return Err(Error::domain(format!(
                "{} polynomials but {} orders",
                polys.len(),
                orders.len()
            )));
        }
        if let Some(&(a, b)) = polys.iter().find(|(a, _)| *a == 0) {
            return Err(Error::DegeneratePolynomial(format!("f(x) = {a}x + {b} is constant")));
        }
        Ok(MultiSumSpec { polys, orders, h })
    }

    pub fn s(&self) -> usize {
        self.polys.len()
    }

    fn check_against(&self, p: PrimeModulus) -> Result<()> {
        if p.get() > MULTISUM_LIMIT {
            return Err(Error::CostGuard(format!(
                "complete multi-linear sum for p = {p} exceeds the limit {MULTISUM_LIMIT}"
            )));
        }
        for &(a, b) in &self.polys {
            if p.divides(a) {
                return Err(Error::DegeneratePolynomial(format!(
                    "f(x) = {a}x + {b} is constant mod p = {p}"
                )));
            }
        }
        Ok(())
    }

    /// Groups of indices whose polynomials agree mod `p`, in first-seen order.
    fn groups(&self, p: PrimeModulus) -> Vec<Vec<usize>> {
        let mut keys: Vec<(u64, u64)> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &(a, b)) in self.polys.iter().enumerate() {
            let key = (p.reduce(a), p.reduce(b));
            match keys.iter().position(|k| *k == key) {
                Some(g) => groups[g].push(i),
                None => {
                    keys.push(key);
                    groups.push(vec![i]);
                }
            }
        }
        groups
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSumReport {
    pub value: Complex64,
    /// Residues dropped because some `f_i(a) ≡ 0`.
    pub excluded: u64,
    pub lemma5: BoundReport,
    pub lemma6: BoundReport,
    /// Polynomials pairwise distinct mod `p` and `(k, h)` not all zero.
    pub lemma5_applies: bool,
    /// `p ∤ h`, or some group of equal polynomials has odd total order.
    pub lemma6_applies: bool,
}

fn cosines(table: &KloostermanTable) -> Result<Vec<f64>> {
    if table.twist() != 1 {
        return Err(Error::domain("multi-linear sums need a table with twist 1"));
    }
    let scale = 1.0 / (2.0 * table.modulus().sqrt());
    Ok(table.values().iter().map(|s| (s * scale).clamp(-1.0, 1.0)).collect())
}

/// The summand at residue `a`, or `None` when some `f_i(a) ≡ 0`.
fn term(spec: &MultiSumSpec, cos: &[f64], p: PrimeModulus, a: u64) -> Option<Complex64> {
    let m = p.get();
    let mut prod = 1.0;
    for (&(ai, bi), &k) in spec.polys.iter().zip(&spec.orders) {
        let f = (p.reduce(ai) as u128 * a as u128 + p.reduce(bi) as u128) % m as u128;
        if f == 0 {
            return None;
        }
        prod *= u_unchecked(k, cos[f as usize]);
    }
    let phase = (p.reduce(spec.h) as u128 * a as u128 % m as u128) as f64;
    Some(Complex64::from_polar(prod, 2.0 * PI * phase / m as f64))
}

/// Complete multi-linear sum over `a mod p` with the flat restriction
/// `prod_i f_i(a) ≢ 0`, against both bound shapes.
pub fn multi_sum(spec: &MultiSumSpec, table: &KloostermanTable) -> Result<MultiSumReport> {
    let p = table.modulus();
    spec.check_against(p)?;
    let cos = cosines(table)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut excluded = 0;
    for a in 0..p.get() {
        match term(spec, &cos, p, a) {
            Some(t) => value += t,
            None => excluded += 1,
        }
    }

    let groups = spec.groups(p);
    let distinct = groups.len() == spec.s();
    let trivial = spec.orders.iter().all(|&k| k == 0) && p.divides(spec.h);
    let odd_group = groups
        .iter()
        .any(|g| g.iter().map(|&i| spec.orders[i]).sum::<usize>() % 2 == 1);

    let pf = p.get() as f64;
    let observed = value.norm();
    let tag = |r: BoundReport| {
        r.with_param("p", p)
            .with_param("s", spec.s())
            .with_param("h", spec.h)
    };
    Ok(MultiSumReport {
        value,
        excluded,
        lemma5: tag(BoundReport::new("lemma5", observed, lemma5_bound(pf, &spec.orders))),
        lemma6: tag(BoundReport::new("lemma6", observed, lemma6_bound(pf, &spec.orders))),
        lemma5_applies: distinct && !trivial,
        lemma6_applies: !p.divides(spec.h) || odd_group,
    })
}

/// The same summand restricted to `M < a <= M+N` (incomplete sum).
pub fn multi_sum_interval(spec: &MultiSumSpec, table: &KloostermanTable, interval: IntervalSpec) -> Result<Complex64> {
    let p = table.modulus();
    spec.check_against(p)?;
    let cos = cosines(table)?;
    Ok(interval
        .residues(p)
        .filter_map(|a| term(spec, &cos, p, a as u64))
        .sum())
}
