//! Shared fixtures for the criterion benches in `benches/`.

use kloosterlab::{KloostermanTable, Method, PrimeModulus};

pub fn prime(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).expect("bench modulus is prime")
}

pub fn table(p: u64) -> KloostermanTable {
    KloostermanTable::build(1, prime(p), Method::Dft).expect("table builds")
}
