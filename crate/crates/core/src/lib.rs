//! Kloosterman sums modulo a prime, their Katz angles, and the statistics
//! built on top of them.
//!
//! The central object is a [`KloostermanTable`]: every value `S(a, b; p)` for
//! `a = 0..p-1`, built either directly from the defining sum or through a
//! prime-length DFT (chirp-z reduction to a power-of-two convolution). An
//! [`AngleTable`] derived from it carries `theta_p(h a)` for all residues and
//! is what the short-interval statistics in [`stats`] scan.

pub mod arith;
pub mod bounds;
pub mod chebyshev;
mod error;
pub mod kloosterman;
pub mod stats;

pub use arith::{mod_inverse, primes_in, PrimeModulus, Residue};
pub use bounds::BoundReport;
pub use chebyshev::ChebyshevSeries;
pub use error::{Error, Result};
pub use kloosterman::{AngleTable, KloostermanTable, Method};
pub use stats::{CountReport, GmMomentSpec, IntervalSpec, MultiSumSpec};
