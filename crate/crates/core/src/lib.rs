//! Exact arithmetic for elliptic curves `Y^2 = A(X)T^2 + B(X)T + C(X)` over
//! `Q(T)`: resultant certificates bounding the Mordell-Weil rank, exhaustive
//! density censuses over height boxes, brute-force verification of the finite
//! field counts behind the density-zero argument, and a Turán sieve calculator.

pub mod census;
pub mod cli;
pub mod error;
pub mod ff;
pub mod ffcount;
mod par;
pub mod poly;
pub mod rank;
pub mod sieve;

pub use error::{Error, Result};
pub use ff::{FactorMultiset, Fp, FpPoly};
pub use poly::{FamilyCurve, HeightBound, IntPoly, WeierstrassQT};
pub use rank::{CertificateKind, RankBoundResult};
