//! Arithmetic, factorization, and irreducible-polynomial censuses over prime
//! fields `F_p` (odd `p < 2^31`).

mod count;
mod factor;
mod fp;

pub use count::{
    brute_census, count_even_irreducible_monic, count_irreducible_monic, mobius, CensusPredicate, CENSUS_BUDGET,
};
pub use factor::{
    distinct_degree, factor, factor_degrees, is_irreducible, omega_p, squarefree_decomposition, FactorMultiset,
};
pub use fp::{is_prime, legendre, m_certificate_fp, Fp, FpPoly, MAX_MODULUS};

use crate::error::Result;
use crate::poly::IntPoly;

/// Coefficient-wise reduction of `poly` modulo the odd prime `p`.
pub fn reduce_mod_p(poly: &IntPoly, p: u64) -> Result<FpPoly> {
    Ok(FpPoly::from_intpoly(Fp::new(p)?, poly))
}
