//! Closed-form counts of irreducible monic polynomials over `F_p` and the
//! exhaustive censuses that check them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::factor::irreducible_unchecked;
use super::fp::Coeffs;
use super::{Fp, FpPoly};
use crate::error::{invalid, Error, Result};

/// Largest `p^n` a brute-force census may enumerate.
pub const CENSUS_BUDGET: u128 = 100_000_000;

/// Moebius function.
pub fn mobius(mut n: u64) -> i64 {
    assert!(n > 0);
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// `(1/n) sum_{d | n} mu(d) p^(n/d)`: monic irreducibles of degree `n`.
pub fn count_irreducible_monic(p: u64, n: u32) -> Result<BigInt> {
    Fp::new(p)?;
    if n == 0 {
        return Err(invalid("degree must be at least 1"));
    }
    let base = BigInt::from(p);
    let sum = divisors(n as u64).fold(BigInt::zero(), |acc, d| {
        acc + BigInt::from(mobius(d)) * num_traits::pow(base.clone(), (n as u64 / d) as usize)
    });
    Ok(sum / BigInt::from(n))
}

/// `(1/n) sum_{d | n, d odd} mu(d) (p^(n/2d) - 1)`: even monic irreducibles of
/// even degree `n >= 4`.
pub fn count_even_irreducible_monic(p: u64, n: u32) -> Result<BigInt> {
    Fp::new(p)?;
    if n < 4 || n % 2 == 1 {
        return Err(invalid("even count needs an even degree n >= 4"));
    }
    let base = BigInt::from(p);
    let sum = divisors(n as u64).filter(|d| d % 2 == 1).fold(BigInt::zero(), |acc, d| {
        let pw = num_traits::pow(base.clone(), (n as u64 / (2 * d)) as usize);
        acc + BigInt::from(mobius(d)) * (pw - BigInt::one())
    });
    Ok(sum / BigInt::from(n))
}

/// Which monic polynomials of degree `n` a census ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusPredicate {
    All,
    /// Polynomials in `X^2` only.
    Even,
    /// Even, with the `X^(n-2)` coefficient fixed (a residue mod p).
    EvenWithCoeff(u64),
}

/// Exhaustive count of irreducible monic polynomials of degree `n` matching
/// the predicate.
pub fn brute_census(p: u64, n: u32, predicate: CensusPredicate) -> Result<u64> {
    let field = Fp::new(p)?;
    if n == 0 {
        return Err(invalid("degree must be at least 1"));
    }
    let size = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    if size > CENSUS_BUDGET {
        return Err(Error::BudgetExceeded { requested: size, budget: CENSUS_BUDGET });
    }
    let n = n as usize;
    // Positions (below X^n) that vary, and fixed entries.
    let (free, fixed): (Vec<usize>, Vec<(usize, u64)>) = match predicate {
        CensusPredicate::All => ((0..n).collect(), vec![]),
        CensusPredicate::Even | CensusPredicate::EvenWithCoeff(_) if n % 2 == 1 => {
            return Err(invalid("even predicates need an even degree"));
        }
        CensusPredicate::Even => ((0..n).step_by(2).collect(), vec![]),
        CensusPredicate::EvenWithCoeff(a) => {
            if n < 2 {
                return Err(invalid("coefficient predicate needs degree >= 2"));
            }
            ((0..n - 2).step_by(2).collect(), vec![(n - 2, a % p)])
        }
    };
    let total = p.pow(free.len() as u32);
    let count = crate::par::count_range(total, |idx| {
        let mut coeffs: Coeffs = smallvec::smallvec![0; n + 1];
        coeffs[n] = 1;
        for &(i, v) in &fixed {
            coeffs[i] = v;
        }
        let mut rem = idx;
        for &i in &free {
            coeffs[i] = rem % p;
            rem /= p;
        }
        irreducible_unchecked(&FpPoly::from_raw(field, coeffs), n)
    });
    Ok(count)
}
