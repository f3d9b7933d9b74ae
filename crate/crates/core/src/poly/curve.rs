use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::{invalid, Error, Result};

/// The model `Y^2 = A(X) T^2 + B(X) T + C(X)` with `deg A, deg B <= 2` and
/// `C` monic of degree 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyCurve {
    a: IntPoly,
    b: IntPoly,
    c: IntPoly,
}

/// `Y^2 = X^3 + a2(T) X^2 + a4(T) X + a6(T)`, each `a_i` a polynomial in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassQT {
    pub a2: IntPoly,
    pub a4: IntPoly,
    pub a6: IntPoly,
}

impl FamilyCurve {
    pub fn new(a: IntPoly, b: IntPoly, c: IntPoly) -> Result<Self> {
        if a.degree().is_some_and(|d| d > 2) {
            return Err(invalid("deg A must be at most 2"));
        }
        if b.degree().is_some_and(|d| d > 2) {
            return Err(invalid("deg B must be at most 2"));
        }
        if c.degree() != Some(3) || !c.is_monic() {
            return Err(invalid("C must be monic of degree 3"));
        }
        Ok(FamilyCurve { a, b, c })
    }

    /// Little-endian integer coefficient lists.
    pub fn from_i64s(a: &[i64], b: &[i64], c: &[i64]) -> Result<Self> {
        Self::new(IntPoly::from_i64s(a), IntPoly::from_i64s(b), IntPoly::from_i64s(c))
    }

    pub fn a(&self) -> &IntPoly {
        &self.a
    }
    pub fn b(&self) -> &IntPoly {
        &self.b
    }
    pub fn c(&self) -> &IntPoly {
        &self.c
    }

    /// Collects the `T`-polynomial multiplying each power of `X`.
    pub fn to_weierstrass(&self) -> WeierstrassQT {
        let collect = |i: usize| IntPoly::new(vec![self.c.coeff(i), self.b.coeff(i), self.a.coeff(i)]);
        WeierstrassQT { a2: collect(2), a4: collect(1), a6: collect(0) }
    }

    pub fn is_singular(&self) -> bool {
        self.to_weierstrass().disc_t().is_zero()
    }
}

impl WeierstrassQT {
    pub fn new(a2: IntPoly, a4: IntPoly, a6: IntPoly) -> Self {
        WeierstrassQT { a2, a4, a6 }
    }

    /// Rewrites the model as `A(X) T^2 + B(X) T + C(X)`; requires every
    /// `a_i` of degree at most 2 in `T`.
    pub fn to_family(&self) -> Result<FamilyCurve> {
        for a in [&self.a2, &self.a4, &self.a6] {
            if a.degree().is_some_and(|d| d > 2) {
                return Err(invalid("coefficients must have degree at most 2 in T"));
            }
        }
        let row = |k: usize| IntPoly::new(vec![self.a6.coeff(k), self.a4.coeff(k), self.a2.coeff(k)]);
        let mut c = row(0).into_coeffs();
        c.resize(4, BigInt::zero());
        c[3] = BigInt::one();
        FamilyCurve::new(row(2), row(1), IntPoly::new(c))
    }

    /// Discriminant in `X` of the cubic, without the conventional factor 16:
    /// `-4 a2^3 a6 + a2^2 a4^2 + 18 a2 a4 a6 - 4 a4^3 - 27 a6^2`.
    pub fn disc_t(&self) -> IntPoly {
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let k = |c: i64| BigInt::from(c);
        let a2sq = a2 * a2;
        let t1 = (&(&a2sq * a2) * a6).scalar_mul(&k(-4));
        let t2 = &a2sq * &(a4 * a4);
        let t3 = (&(a2 * a4) * a6).scalar_mul(&k(18));
        let t4 = (&(a4 * a4) * a4).scalar_mul(&k(-4));
        let t5 = (a6 * a6).scalar_mul(&k(-27));
        &(&(&(&t1 + &t2) + &t3) + &t4) + &t5
    }

    /// `c4 / 16 = a2^2 - 3 a4`.
    pub fn c4(&self) -> IntPoly {
        &(&self.a2 * &self.a2) - &self.a4.scalar_mul(&BigInt::from(3))
    }

    /// Constant `j`-invariant: `c4^3` and the discriminant are linearly
    /// dependent over `Q`.
    pub fn is_isotrivial(&self) -> Result<bool> {
        let disc = self.disc_t();
        if disc.is_zero() {
            return Err(Error::Singular);
        }
        let c4 = self.c4();
        if c4.is_zero() {
            return Ok(true);
        }
        let c4cube = &(&c4 * &c4) * &c4;
        if c4cube.degree() != disc.degree() {
            return Ok(false);
        }
        let lhs = c4cube.scalar_mul(disc.leading().unwrap());
        let rhs = disc.scalar_mul(c4cube.leading().unwrap());
        Ok(lhs == rhs)
    }
}
