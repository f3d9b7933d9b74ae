use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::resultant::{m_certificate_generic, DetRing};
use crate::poly::IntPoly;

/// Largest supported modulus (exclusive). Keeps every product of two
/// residues below `2^62`, which lets dot products accumulate lazily.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// The prime field `F_p` for an odd prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
    /// `floor(2^64 / p)` for Barrett reduction.
    m: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Fp { p, m: (u64::MAX / p) })
    }

    /// `a mod p` for any `a < 2^64`.
    #[inline]
    pub fn reduce(self, a: u64) -> u64 {
        let q = ((a as u128 * self.m as u128) >> 64) as u64;
        let r = a - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    pub fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn reduce_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, a: i128) -> u64 {
        a.rem_euclid(self.p as i128) as u64
    }

    pub fn reduce_big(self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn centered(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// Quadratic character by Euler's criterion: `-1`, `0` or `1`.
    pub fn legendre(self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(self, a: u64) -> bool {
        self.legendre(a) >= 0
    }
}

/// Legendre symbol `(a/p)` of an integer.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    let f = Fp::new(p)?;
    Ok(f.legendre(f.reduce_i64(a)))
}

pub(crate) type Coeffs = SmallVec<[u64; 12]>;

/// Polynomial over `F_p`, coefficients in `[0, p)` with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    field: Fp,
    coeffs: Coeffs,
}

impl FpPoly {
    pub(crate) fn from_raw(field: Fp, mut coeffs: Coeffs) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { field, coeffs }
    }

    pub fn new(field: Fp, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let p = field.p;
        Self::from_raw(field, coeffs.into_iter().map(|c| c % p).collect())
    }

    pub fn from_i64s(field: Fp, coeffs: &[i64]) -> Self {
        Self::from_raw(field, coeffs.iter().map(|&c| field.reduce_i64(c)).collect())
    }

    /// Coefficient-wise reduction of an integer polynomial.
    pub fn from_intpoly(field: Fp, poly: &IntPoly) -> Self {
        Self::from_raw(field, poly.coeffs().iter().map(|c| field.reduce_big(c)).collect())
    }

    pub fn zero(field: Fp) -> Self {
        FpPoly { field, coeffs: Coeffs::new() }
    }

    pub fn constant(field: Fp, c: u64) -> Self {
        Self::new(field, [c])
    }

    pub fn one(field: Fp) -> Self {
        Self::constant(field, 1)
    }

    pub fn x(field: Fp) -> Self {
        Self::new(field, [0, 1])
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => self.scale(self.field.inv(lc)),
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_raw(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_raw(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.field);
        }
        let fld = self.field;
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        let n = a.len() + b.len() - 1;
        let mut out = Coeffs::with_capacity(n);
        for k in 0..n {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            let mut acc = 0u64;
            for i in lo..=hi {
                acc += a[i] * b[k - i];
                if acc >= 1 << 63 {
                    acc = fld.reduce(acc);
                }
            }
            out.push(fld.reduce(acc));
        }
        Self::from_raw(self.field, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let f = self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(f), self.clone());
        };
        let inv = if d.leading() == 1 { 1 } else { f.inv(d.leading()) };
        let mut rem = self.coeffs.clone();
        let mut quot: Coeffs = SmallVec::from_elem(0, n - dd + 1);
        for i in (0..=n - dd).rev() {
            let top = rem[i + dd];
            if top == 0 {
                continue;
            }
            let q = f.mul(top, inv);
            quot[i] = q;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(q, dc));
            }
        }
        rem.truncate(dd);
        (Self::from_raw(f, quot), Self::from_raw(f, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        let f = self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return self.clone();
        };
        let inv = if d.leading() == 1 { 1 } else { f.inv(d.leading()) };
        let mut rem = self.coeffs.clone();
        for i in (0..=n - dd).rev() {
            let top = rem[i + dd];
            if top == 0 {
                continue;
            }
            let q = f.mul(top, inv);
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(q, dc));
            }
        }
        rem.truncate(dd);
        Self::from_raw(f, rem)
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `g = s*self + t*other` and `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let fld = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(fld), Self::zero(fld));
        let (mut t0, mut t1) = (Self::zero(fld), Self::one(fld));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = fld.inv(r0.leading());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        Self::from_raw(f, self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, i as u64 % f.p)).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `P(X) = Q(X^2)` gives `Some(Q)`.
    pub fn even_part(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|&c| c != 0) {
            return None;
        }
        Some(Self::from_raw(self.field, self.coeffs.iter().step_by(2).copied().collect()))
    }

    pub fn cmp_canonical(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Centered integer lift of the coefficients.
    pub fn to_intpoly_centered(&self) -> IntPoly {
        IntPoly::from_i64s(&self.coeffs.iter().map(|&c| self.field.centered(c)).collect::<Vec<_>>())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[p={}]{:?}", self.field.p, self.coeffs.as_slice())
    }
}

impl DetRing for FpPoly {
    fn zero_like(&self) -> Self {
        FpPoly::zero(self.field)
    }
    fn one_like(&self) -> Self {
        FpPoly::one(self.field)
    }
    fn is_zero(&self) -> bool {
        FpPoly::is_zero(self)
    }
    fn mul_r(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn sub_r(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn neg_r(&self) -> Self {
        self.neg()
    }
    fn div_exact_r(&self, d: &Self) -> Self {
        self.div_exact(d).expect("Bareiss elimination divides exactly")
    }
}

/// `M_{P1,P2}(X) = Res_Y(P1(Y), X^2 - P2(Y))` over `F_p`, formal degree `d1`
/// for `P1`.
pub fn m_certificate_fp(p1: &FpPoly, p2: &FpPoly, d1: usize) -> Result<FpPoly> {
    if p2.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p1.degree().is_some_and(|d| d > d1) {
        return Err(crate::error::invalid("first argument exceeds its formal degree"));
    }
    let f = p1.field;
    let p1c: Vec<u64> = if p1.is_zero() { vec![0] } else { p1.coeffs.to_vec() };
    m_certificate_generic(&p1c, p2.coeffs(), d1, |&c| FpPoly::constant(f, c), |&c| FpPoly::new(f, [f.neg(c), 0, 1]))
}

/// Precomputed Frobenius map `h -> h^p mod f` (the Berlekamp matrix): since
/// `h(X)^p = h(X^p)` over `F_p`, one application costs `deg(f)^2` products.
pub(crate) struct Frobenius {
    modulus: FpPoly,
    /// Row `i` holds `X^(i p) mod f`.
    rows: Vec<Coeffs>,
}

impl Frobenius {
    pub(crate) fn new(modulus: &FpPoly) -> Self {
        let fld = modulus.field;
        let n = modulus.degree().expect("Frobenius modulo zero");
        let xp = FpPoly::x(fld).pow_mod(fld.p as u128, modulus);
        let mut rows = Vec::with_capacity(n);
        let mut cur = FpPoly::one(fld).rem(modulus);
        for _ in 0..n {
            let mut row = cur.coeffs.clone();
            row.resize(n, 0);
            rows.push(row);
            cur = cur.mul(&xp).rem(modulus);
        }
        Frobenius { modulus: modulus.clone(), rows }
    }

    pub(crate) fn apply(&self, h: &FpPoly) -> FpPoly {
        let fld = self.modulus.field;
        let n = self.rows.len();
        let h = if h.degree().is_some_and(|d| d >= n) { h.rem(&self.modulus) } else { h.clone() };
        let mut acc: SmallVec<[u64; 12]> = SmallVec::from_elem(0, n);
        for (i, &hi) in h.coeffs.iter().enumerate() {
            if hi == 0 {
                continue;
            }
            for (a, &r) in acc.iter_mut().zip(self.rows[i].iter()) {
                *a += hi * r;
                if *a >= 1 << 63 {
                    *a = fld.reduce(*a);
                }
            }
        }
        FpPoly::from_raw(fld, acc.into_iter().map(|a| fld.reduce(a)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn field_validation() {
        assert!(Fp::new(2).is_err());
        assert!(Fp::new(9).is_err());
        assert!(Fp::new(MAX_MODULUS + 11).is_err());
        assert!(Fp::new(101).is_ok());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(0, 5).unwrap(), 0);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(2, 5).unwrap(), -1);
        assert_eq!(legendre(-1, 7).unwrap(), -1);
        assert!(legendre(3, 4).is_err());
    }

    #[test]
    fn legendre_is_multiplicative() {
        for p in (3..50).filter(|&p| is_prime(p)) {
            let fld = f(p);
            for a in 1..p {
                for b in 1..p {
                    assert_eq!(fld.legendre(fld.mul(a, b)), fld.legendre(a) * fld.legendre(b));
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let p5 = f(5);
        assert_eq!(FpPoly::from_intpoly(p5, &IntPoly::from_i64s(&[5, 0, 7])).coeffs(), &[0, 0, 2]);
        assert_eq!(FpPoly::from_intpoly(f(3), &IntPoly::from_i64s(&[0, 0, 0, 0, 1])).coeffs(), &[0, 0, 0, 0, 1]);
        assert_eq!(FpPoly::from_intpoly(p5, &IntPoly::from_i64s(&[-1])).coeffs(), &[4]);
    }

    #[test]
    fn arithmetic_and_gcd() {
        let p7 = f(7);
        let a = FpPoly::from_i64s(p7, &[-1, 0, 1]);
        let b = FpPoly::from_i64s(p7, &[1, 1]);
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, FpPoly::from_i64s(p7, &[-1, 1]));
        assert_eq!(a.gcd(&FpPoly::from_i64s(p7, &[2, 2])), b);
        let (g, s, t) = a.xgcd(&FpPoly::from_i64s(p7, &[1, 0, 1]));
        assert!(g.is_one());
        assert!(s.mul(&a).add(&t.mul(&FpPoly::from_i64s(p7, &[1, 0, 1]))).is_one());
    }

    #[test]
    fn frobenius_matches_powering() {
        let p = f(13);
        let m = FpPoly::from_i64s(p, &[3, 1, 0, 5, 0, 1]);
        let frob = Frobenius::new(&m);
        let h = FpPoly::from_i64s(p, &[1, 2, 3, 4]);
        assert_eq!(frob.apply(&h), h.pow_mod(13, &m));
    }
}
