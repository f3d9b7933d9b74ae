//! Sylvester resultants with formal degrees.
//!
//! A bivariate polynomial is a slice of coefficient polynomials in `X`,
//! indexed by the power of `Y`. The resultant is the determinant of the
//! Sylvester matrix built from the *formal* degrees, which is a polynomial
//! identity in the coefficients and so commutes with reduction mod `p`.

use num_bigint::BigInt;

use super::IntPoly;
use crate::error::{invalid, Error, Result};

/// An integral domain with exact division, as needed by fraction-free
/// Gaussian elimination.
pub trait DetRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn mul_r(&self, rhs: &Self) -> Self;
    fn sub_r(&self, rhs: &Self) -> Self;
    fn neg_r(&self) -> Self;
    /// `self / d`, assuming `d` divides `self` exactly.
    fn div_exact_r(&self, d: &Self) -> Self;
}

impl DetRing for IntPoly {
    fn zero_like(&self) -> Self {
        IntPoly::zero()
    }
    fn one_like(&self) -> Self {
        IntPoly::one()
    }
    fn is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn mul_r(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub_r(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg_r(&self) -> Self {
        -self
    }
    fn div_exact_r(&self, d: &Self) -> Self {
        self.div_exact(d).expect("Bareiss elimination divides exactly")
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_det<E: DetRing>(mut m: Vec<Vec<E>>, one: E) -> E {
    let n = m.len();
    if n == 0 {
        return one;
    }
    let mut negate = false;
    let mut prev = one;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(piv) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return prev.zero_like();
            };
            m.swap(k, piv);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul_r(&m[i][j]).sub_r(&m[i][k].mul_r(&m[k][j]));
                m[i][j] = t.div_exact_r(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg_r()
    } else {
        det
    }
}

/// Sylvester matrix of `p` (formal degree `dp`) and `q` (formal degree `dq`):
/// `dq` shifted rows of `p` followed by `dp` shifted rows of `q`, coefficients
/// written from the formal leading term down.
pub fn sylvester_matrix<E: DetRing>(p: &[E], q: &[E], dp: usize, dq: usize) -> Result<Vec<Vec<E>>> {
    let any = p.first().or(q.first()).ok_or_else(|| invalid("sylvester matrix of two empty coefficient lists"))?;
    let zero = any.zero_like();
    let coeff = |v: &[E], i: usize| v.get(i).cloned().unwrap_or_else(|| zero.clone());
    for (v, d, name) in [(p, dp, "first"), (q, dq, "second")] {
        if v.iter().skip(d + 1).any(|c| !c.is_zero()) {
            return Err(invalid(format!("{name} argument has degree above its formal degree {d}")));
        }
    }
    let n = dp + dq;
    let mut m = vec![vec![zero.clone(); n]; n];
    for r in 0..dq {
        for k in 0..=dp {
            m[r][r + k] = coeff(p, dp - k);
        }
    }
    for r in 0..dp {
        for k in 0..=dq {
            m[dq + r][r + k] = coeff(q, dq - k);
        }
    }
    Ok(m)
}

/// `Res_Y(p, q)` for bivariate polynomials given as coefficient lists in `Y`,
/// using formal degrees `dp`, `dq`.
pub fn sylvester_resultant<E: DetRing>(p: &[E], q: &[E], dp: usize, dq: usize) -> Result<E> {
    if dp + dq == 0 {
        return Err(invalid("resultant needs dP + dQ >= 1"));
    }
    let m = sylvester_matrix(p, q, dp, dq)?;
    let one = m[0][0].one_like();
    Ok(bareiss_det(m, one))
}

/// Builds the bivariate pair `(P1(Y), X^2 - P2(Y))` from coefficient lists,
/// given constructors for constants and for `X^2 - c`.
pub(crate) fn m_certificate_generic<E: DetRing, C>(
    p1: &[C],
    p2: &[C],
    d1: usize,
    constant: impl Fn(&C) -> E,
    x2_minus: impl Fn(&C) -> E,
) -> Result<E> {
    let d2 = p2.len().checked_sub(1).ok_or(Error::ZeroPolynomial)?;
    let first: Vec<E> = p1.iter().map(&constant).collect();
    let mut second: Vec<E> = Vec::with_capacity(d2 + 1);
    second.push(x2_minus(&p2[0]));
    for c in &p2[1..] {
        second.push(constant(c).neg_r());
    }
    sylvester_resultant(&first, &second, d1, d2)
}

/// `M_{P1,P2}(X) = Res_Y(P1(Y), X^2 - P2(Y))` with `P1` taken at formal
/// degree `d1` and `X^2 - P2` at its true degree in `Y`.
pub fn m_certificate(p1: &IntPoly, p2: &IntPoly, d1: usize) -> Result<IntPoly> {
    if p2.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p1.degree().is_some_and(|d| d > d1) {
        return Err(invalid(format!("first argument has degree {} above formal degree {d1}", p1.degree().unwrap())));
    }
    let p1c: Vec<BigInt> = if p1.is_zero() { vec![BigInt::from(0)] } else { p1.coeffs().to_vec() };
    m_certificate_generic(
        &p1c,
        p2.coeffs(),
        d1,
        |c| IntPoly::constant(c.clone()),
        |c| IntPoly::new(vec![-c.clone(), BigInt::from(0), BigInt::from(1)]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn resultant_examples() {
        // Res_Y(Y^2, X^2 - Y^3) = X^4.
        let first = vec![p(&[]), p(&[]), p(&[1])];
        let second = vec![p(&[0, 0, 1]), p(&[]), p(&[]), p(&[-1])];
        assert_eq!(sylvester_resultant(&first, &second, 2, 3).unwrap(), p(&[0, 0, 0, 0, 1]));
        // Resultant of a constant: c^dQ.
        let c = vec![p(&[5])];
        assert_eq!(sylvester_resultant(&c, &second, 0, 3).unwrap(), p(&[125]));
    }

    #[test]
    fn formal_degree_violations_rejected() {
        let first = vec![p(&[]), p(&[1])];
        let second = vec![p(&[1]), p(&[1])];
        assert!(sylvester_resultant(&first, &second, 0, 1).is_err());
        assert!(sylvester_resultant(&first[..1], &second[..1], 0, 0).is_err());
    }

    #[test]
    fn m_certificate_examples() {
        assert_eq!(m_certificate(&p(&[0, 0, 1]), &p(&[0, 0, 0, 1]), 2).unwrap(), p(&[0, 0, 0, 0, 1]));
        assert_eq!(m_certificate(&p(&[0, 1]), &p(&[1, 0, 0, 1]), 2).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(m_certificate(&p(&[1]), &p(&[0, 0, 0, 1]), 2).unwrap(), p(&[1]));
        assert_eq!(m_certificate(&p(&[1]), &IntPoly::zero(), 2), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn bareiss_matches_small_integer_determinants() {
        let m = vec![vec![p(&[2]), p(&[0]), p(&[1])], vec![p(&[0]), p(&[0]), p(&[3])], vec![p(&[4]), p(&[5]), p(&[6])]];
        // 2*(0*6-3*5) - 0 + 1*(0*5-0*4) = -30
        assert_eq!(bareiss_det(m, p(&[1])), p(&[-30]));
    }
}
