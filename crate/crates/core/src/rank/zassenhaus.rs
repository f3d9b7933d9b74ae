//! Factorization in `Q[X]`: squarefree decomposition over `Z`, factorization
//! modulo a good prime, quadratic Hensel lifting past the Mignotte bound, and
//! recombination of lifted factors by trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ff::{factor, factor_degrees, is_prime, Fp, FpPoly};
use crate::poly::IntPoly;

/// `sign * content * prod(factor^mult)` with primitive irreducible factors of
/// positive degree and positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFactorization {
    /// Signed content of the input.
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl QFactorization {
    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    pub fn product(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

/// Odd primes in increasing order.
pub(crate) fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| is_prime(n))
}

pub fn factor_over_q(f: &IntPoly) -> Result<QFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut content = f.content();
    if f.is_negative_leading() {
        content = -content;
    }
    let pp = f.primitive_part();
    let mut factors = Vec::new();
    for (g, m) in squarefree_decomposition(&pp) {
        for h in factor_squarefree(&g) {
            factors.push((h, m));
        }
    }
    factors.sort_by(|a, b| a.0.cmp_by_degree(&b.0).then(a.1.cmp(&b.1)));
    Ok(QFactorization { content, factors })
}

/// Number of irreducible factors over `Q`, with multiplicity; contents and
/// units are not counted, so a nonzero constant has `Omega = 0`.
pub fn omega_q(f: &IntPoly) -> Result<u32> {
    Ok(factor_over_q(f)?.omega())
}

/// Yun's algorithm on a primitive polynomial with positive leading
/// coefficient.
fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let b = f.gcd(&df).primitive_part();
    let mut c = f.div_exact(&b).expect("gcd divides");
    let mut d = &df.div_exact(&b).expect("gcd divides derivative") - &c.derivative();
    let mut i = 1u32;
    while c.degree().unwrap_or(0) > 0 {
        let a = c.gcd(&d).primitive_part();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        c = c.div_exact(&a).expect("gcd divides");
        d = &d.div_exact(&a).expect("gcd divides") - &c.derivative();
        i += 1;
    }
    out
}

/// Irreducible factors of a primitive squarefree polynomial of positive
/// degree with positive leading coefficient.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    if f.coeff(0).is_zero() {
        let rest = f.div_exact(&IntPoly::x()).unwrap();
        let mut out = vec![IntPoly::x()];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    if n >= 4 {
        if let Some(q) = f.even_part() {
            // Each irreducible q(Y) of Q(Y) gives q(X^2), which is irreducible
            // or a product of two conjugate factors.
            let mut out = Vec::new();
            for g in factor_squarefree(&q) {
                out.extend(zassenhaus(&g.compose_x2()));
            }
            return out;
        }
    }
    zassenhaus(f)
}

/// Subset-sum mask of achievable factor degrees for the given degree list.
fn degree_mask(degs: &[usize]) -> u128 {
    let mut mask = 1u128;
    for &d in degs {
        mask |= mask << d;
    }
    mask
}

/// Bits `1..n-1` set: proper factor degrees still possible.
pub(crate) fn proper_degrees(n: usize) -> u128 {
    if n < 2 {
        0
    } else {
        ((1u128 << n) - 1) & !1
    }
}

struct PrimeChoice {
    field: Fp,
    factors: Vec<FpPoly>,
}

fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.leading().unwrap().clone();
    let mut best: Option<PrimeChoice> = None;
    let mut mask = if n < 128 { proper_degrees(n) } else { u128::MAX };
    let mut tried = 0;
    for p in odd_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let field = Fp::new(p).unwrap();
        let fp = FpPoly::from_intpoly(field, f);
        let Some(degs) = factor_degrees(&fp) else { continue };
        if degs.len() == 1 {
            return vec![f.clone()];
        }
        if n < 128 {
            mask &= degree_mask(&degs);
            if mask == 0 {
                return vec![f.clone()];
            }
        }
        if best.as_ref().is_none_or(|b| degs.len() < b.factors.len()) {
            let fm = factor(&fp).unwrap();
            best = Some(PrimeChoice { field, factors: fm.factors.into_iter().map(|(g, _)| g).collect() });
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let choice = best.expect("a good prime exists for a squarefree polynomial");
    let p = BigInt::from(choice.field.p());
    let modulus = lifting_modulus(f, &p);
    let lifted = hensel_lift(f, &choice.factors, choice.field, &modulus);
    recombine(f, lifted, &modulus)
}

/// Smallest power of `p` exceeding `2 |lc| 2^n sqrt(n+1) ||f||_inf`.
fn lifting_modulus(f: &IntPoly, p: &BigInt) -> BigInt {
    let n = f.degree().unwrap();
    let lc = f.leading().unwrap().abs();
    let maxc = f.coeffs().iter().map(|c| c.abs()).max().unwrap();
    let sqrt = BigInt::from(((n + 1) as f64).sqrt().ceil() as u64);
    let bound = BigInt::from(2) * lc * (BigInt::one() << n) * sqrt * maxc;
    let mut m = p.clone();
    while m <= bound {
        m *= p;
    }
    m
}

// ---- dense polynomial arithmetic modulo an integer, coefficients in [0, m) ----

type ModPoly = Vec<BigInt>;

fn trim(mut v: ModPoly) -> ModPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn reduce(v: &[BigInt], m: &BigInt) -> ModPoly {
    trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn mp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ModPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim((0..n).map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m)).collect())
}

fn mp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ModPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim((0..n).map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m)).collect())
}

fn mp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

/// Division by a monic polynomial modulo `m`.
fn mp_divrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (ModPoly, ModPoly) {
    let dd = d.len() - 1;
    if a.len() <= dd {
        return (Vec::new(), a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - dd];
    for i in (0..a.len() - dd).rev() {
        let q = rem[i + dd].mod_floor(m);
        if q.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            rem[i + j] = (&rem[i + j] - &q * dc).mod_floor(m);
        }
        quot[i] = q;
    }
    rem.truncate(dd);
    (trim(quot), trim(rem))
}

fn from_fp(g: &FpPoly) -> ModPoly {
    g.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from `f = g h (mod m)`, `s g + t h = 1 (mod m)`
/// to the same relations modulo `next` (a multiple of `m` dividing `m^2`).
/// `h` is monic and stays monic.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    next: &BigInt,
) -> (ModPoly, ModPoly, ModPoly, ModPoly) {
    let e = mp_sub(&reduce(f, next), &mp_mul(g, h, next), next);
    let (q, r) = mp_divrem_monic(&mp_mul(s, &e, next), h, next);
    let g2 = mp_add(&mp_add(g, &mp_mul(t, &e, next), next), &mp_mul(&q, g, next), next);
    let h2 = mp_add(h, &r, next);
    let b = mp_sub(&mp_add(&mp_mul(s, &g2, next), &mp_mul(t, &h2, next), next), &[BigInt::one()], next);
    let (c, d) = mp_divrem_monic(&mp_mul(s, &b, next), &h2, next);
    let s2 = mp_sub(s, &d, next);
    let t2 = mp_sub(&mp_sub(t, &mp_mul(t, &b, next), next), &mp_mul(&c, &g2, next), next);
    (g2, h2, s2, t2)
}

/// Lifts the monic factorization `f = lc * prod(factors) (mod p)` to monic
/// factors modulo `modulus = p^l`.
fn hensel_lift(f: &IntPoly, factors: &[FpPoly], field: Fp, modulus: &BigInt) -> Vec<ModPoly> {
    let p = BigInt::from(field.p());
    let mut current = reduce(f.coeffs(), modulus);
    let mut out = Vec::with_capacity(factors.len());
    for (i, h0) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            // Remaining cofactor: make monic modulo p^l.
            let lc = current.last().unwrap().clone();
            let inv = lc.extended_gcd(modulus).x.mod_floor(modulus);
            out.push(reduce(&current.iter().map(|c| c * &inv).collect::<Vec<_>>(), modulus));
            break;
        }
        let cur_fp = FpPoly::new(field, current.iter().map(|c| (c % &p).try_into().unwrap()));
        let rest_fp = cur_fp.div_exact(h0).expect("factor divides modulo p");
        let (one, s0, t0) = rest_fp.xgcd(h0);
        debug_assert!(one.is_one());
        let (mut g, mut h, mut s, mut t) = (from_fp(&rest_fp), from_fp(h0), from_fp(&s0), from_fp(&t0));
        let mut m = p.clone();
        while &m < modulus {
            let next = (&m * &m).min(modulus.clone());
            let step = hensel_step(&current, &g, &h, &s, &t, &next);
            (g, h, s, t) = step;
            m = next;
        }
        out.push(h);
        current = g;
    }
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> IntPoly {
    let half: BigInt = m >> 1;
    IntPoly::new(
        v.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Tries subsets of the lifted factors in increasing size; a subset is a true
/// factor when the primitive part of `lc * prod(subset)` divides exactly.
fn recombine(f: &IntPoly, mut lifted: Vec<ModPoly>, m: &BigInt) -> Vec<IntPoly> {
    let mut found = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let lc = rest.leading().unwrap().clone();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut prod = vec![lc.mod_floor(m)];
            for &i in &idx {
                prod = mp_mul(&prod, &lifted[i], m);
            }
            let cand = symmetric(&prod, m).primitive_part();
            if let Some(q) = rest.div_exact(&cand) {
                found.push(cand);
                rest = q;
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        size += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let rest = rest.primitive_part();
        found.push(rest);
    }
    found
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_q(&p(&[-1, 0, 1])).unwrap(), 2);
        assert_eq!(omega_q(&p(&[0, 0, 9, 14, 9])).unwrap(), 3);
        assert_eq!(omega_q(&p(&[1, 0, 0, 0, 1])).unwrap(), 1);
        assert_eq!(omega_q(&p(&[7])).unwrap(), 0);
        assert_eq!(omega_q(&IntPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn recombination_needed() {
        // X^4 - 10X^2 + 1 is irreducible but splits modulo every prime.
        assert_eq!(omega_q(&p(&[1, 0, -10, 0, 1])).unwrap(), 1);
        // (X^2 - 2)(X^2 - 3) splits the same way and is reducible.
        assert_eq!(omega_q(&p(&[6, 0, -5, 0, 1])).unwrap(), 2);
        // Swinnerton-Dyer style octic times a linear factor.
        let sd = p(&[576, 0, -960, 0, 352, 0, -40, 0, 1]);
        assert_eq!(omega_q(&sd).unwrap(), 1);
        assert_eq!(omega_q(&(&sd * &p(&[3, 2]))).unwrap(), 2);
    }

    #[test]
    fn multiplicities_and_content() {
        let f = &(&p(&[1, 1]).pow(3) * &p(&[2, 0, 1]).pow(2)) * &p(&[-6]);
        let fact = factor_over_q(&f).unwrap();
        assert_eq!(fact.omega(), 5);
        assert_eq!(fact.content, BigInt::from(-6));
        assert_eq!(fact.product(), f);
    }

    #[test]
    fn non_monic_factors() {
        // (3X^2 + 1)(5X^3 - 2X + 7)(2X - 1)
        let f = &(&p(&[1, 0, 3]) * &p(&[7, -2, 0, 5])) * &p(&[-1, 2]);
        let fact = factor_over_q(&f).unwrap();
        assert_eq!(fact.omega(), 3);
        assert_eq!(fact.product(), f);
    }
}
