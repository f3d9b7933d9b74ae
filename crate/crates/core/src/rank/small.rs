//! Factorization over `Z` of low-height squarefree polynomials in machine
//! integers: factor modulo a small prime, Hensel-lift below `2^62`, and
//! recombine by trial division. Declines (returns `None`) rather than
//! overflow.

use crate::ff::{factor, factor_degrees, Fp, FpPoly};
use crate::rank::odd_primes;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive part with positive leading coefficient.
pub(crate) fn primitive(c: &[i128]) -> Vec<i128> {
    let g = c.iter().fold(0, |g, &x| gcd(g, x));
    let s = if c.last().is_some_and(|&x| x < 0) { -g } else { g };
    c.iter().map(|&x| x / s).collect()
}

/// Exact quotient `f / d` over `Z`, if it exists.
fn div_exact(f: &[i128], d: &[i128]) -> Option<Vec<i128>> {
    let (n, m) = (f.len(), d.len());
    if m > n {
        return None;
    }
    let lc = *d.last().unwrap();
    let mut rem = f.to_vec();
    let mut q = vec![0i128; n - m + 1];
    for i in (0..=n - m).rev() {
        let top = rem[i + m - 1];
        if top % lc != 0 {
            return None;
        }
        let t = top / lc;
        q[i] = t;
        for (j, &dj) in d.iter().enumerate() {
            rem[i + j] = rem[i + j].checked_sub(t.checked_mul(dj)?)?;
        }
    }
    rem.iter().all(|&x| x == 0).then_some(q)
}

/// Polynomials modulo `m < 2^62`, coefficients in `[0, m)`.
#[derive(Clone, Copy)]
struct Ring {
    m: u128,
}

type MP = Vec<u128>;

impl Ring {
    fn trim(mut v: MP) -> MP {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn lift_fp(&self, g: &FpPoly) -> MP {
        g.coeffs().iter().map(|&c| c as u128).collect()
    }

    fn lift_int(&self, f: &[i128]) -> MP {
        Self::trim(f.iter().map(|&c| c.rem_euclid(self.m as i128) as u128).collect())
    }

    fn add(&self, a: &[u128], b: &[u128]) -> MP {
        let n = a.len().max(b.len());
        Self::trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.m).collect())
    }

    fn sub(&self, a: &[u128], b: &[u128]) -> MP {
        let n = a.len().max(b.len());
        Self::trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + self.m - b.get(i).unwrap_or(&0)) % self.m).collect())
    }

    fn mul(&self, a: &[u128], b: &[u128]) -> MP {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y % self.m) % self.m;
            }
        }
        Self::trim(out)
    }

    /// Division by a monic polynomial.
    fn divrem(&self, a: &[u128], d: &[u128]) -> (MP, MP) {
        let dd = d.len() - 1;
        if a.len() <= dd {
            return (Vec::new(), a.to_vec());
        }
        let mut rem = a.to_vec();
        let mut quot = vec![0u128; a.len() - dd];
        for i in (0..a.len() - dd).rev() {
            let q = rem[i + dd];
            if q == 0 {
                continue;
            }
            for (j, &dc) in d.iter().enumerate() {
                rem[i + j] = (rem[i + j] + self.m - q * dc % self.m) % self.m;
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::trim(quot), Self::trim(rem))
    }

    fn inv(&self, a: u128) -> Option<u128> {
        let (mut r0, mut r1) = (self.m as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| t0.rem_euclid(self.m as i128) as u128)
    }
}

/// Quadratic Hensel step from modulus `m` to `next`, keeping `h` monic.
fn hensel_step(f: &[i128], g: &[u128], h: &[u128], s: &[u128], t: &[u128], next: u128) -> [MP; 4] {
    let r = Ring { m: next };
    let e = r.sub(&r.lift_int(f), &r.mul(g, h));
    let (q, rr) = r.divrem(&r.mul(s, &e), h);
    let g2 = r.add(&r.add(g, &r.mul(t, &e)), &r.mul(&q, g));
    let h2 = r.add(h, &rr);
    let b = r.sub(&r.add(&r.mul(s, &g2), &r.mul(t, &h2)), &[1]);
    let (c, d) = r.divrem(&r.mul(s, &b), &h2);
    let s2 = r.sub(s, &d);
    let t2 = r.sub(&r.sub(t, &r.mul(t, &b)), &r.mul(&c, &g2));
    [g2, h2, s2, t2]
}

fn to_i128(v: &[u128]) -> Vec<i128> {
    v.iter().map(|&c| c as i128).collect()
}

/// Monic lifts modulo `modulus` of the monic factors of `f mod p`.
fn lift(f: &[i128], factors: &[FpPoly], field: Fp, modulus: u128) -> Option<Vec<MP>> {
    let p = field.p() as u128;
    let full = Ring { m: modulus };
    let mut current = full.lift_int(f);
    let mut out = Vec::with_capacity(factors.len());
    for (i, h0) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            let inv = full.inv(*current.last()?)?;
            out.push(full.mul(&current, &[inv]));
            break;
        }
        let cur_fp = FpPoly::new(field, current.iter().map(|&c| (c % p) as u64));
        let rest_fp = cur_fp.div_exact(h0)?;
        let (one, s0, t0) = rest_fp.xgcd(h0);
        if !one.is_one() {
            return None;
        }
        let r0 = Ring { m: p };
        let (mut g, mut h, mut s, mut t) = (r0.lift_fp(&rest_fp), r0.lift_fp(h0), r0.lift_fp(&s0), r0.lift_fp(&t0));
        let target = to_i128(&current);
        let mut m = p;
        while m < modulus {
            let next = (m * m).min(modulus);
            [g, h, s, t] = hensel_step(&target, &g, &h, &s, &t, next);
            m = next;
        }
        out.push(h);
        current = g;
    }
    Some(out)
}

/// Irreducible factors over `Z` of a squarefree polynomial of positive
/// degree, or `None` when heights are too large for machine integers or
/// `f` is not squarefree.
pub(crate) fn split(f: &[i128]) -> Option<Vec<Vec<i128>>> {
    let f = primitive(f);
    let n = f.len() - 1;
    if n <= 1 {
        return Some(vec![f]);
    }
    let lc = *f.last().unwrap();
    let maxc = f.iter().map(|x| x.unsigned_abs()).max().unwrap();
    let sqrt = ((n + 1) as f64).sqrt().ceil() as u128;
    let bound = (lc as u128).checked_mul(1 << n)?.checked_mul(sqrt)?.checked_mul(maxc)?.checked_mul(2)?;
    if bound >= 1 << 57 || n >= 100 {
        return None;
    }
    let mut best: Option<(Fp, usize)> = None;
    let mut mask: u128 = super::proper_degrees(n);
    for p in odd_primes().take(6) {
        if lc % p as i128 == 0 {
            continue;
        }
        let field = Fp::new(p).unwrap();
        let fp = FpPoly::new(field, f.iter().map(|&x| field.reduce_i128(x)));
        let Some(degs) = factor_degrees(&fp) else { continue };
        if degs.len() == 1 {
            return Some(vec![f]);
        }
        let mut reach = 1u128;
        for &d in &degs {
            reach |= reach << d;
        }
        mask &= reach;
        if mask == 0 {
            return Some(vec![f]);
        }
        if best.is_none_or(|(_, k)| degs.len() < k) {
            best = Some((field, degs.len()));
        }
    }
    let (field, _) = best?;
    let p = field.p() as u128;
    let mut modulus = p;
    while modulus <= bound {
        modulus *= p;
    }
    let fp = FpPoly::new(field, f.iter().map(|&x| field.reduce_i128(x)));
    let mods: Vec<FpPoly> = factor(&fp).ok()?.factors.into_iter().map(|(g, _)| g).collect();
    let lifted = lift(&f, &mods, field, modulus)?;
    recombine(f, lifted, modulus)
}

fn symmetric(v: &[u128], m: u128) -> Vec<i128> {
    v.iter().map(|&c| if c > m / 2 { c as i128 - m as i128 } else { c as i128 }).collect()
}

fn recombine(f: Vec<i128>, mut lifted: Vec<MP>, m: u128) -> Option<Vec<Vec<i128>>> {
    let ring = Ring { m };
    let mut found = Vec::new();
    let mut rest = f;
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = rest.last().unwrap().rem_euclid(m as i128) as u128;
            let mut prod = vec![lc];
            for &i in &idx {
                prod = ring.mul(&prod, &lifted[i]);
            }
            let cand = primitive(&symmetric(&prod, m));
            if let Some(q) = div_exact(&rest, &cand) {
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
    if rest.len() > 1 {
        found.push(primitive(&rest));
    }
    Some(found)
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
    use crate::poly::IntPoly;
    use crate::rank::factor_over_q;

    fn sorted(mut v: Vec<IntPoly>) -> Vec<IntPoly> {
        v.sort_by(|a, b| a.cmp_by_degree(b));
        v
    }

    #[test]
    fn matches_zassenhaus() {
        let polys: &[&[i128]] = &[
            &[1, 0, -10, 0, 1],
            &[6, 0, -5, 0, 1],
            &[-7, 3, 0, 5, 2],
            &[576, 0, -960, 0, 352, 0, -40, 0, 1],
            &[-3, -1, 3, 1],
            &[2, 0, 0, 0, 0, 0, 0, 0, -4],
            &[-36, 0, 13, 0, -1],
            &[1728, -864, -2448, 1164, 580, -276, -28, 12, 1],
        ];
        for c in polys {
            let got = sorted(split(c).unwrap().iter().map(|v| IntPoly::from_i128s(v)).collect());
            let want =
                sorted(factor_over_q(&IntPoly::from_i128s(c)).unwrap().factors.into_iter().map(|(f, _)| f).collect());
            assert_eq!(got, want, "{c:?}");
        }
    }

    #[test]
    fn declines_large_heights() {
        assert_eq!(split(&[1 << 60, 0, 0, 1]), None);
    }
}
