//! Machine-integer classification of family members: discriminant,
//! isotriviality, certificate and its factor count, with a fallback to the
//! exact big-integer path whenever a step overflows or cannot decide.

use crate::ff::{Fp, FpPoly};
use crate::poly::{FamilyCurve, IntPoly};
use crate::rank::{self, bound_from_omega, odd_primes, small, CertificateKind, PatternSieve};

/// Classification of one family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Singular,
    Isotrivial,
    Bound(u8),
}

impl Outcome {
    pub fn of(r: &rank::RankBoundResult) -> Outcome {
        if r.singular {
            Outcome::Singular
        } else if r.isotrivial {
            Outcome::Isotrivial
        } else {
            Outcome::Bound(r.bound.unwrap())
        }
    }
}

/// `A = a0 + a1 X + a2 X^2`, `B` likewise, `C = X^3 + c2 X^2 + c1 X + c0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct SmallCurve {
    pub a: [i64; 3],
    pub b: [i64; 3],
    pub c: [i64; 3],
}

const N: usize = 13;

/// Dense polynomial with at most `N` coefficients; all operations checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SP {
    c: [i128; N],
    len: usize,
}

impl SP {
    fn new(v: &[i128]) -> SP {
        let mut c = [0; N];
        c[..v.len()].copy_from_slice(v);
        SP { c, len: v.len() }.trim()
    }

    fn trim(mut self) -> SP {
        while self.len > 0 && self.c[self.len - 1] == 0 {
            self.len -= 1;
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.len == 0
    }

    fn coeffs(&self) -> &[i128] {
        &self.c[..self.len]
    }

    fn mul(&self, o: &SP) -> Option<SP> {
        if self.is_zero() || o.is_zero() {
            return Some(SP::new(&[]));
        }
        let len = self.len + o.len - 1;
        if len > N {
            return None;
        }
        let mut c = [0i128; N];
        for i in 0..self.len {
            for j in 0..o.len {
                c[i + j] = c[i + j].checked_add(self.c[i].checked_mul(o.c[j])?)?;
            }
        }
        Some(SP { c, len }.trim())
    }

    fn lin(&self, k: i128, o: &SP, l: i128) -> Option<SP> {
        let len = self.len.max(o.len);
        let mut c = [0i128; N];
        for (i, slot) in c.iter_mut().enumerate().take(len) {
            *slot = self.c[i].checked_mul(k)?.checked_add(o.c[i].checked_mul(l)?)?;
        }
        Some(SP { c, len }.trim())
    }
}

fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = (n as u128).isqrt();
        r * r == n as u128
    }
}

impl SmallCurve {
    pub(crate) fn to_family(self) -> FamilyCurve {
        FamilyCurve::from_i64s(&self.a, &self.b, &[self.c[0], self.c[1], self.c[2], 1]).expect("C is monic cubic")
    }

    fn kind(&self) -> CertificateKind {
        let deg = |v: &[i64; 3]| v.iter().rposition(|&x| x != 0);
        match deg(&self.a) {
            None => CertificateKind::MBC,
            Some(0) if is_square(self.a[0] as i128) || deg(&self.b).is_none_or(|d| d <= 1) => CertificateKind::Disc,
            Some(1) => CertificateKind::MDiscA,
            _ => CertificateKind::None,
        }
    }

    /// `Some(Some(_))` for singular or isotrivial members, `Some(None)` for
    /// the rest, `None` on overflow.
    fn degeneracy(&self) -> Option<Option<Outcome>> {
        let t = |i: usize| SP::new(&[self.c[i] as i128, self.b[i] as i128, self.a[i] as i128]);
        let (a2, a4, a6) = (t(2), t(1), t(0));
        let a2sq = a2.mul(&a2)?;
        let a4sq = a4.mul(&a4)?;
        let t1 = a2sq.mul(&a2)?.mul(&a6)?;
        let t2 = a2sq.mul(&a4sq)?;
        let t3 = a2.mul(&a4)?.mul(&a6)?;
        let t4 = a4sq.mul(&a4)?;
        let t5 = a6.mul(&a6)?;
        let disc = t1.lin(-4, &t2, 1)?.lin(1, &t3, 18)?.lin(1, &t4, -4)?.lin(1, &t5, -27)?;
        if disc.is_zero() {
            return Some(Some(Outcome::Singular));
        }
        let c4 = a2sq.lin(1, &a4, -3)?;
        if c4.is_zero() {
            return Some(Some(Outcome::Isotrivial));
        }
        let c4cube = c4.mul(&c4)?.mul(&c4)?;
        if c4cube.len == disc.len {
            let (ld, lc) = (disc.c[disc.len - 1], c4cube.c[c4cube.len - 1]);
            if c4cube.lin(ld, &disc, -lc)?.is_zero() {
                return Some(Some(Outcome::Isotrivial));
            }
        }
        Some(None)
    }

    /// Certificate coefficients from the closed-form expansions, for the
    /// shapes they cover.
    fn certificate(&self, kind: CertificateKind) -> Option<SP> {
        let [a0, a1, _] = self.a.map(|x| x as i128);
        let [b0, b1, b2] = self.b.map(|x| x as i128);
        let [c0, c1, c2] = self.c.map(|x| x as i128);
        match kind {
            CertificateKind::MBC => {
                let b2sq = b2.checked_mul(b2)?;
                let b2cu = b2sq.checked_mul(b2)?;
                let u2 =
                    -2 * c0 * b2cu + (c1 * b1 + 2 * c2 * b0) * b2sq + (-c2 * b1 * b1 - 3 * b0 * b1) * b2 + b1 * b1 * b1;
                let u0 = c0 * c0 * b2cu
                    + (-c0 * c1 * b1 + (-2 * c0 * c2 + c1 * c1) * b0) * b2sq
                    + (c0 * c2 * b1 * b1 + (-c1 * c2 + 3 * c0) * b0 * b1 + (c2 * c2 - 2 * c1) * b0 * b0) * b2
                    + (-c0 * b1 * b1 * b1 + c1 * b0 * b1 * b1 - c2 * b0 * b0 * b1 + b0 * b0 * b0);
                Some(SP::new(&[u0, 0, u2, 0, b2cu]))
            }
            CertificateKind::Disc => {
                let b = SP::new(&[b0, b1, b2]);
                let c = SP::new(&[c0, c1, c2, 1]);
                b.mul(&b)?.lin(1, &c, -4 * a0)
            }
            CertificateKind::MDiscA if b2 == 0 && c2 == 0 => {
                let (a1sq, a0sq) = (a1 * a1, a0 * a0);
                let v = [
                    a1sq * a1 * b0 * b0 - 2 * a0 * a1sq * b0 * b1 + a0sq * a1 * b1 * b1,
                    0,
                    4 * a0sq * a0 + 2 * a1sq * b0 * b1 - 2 * a0 * a1 * b1 * b1 - 4 * a1sq * a1 * c0
                        + 4 * a0 * a1sq * c1,
                    0,
                    -12 * a0sq + a1 * b1 * b1 - 4 * a1sq * c1,
                    0,
                    12 * a0,
                    0,
                    -4,
                ];
                SP::new(&v).lin(a1, &SP::new(&[]), 0)
            }
            _ => None,
        }
    }

    pub(crate) fn classify(&self) -> Outcome {
        self.try_classify().unwrap_or_else(|| Outcome::of(&rank::rank_upper_bound(&self.to_family())))
    }

    /// The member as machine integers, if `deg A, deg B <= 2` and every
    /// coefficient fits in `i64`.
    pub(crate) fn from_family(curve: &FamilyCurve) -> Option<SmallCurve> {
        let take = |c: &[num_bigint::BigInt]| -> Option<[i64; 3]> {
            let mut out = [0i64; 3];
            for (i, x) in c.iter().enumerate() {
                *out.get_mut(i)? = i64::try_from(x).ok()?;
            }
            Some(out)
        };
        let c = curve.c().coeffs();
        Some(SmallCurve { a: take(curve.a().coeffs())?, b: take(curve.b().coeffs())?, c: take(&c[..3])? })
    }

    pub(crate) fn try_classify(&self) -> Option<Outcome> {
        // Keeps the unchecked closed forms well inside i128.
        let small = |v: &[i64; 3]| v.iter().all(|x| x.unsigned_abs() < 1 << 18);
        if !(small(&self.a) && small(&self.b) && small(&self.c)) {
            return None;
        }
        if let Some(o) = self.degeneracy()? {
            return Some(o);
        }
        let kind = self.kind();
        if kind == CertificateKind::None {
            return Some(Outcome::Bound(5));
        }
        let cert = self.certificate(kind)?;
        if cert.is_zero() {
            return Some(Outcome::Bound(5));
        }
        let omega =
            omega_small(cert.coeffs()).unwrap_or_else(|| rank::omega_q(&IntPoly::from_i128s(cert.coeffs())).unwrap());
        Some(Outcome::Bound(bound_from_omega(omega)))
    }

    #[cfg(test)]
    pub(crate) fn certificate_for_test(&self) -> Option<Vec<i128>> {
        self.certificate(self.kind()).map(|c| c.coeffs().to_vec())
    }
}

const PATTERN_BUDGET: usize = 4;
const QUARTIC_BUDGET: usize = 16;

fn sieve_proves_irreducible(c: &[i128]) -> bool {
    if c.len() == 5 {
        return quartic_sieve(c);
    }
    let mut sieve = PatternSieve::new(c.len() - 1);
    odd_primes().take(PATTERN_BUDGET).any(|p| {
        let f = Fp::new(p).unwrap();
        sieve.feed(&FpPoly::new(f, c.iter().map(|&x| f.reduce_i128(x))))
    })
}

/// Discriminant of `e + d X + c X^2 + b X^3 + a X^4` modulo `p`.
fn quartic_disc(f: Fp, [e, d, c, b, a]: [u64; 5]) -> u64 {
    let terms: [(i64, [u32; 5]); 16] = [
        (256, [3, 0, 0, 0, 3]),
        (-192, [2, 1, 0, 1, 2]),
        (-128, [2, 0, 2, 0, 2]),
        (144, [2, 0, 1, 2, 1]),
        (-27, [2, 0, 0, 4, 0]),
        (144, [1, 2, 1, 0, 2]),
        (-6, [1, 2, 0, 2, 1]),
        (-80, [1, 1, 2, 1, 1]),
        (18, [1, 1, 1, 3, 0]),
        (16, [1, 0, 4, 0, 1]),
        (-4, [1, 0, 3, 2, 0]),
        (-27, [0, 4, 0, 0, 2]),
        (18, [0, 3, 1, 1, 1]),
        (-4, [0, 3, 0, 3, 0]),
        (-4, [0, 2, 3, 0, 1]),
        (1, [0, 2, 2, 2, 0]),
    ];
    let pows: [[u64; 5]; 5] = [a, b, c, d, e].map(|v| {
        let mut row = [1u64; 5];
        for i in 1..5 {
            row[i] = f.mul(row[i - 1], v);
        }
        row
    });
    terms.iter().fold(0, |acc, (k, exps)| {
        let mut t = f.reduce_i64(*k);
        for (row, &x) in pows.iter().zip(exps) {
            t = f.mul(t, row[x as usize]);
        }
        f.add(acc, t)
    })
}

/// Degree patterns of a quartic modulo small primes from its root count
/// and, via Stickelberger, the parity of its number of factors.
fn quartic_sieve(c: &[i128]) -> bool {
    let mut mask: u8 = 0b1110;
    for p in odd_primes().take(QUARTIC_BUDGET) {
        let f = Fp::new(p).unwrap();
        let r: [u64; 5] = std::array::from_fn(|i| f.reduce_i128(c[i]));
        if r[4] == 0 {
            continue;
        }
        let disc = quartic_disc(f, r);
        if disc == 0 {
            continue;
        }
        let roots = (0..p).filter(|&x| r.iter().rev().fold(0, |acc, &k| f.add(f.mul(acc, x), k)) == 0).count();
        let reach: u8 = match roots {
            0 if f.legendre(disc) == -1 => return true,
            0 => 0b10101,
            1 => 0b11011,
            _ => 0b11111,
        };
        mask &= reach;
        if mask == 0 {
            return true;
        }
    }
    false
}

/// Exact `Omega` over `Q` when cheap, `None` when undecided.
fn omega_small(c: &[i128]) -> Option<u32> {
    let k = c.iter().position(|&x| x != 0)?;
    let c = &c[k..];
    let d = c.len() - 1;
    let k = k as u32;
    let even = c.iter().skip(1).step_by(2).all(|&x| x == 0);
    match d {
        0 => Some(k),
        1 => Some(k + 1),
        2 => {
            let disc = c[1].checked_mul(c[1])?.checked_sub(c[0].checked_mul(c[2])?.checked_mul(4)?)?;
            Some(k + if is_square(disc) { 2 } else { 1 })
        }
        4 if even => Some(k + omega_even_quartic(c[4], c[2], c[0])?),
        _ if even => {
            let g: Vec<i128> = c.iter().step_by(2).copied().collect();
            let parts = if sieve_proves_irreducible(&g) { vec![g] } else { small::split(&g)? };
            let mut omega = k;
            for q in parts {
                omega += omega_at_square(&q)?;
            }
            Some(omega)
        }
        _ if sieve_proves_irreducible(c) => Some(k + 1),
        _ => Some(k + small::split(c)?.len() as u32),
    }
}

/// `Omega(q(X^2))` for `q` irreducible over `Q` with `q(0) != 0`.
fn omega_at_square(q: &[i128]) -> Option<u32> {
    let d = q.len() - 1;
    match d {
        1 => Some(if is_square(q[0].checked_mul(-q[1])?) { 2 } else { 1 }),
        2 => omega_even_quartic(q[2], q[1], q[0]),
        _ => {
            // A factor of degree d forces the root of q to be a square in
            // its own field, so its norm (-1)^d q(0)/lc is a rational square.
            let norm = q[0].checked_mul(q[d])?;
            let norm = if d % 2 == 1 { -norm } else { norm };
            if !is_square(norm) {
                return Some(1);
            }
            let mut f = vec![0i128; 2 * d + 1];
            for (i, &x) in q.iter().enumerate() {
                f[2 * i] = x;
            }
            Some(small::split(&f)?.len() as u32)
        }
    }
}

/// `u4 X^4 + u2 X^2 + u0` with `u4, u0` nonzero.
fn omega_even_quartic(u4: i128, u2: i128, u0: i128) -> Option<u32> {
    let disc = u2.checked_mul(u2)?.checked_sub(u4.checked_mul(u0)?.checked_mul(4)?)?;
    if is_square(disc) {
        // u4 (Y - r1)(Y - r2); X^2 - r splits iff r is a rational square.
        let s = (disc as u128).isqrt() as i128;
        let mut omega = 0;
        for num in [u2 - s, u2 + s] {
            // root r = -num / (2 u4), a square iff -num * 2 u4 is.
            omega += if is_square(num.checked_mul(-2 * u4)?) { 2 } else { 1 };
        }
        return Some(omega);
    }
    // Scaled to Z^4 + a Z^2 + b with Z = u4 X; with irreducible Y-quadratic
    // it splits only as (Z^2 + sZ + t)(Z^2 - sZ + t), t^2 = b, s^2 = 2t - a.
    let a = u2.checked_mul(u4)?;
    let b = u0.checked_mul(u4)?.checked_mul(u4)?.checked_mul(u4)?;
    if !is_square(b) {
        return Some(1);
    }
    let t = (b as u128).isqrt() as i128;
    let split = is_square(2 * t - a) || is_square(-2 * t - a);
    Some(if split { 2 } else { 1 })
}
