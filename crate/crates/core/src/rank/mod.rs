//! Certificate selection and the rank upper bound `min(5, max(0, Omega - 1))`.

pub(crate) mod small;
mod zassenhaus;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

pub use zassenhaus::{factor_over_q, omega_q, QFactorization};
pub(crate) use zassenhaus::{odd_primes, proper_degrees};

use crate::error::{Error, Result};
use crate::ff::{factor_degrees, Fp, FpPoly};
use crate::poly::{m_certificate, FamilyCurve, IntPoly};

/// Prime budget used by [`rank_upper_bound`] before full factorization.
pub const DEFAULT_PRIME_BUDGET: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateKind {
    /// `A = 0`: `M_{B,C}`.
    MBC,
    /// `A` a nonzero square constant, or constant with `deg B <= 1`: `B^2 - 4AC`.
    Disc,
    /// `deg A = 1`: `M_{B^2 - 4AC, A}`.
    MDiscA,
    /// No certificate; only the blanket bound 5 applies.
    None,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::MBC => "MBC",
            CertificateKind::Disc => "Disc",
            CertificateKind::MDiscA => "MDiscA",
            CertificateKind::None => "None",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBoundResult {
    /// `None` for singular or isotrivial curves, which are not classified.
    pub kind: Option<CertificateKind>,
    pub certificate: Option<IntPoly>,
    pub omega_q: Option<u32>,
    pub bound: Option<u8>,
    pub isotrivial: bool,
    pub singular: bool,
}

impl RankBoundResult {
    fn flagged(singular: bool, isotrivial: bool) -> Self {
        RankBoundResult { kind: None, certificate: None, omega_q: None, bound: None, isotrivial, singular }
    }
}

pub fn bound_from_omega(omega: u32) -> u8 {
    omega.saturating_sub(1).min(5) as u8
}

fn is_square_constant(a: &IntPoly) -> bool {
    match a.degree() {
        Some(0) => {
            let c = &a.coeffs()[0];
            !c.is_negative() && {
                let r = c.sqrt();
                &r * &r == *c
            }
        }
        _ => false,
    }
}

/// Case table for the curve's shape alone; no singularity checks.
pub fn certificate_kind(curve: &FamilyCurve) -> CertificateKind {
    let (a, b) = (curve.a(), curve.b());
    match a.degree() {
        None => CertificateKind::MBC,
        Some(0) if is_square_constant(a) || b.degree().is_none_or(|d| d <= 1) => CertificateKind::Disc,
        Some(1) => CertificateKind::MDiscA,
        _ => CertificateKind::None,
    }
}

/// `B^2 - 4AC`.
pub fn disc_abc(curve: &FamilyCurve) -> IntPoly {
    let four_ac = (curve.a() * curve.c()).scalar_mul(&BigInt::from(4));
    &(curve.b() * curve.b()) - &four_ac
}

fn certificate_unchecked(curve: &FamilyCurve, kind: CertificateKind) -> Result<Option<IntPoly>> {
    Ok(match kind {
        CertificateKind::MBC => Some(m_certificate(curve.b(), curve.c(), 2)?),
        CertificateKind::Disc => Some(disc_abc(curve)),
        CertificateKind::MDiscA => Some(m_certificate(&disc_abc(curve), curve.a(), 4)?),
        CertificateKind::None => None,
    })
}

pub fn select_certificate(curve: &FamilyCurve) -> Result<(CertificateKind, Option<IntPoly>)> {
    let w = curve.to_weierstrass();
    if w.is_isotrivial()? {
        return Err(Error::Isotrivial);
    }
    let kind = certificate_kind(curve);
    Ok((kind, certificate_unchecked(curve, kind)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Irreducibility {
    Irreducible,
    Unknown,
}

/// Incremental proof of irreducibility from factor-degree patterns modulo
/// several good primes: a proper factor over `Q` of degree `k` needs a
/// subset of every pattern summing to `k`.
#[derive(Clone, Debug)]
pub(crate) struct PatternSieve {
    n: usize,
    mask: u128,
}

impl PatternSieve {
    pub(crate) fn new(n: usize) -> Self {
        PatternSieve { n, mask: if n < 128 { proper_degrees(n) } else { u128::MAX } }
    }

    /// Feeds one reduction; returns true once irreducibility is proven.
    /// Reductions that drop degree or are not squarefree are ignored.
    pub(crate) fn feed(&mut self, fp: &FpPoly) -> bool {
        if self.n <= 1 {
            return self.n == 1;
        }
        if fp.degree() != Some(self.n) {
            return false;
        }
        let Some(degs) = factor_degrees(fp) else { return false };
        if degs.len() == 1 {
            return true;
        }
        if self.n >= 128 {
            return false;
        }
        let mut reach = 1u128;
        for d in degs {
            reach |= reach << d;
        }
        self.mask &= reach;
        self.mask == 0
    }
}

/// `Irreducible` only with a proof: an irreducible reduction of full degree
/// modulo a squarefree good prime, or incompatible degree patterns across
/// the first `prime_budget` odd primes.
pub fn irreducible_over_q_fast(p: &IntPoly, prime_budget: usize) -> Irreducibility {
    let Some(n) = p.degree() else { return Irreducibility::Unknown };
    if n == 0 {
        return Irreducibility::Unknown;
    }
    if n == 1 {
        return Irreducibility::Irreducible;
    }
    let mut sieve = PatternSieve::new(n);
    for q in odd_primes().take(prime_budget) {
        let fp = FpPoly::from_intpoly(Fp::new(q).unwrap(), p);
        if sieve.feed(&fp) {
            return Irreducibility::Irreducible;
        }
    }
    Irreducibility::Unknown
}

pub(crate) fn omega_with_shortcut(cert: &IntPoly) -> Result<u32> {
    if irreducible_over_q_fast(cert, DEFAULT_PRIME_BUDGET) == Irreducibility::Irreducible {
        Ok(1)
    } else {
        omega_q(cert)
    }
}

pub fn rank_upper_bound(curve: &FamilyCurve) -> RankBoundResult {
    let w = curve.to_weierstrass();
    if w.disc_t().is_zero() {
        return RankBoundResult::flagged(true, false);
    }
    if w.is_isotrivial().expect("nonsingular") {
        return RankBoundResult::flagged(false, true);
    }
    let kind = certificate_kind(curve);
    let cert = certificate_unchecked(curve, kind).expect("formal degrees hold for family curves");
    let (omega, bound) = match &cert {
        None => (None, 5),
        Some(c) if c.is_zero() => (None, 5),
        Some(c) => {
            let om = omega_with_shortcut(c).expect("nonzero certificate");
            (Some(om), bound_from_omega(om))
        }
    };
    RankBoundResult {
        kind: Some(kind),
        certificate: cert,
        omega_q: omega,
        bound: Some(bound),
        isotrivial: false,
        singular: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn curve(a: &[i64], b: &[i64], c: &[i64]) -> FamilyCurve {
        FamilyCurve::from_i64s(a, b, c).unwrap()
    }

    #[test]
    fn certificate_examples() {
        let g = curve(&[1], &[0, 3, 3], &[0, 0, 0, 1]);
        assert_eq!(select_certificate(&g).unwrap(), (CertificateKind::Disc, Some(p(&[0, 0, 9, 14, 9]))));
        let e = curve(&[], &[0, 1], &[1, 0, 0, 1]);
        assert_eq!(select_certificate(&e).unwrap(), (CertificateKind::MBC, Some(p(&[-1, 0, 1]))));

        let e = curve(&[0, 1], &[1], &[0, 0, 0, 1]);
        let (kind, cert) = select_certificate(&e).unwrap();
        assert_eq!(kind, CertificateKind::MDiscA);
        let oracle = m_certificate(&p(&[1, 0, 0, 0, -4]), &p(&[0, 1]), 4).unwrap();
        assert_eq!(cert.unwrap(), oracle);
    }

    #[test]
    fn case_table() {
        let c = [0, 0, 0, 1];
        assert_eq!(certificate_kind(&curve(&[4], &[0, 0, 1], &c)), CertificateKind::Disc);
        assert_eq!(certificate_kind(&curve(&[2], &[0, 1], &c)), CertificateKind::Disc);
        assert_eq!(certificate_kind(&curve(&[2], &[0, 0, 1], &c)), CertificateKind::None);
        assert_eq!(certificate_kind(&curve(&[-1], &[0, 0, 1], &c)), CertificateKind::None);
        assert_eq!(certificate_kind(&curve(&[1, 1], &[0, 0, 1], &c)), CertificateKind::MDiscA);
        assert_eq!(certificate_kind(&curve(&[0, 0, 1], &[], &c)), CertificateKind::None);
    }

    #[test]
    fn rejects_isotrivial() {
        let e = curve(&[], &[], &[1, 0, 0, 1]);
        assert_eq!(select_certificate(&e), Err(Error::Isotrivial));
        let s = curve(&[], &[], &[0, 0, 0, 1]);
        assert_eq!(select_certificate(&s), Err(Error::Singular));
    }

    #[test]
    fn fast_irreducibility_examples() {
        assert_eq!(irreducible_over_q_fast(&p(&[1, 0, 1]), 3), Irreducibility::Irreducible);
        assert_eq!(irreducible_over_q_fast(&p(&[1, 0, 0, 0, 1]), 25), Irreducibility::Unknown);
        assert_eq!(irreducible_over_q_fast(&p(&[-1, 0, 1]), 10), Irreducibility::Unknown);
    }

    #[test]
    fn rank_bound_examples() {
        let g = rank_upper_bound(&curve(&[1], &[0, 3, 3], &[0, 0, 0, 1]));
        assert_eq!((g.omega_q, g.bound), (Some(3), Some(2)));
        let e = rank_upper_bound(&curve(&[], &[0, 1], &[1, 0, 0, 1]));
        assert_eq!(e.bound, Some(1));
        let s = rank_upper_bound(&curve(&[], &[0, 0, 1], &[0, 0, 0, 1]));
        assert!(s.singular);
        assert_eq!(s.bound, None);
        let iso = rank_upper_bound(&curve(&[], &[], &[1, 0, 0, 1]));
        assert!(iso.isotrivial && iso.bound.is_none());
        let none = rank_upper_bound(&curve(&[2], &[1, 0, 1], &[0, 1, 0, 1]));
        assert_eq!((none.kind, none.bound), (Some(CertificateKind::None), Some(5)));
    }
}
