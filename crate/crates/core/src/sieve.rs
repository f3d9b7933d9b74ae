//! Turán sieve bound for the number of parameter tuples in a box whose
//! certificate is reducible over `Q`, and an exhaustive driver counting
//! tuples whose certificate is reducible modulo every small admissible prime.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ff::{is_irreducible, is_prime, Fp, FpPoly};
use crate::ffcount::{certificate_integer, SystemKind};
use crate::par;
use crate::poly::IntPoly;
use crate::rank::omega_q;

/// Default cap on enumerated box points.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Largest box half-width; keeps integer certificates within `i64`.
pub const MAX_H: u64 = 256;

/// Primes `p >= min` with `p = residue mod modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSet {
    pub modulus: u64,
    pub residue: u64,
    pub min: u64,
}

impl PrimeSet {
    pub fn all_odd() -> Self {
        PrimeSet { modulus: 1, residue: 0, min: 3 }
    }

    /// The admissible primes of a system: `p = 2 mod 3` where the cube map
    /// must be a bijection.
    pub fn for_kind(kind: SystemKind) -> Self {
        let min = if kind.is_admissible(3) { 3 } else { 5 };
        if kind.is_admissible(7) {
            PrimeSet { modulus: 1, residue: 0, min }
        } else {
            PrimeSet { modulus: 3, residue: 2, min }
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        p >= self.min && p % self.modulus == self.residue % self.modulus && is_prime(p)
    }

    /// Natural-density constant `C` with `#(P cap [1, x]) ~ C x / log x`.
    pub fn density_constant(&self) -> f64 {
        if num_integer::gcd(self.residue, self.modulus) != 1 {
            return 0.0;
        }
        let phi = (1..=self.modulus).filter(|&k| num_integer::gcd(k, self.modulus) == 1).count();
        1.0 / phi as f64
    }

    pub fn primes_up_to(&self, z: u64) -> Vec<u64> {
        (2..=z).filter(|&p| self.contains(p)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveParams {
    /// `H_1, ..., H_n`.
    pub boxes: Vec<u64>,
    /// Inverse local density of irreducible certificates.
    pub delta: f64,
    pub primes: PrimeSet,
    pub z: u64,
    /// Constant in the remainder surrogates `c_1 X / p`.
    pub c1: f64,
    /// Constant in the remainder surrogates `c_2 p X / H`.
    pub c2: f64,
}

impl SieveParams {
    pub fn new(boxes: Vec<u64>, delta: f64, primes: PrimeSet, z: u64) -> Self {
        SieveParams { boxes, delta, primes, z, c1: 1.0, c2: 1.0 }
    }

    /// `H = min H_i`.
    pub fn h(&self) -> u64 {
        self.boxes.iter().copied().min().unwrap_or(0)
    }

    /// `X = prod H_i`.
    pub fn x(&self) -> f64 {
        self.boxes.iter().map(|&h| h as f64).product()
    }

    fn validate(&self) -> Result<()> {
        if self.boxes.is_empty() || self.boxes.contains(&0) {
            return Err(invalid("box sides must be positive"));
        }
        if !(self.delta.is_finite() && self.delta >= 1.0) {
            return Err(invalid("delta must be a finite number >= 1"));
        }
        if self.z < 2 {
            return Err(invalid("z must be at least 2"));
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0) {
            return Err(invalid("remainder constants must be non-negative"));
        }
        if self.z.saturating_mul(self.z) > self.h() {
            return Err(invalid(format!("z = {} exceeds H^(1/2) for H = {}", self.z, self.h())));
        }
        Ok(())
    }
}

/// The three terms of the Turán inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuranTerms {
    /// `S = sum_{p in P, p <= z} 1/delta`.
    pub s: f64,
    pub main: f64,
    pub single: f64,
    pub pair: f64,
}

impl TuranTerms {
    pub fn total(&self) -> f64 {
        self.main + self.single + self.pair
    }
}

/// `X/S + (2/S) sum_p |R_p| + (1/S^2) sum_{p,q} |R_{p,q}|` with
/// `R_p = c_1 X/p + c_2 p X/H` and `R_{p,q} = c_1 X/p + c_1 X/q + c_2 p q X/H`,
/// the pair sum running over ordered pairs.
pub fn turan_terms(params: &SieveParams) -> Result<TuranTerms> {
    params.validate()?;
    let primes = params.primes.primes_up_to(params.z);
    let s = primes.len() as f64 / params.delta;
    if s == 0.0 {
        return Err(Error::Degenerate("no primes of the set up to z".into()));
    }
    let (x, h, c1, c2) = (params.x(), params.h() as f64, params.c1, params.c2);
    let r_p: f64 = primes.iter().map(|&p| c1 * x / p as f64 + c2 * p as f64 * x / h).sum();
    let mut r_pq = 0.0;
    for &p in &primes {
        for &q in &primes {
            let (p, q) = (p as f64, q as f64);
            r_pq += c1 * x / p + c1 * x / q + c2 * p * q * x / h;
        }
    }
    Ok(TuranTerms { s, main: x / s, single: 2.0 * r_p / s, pair: r_pq / (s * s) })
}

pub fn turan_bound(params: &SieveParams) -> Result<f64> {
    turan_terms(params).map(|t| t.total())
}

/// `ceil((H log H log log H)^(1/3))`.
pub fn choose_z(h: u64) -> Result<u64> {
    if h < 16 {
        return Err(invalid("choose_z needs H >= 16"));
    }
    let hf = h as f64;
    Ok((hf * hf.ln() * hf.ln().ln()).cbrt().ceil() as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub kind: SystemKind,
    #[serde(rename = "H")]
    pub h: u64,
    pub z: u64,
    /// Absent when `z > H^(1/2)`, outside the range of the inequality.
    pub theoretical_bound: Option<f64>,
    /// Absent in theoretical-only reports.
    pub empirical_b_pz: Option<u64>,
    pub exact_b: Option<u64>,
    pub box_size: u64,
}

fn box_points(kind: SystemKind, h: u64, budget: u128) -> Result<u64> {
    if h == 0 || h > MAX_H {
        return Err(invalid(format!("H must be in [1, {MAX_H}]")));
    }
    let total = ((2 * h + 1) as u128).checked_pow(kind.dimension()).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { requested: total, budget });
    }
    Ok(total as u64)
}

fn tuple_at(mut idx: u64, h: u64, out: &mut [i64]) {
    let side = 2 * h + 1;
    for d in out.iter_mut() {
        *d = (idx % side) as i64 - h as i64;
        idx /= side;
    }
}

fn irreducible_mod(fld: Fp, cert: &[i64; 9]) -> bool {
    let f = FpPoly::new(fld, cert.iter().map(|&c| fld.reduce_i64(c)));
    is_irreducible(&f).unwrap_or(false)
}

fn reducible_over_q(cert: &[i64; 9]) -> bool {
    let f = IntPoly::from_i64s(cert);
    match f.degree() {
        None | Some(0) => true,
        Some(_) => omega_q(&f).is_ok_and(|om| om >= 2),
    }
}

/// Exhaustive sieve over the box `[-H, H]^n` of the kind's tuple
/// coordinates: counts tuples whose certificate is reducible modulo every
/// admissible prime `p <= z`, and optionally those reducible over `Q`.
pub fn empirical_sieve(kind: SystemKind, h: u64, z: u64, exact: bool) -> Result<SieveReport> {
    empirical_sieve_with(kind, h, z, exact, DEFAULT_BUDGET, None)
}

pub fn empirical_sieve_with(
    kind: SystemKind,
    h: u64,
    z: u64,
    exact: bool,
    budget: u128,
    workers: Option<usize>,
) -> Result<SieveReport> {
    let total = box_points(kind, h, budget)?;
    let fields: Vec<Fp> = PrimeSet::for_kind(kind).primes_up_to(z).into_iter().map(Fp::new).collect::<Result<_>>()?;
    let dim = kind.dimension() as usize;
    let (b_pz, b) = par::install(workers, || {
        par::fold_range(
            total,
            || (0u64, 0u64),
            |acc, i| {
                let mut t = [0i64; 7];
                tuple_at(i, h, &mut t[..dim]);
                let cert = certificate_integer(kind, &t[..dim]);
                if fields.iter().any(|&f| irreducible_mod(f, &cert)) {
                    return;
                }
                acc.0 += 1;
                if exact && reducible_over_q(&cert) {
                    acc.1 += 1;
                }
            },
            |a, b| (a.0 + b.0, a.1 + b.1),
        )
    })?;
    let mut report = theoretical_report(kind, &kind_params(kind, h, z))?;
    report.empirical_b_pz = Some(b_pz);
    report.exact_b = exact.then_some(b);
    report.box_size = total;
    Ok(report)
}

/// Turán parameters for the cube box `[-H, H]^n` of a system with unit
/// remainder constants.
pub fn kind_params(kind: SystemKind, h: u64, z: u64) -> SieveParams {
    SieveParams::new(vec![h; kind.dimension() as usize], kind.delta() as f64, PrimeSet::for_kind(kind), z)
}

/// Report without enumeration: the bound when `z <= H^(1/2)` and the box
/// size `prod (2 H_i + 1)`, saturating at `u64::MAX`.
pub fn theoretical_report(kind: SystemKind, params: &SieveParams) -> Result<SieveReport> {
    let h = params.h();
    let z = params.z;
    let theoretical_bound = if z >= 2 && z.saturating_mul(z) <= h { Some(turan_bound(params)?) } else { None };
    let box_size = params.boxes.iter().try_fold(1u64, |acc, &hi| acc.checked_mul(2 * hi + 1)).unwrap_or(u64::MAX);
    Ok(SieveReport { kind, h, z, theoretical_bound, empirical_b_pz: None, exact_b: None, box_size })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_z_values() {
        assert_eq!(choose_z(16).unwrap(), 4);
        assert_eq!(choose_z(1000).unwrap(), 24);
        assert_eq!(choose_z(1_000_000).unwrap(), 332);
        assert!(choose_z(15).is_err());
    }

    #[test]
    fn first_term_only() {
        let mut p = SieveParams::new(vec![1_000_000; 2], 4.0, PrimeSet::all_odd(), 11);
        p.c1 = 0.0;
        p.c2 = 0.0;
        let t = turan_terms(&p).unwrap();
        assert_eq!(t.s, 1.0);
        assert_eq!(t.single + t.pair, 0.0);
        assert_eq!(turan_bound(&p).unwrap(), 1e12);
    }

    #[test]
    fn guards() {
        let p = SieveParams::new(vec![100; 6], 8.0, PrimeSet::all_odd(), 11);
        assert!(turan_bound(&p).is_err());
        let p = SieveParams::new(vec![1000; 6], 0.5, PrimeSet::all_odd(), 11);
        assert!(turan_bound(&p).is_err());
    }

    #[test]
    fn sell_like_is_finite() {
        let set = PrimeSet { modulus: 3, residue: 2, min: 5 };
        assert_eq!(set.density_constant(), 0.5);
        let p = SieveParams::new(vec![1000; 6], 8.0, set, choose_z(1000).unwrap());
        let b = turan_bound(&p).unwrap();
        assert!(b.is_finite() && b > 0.0);
    }

    #[test]
    fn monotone_in_constants() {
        let base = SieveParams::new(vec![10_000; 4], 4.0, PrimeSet::all_odd(), 50);
        let b0 = turan_bound(&base).unwrap();
        let mut more = base.clone();
        more.c1 = 2.0;
        assert!(turan_bound(&more).unwrap() >= b0);
        more.c2 = 3.0;
        assert!(turan_bound(&more).unwrap() >= turan_bound(&SieveParams { c1: 2.0, ..base.clone() }).unwrap());
    }

    #[test]
    fn vacuous_prime_set() {
        let r = empirical_sieve(SystemKind::M11, 1, 4, false).unwrap();
        assert_eq!(r.empirical_b_pz, Some(r.box_size));
    }

    #[test]
    fn containment_small_box() {
        let r = empirical_sieve(SystemKind::Sys1, 1, 11, true).unwrap();
        assert!(r.exact_b.unwrap() <= r.empirical_b_pz.unwrap());
    }
}
