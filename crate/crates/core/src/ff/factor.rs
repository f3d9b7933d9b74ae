//! Irreducibility testing and factorization over `F_p`: squarefree
//! decomposition, distinct-degree splitting, and Cantor-Zassenhaus
//! equal-degree splitting driven by a generator seeded from the input.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fp::{Coeffs, Frobenius};
use super::FpPoly;
use crate::error::{Error, Result};

/// `unit * prod(factor^mult)`, factors monic irreducible, sorted by degree
/// then by coefficients (highest first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMultiset {
    pub unit: u64,
    pub factors: Vec<(FpPoly, u32)>,
}

impl FactorMultiset {
    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|(_, m)| m).sum()
    }

    pub fn product(&self, field: super::Fp) -> FpPoly {
        let mut acc = FpPoly::constant(field, self.unit);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// True iff `f` is irreducible over `F_p`: no irreducible factor of degree
/// `d <= deg f / 2`, i.e. `gcd(X^(p^d) - X, f) = 1` for each such `d`.
pub fn is_irreducible(f: &FpPoly) -> Result<bool> {
    match f.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::ConstantPolynomial),
        Some(n) => Ok(irreducible_unchecked(f, n)),
    }
}

pub(crate) fn irreducible_unchecked(f: &FpPoly, n: usize) -> bool {
    if n == 1 {
        return true;
    }
    let fld = f.field();
    let f = f.monic();
    if f.coeff(0) == 0 {
        return false;
    }
    let frob = Frobenius::new(&f);
    let x = FpPoly::x(fld);
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = frob.apply(&h);
        if !h.sub(&x).gcd(&f).is_one() {
            return false;
        }
    }
    true
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with the
/// `g_i` squarefree, pairwise coprime, and `f = prod g_i^i`.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let fld = f.field();
    let p = fld.p();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power: read off c^(1/p) from the X^(kp) coefficients.
        let root = FpPoly::new(fld, c.coeffs().iter().step_by(p as usize).copied());
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(g_d, d)` where `g_d` is the product of all irreducible factors of
/// degree `d`.
pub fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let fld = f.field();
    let x = FpPoly::x(fld);
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut frob = Frobenius::new(&rest);
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().is_some_and(|n| n >= 2 * (d + 1)) {
        d += 1;
        h = frob.apply(&h);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            out.push((g, d));
            if rest.degree().unwrap_or(0) > 0 {
                frob = Frobenius::new(&rest);
                h = h.rem(&rest);
            }
        }
    }
    if let Some(n) = rest.degree().filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

/// Degrees of the irreducible factors of a squarefree `f` (with repetition),
/// or `None` when `f` is not squarefree.
pub fn factor_degrees(f: &FpPoly) -> Option<Vec<usize>> {
    if !f.is_squarefree() {
        return None;
    }
    let mut degs = Vec::new();
    for (g, d) in distinct_degree(f) {
        let k = g.degree().unwrap() / d;
        degs.extend(std::iter::repeat_n(d, k));
    }
    Some(degs)
}

fn seed_from(f: &FpPoly) -> u64 {
    // FNV-1a over the coefficients and modulus.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &c in std::iter::once(&f.p()).chain(f.coeffs()) {
        for b in c.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Splits a monic squarefree product of irreducibles of degree `d`.
fn equal_degree(g: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let n = g.degree().unwrap();
    if n == d {
        out.push(g.clone());
        return;
    }
    let fld = g.field();
    let p = fld.p();
    let frob = Frobenius::new(g);
    let one = FpPoly::one(fld);
    loop {
        let a = FpPoly::from_raw(fld, (0..n).map(|_| rng.gen_range(0..p)).collect::<Coeffs>());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let common = a.gcd(g);
        if !common.is_one() {
            let other = g.div_exact(&common).unwrap();
            equal_degree(&common, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
        // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
        let mut norm = a.clone();
        let mut conj = a;
        for _ in 1..d {
            conj = frob.apply(&conj);
            norm = norm.mul(&conj).rem(g);
        }
        let b = norm.pow_mod(((p - 1) / 2) as u128, g);
        let split = b.sub(&one).gcd(g);
        let k = split.degree().unwrap_or(0);
        if k > 0 && k < n {
            let other = g.div_exact(&split).unwrap();
            equal_degree(&split, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

/// Complete factorization over `F_p`.
pub fn factor(f: &FpPoly) -> Result<FactorMultiset> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = f.leading();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_from(&monic));
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&monic) {
        for (g, d) in distinct_degree(&sqf) {
            let mut parts = Vec::new();
            equal_degree(&g, d, &mut rng, &mut parts);
            factors.extend(parts.into_iter().map(|q| (q, mult)));
        }
    }
    factors.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    Ok(FactorMultiset { unit, factors })
}

/// Number of irreducible factors counted with multiplicity; 0 for nonzero
/// constants.
pub fn omega_p(f: &FpPoly) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(0);
    }
    let mut total = 0;
    for (sqf, mult) in squarefree_decomposition(&f.monic()) {
        let count: usize = distinct_degree(&sqf).iter().map(|(g, d)| g.degree().unwrap() / d).sum();
        total += count as u32 * mult;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fp;
    use proptest::prelude::*;

    fn poly(p: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_i64s(Fp::new(p).unwrap(), c)
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&poly(3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(5, &[-1, 0, 1])).unwrap());
        assert_eq!(is_irreducible(&poly(5, &[3])), Err(Error::ConstantPolynomial));
        assert_eq!(is_irreducible(&poly(5, &[])), Err(Error::ZeroPolynomial));
        // X^4 + 1 splits modulo every odd prime.
        for p in [3, 5, 7, 11, 13, 17] {
            assert!(!is_irreducible(&poly(p, &[1, 0, 0, 0, 1])).unwrap());
        }
    }

    #[test]
    fn factor_examples() {
        let m = factor(&poly(5, &[-1, 0, 1])).unwrap();
        assert_eq!(m.unit, 1);
        assert_eq!(m.factors, vec![(poly(5, &[1, 1]), 1), (poly(5, &[4, 1]), 1)]);

        let m = factor(&poly(7, &[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(m.factors, vec![(poly(7, &[0, 1]), 4)]);

        let m = factor(&poly(3, &[2, 0, 2])).unwrap();
        assert_eq!(m.unit, 2);
        assert_eq!(m.factors, vec![(poly(3, &[1, 0, 1]), 1)]);
        assert!(factor(&poly(3, &[])).is_err());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_p(&poly(5, &[-1, 0, 1])).unwrap(), 2);
        assert_eq!(omega_p(&poly(5, &[3])).unwrap(), 0);
        assert_eq!(omega_p(&poly(7, &[0, 0, 0, 0, 1])).unwrap(), 4);
        assert!(omega_p(&poly(7, &[])).is_err());
    }

    #[test]
    fn pth_powers_are_handled() {
        // (X^3 + 1)^3 = X^9 + 1 over F_3 = (X+1)^9.
        let m = factor(&poly(3, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(m.factors, vec![(poly(3, &[1, 1]), 9)]);
    }

    #[test]
    fn factor_degrees_pattern() {
        // (X^2+1)(X-1)(X-2) over F_3 is not squarefree: X-2 = X+1.
        assert_eq!(factor_degrees(&poly(3, &[1, 1]).mul(&poly(3, &[1, 1]))), None);
        let f = poly(7, &[1, 0, 1]).mul(&poly(7, &[-1, 1])).mul(&poly(7, &[-2, 1]));
        assert_eq!(factor_degrees(&f), Some(vec![1, 1, 2]));
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![3u64, 5, 7, 11, 13, 31, 53, 101])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn factor_product_roundtrip(p in small_prime(), coeffs in prop::collection::vec(0u64..101, 1..10)) {
            let f = FpPoly::new(Fp::new(p).unwrap(), coeffs);
            prop_assume!(!f.is_zero());
            let m = factor(&f).unwrap();
            prop_assert_eq!(m.product(f.field()), f.clone());
            for (g, _) in &m.factors {
                prop_assert!(g.is_monic());
                prop_assert!(is_irreducible(g).unwrap());
            }
            prop_assert_eq!(m.omega(), omega_p(&f).unwrap());
        }

        #[test]
        fn irreducible_iff_single_factor(p in small_prime(), coeffs in prop::collection::vec(0u64..101, 2..10)) {
            let f = FpPoly::new(Fp::new(p).unwrap(), coeffs);
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            let m = factor(&f).unwrap();
            let single = m.factors.len() == 1 && m.factors[0].1 == 1 && m.factors[0].0 == f.monic();
            prop_assert_eq!(is_irreducible(&f).unwrap(), single);
        }
    }
}
