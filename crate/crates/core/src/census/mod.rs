//! Height-box families of curves, exhaustive or sampled density censuses of
//! the positive rank bound, and decay-exponent fits.

mod fast;

pub use fast::Outcome;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::par;
use crate::poly::FamilyCurve;

pub(crate) use fast::SmallCurve;

/// Default cap on exhaustively enumerated tuples.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `A = 0`, `deg B, deg(C - X^3) <= 2`, `||B, C|| <= H`.
    S0,
    /// `A = k^2` with `0 < |k| <= H`, otherwise as `S0`.
    Ssquare,
    /// `deg A, deg B, deg(C - X^3) <= 1`, `||A, B, C|| <= H`.
    Sell,
    /// `a2 = 0`, `deg a4 <= m`, `deg a6 <= n`, `||a4|| < H^3`, `||a6|| < H^2`.
    Smn(u8, u8),
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::S0 => write!(f, "s0"),
            FamilyKind::Ssquare => write!(f, "ssquare"),
            FamilyKind::Sell => write!(f, "sell"),
            FamilyKind::Smn(m, n) => write!(f, "s{m}{n}"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "s0" => Ok(FamilyKind::S0),
            "ssquare" | "sq" => Ok(FamilyKind::Ssquare),
            "sell" | "sl" => Ok(FamilyKind::Sell),
            _ => {
                let b = s.as_bytes();
                if b.len() == 3 && b[0] == b's' && (b'0'..=b'2').contains(&b[1]) && (b'0'..=b'2').contains(&b[2]) {
                    Ok(FamilyKind::Smn(b[1] - b'0', b[2] - b'0'))
                } else {
                    Err(invalid(format!("unknown family kind {s:?}")))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub h: u32,
}

/// One coordinate of the parameter box: `side` consecutive integers from
/// `lo`, skipping zero when `nonzero` is set.
#[derive(Clone, Copy, Debug)]
struct Axis {
    lo: i64,
    side: u64,
    nonzero: bool,
}

impl Axis {
    fn symmetric(r: i64) -> Axis {
        Axis { lo: -r, side: 2 * r as u64 + 1, nonzero: false }
    }

    fn value(&self, j: u64) -> i64 {
        let v = self.lo + j as i64;
        if self.nonzero && v >= 0 {
            v + 1
        } else {
            v
        }
    }
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, h: u32) -> Result<Self> {
        if h == 0 {
            return Err(invalid("H must be positive"));
        }
        if let FamilyKind::Smn(m, n) = kind {
            if m > 2 || n > 2 {
                return Err(invalid("Smn needs m, n <= 2"));
            }
        }
        if h > 1 << 20 {
            return Err(invalid("H too large"));
        }
        Ok(FamilySpec { kind, h })
    }

    fn axes(&self) -> Vec<Axis> {
        let h = self.h as i64;
        let sym = Axis::symmetric;
        match self.kind {
            FamilyKind::S0 => vec![sym(h); 6],
            FamilyKind::Ssquare => {
                let mut v = vec![Axis { lo: -h, side: 2 * h as u64, nonzero: true }];
                v.extend([sym(h); 6]);
                v
            }
            FamilyKind::Sell => vec![sym(h); 6],
            FamilyKind::Smn(m, n) => {
                let mut v = vec![sym(h * h * h - 1); m as usize + 1];
                v.extend(vec![sym(h * h - 1); n as usize + 1]);
                v
            }
        }
    }

    /// Number of parameter tuples; duplicates of the same curve are counted.
    pub fn box_size(&self) -> u128 {
        self.axes().iter().map(|a| a.side as u128).product()
    }

    pub fn dimension(&self) -> usize {
        self.axes().len()
    }

    pub(crate) fn small_at(&self, idx: u64) -> SmallCurve {
        let mut t = [0i64; 7];
        let mut rem = idx;
        let axes = self.axes();
        for (slot, ax) in t.iter_mut().zip(&axes) {
            *slot = ax.value(rem % ax.side);
            rem /= ax.side;
        }
        let mut s = SmallCurve::default();
        match self.kind {
            FamilyKind::S0 => {
                s.b = [t[0], t[1], t[2]];
                s.c = [t[3], t[4], t[5]];
            }
            FamilyKind::Ssquare => {
                s.a = [t[0] * t[0], 0, 0];
                s.b = [t[1], t[2], t[3]];
                s.c = [t[4], t[5], t[6]];
            }
            FamilyKind::Sell => {
                s.a = [t[0], t[1], 0];
                s.b = [t[2], t[3], 0];
                s.c = [t[4], t[5], 0];
            }
            FamilyKind::Smn(m, n) => {
                // a4 = c1 + b1 T + a1 T^2, a6 = c0 + b0 T + a0 T^2.
                let (m, n) = (m as usize, n as usize);
                let a4 = |i: usize| if i <= m { t[i] } else { 0 };
                let a6 = |i: usize| if i <= n { t[m + 1 + i] } else { 0 };
                s.a = [a6(2), a4(2), 0];
                s.b = [a6(1), a4(1), 0];
                s.c = [a6(0), a4(0), 0];
            }
        }
        s
    }

    /// The member at position `idx` of the odometer order (first coordinate
    /// fastest).
    pub fn curve_at(&self, idx: u64) -> FamilyCurve {
        self.small_at(idx).to_family()
    }

    fn total(&self, budget: u128) -> Result<u64> {
        let size = self.box_size();
        if size > budget {
            return Err(Error::BudgetExceeded { requested: size, budget });
        }
        Ok(size as u64)
    }
}

/// The census's machine-integer classification, or `None` where it defers
/// to the exact path.
pub fn fast_outcome(curve: &FamilyCurve) -> Option<Outcome> {
    fast::SmallCurve::from_family(curve)?.try_classify()
}

/// Classification through [`crate::rank::rank_upper_bound`].
pub fn exact_outcome(curve: &FamilyCurve) -> Outcome {
    Outcome::of(&crate::rank::rank_upper_bound(curve))
}

/// Every tuple in the box, in odometer order.
pub fn enumerate_family(spec: FamilySpec) -> impl Iterator<Item = FamilyCurve> {
    let total = spec.box_size().min(u64::MAX as u128) as u64;
    (0..total).map(move |i| spec.curve_at(i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled { n: u64, seed: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Sampled { n, seed } => write!(f, "sampled:{n}:{seed}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub budget: u128,
    /// `None` uses the global thread pool.
    pub workers: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { budget: DEFAULT_BUDGET, workers: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    seen: u64,
    singular: u64,
    isotrivial: u64,
    positive: u64,
    bound_sum: u64,
}

impl Tally {
    fn add(&mut self, o: Outcome) {
        self.seen += 1;
        match o {
            Outcome::Singular => self.singular += 1,
            Outcome::Isotrivial => self.isotrivial += 1,
            Outcome::Bound(b) => {
                self.bound_sum += b as u64;
                if b >= 1 {
                    self.positive += 1;
                }
            }
        }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            seen: self.seen + o.seen,
            singular: self.singular + o.singular,
            isotrivial: self.isotrivial + o.isotrivial,
            positive: self.positive + o.positive,
            bound_sum: self.bound_sum + o.bound_sum,
        }
    }
}

/// In sampled mode every count refers to the `n` sampled tuples, so
/// `total_box = n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRecord {
    pub spec: FamilySpec,
    pub mode: Mode,
    pub total_box: u64,
    pub singular: u64,
    pub isotrivial: u64,
    pub family_size: u64,
    pub positive_bound: u64,
    pub avg_bound_num: u64,
    pub avg_bound_den: u64,
    pub ci_halfwidth: Option<f64>,
    pub wall_time_s: f64,
}

pub const CSV_HEADER: &str = "kind,H,mode,total_box,singular,isotrivial,family_size,positive_bound,avg_bound_num,avg_bound_den,ci_halfwidth,wall_time_s";

impl DensityRecord {
    /// Members entering the rank accounting: nonsingular, not isotrivial.
    pub fn eligible(&self) -> u64 {
        self.family_size - self.isotrivial
    }

    /// `positive_bound / family_size`; isotrivial members stay in the
    /// denominator.
    pub fn density(&self) -> f64 {
        if self.family_size == 0 {
            0.0
        } else {
            self.positive_bound as f64 / self.family_size as f64
        }
    }

    pub fn avg_bound(&self) -> f64 {
        self.avg_bound_num as f64 / self.avg_bound_den as f64
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.spec.kind,
            self.spec.h,
            self.mode,
            self.total_box,
            self.singular,
            self.isotrivial,
            self.family_size,
            self.positive_bound,
            self.avg_bound_num,
            self.avg_bound_den,
            self.ci_halfwidth.map(|c| format!("{c:.6}")).unwrap_or_default(),
            self.wall_time_s
        )
    }
}

pub fn measure_density(spec: FamilySpec, mode: Mode, opts: CensusOptions) -> Result<DensityRecord> {
    let start = Instant::now();
    let tally = match mode {
        Mode::Exact => {
            let total = spec.total(opts.budget)?;
            par::install(opts.workers, || {
                par::fold_range(total, Tally::default, |t, i| t.add(spec.small_at(i).classify()), Tally::merge)
            })?
        }
        Mode::Sampled { n, seed } => {
            if n == 0 {
                return Err(invalid("sample size must be positive"));
            }
            let size = spec.box_size();
            if size > u64::MAX as u128 {
                return Err(invalid("box too large to index"));
            }
            let size = size as u64;
            par::install(opts.workers, || {
                par::fold_range(
                    n,
                    Tally::default,
                    |t, i| t.add(spec.small_at(sample_index(seed, i, size)).classify()),
                    Tally::merge,
                )
            })?
        }
    };
    let family_size = tally.seen - tally.singular;
    let eligible = family_size - tally.isotrivial;
    let g = tally.bound_sum.gcd(&eligible).max(1);
    let ci_halfwidth = match mode {
        Mode::Sampled { .. } if family_size > 0 => {
            let d = tally.positive as f64 / family_size as f64;
            Some(1.96 * (d * (1.0 - d) / family_size as f64).sqrt())
        }
        _ => None,
    };
    Ok(DensityRecord {
        spec,
        mode,
        total_box: tally.seen,
        singular: tally.singular,
        isotrivial: tally.isotrivial,
        family_size,
        positive_bound: tally.positive,
        avg_bound_num: tally.bound_sum / g,
        avg_bound_den: eligible.max(1) / g,
        ci_halfwidth,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Counter-based draw: the `i`-th sample depends only on `(seed, i)`.
fn sample_index(seed: u64, i: u64, size: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng.gen_range(0..size)
}

/// Least-squares slope of `log(density)` against `log H`.
pub fn fit_exponent(records: &[DensityRecord]) -> Result<f64> {
    let pts: Vec<(f64, f64)> =
        records.iter().filter(|r| r.density() > 0.0).map(|r| ((r.spec.h as f64).ln(), r.density().ln())).collect();
    let mut hs: Vec<u32> = records.iter().filter(|r| r.density() > 0.0).map(|r| r.spec.h).collect();
    hs.sort_unstable();
    hs.dedup();
    if hs.len() < 3 {
        return Err(Error::Degenerate("need at least three positive densities at distinct H".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::rank_upper_bound;

    #[test]
    fn box_counts() {
        let s = |k, h| FamilySpec::new(k, h).unwrap();
        assert_eq!(s(FamilyKind::Sell, 1).box_size(), 729);
        assert_eq!(s(FamilyKind::S0, 1).box_size(), 729);
        assert_eq!(s(FamilyKind::Smn(1, 1), 2).box_size(), 11025);
        assert_eq!(s(FamilyKind::Ssquare, 1).box_size(), 2 * 729);
    }

    #[test]
    fn kind_parse_roundtrip() {
        for k in [FamilyKind::S0, FamilyKind::Ssquare, FamilyKind::Sell, FamilyKind::Smn(1, 2)] {
            assert_eq!(k.to_string().parse::<FamilyKind>().unwrap(), k);
        }
        assert!("s33".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn smn_coordinates() {
        let spec = FamilySpec::new(FamilyKind::Smn(2, 2), 2).unwrap();
        for i in [0u64, 17, 123_456, spec.box_size() as u64 - 1] {
            let c = spec.curve_at(i);
            let w = c.to_weierstrass();
            assert!(w.a2.is_zero());
            assert!(w.a4.height().value() < &8u32.into() || w.a4.is_zero());
            assert!(w.a6.height().value() < &4u32.into() || w.a6.is_zero());
        }
    }

    #[test]
    fn fast_path_matches_exact_at_h1() {
        for kind in [
            FamilyKind::S0,
            FamilyKind::Ssquare,
            FamilyKind::Sell,
            FamilyKind::Smn(1, 1),
            FamilyKind::Smn(2, 1),
            FamilyKind::Smn(1, 2),
            FamilyKind::Smn(2, 2),
        ] {
            let spec = FamilySpec::new(kind, 1).unwrap();
            for i in 0..spec.box_size() as u64 {
                let s = spec.small_at(i);
                let exact = Outcome::of(&rank_upper_bound(&s.to_family()));
                assert_eq!(s.classify(), exact, "{kind} #{i}");
            }
        }
    }

    #[test]
    fn closed_form_certificates_match_resultants() {
        for kind in [FamilyKind::S0, FamilyKind::Ssquare, FamilyKind::Sell, FamilyKind::Smn(2, 1)] {
            let spec = FamilySpec::new(kind, 2).unwrap();
            let step = (spec.box_size() as u64 / 997).max(1);
            for i in (0..spec.box_size() as u64).step_by(step as usize) {
                let s = spec.small_at(i);
                let curve = s.to_family();
                let Ok((_, Some(cert))) = crate::rank::select_certificate(&curve) else { continue };
                let fast = s.certificate_for_test().unwrap();
                assert_eq!(crate::poly::IntPoly::from_i128s(&fast), cert, "{kind} #{i}");
            }
        }
    }

    #[test]
    fn fit_synthetic() {
        let rec = |h: u32, pos: u64, fam: u64| DensityRecord {
            spec: FamilySpec::new(FamilyKind::Sell, h).unwrap(),
            mode: Mode::Exact,
            total_box: fam,
            singular: 0,
            isotrivial: 0,
            family_size: fam,
            positive_bound: pos,
            avg_bound_num: 0,
            avg_bound_den: 1,
            ci_halfwidth: None,
            wall_time_s: 0.0,
        };
        let inv = [rec(2, 500, 1000), rec(4, 250, 1000), rec(8, 125, 1000)];
        assert!((fit_exponent(&inv).unwrap() + 1.0).abs() < 1e-12);
        let flat = [rec(2, 10, 100), rec(4, 10, 100), rec(8, 10, 100)];
        assert!(fit_exponent(&flat).unwrap().abs() < 1e-12);
        assert!(fit_exponent(&inv[..2]).is_err());
    }
}
