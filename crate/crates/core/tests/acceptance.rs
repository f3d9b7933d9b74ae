//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero only
//! when an outcome differs from the expectation table below.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtrank::census::{
    exact_outcome, fast_outcome, fit_exponent, measure_density, CensusOptions, FamilyKind, FamilySpec, Mode, Outcome,
};
use qtrank::ff::{
    brute_census, count_even_irreducible_monic, count_irreducible_monic, is_irreducible, CensusPredicate,
};
use qtrank::ffcount::{asymptotic_deviation, count_ap, system_counts, SystemKind, ALL_KINDS};
use qtrank::rank::rank_upper_bound;
use qtrank::sieve::empirical_sieve;
use qtrank::FamilyCurve;

/// Criteria known to fail, with the reason.
const EXPECTED_FAILURES: &[(u32, &str)] = &[(
    2,
    "the stated Sys2 count is wrong in both branches; enumeration gives (1+(u4/p))(p^2-p) + s p^3 \
     with s = #{B : B^2 = U}, and (1+(-u3/p)) p^2 when u4 = 0",
)];

type Check = (bool, String);

/// Closed-form agreement over the targets the formula covers, and the number
/// of irreducible full-degree targets it leaves uncovered.
fn closed_forms(kind: SystemKind, p: u64, irreducible_only: bool) -> (usize, usize, usize) {
    let rows = system_counts(kind, p, irreducible_only).unwrap();
    let (mut checked, mut bad, mut uncovered) = (0, 0, 0);
    for r in &rows {
        match r.closed_form {
            Some(c) => {
                checked += 1;
                bad += (c != r.n_u) as usize;
            }
            None if r.u.degree() == Some(kind.certificate_degree()) && is_irreducible(&r.u).unwrap_or(false) => {
                uncovered += 1
            }
            None => {}
        }
    }
    (checked, bad, uncovered)
}

fn criterion_1() -> Check {
    let mut msg = Vec::new();
    let mut ok = true;
    for p in [5, 11] {
        let (checked, bad, uncovered) = closed_forms(SystemKind::Sys1, p, false);
        ok &= bad == 0 && uncovered == 0 && checked > 0;
        msg.push(format!("p={p}: {checked} targets, {bad} mismatches, {uncovered} irreducible uncovered"));
    }
    (ok, msg.join("; "))
}

fn criterion_2() -> Check {
    let mut msg = Vec::new();
    let mut ok = true;
    for p in [3, 7] {
        let rows = system_counts(SystemKind::Sys2, p, true).unwrap();
        let quartic: Vec<_> = rows.iter().filter(|r| r.u.degree() == Some(4)).collect();
        let bad = quartic.iter().filter(|r| r.closed_form != Some(r.n_u)).count();
        let derived_bad = quartic.iter().filter(|r| r.derived != Some(r.n_u)).count();
        ok &= bad == 0 && !quartic.is_empty();
        msg.push(format!(
            "p={p}: {} irreducible quartics, {bad} mismatch the stated count, {derived_bad} mismatch the corrected count",
            quartic.len()
        ));
    }
    (ok, msg.join("; "))
}

fn criterion_3() -> Check {
    let p = 5;
    let rows = system_counts(SystemKind::Sys3, p, true).unwrap();
    let bad = rows.iter().filter(|r| r.n_u != p * p - p || r.closed_form != Some(r.n_u)).count();
    (bad == 0 && !rows.is_empty(), format!("p={p}: {} irreducible octics, {bad} differ from p^2-p", rows.len()))
}

fn criterion_4() -> Check {
    let mut msg = Vec::new();
    let mut ok = true;
    for kind in [SystemKind::M11, SystemKind::M12, SystemKind::M21] {
        for p in [5, 11] {
            let (checked, bad, uncovered) = closed_forms(kind, p, true);
            ok &= bad == 0 && uncovered == 0 && checked > 0;
            msg.push(format!("{kind} p={p}: {checked}/{bad}/{uncovered}"));
        }
    }
    (ok, format!("targets/mismatches/uncovered: {}", msg.join(", ")))
}

fn criterion_5() -> Check {
    let mut msg = Vec::new();
    let mut ok = true;
    for kind in ALL_KINDS {
        let primes: &[u64] = if kind.dimension() <= 5 { &[5, 11, 17] } else { &[5, 11] };
        for &p in primes {
            let dev = asymptotic_deviation(kind, p, count_ap(kind, p).unwrap());
            let band = 5.0 / p as f64;
            ok &= dev.abs() <= band;
            msg.push(format!("{kind}@{p}={dev:+.4}"));
        }
    }
    (ok, format!("deviation vs 5/p: {}", msg.join(" ")))
}

fn criterion_6() -> Check {
    let mut bad = Vec::new();
    let mut checked = 0;
    for p in [3u64, 5, 7, 11, 13] {
        for n in 1..=6u32 {
            checked += 1;
            if count_irreducible_monic(p, n).unwrap() != brute_census(p, n, CensusPredicate::All).unwrap().into() {
                bad.push(format!("all p={p} n={n}"));
            }
        }
        let evens: &[u32] = if p <= 5 { &[4, 6, 8] } else { &[4, 6] };
        for &n in evens {
            checked += 1;
            if count_even_irreducible_monic(p, n).unwrap() != brute_census(p, n, CensusPredicate::Even).unwrap().into()
            {
                bad.push(format!("even p={p} n={n}"));
            }
        }
    }
    let n = 4u32;
    let mut worst: f64 = 0.0;
    for p in (5u64..=97).filter(|&p| qtrank::ff::is_prime(p)) {
        let main = (p as f64).powi(n as i32 / 2 - 1) / n as f64;
        let tol = 4.0 * (p as f64).powf(n as f64 / 4.0);
        for a in 0..p {
            checked += 1;
            let c = brute_census(p, n, CensusPredicate::EvenWithCoeff(a)).unwrap() as f64;
            worst = worst.max((c - main).abs() / tol);
            if (c - main).abs() > tol {
                bad.push(format!("lacunary p={p} a={a}"));
            }
        }
    }
    (bad.is_empty(), format!("{checked} censuses, {} failures {bad:?}; lacunary max |err|/tol = {worst:.3}", bad.len()))
}

fn criterion_7() -> Check {
    let mut ok = true;
    let mut msg = Vec::new();
    for kind in [FamilyKind::Sell, FamilyKind::S0] {
        let mut recs = Vec::new();
        for h in [1u32, 2, 4, 8] {
            let spec = FamilySpec::new(kind, h).unwrap();
            recs.push(measure_density(spec, Mode::Exact, CensusOptions::default()).unwrap());
        }
        let d1 = recs[0].density();
        let d8 = recs[3].density();
        let fit = fit_exponent(&recs[1..]).unwrap();
        ok &= d8 < d1 && fit <= -0.3;
        msg.push(format!("{kind}: d(1)={d1:.5} d(8)={d8:.5} fit={fit:.4}"));
    }
    (ok, msg.join("; "))
}

fn criterion_8() -> Check {
    let mut ok = true;
    let mut last = u64::MAX;
    let mut msg = Vec::new();
    for z in [5u64, 11, 17] {
        let r = empirical_sieve(SystemKind::Sys1, 2, z, true).unwrap();
        let (b, bpz) = (r.exact_b.unwrap(), r.empirical_b_pz.unwrap());
        ok &= b <= bpz && bpz <= last;
        last = bpz;
        msg.push(format!("z={z}: B={b} B_pz={bpz}"));
    }
    (ok, format!("box 5^6; {}", msg.join(", ")))
}

fn criterion_9() -> Check {
    let g = FamilyCurve::from_i64s(&[1], &[0, 3, 3], &[0, 0, 0, 1]).unwrap();
    let h = FamilyCurve::from_i64s(&[], &[0, 1], &[1, 0, 0, 1]).unwrap();
    let bg = rank_upper_bound(&g).bound;
    let bh = rank_upper_bound(&h).bound;
    let mut ok = bg == Some(2) && bh == Some(1);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let specs = [
        FamilySpec::new(FamilyKind::S0, 8).unwrap(),
        FamilySpec::new(FamilyKind::Ssquare, 8).unwrap(),
        FamilySpec::new(FamilyKind::Sell, 8).unwrap(),
        FamilySpec::new(FamilyKind::Smn(2, 2), 3).unwrap(),
    ];
    let (mut classified, mut fast, mut disagree, mut out_of_range) = (0, 0, 0, 0);
    for i in 0..10_000 {
        let spec = specs[i % specs.len()];
        let curve = spec.curve_at(rng.gen_range(0..spec.box_size() as u64));
        let full = exact_outcome(&curve);
        if let Outcome::Bound(b) = full {
            classified += 1;
            out_of_range += (b > 5) as usize;
        }
        if let Some(o) = fast_outcome(&curve) {
            fast += 1;
            disagree += (o != full) as usize;
        }
    }
    ok &= disagree == 0 && out_of_range == 0;
    (
        ok,
        format!(
            "G -> {bg:?}, (0, X, X^3+1) -> {bh:?}; 10000 random: {classified} classified, {out_of_range} out of [0,5], \
             {fast} via fast path, {disagree} disagreements"
        ),
    )
}

fn main() -> ExitCode {
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(u32, fn() -> Check); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = 0;
    for (id, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = check();
        let secs = start.elapsed().as_secs_f64();
        let expected_fail = EXPECTED_FAILURES.iter().find(|(i, _)| *i == id);
        let status = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status} ({secs:.1}s) {detail}");
        match (pass, expected_fail) {
            (false, Some((_, why))) => println!("criterion {id}: expected failure: {why}"),
            (true, Some(_)) => {
                println!("criterion {id}: UNEXPECTED PASS");
                unexpected += 1;
            }
            (false, None) => unexpected += 1,
            (true, None) => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected outcome(s)");
        ExitCode::FAILURE
    }
}
