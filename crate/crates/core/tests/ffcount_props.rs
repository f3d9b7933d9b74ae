use proptest::prelude::*;
use qtrank::ff::{is_irreducible, Fp};
use qtrank::ffcount::{
    brute_count_system, certificate_mod_p, certificate_via_resultant, count_ap, derived_count, system_counts,
    tabulate_system, SystemKind, ALL_KINDS,
};

fn kind_and_tuple() -> impl Strategy<Value = (SystemKind, u64, Vec<u64>)> {
    (0..ALL_KINDS.len(), 0usize..4, prop::collection::vec(any::<u64>(), 7)).prop_map(|(k, pi, t)| {
        let kind = ALL_KINDS[k];
        let p = [5u64, 11, 17, 23][pi];
        let t = t.into_iter().take(kind.dimension() as usize).map(|x| x % p).collect();
        (kind, p, t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5000))]

    #[test]
    fn closed_certificate_matches_resultant((kind, p, t) in kind_and_tuple()) {
        let fld = Fp::new(p).unwrap();
        prop_assert_eq!(certificate_mod_p(kind, fld, &t).unwrap(), certificate_via_resultant(kind, fld, &t).unwrap());
    }
}

#[test]
fn vanishing_a1_never_gives_irreducible_certificate() {
    let p = 5;
    let fld = Fp::new(p).unwrap();
    for kind in [SystemKind::Sys3, SystemKind::M21] {
        let dim = kind.dimension();
        let a1_slot = if kind == SystemKind::Sys3 { 1 } else { 0 };
        for idx in 0..p.pow(dim) {
            let mut t: Vec<u64> = (0..dim).map(|i| idx / p.pow(i) % p).collect();
            t[a1_slot] = 0;
            let cert = certificate_mod_p(kind, fld, &t).unwrap();
            assert!(!is_irreducible(&cert).unwrap_or(false), "{kind} {t:?}");
        }
    }
}

#[test]
fn tabulation_sums_to_irreducible_count() {
    for kind in ALL_KINDS {
        let p = if kind.is_admissible(5) { 5 } else { 7 };
        if !kind.is_admissible(p) {
            continue;
        }
        let fld = Fp::new(p).unwrap();
        let table = tabulate_system(kind, p).unwrap();
        let irreducible: u64 = table
            .iter()
            .filter(|(k, _)| is_irreducible(&qtrank::FpPoly::new(fld, k.iter().copied())).unwrap_or(false))
            .map(|(_, v)| v)
            .sum();
        assert_eq!(irreducible, count_ap(kind, p).unwrap(), "{kind} p={p}");
    }
}

#[test]
fn table_matches_direct_count() {
    for kind in ALL_KINDS {
        let p = 5;
        for c in system_counts(kind, p, true).unwrap().into_iter().take(12) {
            assert_eq!(brute_count_system(kind, p, &c.u).unwrap(), c.n_u, "{kind} {:?}", c.u);
        }
    }
}

#[test]
fn derived_counts_match_enumeration() {
    for kind in ALL_KINDS {
        for p in [5u64, 7, 11] {
            if !kind.is_admissible(p) || (kind.dimension() >= 7 && p > 7) {
                continue;
            }
            for c in system_counts(kind, p, false).unwrap() {
                if let Ok(d) = derived_count(kind, p, &c.u) {
                    assert_eq!(d, c.n_u, "{kind} p={p} {:?}", c.u);
                }
            }
        }
    }
}

#[test]
fn inadmissible_primes_are_rejected() {
    assert!(system_counts(SystemKind::Sys1, 7, true).is_err());
    assert!(system_counts(SystemKind::M11, 13, true).is_err());
    assert!(system_counts(SystemKind::Sys3, 3, true).is_err());
    assert!(count_ap(SystemKind::Sys2, 9).is_err());
}
