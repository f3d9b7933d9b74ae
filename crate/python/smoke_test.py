"""Smoke test for the qtrank extension module.

Build and place the module next to this file, then run it:

    cargo build --release -p qtrank-py
    cp target/release/libqtrank_py.so python/qtrank.so
    python3 python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import qtrank  # noqa: E402


def test_rank_bound():
    r = qtrank.rank_bound([1], [0, 3, 3], [0, 0, 0, 1])
    assert (r.kind, r.omega, r.bound) == ("Disc", 3, 2), r
    assert qtrank.rank_bound([], [0, 1], [1, 0, 0, 1]).bound == 1
    curve = qtrank.FamilyCurve([], [1], [0, 0, 0, 1])
    assert curve.rank_bound().isotrivial
    assert curve.c == [0, 0, 0, 1]


def test_factoring():
    content, factors = qtrank.factor_over_q([-4, 0, 1])
    assert content == 1 and sorted(f for f, _ in factors) == [[-2, 1], [2, 1]]
    assert qtrank.omega_q([0, 0, 9, 14, 9]) == 3
    assert qtrank.is_irreducible_mod_p([2, 0, 1], 5)
    assert qtrank.legendre(-1, 7) == -1


def test_counting():
    for p in (3, 5, 7):
        for n in (1, 2, 3, 4):
            assert qtrank.count_irreducible_monic(p, n) == qtrank.brute_census(p, n)
    assert qtrank.count_even_irreducible_monic(5, 4) == qtrank.brute_census(5, 4, "even") == 6


def test_census_and_systems():
    records = [qtrank.census("sell", h) for h in (1, 2, 3)]
    assert all(r.family_size == r.total_box - r.singular for r in records)
    assert records[2].density() < records[0].density()
    sampled = qtrank.census("sell", 2, n=2000, seed=5)
    assert sampled.total_box == 2000
    again = qtrank.census("sell", 2, n=2000, seed=5, workers=1)
    assert (again.positive_bound, again.isotrivial) == (sampled.positive_bound, sampled.isotrivial)
    rows = qtrank.system_counts("m11", 5)
    assert rows and all(brute == closed for _, brute, closed, _ in rows if closed is not None)
    assert qtrank.count_ap("m11", 5) > 0


def test_sieve():
    assert qtrank.choose_z(1000) == 24
    box, bpz, b, _ = qtrank.empirical_sieve("sys1", 2, 5, True)
    assert b <= bpz <= box == 5**6
    assert qtrank.turan_bound([10**6] * 2, 4.0, 11) > 0


def test_errors():
    for call, exc in (
        (lambda: qtrank.census("s0", 9, budget=10), qtrank.BudgetExceededError),
        (lambda: qtrank.count_ap("sys1", 7), ValueError),
        (lambda: qtrank.FamilyCurve([], [], [0, 0, 1]), ValueError),
    ):
        try:
            call()
        except exc:
            continue
        raise AssertionError(f"{call} did not raise {exc.__name__}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
