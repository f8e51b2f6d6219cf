"""
Tests for exact densities and the windowed estimator.
Run with: pytest test_density.py
"""
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# Ensure the project root is on sys.path
PROJECT_ROOT = Path(__file__).resolve().parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from modules import density, intsets
from modules.errors import InvalidInputError, PreconditionError, UnsupportedSetError

EVENS = intsets.periodic(2, {0})
ODDS = intsets.periodic(2, {1})
FULL = intsets.periodic(1, {0})
POW4 = intsets.BlockFamily("pow4")


def brute_schnirelmann(s, horizon):
    count, best = 0, Fraction(1)
    for n in range(1, horizon + 1):
        count += s.contains(n)
        best = min(best, Fraction(count, n))
    return best


def test_schnirelmann_examples():
    evens = density.schnirelmann(EVENS)
    assert evens.value == 0 and evens.witness == 1

    odds = density.schnirelmann(ODDS)
    assert odds.value == Fraction(1, 2) and odds.witness == 2

    assert density.schnirelmann(FULL).value == 1


def test_schnirelmann_explicit():
    assert density.schnirelmann(intsets.Explicit((2, 3))).as_dict()["witness"] == 1
    report = density.schnirelmann(intsets.Explicit((1, 2, 3)))
    assert report.value == 0 and report.witness == 4
    assert density.schnirelmann(intsets.Explicit((1, 9))).as_dict()["witness"] == 10


def test_schnirelmann_unattained_infimum():
    # 1 and then the evens: ratios (m + 1) / (2m + 1) decrease towards 1/2
    s = intsets.periodic(2, {0}, threshold=2, transient={1})
    report = density.schnirelmann(s)
    assert report.value == Fraction(1, 2)
    assert report.witness is None


def test_schnirelmann_rejects_negative_members():
    with pytest.raises(InvalidInputError):
        density.schnirelmann(intsets.Explicit((-3, 1)))
    with pytest.raises(InvalidInputError):
        density.schnirelmann(intsets.periodic(2, {0}, threshold=-4))


def test_schnirelmann_block_family_unsupported():
    with pytest.raises(UnsupportedSetError):
        density.schnirelmann(POW4)


def test_upper_density_examples():
    assert density.upper_density(EVENS).value == Fraction(1, 2)
    assert density.upper_density(intsets.periodic(5, {0, 2})).value == Fraction(2, 5)
    assert density.upper_density(intsets.Explicit((1, 7, 9))).value == 0
    with pytest.raises(UnsupportedSetError):
        density.upper_density(POW4)


def test_banach_density_examples():
    assert density.banach_density(EVENS).value == Fraction(1, 2)
    assert density.banach_density(intsets.periodic(5, {0, 2})).value == Fraction(2, 5)
    thick = density.banach_density(POW4)
    assert thick.value == 1
    lo, hi = thick.witness
    assert all(POW4.contains(n) for n in range(lo, hi + 1))


def test_banach_density_squares_is_zero():
    assert density.banach_density(intsets.BlockFamily("squares")).value == 0


def test_best_window_density_examples():
    assert density.best_window_density(intsets.window(EVENS, 1, 10), 4)[1] == Fraction(1, 2)
    assert density.best_window_density(intsets.window(POW4, 1, 70), 3) == (63, Fraction(1))
    empty = intsets.window(intsets.Explicit(()), 1, 10)
    assert density.best_window_density(empty, 2)[1] == 0
    with pytest.raises(PreconditionError):
        density.best_window_density(empty, 11)


def test_best_window_density_matches_brute_scan():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 60)
        bits = np.array([rng.random() < 0.4 for _ in range(n)])
        w = intsets.WindowSample(5, 5 + n - 1, bits)
        L = rng.randint(1, n)
        x, value = density.best_window_density(w, L)
        sums = [int(bits[i:i + L].sum()) for i in range(n - L + 1)]
        assert value == Fraction(max(sums), L)
        assert x == 5 + sums.index(max(sums)) - 1


def test_windowed_estimate_converges_to_banach():
    rng = random.Random(3)
    for _ in range(20):
        p = rng.randint(1, 12)
        s = intsets.periodic(p, rng.sample(range(p), rng.randint(1, p)))
        L = 20 * p
        w = intsets.window(s, 1, 3 * L)
        _, value = density.best_window_density(w, L)
        assert abs(value - density.banach_density(s).value) <= Fraction(1, 10)


def test_density_chain_on_random_periodic_sets():
    rng = random.Random(2024)
    for _ in range(100):
        p = rng.randint(1, 30)
        residues = rng.sample(range(p), rng.randint(0, p))
        threshold = rng.randint(0, 12)
        transient = [n for n in range(0, threshold) if rng.random() < 0.5]
        s = intsets.periodic(p, residues, threshold, transient)

        sigma = density.schnirelmann(s).value
        upper = density.upper_density(s).value
        banach = density.banach_density(s).value
        assert banach >= upper >= sigma
        assert sigma == min(brute_schnirelmann(s, threshold + 60 * p), upper)
        if sigma == 1:
            assert all(s.contains(n) for n in range(1, threshold + 2 * p + 1))


def test_report_all_skips_what_does_not_apply():
    reports = density.report_all(POW4)
    assert reports["schnirelmann"] is None and reports["upper"] is None
    assert reports["banach"].value == 1


def test_report_json_shape():
    payload = density.schnirelmann(ODDS).as_dict()
    assert payload == {"value": {"num": 1, "den": 2}, "witness": 2, "method": "exact"}


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
