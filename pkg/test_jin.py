"""
Tests for the prefix-density certificate search and the stepping refuter.
Run with: pytest test_jin.py
"""
import dataclasses
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

import config
from modules import intsets, jin
from modules.errors import InvalidInputError, PreconditionError


def brute_search(w, k, beta):
    threshold = Fraction(beta) - Fraction(1, k)
    for xi in range(w.lo, w.hi - k + 1):
        if not w.has(xi):
            continue
        if all(Fraction(sum(w.has(xi + j) for j in range(i)), i) >= threshold for i in range(1, k + 1)):
            return xi
    return None


def test_multiples_of_three():
    s = intsets.periodic(3, {0})
    w = intsets.window(s, 1, 3000)
    cert = jin.jin_xi_search(w, 10, Fraction(1, 3))
    assert cert.xi == 3
    assert all(r >= Fraction(1, 3) - Fraction(1, 10) for r in cert.prefix_ratios)
    assert cert.E == (0, 3, 6, 9)
    assert jin.jin_embed_check(cert, s)


def test_full_window_beta_one():
    s = intsets.periodic(1, {0})
    cert = jin.jin_xi_search(intsets.window(s, 1, 50), 7, 1)
    assert cert.xi == 1
    assert set(cert.prefix_ratios) == {Fraction(1)}
    assert jin.jin_stepping_refuter(intsets.window(s, 1, 50), 7, 1) is None


def test_empty_window_has_no_certificate():
    w = intsets.window(intsets.Explicit(()), 1, 20)
    assert jin.jin_xi_search(w, 1, Fraction(1, 2)) is None
    trace = jin.jin_stepping_refuter(w, 1, Fraction(1, 2))
    assert trace is not None and trace.aggregate_count == 0


def test_argument_checks():
    w = intsets.window(intsets.Explicit((1,)), 1, 5)
    with pytest.raises(InvalidInputError):
        jin.jin_xi_search(w, 1, 0)
    with pytest.raises(InvalidInputError):
        jin.jin_xi_search(w, 1, Fraction(3, 2))
    with pytest.raises(PreconditionError):
        jin.jin_xi_search(w, 6, Fraction(1, 2))


def test_refuter_on_sparse_window():
    # density exactly 1/10 with all members at the right edge
    w = intsets.WindowSample.from_members(1, 40, [37, 38, 39, 40])
    trace = jin.jin_stepping_refuter(w, 4, Fraction(1, 2))
    assert trace is not None
    assert trace.window_ratio == Fraction(1, 10)
    assert trace.holds
    assert trace.window_ratio < Fraction(1, 2) - Fraction(1, 4) + Fraction(8, 40)


def test_refuter_on_evens():
    w = intsets.window(intsets.periodic(2, {0}), 1, 1000)
    assert jin.jin_xi_search(w, 5, Fraction(9, 10)) is None
    trace = jin.jin_stepping_refuter(w, 5, Fraction(9, 10))
    assert trace.window_ratio == Fraction(1, 2)
    assert trace.holds


def test_embed_check_rejects_tampering():
    s = intsets.periodic(3, {0})
    cert = jin.jin_xi_search(intsets.window(s, 1, 300), 10, Fraction(1, 3))
    assert not jin.jin_embed_check(dataclasses.replace(cert, E=cert.E + (1,)), s)
    assert not jin.jin_embed_check(dataclasses.replace(cert, E=cert.E[:-1]), s)


def test_k_one_certificate():
    s = intsets.Explicit((4, 9))
    cert = jin.jin_xi_search(intsets.window(s, 1, 10), 1, Fraction(1, 3))
    assert cert.xi == 4 and cert.E == (0,)
    assert jin.jin_embed_check(cert, s)


def random_window(rng, M):
    p = rng.uniform(0.05, 0.95)
    if rng.random() < 0.5:
        bits = np.array([rng.random() < p for _ in range(M)])
    else:
        # clustered: a few dense blocks in a sparse background
        bits = np.array([rng.random() < p / 8 for _ in range(M)])
        for _ in range(rng.randint(1, 5)):
            a = rng.randint(0, M - 1)
            bits[a:a + rng.randint(1, 200)] = True
    return intsets.WindowSample(1, M, bits)


def test_dichotomy_and_soundness_on_random_windows():
    rng = random.Random(31)
    for _ in range(100):
        w = random_window(rng, 10_000)
        k = rng.randint(1, 20)
        beta = Fraction(rng.randint(1, 20), 20)
        cert = jin.jin_xi_search(w, k, beta)
        trace = jin.jin_stepping_refuter(w, k, beta)
        assert (cert is None) != (trace is None)
        if cert is not None:
            members = intsets.Explicit(tuple(int(n) for n in w.members()))
            assert jin.jin_embed_check(cert, members)
        else:
            assert trace.holds
            last = trace.xis[-1]
            assert trace.aggregate_count == int(w.bits[:last - w.lo].sum())
            assert last > w.hi - k


def test_search_matches_brute_force():
    rng = random.Random(4)
    for _ in range(150):
        M = rng.randint(2, 80)
        w = random_window(rng, M)
        k = rng.randint(1, M - 1)
        beta = Fraction(rng.randint(1, 10), 10)
        cert = jin.jin_xi_search(w, k, beta)
        assert (cert.xi if cert else None) == brute_search(w, k, beta)


def test_monotone_in_k():
    rng = random.Random(12)
    for _ in range(60):
        w = random_window(rng, 500)
        beta = Fraction(rng.randint(1, 10), 10)
        k = rng.randint(2, 20)
        if jin.jin_xi_search(w, k, beta) is not None:
            for smaller in range(1, k):
                assert jin.jin_xi_search(w, smaller, beta) is not None


def test_threads_do_not_change_the_answer():
    rng = random.Random(21)
    parallel = config.load_limits(threads=4)
    for _ in range(20):
        w = random_window(rng, 2000)
        k = rng.randint(1, 15)
        beta = Fraction(rng.randint(1, 10), 10)
        assert jin.jin_xi_search(w, k, beta) == jin.jin_xi_search(w, k, beta, parallel)


def test_search_or_refute_returns_one_side():
    w = intsets.window(intsets.periodic(2, {0}), 1, 100)
    assert isinstance(jin.jin_search_or_refute(w, 2, Fraction(1, 2)), jin.JinCertificate)
    assert isinstance(jin.jin_search_or_refute(w, 5, Fraction(9, 10)), jin.SteppingTrace)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
