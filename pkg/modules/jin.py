"""
Finite form of the density-embedding construction.

Given a window [lo, hi] where a set has density about beta, either find a
start xi whose first k prefix ratios all reach beta - 1/k (a certificate
that E = {n < k : xi + n in A} is embedded in A with large Schnirelmann
prefix density), or replay the stepping argument that shows the window's
density must then be below beta - 1/k up to an edge term of 2k/M.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

import config
from .density import rational_json
from .errors import InvalidInputError, PreconditionError
from .intsets import IntegerSet, WindowSample
from .parallel import least_witness

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JinCertificate:
    xi: int
    k: int
    beta: Fraction
    prefix_ratios: Tuple[Fraction, ...]
    E: Tuple[int, ...]

    @property
    def threshold(self) -> Fraction:
        return self.beta - Fraction(1, self.k)

    def as_dict(self) -> dict:
        return {
            "xi": self.xi,
            "k": self.k,
            "beta": rational_json(self.beta),
            "prefix_ratios": [rational_json(r) for r in self.prefix_ratios],
            "E": list(self.E),
        }


@dataclass(frozen=True)
class SteppingTrace:
    """ξ_1 = lo, ξ_{s+1} = ξ_s + n_s, with counts[s] = |A ∩ [ξ_s, ξ_s + n_s)|."""
    xis: Tuple[int, ...]
    steps: Tuple[int, ...]
    counts: Tuple[int, ...]
    window_count: int
    window_length: int
    k: int
    beta: Fraction

    @property
    def threshold(self) -> Fraction:
        return self.beta - Fraction(1, self.k)

    @property
    def aggregate_count(self) -> int:
        return sum(self.counts)

    @property
    def window_ratio(self) -> Fraction:
        return Fraction(self.window_count, self.window_length)

    @property
    def bound(self) -> Fraction:
        return max(self.threshold, Fraction(0)) + Fraction(2 * self.k, self.window_length)

    @property
    def holds(self) -> bool:
        return self.window_ratio < self.bound

    def as_dict(self) -> dict:
        return {
            "xis": list(self.xis),
            "steps": list(self.steps),
            "counts": list(self.counts),
            "aggregate_count": self.aggregate_count,
            "window_ratio": rational_json(self.window_ratio),
            "bound": rational_json(self.bound),
            "holds": self.holds,
        }


def _check_args(w: WindowSample, k: int, beta: Fraction) -> Fraction:
    beta = Fraction(beta)
    if not 0 < beta <= 1:
        raise InvalidInputError(f"beta must lie in (0, 1], got {beta}")
    if k < 1 or k > len(w):
        raise PreconditionError(f"k={k} must be between 1 and the window length {len(w)}")
    return beta


class _PrefixTable:
    """Prefix counts of a window plus the integer form of the ratio test."""

    def __init__(self, w: WindowSample, k: int, beta: Fraction):
        self.w = w
        self.k = k
        self.counts = np.concatenate(([0], np.cumsum(w.bits, dtype=np.int64)))
        threshold = beta - Fraction(1, k)
        # count / i >= threshold  <=>  count * den >= i * num
        self.num = threshold.numerator
        self.den = threshold.denominator

    def count(self, start: int, length: int) -> int:
        a = start - self.w.lo
        return int(self.counts[a + length] - self.counts[a])

    def first_failure(self, xi: int) -> Optional[int]:
        """Least i <= k whose ratio falls short, 1 if xi itself is missing, else None."""
        for i in range(1, self.k + 1):
            if self.count(xi, i) * self.den < i * self.num:
                return i
        if not self.w.has(xi):
            return 1
        return None

    def good_mask(self) -> np.ndarray:
        """good[j] for xi = lo + j over the whole search range [lo, hi - k]."""
        size = len(self.w) - self.k
        if size <= 0:
            return np.zeros(0, dtype=bool)
        good = self.w.bits[:size].copy()
        for i in range(1, self.k + 1):
            c = self.counts[i:i + size] - self.counts[:size]
            good &= c * self.den >= i * self.num
        return good


def _certificate(table: _PrefixTable, xi: int, beta: Fraction) -> JinCertificate:
    k = table.k
    ratios = tuple(Fraction(table.count(xi, i), i) for i in range(1, k + 1))
    E = tuple(n for n in range(k) if table.w.has(xi + n))
    return JinCertificate(xi, k, beta, ratios, E)


def jin_xi_search(w: WindowSample, k: int, beta, limits: Optional[config.Limits] = None) -> Optional[JinCertificate]:
    """
    Least xi in [lo, hi - k] with xi in A and |A ∩ [xi, xi+i)| / i >= beta - 1/k for i = 1..k.

    Args:
        w: Window, normally [1, M]
        k: Number of prefixes to control
        beta: Target density in (0, 1]
        limits: threads is used for the scan

    Returns:
        JinCertificate or None
    """
    beta = _check_args(w, k, beta)
    limits = limits or config.DEFAULT_LIMITS
    table = _PrefixTable(w, k, beta)

    if limits.threads > 1:
        xi = least_witness(
            lambda x: x if table.first_failure(x) is None else None,
            range(w.lo, w.hi - k + 1),
            limits.threads,
        )
    else:
        hits = np.flatnonzero(table.good_mask())
        xi = w.lo + int(hits[0]) if hits.size else None

    if xi is None:
        logger.debug("[jin_xi_search] no xi in [%d, %d] for k=%d beta=%s", w.lo, w.hi - k, k, beta)
        return None
    return _certificate(table, xi, beta)


def jin_stepping_refuter(w: WindowSample, k: int, beta,
                         limits: Optional[config.Limits] = None) -> Optional[SteppingTrace]:
    """
    When no certificate exists, step xi_{s+1} = xi_s + n_s through the window.

    n_s is the least i <= k with |A ∩ [xi_s, xi_s + i)| < i (beta - 1/k) (or 1
    when xi_s is not a member), and stepping stops at the first xi_N > hi - k.

    Returns:
        SteppingTrace, or None when jin_xi_search succeeds
    """
    beta = _check_args(w, k, beta)
    if jin_xi_search(w, k, beta, limits) is not None:
        return None
    table = _PrefixTable(w, k, beta)

    xis: List[int] = [w.lo]
    steps: List[int] = []
    counts: List[int] = []
    xi = w.lo
    while xi <= w.hi - k:
        n = table.first_failure(xi)
        steps.append(n)
        counts.append(table.count(xi, n))
        xi += n
        xis.append(xi)

    trace = SteppingTrace(tuple(xis), tuple(steps), tuple(counts), w.count(), len(w), k, beta)
    logger.info("[jin_stepping_refuter] %d steps, window ratio %s < bound %s: %s",
                len(steps), trace.window_ratio, trace.bound, trace.holds)
    return trace


def jin_search_or_refute(w: WindowSample, k: int, beta,
                         limits: Optional[config.Limits] = None) -> Union[JinCertificate, SteppingTrace]:
    certificate = jin_xi_search(w, k, beta, limits)
    if certificate is not None:
        return certificate
    return jin_stepping_refuter(w, k, beta, limits)


def jin_embed_check(cert: JinCertificate, A: IntegerSet) -> bool:
    """
    Re-verify a certificate against the set itself.

    Checks xi + E ⊆ A, that E lists exactly the members in [xi, xi + k),
    and that E shifted to start at 1 has |(E+1) ∩ [1, i]| / i >= beta - 1/k
    for every i <= k.
    """
    k = cert.k
    if any(n < 0 or n >= k for n in cert.E):
        return False
    if not all(A.contains(cert.xi + n) for n in cert.E):
        return False
    if tuple(n for n in range(k) if A.contains(cert.xi + n)) != tuple(sorted(cert.E)):
        return False
    shifted = {n + 1 for n in cert.E}
    threshold = cert.threshold
    running = 0
    for i in range(1, k + 1):
        running += i in shifted
        if Fraction(running, i) < threshold:
            return False
    return True
