"""
Exact densities of integer sets.

Schnirelmann density, upper asymptotic density and upper Banach density are
computed as exact Fractions for eventually periodic sets; block families and
finite sets get the values their structure determines, and any set can be
probed through windows with best_window_density.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import numpy as np

import config
from .errors import InvalidInputError, PreconditionError, UnsupportedSetError
from .intsets import BlockFamily, EventuallyPeriodic, Explicit, IntegerSet, WindowSample, window

logger = logging.getLogger(__name__)

Rational = Fraction
Witness = Union[int, Tuple[int, int], None]

EXACT = "exact"
WINDOWED = "windowed"


def rational_json(value: Fraction) -> Dict[str, int]:
    return {"num": value.numerator, "den": value.denominator}


@dataclass(frozen=True)
class DensityReport:
    value: Fraction
    witness: Witness
    method: str

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise InvalidInputError(f"density {self.value} outside [0, 1]")

    def as_dict(self) -> dict:
        witness = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        return {"value": rational_json(self.value), "witness": witness, "method": self.method}


def periodic_density(s: EventuallyPeriodic) -> Fraction:
    return Fraction(len(s.residues), s.period)


def _reject_negative_members(s: IntegerSet) -> None:
    if isinstance(s, Explicit):
        negative = [n for n in s.elements if n < 0]
    elif isinstance(s, EventuallyPeriodic):
        negative = sorted(n for n in s.transient if n < 0)
        if s.threshold < 0:
            negative += [n for n in range(max(s.threshold, -s.period), 0) if s.contains(n)][:1]
    else:
        negative = []
    if negative:
        raise InvalidInputError(f"set has negative members (e.g. {negative[0]}); densities here are for subsets of N")


def _least_prefix_ratio(bits: np.ndarray) -> Tuple[Fraction, int]:
    """Minimum of count(1..n)/n over the prefix bits (bits[0] is n = 1) and its leftmost n."""
    counts = np.cumsum(bits, dtype=np.int64)
    best_num, best_n = int(counts[0]), 1
    for i in range(1, counts.size):
        n = i + 1
        c = int(counts[i])
        if c * best_n < best_num * n:
            best_num, best_n = c, n
    return Fraction(best_num, best_n), best_n


def schnirelmann(s: IntegerSet, limits: Optional[config.Limits] = None) -> DensityReport:
    """
    Schnirelmann density inf_n |A ∩ [1, n]| / n.

    For an eventually periodic set, along one residue class of n beyond the
    threshold the prefix ratio is (C + k·d) / (n0 + k·p): monotone in k and
    tending to the periodic density δ = d / p. It rises when its first value
    is at most δ and falls towards δ otherwise, so the infimum is the smaller
    of δ and the least ratio up to N0 = max(T, 1) + p * max(2, T), which
    covers every class's first value.

    Args:
        s: EventuallyPeriodic or Explicit set with no negative members
        limits: Resource limits for the prefix window

    Returns:
        DensityReport; witness is the least n attaining the infimum, None
        when the infimum is the unattained periodic limit, and max + 1 for a
        finite set containing 1
    """
    if isinstance(s, BlockFamily):
        raise UnsupportedSetError("Schnirelmann density needs an eventually periodic or explicit set")
    _reject_negative_members(s)

    if isinstance(s, Explicit):
        if not s.contains(1):
            return DensityReport(Fraction(0), 1, EXACT)
        # finite set: ratios fall towards 0 from the first n beyond the largest member
        return DensityReport(Fraction(0), s.elements[-1] + 1, EXACT)

    delta = periodic_density(s)
    start = max(s.threshold, 1)
    horizon = start + s.period * max(2, s.threshold)
    sample = window(s, 1, horizon, limits)
    best, best_n = _least_prefix_ratio(sample.bits)
    if best <= delta:
        return DensityReport(best, best_n, EXACT)
    logger.debug("[schnirelmann] prefix minimum %s up to %d stays above the limit %s", best, horizon, delta)
    return DensityReport(delta, None, EXACT)


def upper_density(s: IntegerSet) -> DensityReport:
    """Upper asymptotic density limsup |A ∩ [1, n]| / n (a limit for periodic sets)."""
    if isinstance(s, EventuallyPeriodic):
        return DensityReport(periodic_density(s), None, EXACT)
    if isinstance(s, Explicit):
        return DensityReport(Fraction(0), None, EXACT)
    raise UnsupportedSetError("upper density is exact only for eventually periodic and explicit sets; "
                              "use best_window_density on a window instead")


def banach_density(s: IntegerSet, limits: Optional[config.Limits] = None) -> DensityReport:
    """
    Upper Banach density lim_n max_x |A ∩ [x+1, x+n]| / n.

    Args:
        s: EventuallyPeriodic, Explicit, or BlockFamily with monotone block lengths
        limits: max_window bounds the witness block chosen for thick families

    Returns:
        DensityReport; witness is an interval attaining the value where one exists
    """
    limits = limits or config.DEFAULT_LIMITS
    if isinstance(s, EventuallyPeriodic):
        return DensityReport(periodic_density(s), (s.threshold, s.threshold + s.period - 1), EXACT)
    if isinstance(s, Explicit):
        return DensityReport(Fraction(0), None, EXACT)

    gen = s.spec
    if gen.lengths_unbounded:
        witness = None
        for start, length in s.blocks(limits.max_window):
            if start + length - 1 <= limits.max_window:
                witness = (start, start + length - 1)
        return DensityReport(Fraction(1), witness, EXACT)
    if gen.gaps_unbounded:
        return DensityReport(Fraction(0), None, EXACT)
    raise UnsupportedSetError(f"no exact Banach density for block generator {gen.name!r}")


def best_window_density(w: WindowSample, L: int) -> Tuple[int, Fraction]:
    """
    Leftmost x maximizing |A ∩ [x+1, x+L]| over subwindows inside w.

    Returns:
        (x, exact ratio)
    """
    if L < 1 or L > len(w):
        raise PreconditionError(f"L={L} must be between 1 and the window length {len(w)}")
    counts = np.concatenate(([0], np.cumsum(w.bits, dtype=np.int64)))
    sums = counts[L:] - counts[:-L]
    i = int(np.argmax(sums))
    return w.lo + i - 1, Fraction(int(sums[i]), L)


def windowed_report(w: WindowSample, L: int) -> DensityReport:
    x, value = best_window_density(w, L)
    return DensityReport(value, (x + 1, x + L), WINDOWED)


def report_all(s: IntegerSet, limits: Optional[config.Limits] = None) -> Dict[str, Optional[DensityReport]]:
    """Every density defined for s; entries that do not apply are None."""
    reports: Dict[str, Optional[DensityReport]] = {}
    for name, compute in (
        ("schnirelmann", lambda: schnirelmann(s, limits)),
        ("upper", lambda: upper_density(s)),
        ("banach", lambda: banach_density(s, limits)),
    ):
        try:
            reports[name] = compute()
        except (UnsupportedSetError, InvalidInputError) as exc:
            logger.info("[report_all] %s density skipped: %s", name, exc)
            reports[name] = None
    return reports
