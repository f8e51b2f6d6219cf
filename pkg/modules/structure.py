"""
Thick / syndetic / piecewise syndetic structure and finite embeddability.

The piecewise syndetic notions are finitized: a PSWitness (lo, hi, k) says
that every length-k subinterval of [lo, hi] meets the set. The splitter
mirrors the argument that PS sets form a partition regular family: either
the first colour keeps bounded gaps on the whole witness interval, or some
long stretch holds only the second colour, and there the set's own bound
carries over.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

import config
from .errors import InvalidInputError, PreconditionError, VerificationError
from .intsets import EventuallyPeriodic, IntegerSet, WindowSample, runs, window

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StructureClass:
    thick: bool
    syndetic: bool
    ps: bool

    def as_dict(self) -> dict:
        return {"thick": self.thick, "syndetic": self.syndetic, "ps": self.ps}


@dataclass(frozen=True)
class PSWitness:
    lo: int
    hi: int
    gap_bound: int

    @property
    def interval(self) -> Tuple[int, int]:
        return self.lo, self.hi

    def as_dict(self) -> dict:
        return {"interval": [self.lo, self.hi], "gap_bound": self.gap_bound}


@dataclass(frozen=True)
class Shift:
    t: int


def classify_ep(s: EventuallyPeriodic) -> StructureClass:
    """Exact thick / syndetic / PS flags of an eventually periodic set."""
    syndetic = bool(s.residues)
    return StructureClass(thick=s.is_full, syndetic=syndetic, ps=syndetic)


def _longest_gap(bits: np.ndarray) -> int:
    _, lengths = runs(~np.asarray(bits, dtype=bool))
    return int(lengths.max()) if lengths.size else 0


def verify_ps_witness(bits: np.ndarray, lo: int, witness: PSWitness) -> bool:
    """
    Independent scan: every length-k subinterval of the witness interval meets the set.

    Args:
        bits: Membership bits starting at `lo`
        lo: Integer that bits[0] describes
        witness: PSWitness to check
    """
    a, b = witness.lo - lo, witness.hi - lo
    if a < 0 or b >= len(bits) or a > b or witness.gap_bound < 1:
        return False
    return _longest_gap(bits[a:b + 1]) < witness.gap_bound


def is_ps_window(w: WindowSample, k: int, L: int) -> Optional[PSWitness]:
    """
    Leftmost subinterval of w of length >= L in which every k consecutive integers meet the set.

    The witness returned is the longest such interval starting at that point.

    Args:
        w: WindowSample
        k: Gap bound
        L: Minimum interval length

    Returns:
        PSWitness or None
    """
    n = len(w)
    if not 1 <= k <= L <= n:
        raise PreconditionError(f"need 1 <= k <= L <= window length, got k={k}, L={L}, length={n}")

    empty = (~w.bits).astype(np.int64)
    counts = np.concatenate(([0], np.cumsum(empty)))
    bad_starts = np.flatnonzero(counts[k:] - counts[:-k] == k)

    starts = np.arange(n)
    pos = np.searchsorted(bad_starts, starts)
    reach = np.full(n, n, dtype=np.int64)
    has_bad = pos < bad_starts.size
    reach[has_bad] = bad_starts[pos[has_bad]] + k - 1
    lengths = reach - starts
    ok = np.flatnonzero(lengths >= L)
    if ok.size == 0:
        return None
    a = int(ok[0])
    witness = PSWitness(w.lo + a, w.lo + a + int(lengths[a]) - 1, k)
    logger.debug("[is_ps_window] witness %s", witness)
    return witness


def _check_colors(w: WindowSample, colors, r: int) -> np.ndarray:
    colors = np.asarray(colors, dtype=np.int64)
    if colors.shape != w.bits.shape:
        raise PreconditionError(f"colors must have one entry per window position ({len(w)})")
    used = colors[w.bits]
    if used.size and (used.min() < 1 or used.max() > r):
        raise PreconditionError(f"member colours must lie in 1..{r}")
    return colors


def ps_partition_split(w: WindowSample, colors, k: int, K: int) -> Tuple[int, PSWitness]:
    """
    Split a gap-bounded window by a 2-colouring and return a colour that stays PS.

    Args:
        w: Window whose members have every k consecutive integers meeting them
        colors: Array with one entry per window position; members carry 1 or 2
        k: Gap bound of the whole window
        K: Gap bound to test for colour 1 (K >= k)

    Returns:
        (colour, witness) where the witness holds for that colour's members
    """
    if K < k:
        raise PreconditionError(f"K={K} must be at least k={k}")
    whole = PSWitness(w.lo, w.hi, k)
    if not verify_ps_witness(w.bits, w.lo, whole):
        raise PreconditionError(f"window [{w.lo}, {w.hi}] has a gap of {k} or more")
    colors = _check_colors(w, colors, 2)

    first = w.bits & (colors == 1)
    starts, lengths = runs(~first)
    long_runs = np.flatnonzero(lengths >= K)
    if long_runs.size == 0:
        color, witness = 1, PSWitness(w.lo, w.hi, K)
        own = first
    else:
        i = int(long_runs[0])
        a = w.lo + int(starts[i])
        color, witness = 2, PSWitness(a, a + int(lengths[i]) - 1, k)
        own = w.bits & (colors == 2)

    if not verify_ps_witness(own, w.lo, witness):
        raise VerificationError(f"split produced an invalid witness {witness}")
    return color, witness


def ps_partition_split_multi(w: WindowSample, colors, k: int, K: int, r: int) -> Tuple[int, PSWitness]:
    """
    r-colour version by induction: colour 1 against the rest, then recurse inside the rest.
    """
    if r < 1:
        raise PreconditionError("need at least one colour")
    colors = _check_colors(w, colors, r)
    if r == 1:
        return 1, PSWitness(w.lo, w.hi, k)

    binary = np.where(colors == 1, 1, 2)
    color, witness = ps_partition_split(w, binary, k, K)
    if color == 1:
        return 1, witness

    inner = w.sub(witness.lo, witness.hi)
    inner_colors = colors[witness.lo - w.lo:witness.hi - w.lo + 1] - 1
    inner_colors = np.where(inner.bits, inner_colors, 1)
    color, witness = ps_partition_split_multi(inner, inner_colors, k, K, r - 1)
    return color + 1, witness


# -------------------------- Finite embeddability --------------------------- #

def _shift_mask(F: Sequence[int], Y: IntegerSet, lo_t: int, hi_t: int,
                limits: Optional[config.Limits]) -> np.ndarray:
    """valid[i] is True iff (lo_t + i) + F ⊆ Y."""
    f_min, f_max = min(F), max(F)
    base = window(Y, f_min + lo_t, f_max + hi_t, limits)
    valid = np.ones(hi_t - lo_t + 1, dtype=bool)
    for f in F:
        offset = f - f_min
        valid &= base.bits[offset:offset + valid.size]
    return valid


def _check_finite(F: Iterable[int]) -> List[int]:
    F = sorted(set(F))
    if not F:
        raise InvalidInputError("F must be a non-empty finite set")
    return F


def finite_embeds(F: Iterable[int], Y: IntegerSet, bound: int,
                  limits: Optional[config.Limits] = None) -> Optional[Shift]:
    """
    Least t in [-bound, bound] with t + F ⊆ Y.

    None means no shift inside the bound; for infinite Y that is not a
    refutation (see embed_report).
    """
    F = _check_finite(F)
    valid = _shift_mask(F, Y, -bound, bound, limits)
    hits = np.flatnonzero(valid)
    return Shift(int(hits[0]) - bound) if hits.size else None


@dataclass(frozen=True)
class EmbeddingReport:
    shift: Optional[Shift]
    verdict: str
    count: int

    def as_dict(self) -> dict:
        return {
            "shift": None if self.shift is None else self.shift.t,
            "verdict": self.verdict,
            "count": self.count,
        }


def embed_report(F: Iterable[int], Y: IntegerSet, bound: int,
                 limits: Optional[config.Limits] = None) -> EmbeddingReport:
    """
    Shift search plus, for eventually periodic Y, a decision.

    Verdicts:
        found               least shift inside [-bound, bound]
        found_beyond_bound  no shift inside the bound, but one exists (periodic Y)
        refuted             no shift exists at all (periodic Y)
        inconclusive        no shift inside the bound, Y not periodic

    count is the number of valid shifts inside [-bound, bound].
    """
    F = _check_finite(F)
    valid = _shift_mask(F, Y, -bound, bound, limits)
    hits = np.flatnonzero(valid)
    if hits.size:
        return EmbeddingReport(Shift(int(hits[0]) - bound), "found", int(hits.size))
    if not isinstance(Y, EventuallyPeriodic):
        return EmbeddingReport(None, "inconclusive", 0)

    # below t0 only transient members can be hit; from t0 on the pattern repeats with period p
    t0 = Y.threshold - F[0]
    lowest = min(list(Y.transient) + [Y.threshold]) - F[-1]
    span = _shift_mask(F, Y, lowest, t0 + Y.period - 1, limits)
    found = np.flatnonzero(span)
    if found.size:
        t = lowest + int(found[0])
        logger.info("[embed_report] shift %d exists beyond bound %d", t, bound)
        return EmbeddingReport(Shift(t), "found_beyond_bound", 0)
    return EmbeddingReport(None, "refuted", 0)


def fe_difference_property(X: Iterable[int], Y: IntegerSet, bound: int,
                           limits: Optional[config.Limits] = None) -> bool:
    """Every d in X - X is a difference of two members of Y seen in the search range."""
    X = _check_finite(X)
    sample = window(Y, -bound + X[0], bound + X[-1], limits)
    bits = sample.bits
    for d in sorted({b - a for a in X for b in X if b >= a}):
        if d == 0:
            ok = bool(bits.any())
        elif d >= bits.size:
            ok = False
        else:
            ok = bool(np.any(bits[:-d] & bits[d:]))
        if not ok:
            logger.debug("[fe_difference_property] difference %d not realized", d)
            return False
    return True


def find_ap(F: Iterable[int], length: int) -> Optional[Tuple[int, int]]:
    """Least (a, d), d >= 1, with a, a+d, ..., a+(length-1)d all in F."""
    if length < 1:
        raise InvalidInputError("progression length must be positive")
    members = sorted(set(F))
    present = set(members)
    for a in members:
        if length == 1:
            return a, 1
        for b in members:
            if b <= a:
                continue
            d = b - a
            if all(a + i * d in present for i in range(2, length)):
                return a, d
    return None
