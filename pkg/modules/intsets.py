"""
Integer set representations, concrete windows and the set-spec mini-language.

Three kinds of IntegerSet are supported:
- EventuallyPeriodic: finitely many transient members below a threshold T,
  then membership decided by n mod p.
- BlockFamily: a builtin union of intervals [s_n, s_n + l_n), n >= 1.
- Explicit: a finite sorted list.

Eventually periodic sets are the ones every density and structure notion
can be decided on exactly; the other two are analysed through windows.
"""
import logging
import re
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

import numpy as np

import config
from .errors import (
    InvalidInputError,
    EmptyWindowError,
    PreconditionError,
    SpecSyntaxError,
    WindowTooLargeError,
)

logger = logging.getLogger(__name__)


# -------------------------- Set representations --------------------------- #

@dataclass(frozen=True)
class EventuallyPeriodic:
    period: int
    residues: FrozenSet[int]
    threshold: int = 0
    transient: FrozenSet[int] = frozenset()

    def __post_init__(self):
        if self.period < 1:
            raise InvalidInputError(f"period must be positive, got {self.period}")
        bad = [r for r in self.residues if not 0 <= r < self.period]
        if bad:
            raise InvalidInputError(f"residues {sorted(bad)} outside 0..{self.period - 1}")
        late = [t for t in self.transient if t >= self.threshold]
        if late:
            raise InvalidInputError(
                f"transient members {sorted(late)} must lie below threshold {self.threshold}")

    def contains(self, n: int) -> bool:
        if n < self.threshold:
            return n in self.transient
        return n % self.period in self.residues

    @property
    def is_full(self) -> bool:
        return len(self.residues) == self.period


@dataclass(frozen=True)
class BlockGenerator:
    """Blocks [start(n), start(n) + length(n)) for n = 1, 2, 3, ..."""
    name: str
    start: Callable[[int], int]
    length: Callable[[int], int]
    lengths_unbounded: bool
    gaps_unbounded: bool
    description: str


BLOCK_GENERATORS: Dict[str, BlockGenerator] = {
    "pow4": BlockGenerator(
        "pow4", lambda n: 4 ** n, lambda n: n, True, True,
        "union of [4^n, 4^n + n): thick but of zero density"),
    "pow2": BlockGenerator(
        "pow2", lambda n: 2 ** n, lambda n: n, True, True,
        "union of [2^n, 2^n + n): thick but of zero density"),
    "squares": BlockGenerator(
        "squares", lambda n: n * n, lambda n: 1, False, True,
        "the perfect squares: bounded blocks, unbounded gaps"),
}


@dataclass(frozen=True)
class BlockFamily:
    generator: str

    def __post_init__(self):
        if self.generator not in BLOCK_GENERATORS:
            raise InvalidInputError(
                f"unknown block generator {self.generator!r}; "
                f"known: {', '.join(sorted(BLOCK_GENERATORS))}")

    @property
    def spec(self) -> BlockGenerator:
        return BLOCK_GENERATORS[self.generator]

    def blocks(self, upto: int) -> Iterator[Tuple[int, int]]:
        """Yield (start, length) for every block starting at or before `upto`."""
        gen = self.spec
        n = 1
        while True:
            start = gen.start(n)
            if start > upto:
                return
            yield start, gen.length(n)
            n += 1

    def contains(self, n: int) -> bool:
        for start, length in self.blocks(n):
            if start <= n < start + length:
                return True
        return False


@dataclass(frozen=True)
class Explicit:
    elements: Tuple[int, ...] = ()

    def __post_init__(self):
        normalized = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", normalized)

    def contains(self, n: int) -> bool:
        i = bisect_left(self.elements, n)
        return i < len(self.elements) and self.elements[i] == n


IntegerSet = Union[EventuallyPeriodic, BlockFamily, Explicit]


def periodic(period: int, residues, threshold: int = 0, transient=()) -> EventuallyPeriodic:
    return EventuallyPeriodic(period, frozenset(residues), threshold, frozenset(transient))


def complement(s: EventuallyPeriodic) -> EventuallyPeriodic:
    """
    Complement of an eventually periodic set relative to the non-negative integers.

    Args:
        s: EventuallyPeriodic set

    Returns:
        EventuallyPeriodic set whose members are the n >= 0 not in s
    """
    threshold = max(s.threshold, 0)
    residues = frozenset(range(s.period)) - s.residues
    transient = frozenset(n for n in range(0, threshold) if not s.contains(n))
    return EventuallyPeriodic(s.period, residues, threshold, transient)


def member(s: IntegerSet, n: int) -> bool:
    return s.contains(n)


# -------------------------- Windows --------------------------- #

@dataclass(frozen=True, eq=False)
class WindowSample:
    """Membership bits of a set on [lo, hi]; bits[i] is membership of lo + i."""
    lo: int
    hi: int
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.hi < self.lo:
            raise PreconditionError(f"empty window [{self.lo}, {self.hi}]")
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != (self.hi - self.lo + 1,):
            raise PreconditionError(
                f"bits length {bits.shape} does not match window [{self.lo}, {self.hi}]")
        bits = bits.copy()
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, WindowSample):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.lo, self.hi, self.bits.tobytes()))

    def has(self, n: int) -> bool:
        return self.lo <= n <= self.hi and bool(self.bits[n - self.lo])

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.bits) + self.lo

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def sub(self, lo: int, hi: int) -> "WindowSample":
        if not self.lo <= lo <= hi <= self.hi:
            raise PreconditionError(f"[{lo}, {hi}] is not inside [{self.lo}, {self.hi}]")
        return WindowSample(lo, hi, self.bits[lo - self.lo:hi - self.lo + 1])

    @classmethod
    def from_members(cls, lo: int, hi: int, members) -> "WindowSample":
        bits = np.zeros(hi - lo + 1, dtype=bool)
        for n in members:
            if lo <= n <= hi:
                bits[n - lo] = True
        return cls(lo, hi, bits)


def window(s: IntegerSet, lo: int, hi: int, limits: Optional[config.Limits] = None) -> WindowSample:
    """
    Sample the membership of s on [lo, hi].

    Args:
        s: IntegerSet
        lo: Left end (inclusive)
        hi: Right end (inclusive)
        limits: Resource limits (max_window is enforced)

    Returns:
        WindowSample
    """
    limits = limits or config.DEFAULT_LIMITS
    if lo > hi:
        raise PreconditionError(f"window lower end {lo} exceeds upper end {hi}")
    size = hi - lo + 1
    if size > limits.max_window:
        raise WindowTooLargeError(f"window of {size} elements exceeds max_window={limits.max_window}")

    if isinstance(s, EventuallyPeriodic):
        idx = np.arange(lo, hi + 1, dtype=np.int64)
        periodic_part = (idx >= s.threshold) & np.isin(idx % s.period, list(s.residues))
        transient_part = np.isin(idx, list(s.transient))
        bits = periodic_part | transient_part
    elif isinstance(s, BlockFamily):
        bits = np.zeros(size, dtype=bool)
        for start, length in s.blocks(hi):
            a, b = max(start, lo), min(start + length - 1, hi)
            if a <= b:
                bits[a - lo:b - lo + 1] = True
    else:
        bits = np.zeros(size, dtype=bool)
        inside = [n - lo for n in s.elements if lo <= n <= hi]
        bits[np.array(inside, dtype=np.int64)] = True
    return WindowSample(lo, hi, bits)


def max_gap(w: WindowSample) -> int:
    """
    Longest stretch of consecutive non-members in the window, edges included.

    Raises:
        EmptyWindowError: the window has no members
    """
    idx = np.flatnonzero(w.bits)
    if idx.size == 0:
        raise EmptyWindowError(f"window [{w.lo}, {w.hi}] has no members")
    edge = max(int(idx[0]), len(w) - 1 - int(idx[-1]))
    if idx.size == 1:
        return edge
    return max(edge, int(np.max(np.diff(idx))) - 1)


def runs(bits: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Start offsets and lengths of the maximal runs of True in a bit array."""
    padded = np.concatenate(([0], np.asarray(bits, dtype=np.int8), [0]))
    d = np.diff(padded)
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    return starts, ends - starts


def longest_run(w: WindowSample) -> Tuple[int, int]:
    """Leftmost longest run of members as (start, length); (lo, 0) if none."""
    starts, lengths = runs(w.bits)
    if starts.size == 0:
        return w.lo, 0
    i = int(np.argmax(lengths))
    return w.lo + int(starts[i]), int(lengths[i])


# -------------------------- Set-spec mini-language --------------------------- #

_TOKEN = re.compile(r"\S+")
_INT_LIST = re.compile(r"^-?\d+(,-?\d+)*$")


def _parse_int(text: str, position: int) -> int:
    if not re.fullmatch(r"-?\d+", text):
        raise SpecSyntaxError(f"expected an integer, got {text!r}", position)
    return int(text)


def _parse_int_list(text: str, position: int) -> List[int]:
    if text == "":
        return []
    if not _INT_LIST.match(text):
        raise SpecSyntaxError(f"expected comma-separated integers, got {text!r}", position)
    return [int(x) for x in text.split(",")]


def parse_set_spec(text: str) -> IntegerSet:
    """
    Parse one line of the set-spec mini-language.

        periodic p=<int> r=<int>,<int>,... [from=<int>] [plus=<int>,...]
        explicit <int>,<int>,...
        blocks <generator-id>

    Raises:
        SpecSyntaxError: malformed text, with the character position
    """
    tokens = [(m.group(), m.start()) for m in _TOKEN.finditer(text)]
    if not tokens:
        raise SpecSyntaxError("empty set spec", 0)
    kind, kind_pos = tokens[0]
    rest = tokens[1:]

    if kind == "explicit":
        if len(rest) > 1:
            raise SpecSyntaxError("explicit takes one comma-separated list", rest[1][1])
        values = _parse_int_list(rest[0][0], rest[0][1]) if rest else []
        return Explicit(tuple(values))

    if kind == "blocks":
        if len(rest) != 1:
            pos = rest[1][1] if len(rest) > 1 else len(text)
            raise SpecSyntaxError("blocks takes exactly one generator id", pos)
        name, pos = rest[0]
        if name not in BLOCK_GENERATORS:
            raise SpecSyntaxError(f"unknown block generator {name!r}", pos)
        return BlockFamily(name)

    if kind != "periodic":
        raise SpecSyntaxError(f"unknown set kind {kind!r}", kind_pos)

    fields: Dict[str, Tuple[str, int]] = {}
    for token, pos in rest:
        key, sep, value = token.partition("=")
        if not sep or key not in ("p", "r", "from", "plus"):
            raise SpecSyntaxError(f"unexpected token {token!r}", pos)
        if key in fields:
            raise SpecSyntaxError(f"duplicate key {key!r}", pos)
        fields[key] = (value, pos + len(key) + 1)
    for required in ("p", "r"):
        if required not in fields:
            raise SpecSyntaxError(f"periodic spec needs {required}=", len(text))

    period = _parse_int(*fields["p"])
    if period <= 0:
        raise SpecSyntaxError("period must be positive", fields["p"][1])
    residues = _parse_int_list(*fields["r"])
    for r in residues:
        if not 0 <= r < period:
            raise SpecSyntaxError(f"residue {r} not in 0..{period - 1}", fields["r"][1])
    threshold = _parse_int(*fields["from"]) if "from" in fields else 0
    transient = _parse_int_list(*fields["plus"]) if "plus" in fields else []
    for t in transient:
        if t >= threshold:
            raise SpecSyntaxError(f"plus member {t} must be below from={threshold}", fields["plus"][1])
    return periodic(period, residues, threshold, transient)


def _join(values) -> str:
    return ",".join(str(v) for v in sorted(values))


def render(s: IntegerSet) -> str:
    """Inverse of parse_set_spec."""
    if isinstance(s, EventuallyPeriodic):
        text = f"periodic p={s.period} r={_join(s.residues)}"
        if s.threshold != 0:
            text += f" from={s.threshold}"
        if s.transient:
            text += f" plus={_join(s.transient)}"
        return text
    if isinstance(s, BlockFamily):
        return f"blocks {s.generator}"
    return f"explicit {_join(s.elements)}".rstrip()
