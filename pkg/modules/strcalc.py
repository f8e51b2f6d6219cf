"""
The ≈ calculus on finite integer strings.

≈ is the smallest equivalence with  <> ≈ <0>,  <a> ≈ <a, a>,  closed under
concatenation. Deleting every zero and then collapsing runs of equal
neighbours gives a normal form; two strings are equivalent exactly when
their normal forms agree. A breadth-first closure over single rewrites is
kept as an independent oracle for that claim.

A string <a0, a1, ..., ak> stands for the combination
a0·ξ + a1·*ξ + ... + ak·(k*)ξ of iterated hyper-extensions of ξ.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, Optional, Sequence, Set, Tuple

import config
from .errors import InvalidInputError, ResourceLimitExceeded, SpecSyntaxError

logger = logging.getLogger(__name__)

CoeffString = Tuple[int, ...]
CanonicalString = Tuple[int, ...]


def as_string(entries: Iterable[int]) -> CoeffString:
    return tuple(int(x) for x in entries)


def parse_string(text: str) -> CoeffString:
    """'2,0,1' -> (2, 0, 1); the empty text is the empty string."""
    text = text.strip()
    if text in ("", "<>", "[]"):
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise SpecSyntaxError(f"expected comma-separated integers, got {text!r}") from None


def render_string(s: Sequence[int]) -> str:
    return ",".join(str(x) for x in s)


def _collapse_runs(s: Sequence[int]) -> CoeffString:
    out = []
    for x in s:
        if not out or out[-1] != x:
            out.append(x)
    return tuple(out)


def canonical_form(s: Sequence[int]) -> CanonicalString:
    """Zero-free, run-free representative of the ≈ class of s."""
    current = as_string(s)
    while True:
        reduced = _collapse_runs(x for x in current if x != 0)
        if reduced == current:
            return reduced
        current = reduced


def equivalent(s: Sequence[int], t: Sequence[int]) -> bool:
    return canonical_form(s) == canonical_form(t)


def rewrites(s: CoeffString) -> Iterator[CoeffString]:
    """Every string one generator step away from s (in both directions)."""
    for i in range(len(s) + 1):
        yield s[:i] + (0,) + s[i:]
    for i, x in enumerate(s):
        if x == 0:
            yield s[:i] + s[i + 1:]
        yield s[:i + 1] + (x,) + s[i + 1:]
        if i + 1 < len(s) and s[i + 1] == x:
            yield s[:i] + s[i + 1:]


@dataclass(frozen=True)
class ClosureResult:
    strings: FrozenSet[CoeffString]
    truncated: bool

    def __contains__(self, item) -> bool:
        return as_string(item) in self.strings

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self):
        return iter(self.strings)


def closure_oracle(s: Sequence[int], max_len: int, alphabet: Iterable[int],
                   limits: Optional[config.Limits] = None) -> ClosureResult:
    """
    Breadth-first closure of s under single rewrites, within length and alphabet caps.

    Args:
        s: Start string
        max_len: Longest string kept
        alphabet: Allowed entries; must contain 0 and every entry of s
        limits: oracle_state_limit caps the number of states

    Returns:
        ClosureResult; truncated is True when some rewrite was cut by max_len
    """
    limits = limits or config.DEFAULT_LIMITS
    start = as_string(s)
    letters: Set[int] = set(alphabet)
    if 0 not in letters or not set(start) <= letters:
        raise InvalidInputError("alphabet must contain 0 and every entry of the start string")
    if len(start) > max_len:
        raise InvalidInputError(f"start string is longer than max_len={max_len}")

    seen = {start}
    queue = deque([start])
    truncated = False
    while queue:
        current = queue.popleft()
        for nxt in rewrites(current):
            if len(nxt) > max_len:
                truncated = True
                continue
            if nxt in seen:
                continue
            seen.add(nxt)
            if len(seen) > limits.oracle_state_limit:
                raise ResourceLimitExceeded(
                    f"closure oracle exceeded {limits.oracle_state_limit} states")
            queue.append(nxt)
    logger.debug("[closure_oracle] %s reached %d strings (truncated=%s)", start, len(seen), truncated)
    return ClosureResult(frozenset(seen), truncated)


def combo_to_string(coeffs: Sequence[int]) -> CoeffString:
    """a0·ξ + a1·*ξ + ... + ak·(k*)ξ  ->  <a0, a1, ..., ak>."""
    return as_string(coeffs)


def indiscernible_combo(u: Sequence[int], v: Sequence[int]) -> bool:
    return equivalent(combo_to_string(u), combo_to_string(v))


def render_combo(coeffs: Sequence[int]) -> str:
    """Display form, e.g. (2, 0, 1) -> '2ξ + 0 + **ξ'."""
    if not coeffs:
        return "0"
    terms = []
    for level, a in enumerate(coeffs):
        if a == 0:
            terms.append("0")
            continue
        scale = "" if a == 1 else ("-" if a == -1 else str(a))
        terms.append(f"{scale}{'*' * level}ξ")
    return " + ".join(terms)
