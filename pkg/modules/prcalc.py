"""
Partition regularity laboratory.

- Rado's single-equation condition, the base-p colouring that avoids
  equations failing it, and monochromatic solution search.
- Backtracking search for colorings that avoid monochromatic solutions.
- The base-5 coloring that blocks X + Y = Z².
- The coefficient pipeline behind "c1 + ... + cn = 0 implies injective
  partition regularity": positive a1..a_{n-1} and the n coefficient strings
  whose c-weighted sum vanishes while all of them are ≈-equivalent.
"""
import itertools
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

import config
from .errors import InvalidInputError, PreconditionError, ResourceLimitExceeded, SpecSyntaxError, VerificationError
from .parallel import least_witness
from .strcalc import canonical_form

logger = logging.getLogger(__name__)


# -------------------------- Equations and colorings --------------------------- #

@dataclass(frozen=True)
class Linear:
    """c1·x1 + ... + cn·xn = 0."""
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coefficients = tuple(int(c) for c in self.coefficients)
        if len(coefficients) < 2:
            raise InvalidInputError("a linear equation needs at least two coefficients")
        if 0 in coefficients:
            raise InvalidInputError(f"coefficients must be non-zero, got {coefficients}")
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def arity(self) -> int:
        return len(self.coefficients)

    def holds(self, values: Sequence[int]) -> bool:
        return sum(c * x for c, x in zip(self.coefficients, values)) == 0

    def describe(self) -> str:
        return " + ".join(f"{c}*x{i + 1}" for i, c in enumerate(self.coefficients)) + " = 0"


@dataclass(frozen=True)
class SumEqualsSquare:
    """x + y = z²."""

    @property
    def arity(self) -> int:
        return 3

    def holds(self, values: Sequence[int]) -> bool:
        x, y, z = values
        return x + y == z * z

    def describe(self) -> str:
        return "x + y = z^2"


Equation = Union[Linear, SumEqualsSquare]


def parse_coefficients(text: str) -> Tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise SpecSyntaxError(f"expected comma-separated integers, got {text!r}") from None
    return values


@dataclass(frozen=True)
class Coloring:
    """assign[i - 1] is the colour of i, for i in [1, N]."""
    N: int
    r: int
    assign: Tuple[int, ...]

    def __post_init__(self):
        assign = tuple(int(c) for c in self.assign)
        if self.N < 1 or self.r < 1:
            raise InvalidInputError(f"need N >= 1 and r >= 1, got N={self.N}, r={self.r}")
        if len(assign) != self.N:
            raise InvalidInputError(f"coloring has {len(assign)} entries for N={self.N}")
        bad = [c for c in assign if not 1 <= c <= self.r]
        if bad:
            raise InvalidInputError(f"colours must lie in 1..{self.r}, got {bad[0]}")
        object.__setattr__(self, "assign", assign)

    @classmethod
    def of(cls, colors: Sequence[int], r: Optional[int] = None) -> "Coloring":
        colors = tuple(colors)
        return cls(len(colors), r if r is not None else max(colors, default=1), colors)

    def color(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise InvalidInputError(f"{n} is outside [1, {self.N}]")
        return self.assign[n - 1]

    def as_dict(self) -> dict:
        return {"N": self.N, "r": self.r, "assign": list(self.assign)}


# -------------------------- Rado and monochromatic solutions --------------------------- #

def rado_condition(c: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """
    Lexicographically least non-empty index set F (1-based) with sum_{i in F} c_i = 0.

    None means the single equation is not partition regular.
    """
    c = Linear(tuple(c)).coefficients
    best = None
    for size in range(1, len(c) + 1):
        for subset in itertools.combinations(range(len(c)), size):
            if sum(c[i] for i in subset) == 0:
                indices = tuple(i + 1 for i in subset)
                if best is None or indices < best:
                    best = indices
    return best


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, isqrt(p) + 1))


def rado_avoiding_coloring(c: Sequence[int], N: int) -> Coloring:
    """
    Colour [1, N] by the last non-zero base-p digit, for a c that fails Rado's condition.

    p is the least prime dividing no non-zero subset sum of c. In a
    monochromatic solution the entries of least p-adic valuation would give a
    subset of c summing to 0 mod p, hence to 0. Uses p - 1 colours, which is
    usually more than a search needs.

    Raises:
        PreconditionError: c satisfies Rado's condition
    """
    c = Linear(tuple(c)).coefficients
    if rado_condition(c) is not None:
        raise PreconditionError(f"{c} satisfies Rado's condition; no colouring avoids it on all of N")
    if N < 1:
        raise PreconditionError(f"need N >= 1, got {N}")
    sums = {abs(sum(subset)) for size in range(1, len(c) + 1) for subset in itertools.combinations(c, size)}
    p = next(q for q in itertools.count(2) if _is_prime(q) and all(s % q for s in sums))
    colors = []
    for n in range(1, N + 1):
        m = n
        while m % p == 0:
            m //= p
        colors.append(m % p)
    logger.debug("[rado_avoiding_coloring] %s: last base-%d digit, %d colours", c, p, p - 1)
    return Coloring(N, p - 1, tuple(colors))


def solutions(e: Equation, N: int) -> Iterator[Tuple[int, ...]]:
    """Every solution in [1, N]^n, in lexicographic order."""
    if isinstance(e, SumEqualsSquare):
        for x in range(1, N + 1):
            for y in range(1, N + 1):
                z = isqrt(x + y)
                if z * z == x + y and z <= N:
                    yield x, y, z
        return

    c = e.coefficients
    last = c[-1]
    for head in itertools.product(range(1, N + 1), repeat=len(c) - 1):
        rest = -sum(ci * x for ci, x in zip(c, head))
        if rest % last == 0 and 1 <= rest // last <= N:
            yield head + (rest // last,)


def find_mono_solution(e: Equation, col: Coloring, injective: bool = False) -> Optional[Tuple[int, ...]]:
    """
    Least solution in [1, N]^n whose entries share one colour.

    Args:
        e: Equation
        col: Coloring of [1, N]
        injective: Require pairwise distinct entries

    Returns:
        The solution tuple or None
    """
    for values in solutions(e, col.N):
        if injective and len(set(values)) < len(values):
            continue
        first = col.assign[values[0] - 1]
        if all(col.assign[v - 1] == first for v in values):
            return values
    return None


# -------------------------- Avoiding-coloring search --------------------------- #

class SolutionSpace:
    """Distinct value sets of the solutions in [1, N], indexed by their elements."""

    def __init__(self, e: Equation, N: int, injective: bool):
        self.N = N
        seen = set()
        for values in solutions(e, N):
            if injective and len(set(values)) < len(values):
                continue
            seen.add(tuple(sorted(set(values))))
        self.closing: List[List[Tuple[int, ...]]] = [[] for _ in range(N + 1)]
        self.touching: List[List[Tuple[int, ...]]] = [[] for _ in range(N + 1)]
        for s in sorted(seen):
            self.closing[s[-1]].append(s)
            for x in s[:-1]:
                self.touching[x].append(s)
        logger.debug("[SolutionSpace] %d solution sets in [1, %d]", len(seen), N)

    def closes_mono(self, colors: Sequence[int], m: int, c: int) -> bool:
        """True if colouring m with c completes a monochromatic set whose largest element is m."""
        return any(all(colors[x] == c for x in s[:-1]) for s in self.closing[m])


class _AvoidSearch:
    """Depth-first colouring of 1..N with forward checking on solution sets."""

    def __init__(self, space: SolutionSpace, r: int, node_limit: int, deadline: Optional[float]):
        self.space = space
        self.r = r
        self.node_limit = node_limit
        self.deadline = deadline
        self.colors = [0] * (space.N + 1)
        self.banned = [0] * (space.N + 1)
        self.full = sum(1 << c for c in range(1, r + 1))
        self.nodes = 0

    def _tick(self) -> None:
        if self.nodes >= self.node_limit:
            raise ResourceLimitExceeded(f"avoiding-coloring search used up its share ({self.node_limit}) of the node budget")
        self.nodes += 1
        if self.deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise ResourceLimitExceeded("avoiding-coloring search exceeded its time budget")

    def place(self, m: int, c: int) -> Optional[List[Tuple[int, int]]]:
        """Colour m with c; returns the forward-check undo list, or None on conflict."""
        if self.banned[m] >> c & 1 or self.space.closes_mono(self.colors, m, c):
            return None
        self.colors[m] = c
        undo: List[Tuple[int, int]] = []
        for s in self.space.touching[m]:
            open_ = [x for x in s if self.colors[x] == 0]
            if len(open_) != 1 or any(self.colors[x] not in (0, c) for x in s):
                continue
            u, bit = open_[0], 1 << c
            if self.banned[u] & bit:
                continue
            self.banned[u] |= bit
            undo.append((u, bit))
            if self.banned[u] & self.full == self.full:
                self.unplace(m, undo)
                return None
        return undo

    def unplace(self, m: int, undo: List[Tuple[int, int]]) -> None:
        for u, bit in undo:
            self.banned[u] &= ~bit
        self.colors[m] = 0

    def extend(self, start: int, max_used: int) -> bool:
        """Complete the colouring of start..N; colours beyond max_used + 1 are never tried."""
        N = self.space.N
        frames: List[Tuple[int, int, list, int]] = []
        m, c = start, 0
        while True:
            if m > N:
                return True
            top = min(self.r, max_used + 1)
            advanced = False
            while c < top:
                c += 1
                self._tick()
                undo = self.place(m, c)
                if undo is not None:
                    frames.append((m, c, undo, max_used))
                    max_used = max(max_used, c)
                    m, c = m + 1, 0
                    advanced = True
                    break
            if advanced:
                continue
            if not frames:
                return False
            m, c, undo, max_used = frames.pop()
            self.unplace(m, undo)


def _canonical_prefixes(r: int, depth: int) -> List[Tuple[int, ...]]:
    prefixes = []
    for seq in itertools.product(range(1, r + 1), repeat=depth):
        used = 0
        for c in seq:
            if c > used + 1:
                break
            used = max(used, c)
        else:
            prefixes.append(seq)
    return prefixes


def search_avoiding_coloring(e: Equation, r: int, N: int, injective: bool = False,
                             limits: Optional[config.Limits] = None) -> Optional[Coloring]:
    """
    Least canonical r-colouring of [1, N] with no monochromatic solution of e.

    Colourings are ordered as colour sequences; element 1 gets colour 1 and
    colour k + 1 is used only after colour k. The tree is split on the first
    few colours and the node budget is divided among the subtrees up front;
    each subtree is searched depth-first within its share, so the total never
    exceeds max_search_nodes and the answer does not depend on the thread
    count.

    Args:
        e: Equation
        r: Number of colours
        N: Size of the interval
        injective: Only solutions with distinct entries count
        limits: max_search_nodes, time_budget and threads

    Returns:
        Coloring, or None after the whole canonical tree has been exhausted

    Raises:
        ResourceLimitExceeded: node or time budget hit before an answer
    """
    if r < 1 or N < 1:
        raise PreconditionError(f"need r >= 1 and N >= 1, got r={r}, N={N}")
    limits = limits or config.DEFAULT_LIMITS
    deadline = None if limits.time_budget is None else time.monotonic() + limits.time_budget
    space = SolutionSpace(e, N, injective)
    depth = min(N, 4)
    prefixes = _canonical_prefixes(r, depth)
    share, extra = divmod(limits.max_search_nodes, len(prefixes))
    budget = {prefix: share + (i < extra) for i, prefix in enumerate(prefixes)}

    def subtree(prefix: Tuple[int, ...]) -> Optional[Coloring]:
        search = _AvoidSearch(space, r, budget[prefix], deadline)
        for m, c in enumerate(prefix, start=1):
            search._tick()
            if search.place(m, c) is None:
                return None
        if not search.extend(depth + 1, max(prefix)):
            logger.debug("[search_avoiding_coloring] prefix %s exhausted after %d nodes", prefix, search.nodes)
            return None
        logger.debug("[search_avoiding_coloring] prefix %s succeeded after %d nodes", prefix, search.nodes)
        return Coloring(N, r, tuple(search.colors[1:]))

    found = least_witness(subtree, prefixes, limits.threads)
    if found is not None and find_mono_solution(e, found, injective) is not None:
        raise VerificationError(f"search returned a coloring with a monochromatic solution: {found.assign}")
    logger.info("[search_avoiding_coloring] %s r=%d N=%d injective=%s -> %s",
                e.describe(), r, N, injective, None if found is None else found.assign)
    return found


# -------------------------- X + Y = Z² obstruction --------------------------- #

def _five_adic(n: int) -> Tuple[int, int, int]:
    """(i, a, m) with n = 5^a·m + i, i = n mod 5 and 5 ∤ m; (i, 0, 0) when n = i."""
    i = n % 5
    m, a = n - i, 0
    if m == 0:
        return i, 0, 0
    while m % 5 == 0:
        m //= 5
        a += 1
    return i, a, m


def quintic_color(n: int) -> Tuple[int, int]:
    """
    Colour class (i, j) of n: i = n mod 5 and, writing n - i = 5^a·m with 5 ∤ m, j = m mod 5.

    n < 5 has n - i = 0 and gets the reserved class (i, 0).
    """
    if n < 1:
        raise InvalidInputError(f"quintic_color needs n >= 1, got {n}")
    i, _, m = _five_adic(n)
    return i, m % 5


def quintic_class(n: int) -> Tuple[int, int, int]:
    """
    quintic_color(n) plus e, the parity of the 2-adic valuation of the exponent a.

    (i, j) alone admits 50 + 50 = 10² and 775 + 125 = 30²: the 5-adic exponent
    of x + y can be twice that of z. Doubling flips e, which closes both cases.
    """
    if n < 1:
        raise InvalidInputError(f"quintic_class needs n >= 1, got {n}")
    i, a, m = _five_adic(n)
    if a == 0:
        return i, 0, 0
    return i, m % 5, ((a & -a).bit_length() - 1) % 2


def _quintic_codes(N: int, refined: bool) -> np.ndarray:
    """codes[n] encodes the colour class of n for n in 1..N (codes[0] unused)."""
    n = np.arange(N + 1, dtype=np.int64)
    i = n % 5
    m = n - i
    active = m > 0
    a = np.zeros(N + 1, dtype=np.int64)
    while True:
        divisible = active & (m % 5 == 0)
        if not divisible.any():
            break
        m = np.where(divisible, m // 5, m)
        a += divisible
    j = np.where(active, m % 5, 0)
    codes = 5 * i + j
    if not refined:
        return codes
    twos = np.zeros(N + 1, dtype=np.int64)
    while True:
        even = active & (a % 2 == 0)
        if not even.any():
            break
        a = np.where(even, a // 2, a)
        twos += even
    return 2 * codes + twos % 2


def quintic_solutions(N: int, refined: bool = True) -> List[Tuple[int, int, int]]:
    """
    Monochromatic solutions of x + y = z² in [1, N], in lexicographic order.

    Classes come from quintic_class, or from quintic_color when refined is
    False. The constant solution x = y = z = 2 is left out: it lies in every
    colour class of every colouring.
    """
    if N < 1:
        raise PreconditionError(f"N must be positive, got {N}")
    codes = _quintic_codes(N, refined)
    found = []
    for z in range(2, min(N, isqrt(2 * N)) + 1):
        square = z * z
        lo, hi = max(1, square - N), min(N, square - 1)
        if lo > hi:
            continue
        x = np.arange(lo, hi + 1, dtype=np.int64)
        y = square - x
        mono = (codes[x] == codes[z]) & (codes[y] == codes[z])
        for xv in x[mono]:
            xv = int(xv)
            if xv == square - xv == z:
                continue
            found.append((xv, square - xv, z))
    found.sort()
    return found


def verify_quintic_obstruction(N: int) -> bool:
    """True when quintic_class leaves no non-constant monochromatic x + y = z² in [1, N]."""
    solutions_found = quintic_solutions(N)
    if solutions_found:
        logger.warning("[verify_quintic_obstruction] %d monochromatic solutions, first %s",
                       len(solutions_found), solutions_found[0])
    return not solutions_found


# -------------------------- Injective-PR coefficient pipeline --------------------------- #

@dataclass(frozen=True)
class CoeffSolution:
    """
    Positive a1..a_{n-1} and the variable order they were solved for.

    Variable order[i] is matched with row i + 1 of the mu matrix.
    """
    a: Tuple[int, ...]
    order: Tuple[int, ...]

    def satisfies(self, c: Sequence[int]) -> bool:
        """Each middle equation P_{n-s-1}·a_{s+1} = P_{n-s}·a_s holds (P_j = partial sums in order)."""
        n = len(c)
        if len(self.a) != n - 1 or sorted(self.order) != list(range(n)) or min(self.a, default=0) < 1:
            return False
        prefix = _partial_sums([c[v] for v in self.order])
        return all(
            prefix[n - s - 1] * self.a[s] == prefix[n - s] * self.a[s - 1]
            for s in range(1, n - 1)
        )

    def as_dict(self) -> dict:
        return {"a": list(self.a), "order": [v + 1 for v in self.order]}


def _partial_sums(c: Sequence[int]) -> List[int]:
    """P[j] = c_1 + ... + c_j, with P[0] = 0."""
    return [0] + list(itertools.accumulate(c))


def _feasible_orders(c: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Variable orders, in lexicographic order, whose partial sums P_1..P_{n-1} share one sign."""
    n = len(c)

    def walk(order: List[int], total: int, sign: int) -> Iterator[Tuple[int, ...]]:
        if len(order) == n - 1:
            rest = [v for v in range(n) if v not in order]
            yield tuple(order + rest)
            return
        for v in range(n):
            if v in order:
                continue
            s = total + c[v]
            if s == 0 or (sign and (s > 0) != (sign > 0)):
                continue
            order.append(v)
            yield from walk(order, s, sign or (1 if s > 0 else -1))
            order.pop()

    yield from walk([], 0, 0)


def _solve_for_order(c: Sequence[int], order: Sequence[int]) -> Tuple[int, ...]:
    n = len(c)
    prefix = _partial_sums([c[v] for v in order])
    ratios = [Fraction(1)]
    for s in range(1, n - 1):
        ratios.append(ratios[-1] * Fraction(prefix[n - s], prefix[n - s - 1]))
    scale = 1
    for q in ratios:
        scale = scale * q.denominator // gcd(scale, q.denominator)
    values = [int(q * scale) for q in ratios]
    common = 0
    for v in values:
        common = gcd(common, v)
    return tuple(v // common for v in values)


def injective_pr_coeffs(c: Sequence[int], limits: Optional[config.Limits] = None) -> CoeffSolution:
    """
    Least positive a1..a_{n-1} making c1·mu_1 + ... + cn·mu_n vanish.

    The first and last equations of the system hold because sum(c) = 0. The
    middle ones fix every ratio a_{s+1}/a_s, so the primitive integer solution
    (least a1) is unique once the order in which variables meet the rows is
    fixed. Orders are tried lexicographically; one with positive coefficients
    first always works.

    Args:
        c: Non-zero integers, n >= 3, summing to 0
        limits: coeff_scan_bound caps a1

    Returns:
        CoeffSolution

    Raises:
        PreconditionError: n < 3 or sum(c) != 0
        ResourceLimitExceeded: the least a1 exceeds coeff_scan_bound
    """
    limits = limits or config.DEFAULT_LIMITS
    c = Linear(tuple(c)).coefficients
    if len(c) < 3:
        raise PreconditionError("injective partition regularity pipeline needs n >= 3")
    if sum(c) != 0:
        raise PreconditionError(f"coefficients must sum to 0, got sum {sum(c)}")

    for order in _feasible_orders(c):
        a = _solve_for_order(c, order)
        if a[0] > limits.coeff_scan_bound:
            raise ResourceLimitExceeded(
                f"least a1 = {a[0]} exceeds coeff_scan_bound={limits.coeff_scan_bound}")
        solution = CoeffSolution(a, order)
        if not solution.satisfies(c):
            raise VerificationError(f"solver produced {a} for order {order}, which fails the system")
        logger.debug("[injective_pr_coeffs] c=%s order=%s a=%s", c, order, a)
        return solution
    raise VerificationError(f"no variable order admits a positive solution for {c}")


@dataclass(frozen=True)
class MuMatrix:
    rows: Tuple[Tuple[int, ...], ...]
    order: Tuple[int, ...]

    @property
    def assignment(self) -> Dict[int, Tuple[int, ...]]:
        """Variable index (0-based) -> its row."""
        return {v: self.rows[i] for i, v in enumerate(self.order)}

    def as_dict(self) -> dict:
        return {
            "rows": [list(row) for row in self.rows],
            "assignment": {f"x{v + 1}": list(row) for v, row in sorted(self.assignment.items())},
        }


def mu_rows(a: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    """
    The n rows over the basis xi, *xi, ..., (n-1)*xi built from a1..a_{n-1}.

    Row 1 repeats a_{n-1} in the last two slots, rows 2..n-1 carry one 0
    that slides from slot n-2 down to slot 1, and row n repeats a1.
    """
    a = tuple(a)
    n = len(a) + 1
    rows = [a + (a[-1],)]
    for i in range(2, n):
        zero = n - i
        rows.append(a[:zero] + (0,) + a[zero:])
    rows.append((a[0],) + a)
    return tuple(rows)


def build_mu_matrix(c: Sequence[int], solution: CoeffSolution) -> MuMatrix:
    """
    Rows mu_1..mu_n for a solved coefficient vector, with their postconditions checked.

    Checked: sum_i c_{order[i]}·mu_{i+1} is the zero vector, every row is
    ≈-equivalent to <a1, ..., a_{n-1}>, and the rows are pairwise distinct.

    Raises:
        VerificationError: any check fails
    """
    c = tuple(c)
    if len(solution.a) != len(c) - 1:
        raise PreconditionError(f"need {len(c) - 1} values a_i for {len(c)} coefficients")
    rows = mu_rows(solution.a)
    matrix = np.array(rows, dtype=object)
    weights = np.array([c[v] for v in solution.order], dtype=object)
    combined = weights.dot(matrix)
    if any(x != 0 for x in combined):
        raise VerificationError(f"weighted row sum is {list(combined)}, not zero")
    target = canonical_form(solution.a)
    for row in rows:
        if canonical_form(row) != target:
            raise VerificationError(f"row {row} is not equivalent to {solution.a}")
    if len(set(rows)) != len(rows):
        raise VerificationError("mu rows are not pairwise distinct")
    return MuMatrix(rows, solution.order)
