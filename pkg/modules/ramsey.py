"""
Finite Ramsey-type tools: König branches, greedy monochromatic cliques and
monochromatic 3-term progressions, plus the coloring file readers.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

import config
from .errors import InvalidInputError, PreconditionError, ResourceLimitExceeded, SpecSyntaxError
from .prcalc import Coloring, Equation, SolutionSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LevelTree:
    """levels[0] is T_1; parent maps every node of T_{i+1} to a node of T_i."""
    levels: Tuple[Tuple[Hashable, ...], ...]
    parent: Dict[Hashable, Hashable] = field(default_factory=dict)

    def __post_init__(self):
        levels = tuple(tuple(level) for level in self.levels)
        object.__setattr__(self, "levels", levels)
        for depth in range(1, len(levels)):
            below = set(levels[depth - 1])
            for node in levels[depth]:
                if self.parent.get(node) not in below:
                    raise InvalidInputError(f"node {node!r} at level {depth + 1} has no parent one level down")

    @property
    def depth(self) -> int:
        return len(self.levels)


def koenig_branch(t: LevelTree) -> List[Hashable]:
    """
    Branch from level 1 to the deepest level, walked down from the first deepest node.

    Raises:
        PreconditionError: some level is empty
    """
    if not t.levels:
        raise PreconditionError("tree has no levels")
    for depth, level in enumerate(t.levels, start=1):
        if not level:
            raise PreconditionError(f"level {depth} is empty")
    node = t.levels[-1][0]
    branch = [node]
    for _ in range(t.depth - 1):
        node = t.parent[node]
        branch.append(node)
    branch.reverse()
    return branch


def avoidance_tree(e: Equation, r: int, N: int, injective: bool = False,
                   limits: Optional[config.Limits] = None) -> LevelTree:
    """
    Level n holds every canonical r-colouring of [1, n] with no monochromatic solution of e.

    Levels stop at N or at the first empty level. koenig_branch on the result
    is the least longest avoiding colouring.

    Args:
        e: Equation
        r: Number of colours
        N: Deepest level to build
        injective: Only solutions with distinct entries count
        limits: max_search_nodes caps the total number of nodes

    Returns:
        LevelTree whose nodes are colour tuples
    """
    if r < 1 or N < 1:
        raise PreconditionError(f"need r >= 1 and N >= 1, got r={r}, N={N}")
    limits = limits or config.DEFAULT_LIMITS
    space = SolutionSpace(e, N, injective)
    levels: List[Tuple[Tuple[int, ...], ...]] = []
    parent: Dict[Hashable, Hashable] = {}
    frontier: List[Tuple[int, ...]] = [()]
    total = 0
    for n in range(1, N + 1):
        nxt = []
        for node in frontier:
            colors = (0,) + node
            top = min(r, max(node, default=0) + 1)
            for c in range(1, top + 1):
                if space.closes_mono(colors + (c,), n, c):
                    continue
                child = node + (c,)
                nxt.append(child)
                if node:
                    parent[child] = node
        total += len(nxt)
        if total > limits.max_search_nodes:
            raise ResourceLimitExceeded(f"avoidance tree exceeded {limits.max_search_nodes} nodes")
        if not nxt:
            break
        levels.append(tuple(nxt))
        frontier = nxt
    logger.debug("[avoidance_tree] depth %d, %d nodes", len(levels), total)
    return LevelTree(tuple(levels), parent)


@dataclass(frozen=True, eq=False)
class PairColoring:
    """matrix[i, j] = matrix[j, i] is the colour of {i, j} for 1 <= i < j <= N."""
    N: int
    r: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.N < 2:
            raise PreconditionError(f"pair colorings need N >= 2, got {self.N}")
        m = np.asarray(self.matrix, dtype=np.int64)
        if m.shape != (self.N + 1, self.N + 1):
            raise InvalidInputError(f"matrix must be {(self.N + 1, self.N + 1)}, got {m.shape}")
        iu = np.triu_indices(self.N + 1, k=1)
        upper = m[iu][iu[0] >= 1]
        if upper.size and (upper.min() < 1 or upper.max() > self.r):
            raise InvalidInputError(f"pair colours must lie in 1..{self.r}")
        if not np.array_equal(m[1:, 1:], m[1:, 1:].T):
            raise InvalidInputError("pair colour matrix must be symmetric")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def color(self, i: int, j: int) -> int:
        if i == j or not (1 <= i <= self.N and 1 <= j <= self.N):
            raise InvalidInputError(f"{{{i}, {j}}} is not a pair in [1, {self.N}]")
        return int(self.matrix[i, j])

    @classmethod
    def from_function(cls, N: int, r: int, f: Callable[[int, int], int]) -> "PairColoring":
        m = np.zeros((N + 1, N + 1), dtype=np.int64)
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                m[i, j] = m[j, i] = f(i, j)
        return cls(N, r, m)

    @classmethod
    def from_triples(cls, N: int, r: int, triples: Iterable[Tuple[int, int, int]]) -> "PairColoring":
        m = np.zeros((N + 1, N + 1), dtype=np.int64)
        for i, j, c in triples:
            if i == j or not (1 <= i <= N and 1 <= j <= N):
                raise InvalidInputError(f"({i}, {j}) is not a pair in [1, {N}]")
            m[i, j] = m[j, i] = c
        missing = [(i, j) for i in range(1, N + 1) for j in range(i + 1, N + 1) if m[i, j] == 0]
        if missing:
            raise InvalidInputError(f"{len(missing)} pairs have no colour, first {missing[0]}")
        return cls(N, r, m)


def is_monochromatic(pc: PairColoring, H: Sequence[int]) -> bool:
    colors = {pc.color(a, b) for idx, a in enumerate(H) for b in H[idx + 1:]}
    return len(colors) <= 1


def ramsey_greedy(pc: PairColoring) -> Tuple[List[int], int]:
    """
    Monochromatic set by majority focusing.

    Repeatedly take the least candidate a, keep the candidates whose pair
    colour toward a is the most frequent one (lower colour on ties) and
    record that colour for a. Every later pick sees a in its recorded colour,
    so the picks recorded with the most frequent colour, plus the final pick,
    form a monochromatic set of size at least floor(log2(N) / 2) when r = 2.

    Returns:
        (sorted H, colour)
    """
    candidates = np.arange(1, pc.N + 1)
    records: List[Tuple[int, Optional[int]]] = []
    while candidates.size:
        a = int(candidates[0])
        rest = candidates[1:]
        if rest.size == 0:
            records.append((a, None))
            break
        toward = pc.matrix[a, rest]
        counts = np.bincount(toward, minlength=pc.r + 1)
        c = int(np.argmax(counts[1:])) + 1
        records.append((a, c))
        candidates = rest[toward == c]

    tally = Counter(c for _, c in records if c is not None)
    color = min(tally, key=lambda k: (-tally[k], k))
    H = sorted([a for a, c in records if c == color] + [records[-1][0]])
    logger.debug("[ramsey_greedy] %d picks, colour %d kept %d", len(records), color, len(H))
    return H, color


def find_mono_3ap(col: Coloring) -> Optional[Tuple[int, int]]:
    """Least (a, d), d >= 1, with a, a + d, a + 2d in [1, N] sharing one colour."""
    assign = col.assign
    for a in range(1, col.N - 1):
        for d in range(1, (col.N - a) // 2 + 1):
            if assign[a - 1] == assign[a + d - 1] == assign[a + 2 * d - 1]:
                return a, d
    return None


# -------------------------- Coloring files --------------------------- #

def _content_lines(source: Union[str, Iterable[str]]) -> List[Tuple[int, str]]:
    lines = source.splitlines() if isinstance(source, str) else list(source)
    out = []
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


def read_coloring(source: Union[str, Iterable[str]], r: Optional[int] = None) -> Coloring:
    """
    One colour per line: line i is the colour of i. Blank lines and '#' comments are skipped.

    Args:
        source: File text or an iterable of lines
        r: Number of colours (default: the largest colour used)
    """
    colors = []
    for number, line in _content_lines(source):
        try:
            colors.append(int(line))
        except ValueError:
            raise SpecSyntaxError(f"line {number}: expected a colour, got {line!r}") from None
    if not colors:
        raise SpecSyntaxError("coloring file is empty")
    return Coloring.of(colors, r)


def read_pair_coloring(source: Union[str, Iterable[str]], r: Optional[int] = None) -> PairColoring:
    """Lines "i j c"; N is the largest index mentioned."""
    triples = []
    for number, line in _content_lines(source):
        parts = line.split()
        if len(parts) != 3:
            raise SpecSyntaxError(f"line {number}: expected 'i j c', got {line!r}")
        try:
            triples.append(tuple(int(p) for p in parts))
        except ValueError:
            raise SpecSyntaxError(f"line {number}: expected integers, got {line!r}") from None
    if not triples:
        raise SpecSyntaxError("pair coloring file is empty")
    N = max(max(i, j) for i, j, _ in triples)
    r = r if r is not None else max(c for _, _, c in triples)
    return PairColoring.from_triples(N, r, triples)
