"""Exact branch-and-bound oracle for gamma, gamma_R and gamma_dR on small instances.

The search always branches on the lowest-index vertex that is not yet
satisfied and tries, in lexicographic order, every placement that could
satisfy it in some optimal labeling. Partial assignments only ever grow, so
every branch ends in a valid labeling.
"""

import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger

from .construction import VertexSet
from .domination import (
    Labeling,
    LabelingMode,
    Variant,
    is_dominating,
    is_double_roman,
    is_roman,
)
from .graph import (
    DEFAULT_VERTEX_CAP,
    CapacityError,
    GraphParams,
    Word,
    format_word,
    neighbor_indices,
    word_from_index,
    word_index,
)

# Constants
DEFAULT_SOLVER_VERTEX_CAP = 64
BUDGET_CHECK_INTERVAL = 1024  # nodes between clock reads

# cost of placing a value, per variant
PLACEMENT_COST: Dict[Variant, Dict[int, int]] = {
    Variant.PLAIN: {2: 1},
    Variant.ROMAN: {1: 1, 2: 2},
    Variant.DOUBLE_ROMAN: {1: 1, 2: 2, 3: 3},
}


class LowerBoundMode(str, Enum):
    DEGREE_BOUND = "degree_bound"
    NONE = "none"


class SolverCapError(CapacityError):
    """Raised when n^t exceeds the solver's vertex cap."""
    pass


class SolverBudgetExceeded(Exception):
    """Raised when the time budget runs out; carries the best incumbent and the proven bound."""

    def __init__(self, incumbent: int, lower_bound: int, nodes: int):
        super().__init__(
            f"time budget exhausted after {nodes} nodes: optimum lies in [{lower_bound}, {incumbent}]"
        )
        self.incumbent = incumbent
        self.lower_bound = lower_bound
        self.nodes = nodes


class SolverError(Exception):
    """Raised when the returned witness fails full re-verification."""
    pass


class SolverInputError(Exception):
    """Raised for inputs the solver cannot work with, e.g. fewer than two members."""
    pass


@dataclass(frozen=True)
class SolverConfig:
    variant: Variant = Variant.PLAIN
    restrict_values: bool = True  # double Roman only: search {0, 2, 3}
    vertex_cap: int = DEFAULT_SOLVER_VERTEX_CAP
    time_budget: Optional[float] = None  # seconds
    lower_bound_mode: LowerBoundMode = LowerBoundMode.DEGREE_BOUND
    workers: int = 1
    trace: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "lower_bound_mode", LowerBoundMode(self.lower_bound_mode))
        if self.vertex_cap < 1:
            raise ValueError(f"vertex_cap must be at least 1, got {self.vertex_cap}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")


@dataclass
class SolverResult:
    value: int
    witness: Union[VertexSet, Labeling]
    nodes: int
    lower_bound: int
    elapsed: float


class _Incumbent:
    """Best solution so far, shared by all workers; only ever decreases."""

    def __init__(self, weight: int, assignment: Dict[int, int]):
        self._lock = threading.Lock()
        self.weight = weight
        self.assignment = assignment

    def offer(self, weight: int, assignment: Dict[int, int]) -> bool:
        with self._lock:
            if weight < self.weight:
                self.weight = weight
                self.assignment = assignment
                return True
            return False


class _Search:
    """Depth-first branch and bound over one variant on a packed-index graph."""

    def __init__(self, g: GraphParams, cfg: SolverConfig, incumbent: _Incumbent,
                 root_bound: int, deadline: Optional[float]):
        self.g = g
        self.cfg = cfg
        self.variant = cfg.variant
        self.costs = PLACEMENT_COST[cfg.variant]
        self.allow_ones = self.variant is Variant.ROMAN or (
            self.variant is Variant.DOUBLE_ROMAN and not cfg.restrict_values
        )
        self.incumbent = incumbent
        self.root_bound = root_bound
        self.deadline = deadline
        self.nodes = 0
        self.size = g.vertex_count
        self.adjacent: List[List[int]] = [sorted(neighbor_indices(g, i)) for i in range(self.size)]
        self.closed: List[List[int]] = [sorted(nbrs + [i]) for i, nbrs in enumerate(self.adjacent)]
        self.label = [0] * self.size
        self.twos = [0] * self.size  # open-neighborhood count of 2s
        self.threes = [0] * self.size
        self.weight = 0

    # state updates

    def place(self, vertex: int, value: int) -> None:
        self.label[vertex] = value
        self.weight += self.costs[value]
        if value == 2:
            for other in self.adjacent[vertex]:
                self.twos[other] += 1
        elif value == 3:
            for other in self.adjacent[vertex]:
                self.threes[other] += 1

    def unplace(self, vertex: int, value: int) -> None:
        self.label[vertex] = 0
        self.weight -= self.costs[value]
        if value == 2:
            for other in self.adjacent[vertex]:
                self.twos[other] -= 1
        elif value == 3:
            for other in self.adjacent[vertex]:
                self.threes[other] -= 1

    # bounds

    def _scan(self) -> Tuple[int, int]:
        """Lowest unsatisfied vertex (-1 if none) and the remaining-weight bound."""
        first = -1
        demand = 0
        label, twos, threes = self.label, self.twos, self.threes
        double = self.variant is Variant.DOUBLE_ROMAN
        for i in range(self.size):
            value = label[i]
            if double:
                if value >= 2 or (threes[i] and value <= 1) or (value == 0 and twos[i] >= 2):
                    continue
                # shares scaled by 2(n+1): 6 for a vertex still needing a full guard, 3 for half
                demand += 3 if value == 0 and twos[i] == 1 else 6
            else:
                if value or twos[i]:
                    continue
                demand += 1
            if first < 0:
                first = i
        if first < 0 or self.cfg.lower_bound_mode is LowerBoundMode.NONE:
            return first, 0
        reach = self.g.n + 1
        if self.variant is Variant.PLAIN:
            return first, -(-demand // reach)
        if self.variant is Variant.ROMAN:
            return first, -(-2 * demand // reach)
        return first, -(-demand // (2 * reach))

    def choices(self, vertex: int) -> List[Tuple[int, int]]:
        label = self.label
        if label[vertex] == 1:
            # a 1 in double Roman needs a 3 next to it
            return [(w, 3) for w in self.adjacent[vertex] if label[w] == 0]
        options: List[Tuple[int, int]] = []
        for w in self.closed[vertex]:
            if label[w]:
                continue
            if self.variant is Variant.DOUBLE_ROMAN:
                options.append((w, 3))
            options.append((w, 2))
        if self.allow_ones:
            options.append((vertex, 1))
        return options

    # search

    def _check_budget(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SolverBudgetExceeded(self.incumbent.weight, self.root_bound, self.nodes)

    def done(self) -> bool:
        return self.incumbent.weight <= self.root_bound

    def descend(self, depth: int = 0) -> None:
        self.nodes += 1
        if self.nodes % BUDGET_CHECK_INTERVAL == 0:
            self._check_budget()
        if self.done():
            return
        vertex, bound = self._scan()
        if vertex < 0:
            if self.incumbent.offer(self.weight, {i: v for i, v in enumerate(self.label) if v}):
                logger.debug(f"New incumbent {self.weight} after {self.nodes} nodes")
            return
        if self.weight + bound >= self.incumbent.weight:
            return
        for w, value in self.choices(vertex):
            if self.cfg.trace:
                logger.trace(
                    f"depth={depth} choice={format_word(word_from_index(self.g, w))}:{value} "
                    f"bound={self.weight + bound} incumbent={self.incumbent.weight}"
                )
            self.place(w, value)
            self.descend(depth + 1)
            self.unplace(w, value)
            if self.done():
                return

    def root_choices(self) -> List[Tuple[int, int]]:
        vertex, _ = self._scan()
        return self.choices(vertex) if vertex >= 0 else []


def _trivial_assignment(g: GraphParams, variant: Variant) -> Tuple[int, Dict[int, int]]:
    """Every vertex a dominator (plain), a 1 (Roman) or a 2 (double Roman)."""
    value = {Variant.PLAIN: 2, Variant.ROMAN: 1, Variant.DOUBLE_ROMAN: 2}[variant]
    assignment = {i: value for i in range(g.vertex_count)}
    return sum(PLACEMENT_COST[variant][value] for _ in assignment), assignment


def _root_bound(g: GraphParams, cfg: SolverConfig) -> int:
    if cfg.lower_bound_mode is LowerBoundMode.NONE:
        return 0
    scout = _Search(g, cfg, _Incumbent(0, {}), 0, None)
    _, bound = scout._scan()
    return bound


def _witness(g: GraphParams, variant: Variant, assignment: Dict[int, int]) -> Union[VertexSet, Labeling]:
    words = {word_from_index(g, i): value for i, value in assignment.items()}
    if variant is Variant.PLAIN:
        return VertexSet.from_words(g, words, "dominating_set")
    mode = LabelingMode.ROMAN if variant is Variant.ROMAN else LabelingMode.DOUBLE_ROMAN
    return Labeling(g, mode, words)


def _verify_witness(g: GraphParams, variant: Variant, witness: Union[VertexSet, Labeling]) -> None:
    if variant is Variant.PLAIN:
        valid = is_dominating(g, witness, g.vertex_count)  # type: ignore[arg-type]
    elif variant is Variant.ROMAN:
        valid = is_roman(g, witness, g.vertex_count)  # type: ignore[arg-type]
    else:
        valid = is_double_roman(g, witness, g.vertex_count)  # type: ignore[arg-type]
    if not valid:
        raise SolverError(f"{variant.value} witness for S(K_{g.n},{g.t}) failed re-verification")


def solve(g: GraphParams, cfg: SolverConfig) -> SolverResult:
    """Exact optimum and an optimal witness for the configured variant."""
    if g.vertex_count > cfg.vertex_cap:
        raise SolverCapError(
            f"S(K_{g.n},{g.t}) has {g.vertex_count} vertices, above the solver cap of {cfg.vertex_cap}"
        )
    start = time.monotonic()
    deadline = start + cfg.time_budget if cfg.time_budget is not None else None
    root_bound = _root_bound(g, cfg)
    incumbent = _Incumbent(*_trivial_assignment(g, cfg.variant))
    logger.info(f"Solving {cfg.variant.value} on S(K_{g.n},{g.t}) ({g.vertex_count} vertices, root bound {root_bound})")

    if cfg.workers == 1:
        search = _Search(g, cfg, incumbent, root_bound, deadline)
        search.descend()
        nodes = search.nodes
    else:
        nodes = _solve_parallel(g, cfg, incumbent, root_bound, deadline)

    witness = _witness(g, cfg.variant, incumbent.assignment)
    _verify_witness(g, cfg.variant, witness)
    elapsed = time.monotonic() - start
    logger.info(f"Optimum {incumbent.weight} after {nodes} nodes in {elapsed:.2f} seconds")
    return SolverResult(incumbent.weight, witness, nodes, root_bound, elapsed)


def _solve_parallel(g: GraphParams, cfg: SolverConfig, incumbent: _Incumbent,
                    root_bound: int, deadline: Optional[float]) -> int:
    """Explore the root branches on a thread pool sharing one incumbent."""
    root = _Search(g, cfg, incumbent, root_bound, deadline)
    root.nodes = 1
    branches = root.root_choices()

    def explore(choice: Tuple[int, int]) -> int:
        search = _Search(g, cfg, incumbent, root_bound, deadline)
        search.place(*choice)
        search.descend(depth=1)
        return search.nodes

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return root.nodes + sum(pool.map(explore, branches))


def _solve_value(g: GraphParams, cfg: Optional[SolverConfig], variant: Variant) -> int:
    cfg = replace(cfg, variant=variant) if cfg is not None else SolverConfig(variant=variant)
    return solve(g, cfg).value


def exact_gamma(g: GraphParams, cfg: Optional[SolverConfig] = None) -> int:
    return _solve_value(g, cfg, Variant.PLAIN)


def exact_gamma_R(g: GraphParams, cfg: Optional[SolverConfig] = None) -> int:
    return _solve_value(g, cfg, Variant.ROMAN)


def exact_gamma_dR(g: GraphParams, cfg: Optional[SolverConfig] = None) -> int:
    return _solve_value(g, cfg, Variant.DOUBLE_ROMAN)


# Distances between members of a set

def minimum_pairwise_distance(g: GraphParams, s: Sequence[Sequence[int]],
                              vertex_cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Smallest distance between two distinct members, by multi-source BFS.

    Every vertex is claimed by its nearest source; the closest pair is joined
    across some edge whose endpoints belong to different sources.
    """
    sources = sorted({word_index(g, g.validate_word(w)) for w in s})
    if len(sources) < 2:
        raise SolverInputError("minimum pairwise distance needs at least two distinct members")
    g.require_within(vertex_cap, "minimum pairwise distance")

    dist = [-1] * g.vertex_count
    owner = [-1] * g.vertex_count
    frontier = deque()
    for source in sources:
        dist[source] = 0
        owner[source] = source
        frontier.append(source)
    while frontier:
        current = frontier.popleft()
        for nxt in neighbor_indices(g, current):
            if dist[nxt] < 0:
                dist[nxt] = dist[current] + 1
                owner[nxt] = owner[current]
                frontier.append(nxt)

    best = None
    for x in range(g.vertex_count):
        for y in neighbor_indices(g, x):
            if y > x and owner[x] != owner[y]:
                candidate = dist[x] + dist[y] + 1
                if best is None or candidate < best:
                    best = candidate
    return best  # type: ignore[return-value]


def distance_from_set(g: GraphParams, source: Sequence[int], s: Sequence[Sequence[int]],
                      vertex_cap: int = DEFAULT_VERTEX_CAP) -> Optional[int]:
    """Distance from ``source`` to the nearest other member of ``s`` (None if there is none)."""
    source = g.validate_word(source)
    targets = {word_index(g, g.validate_word(w)) for w in s} - {word_index(g, source)}
    if not targets:
        return None
    g.require_within(vertex_cap, "distance from set")
    start = word_index(g, source)
    seen = bytearray(g.vertex_count)
    seen[start] = 1
    frontier = deque([(start, 0)])
    while frontier:
        current, depth = frontier.popleft()
        for nxt in neighbor_indices(g, current):
            if nxt in targets:
                return depth + 1
            if not seen[nxt]:
                seen[nxt] = 1
                frontier.append((nxt, depth + 1))
    return None
