"""Implicit Sierpinski graphs S(K_n, t).

Vertices are words of length t over the labels 1..n. Adjacency, neighborhoods
and distances are computed from the words themselves; no adjacency structure
is ever materialized.
"""

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

# Constants
NATIVE_WORD_BITS = 64
NATIVE_WORD_LIMIT = 2 ** NATIVE_WORD_BITS  # vertex counts must fit an unsigned 64-bit integer
DEFAULT_VERTEX_CAP = 10 ** 6  # whole-graph operations refuse beyond this
WORD_SEPARATOR = "."

Word = Tuple[int, ...]


class InvalidParamsError(Exception):
    """Raised when (n, t) does not describe a Sierpinski graph (n >= 2, t >= 1)."""
    pass


class InvalidWordError(Exception):
    """Raised when a word has the wrong length or a label outside 1..n."""
    pass


class CapacityError(Exception):
    """Raised when an operation would exceed a vertex or member capacity."""
    pass


@dataclass(frozen=True)
class GraphParams:
    """The pair (n, t) defining S(K_n, t)."""

    n: int
    t: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not isinstance(self.t, int):
            raise InvalidParamsError(f"n and t must be integers, got n={self.n!r}, t={self.t!r}")
        if self.n < 2:
            raise InvalidParamsError(f"n must be at least 2, got {self.n}")
        if self.t < 1:
            raise InvalidParamsError(f"t must be at least 1, got {self.t}")
        # log2 screens out huge t before the exact big-integer power is formed
        if self.t * math.log2(self.n) > NATIVE_WORD_BITS + 1 or self.n ** self.t >= NATIVE_WORD_LIMIT:
            raise CapacityError(
                f"S(K_{self.n},{self.t}) has {self.n}^{self.t} vertices, "
                "which does not fit a 64-bit unsigned integer"
            )

    @property
    def vertex_count(self) -> int:
        return self.n ** self.t

    def require_within(self, vertex_cap: int, operation: str = "operation") -> None:
        """Refuse whole-graph iteration when n^t exceeds the cap."""
        if self.vertex_count > vertex_cap:
            raise CapacityError(
                f"{operation} needs all {self.vertex_count} vertices of S(K_{self.n},{self.t}), "
                f"above the vertex cap of {vertex_cap}"
            )

    def validate_word(self, word: Sequence[int]) -> Word:
        """Return the word as a tuple, checking its length and labels."""
        word = tuple(word)
        if len(word) != self.t:
            raise InvalidWordError(f"word {format_word(word)} has length {len(word)}, expected {self.t}")
        for label in word:
            if not isinstance(label, int) or not 1 <= label <= self.n:
                raise InvalidWordError(f"word {format_word(word)} has label {label!r} outside 1..{self.n}")
        return word

    def ones(self) -> Word:
        """The extreme vertex 1^t."""
        return (1,) * self.t


def format_word(word: Sequence[int]) -> str:
    """Serialize a word as dot-separated decimal labels, e.g. ``1.2.2``."""
    return WORD_SEPARATOR.join(str(label) for label in word)


def parse_word(text: str, g: Optional[GraphParams] = None) -> Word:
    """Parse a dot-separated word, validating it against ``g`` when given."""
    try:
        word = tuple(int(part) for part in text.strip().split(WORD_SEPARATOR))
    except ValueError:
        raise InvalidWordError(f"cannot parse word {text!r}")
    return g.validate_word(word) if g is not None else word


def is_extreme(v: Sequence[int]) -> bool:
    """True for constant words alpha^t, the vertices of degree n-1."""
    return all(label == v[0] for label in v)


def last_change(v: Sequence[int]) -> Optional[int]:
    """Largest 1-based index l with v_l != v_{l+1}, or None for a constant word."""
    for index in range(len(v) - 1, 0, -1):
        if v[index - 1] != v[index]:
            return index
    return None


def bridge_neighbor(v: Sequence[int]) -> Optional[Word]:
    """The neighbor of v that differs before the last position, if any.

    For a non-constant word this is v_1..v_{l-1} v_{l+1} v_l..v_l; constant
    words have no such neighbor.
    """
    ell = last_change(v)
    if ell is None:
        return None
    tail = len(v) - ell
    return tuple(v[: ell - 1]) + (v[ell],) + (v[ell - 1],) * tail


def are_adjacent(g: GraphParams, u: Sequence[int], v: Sequence[int]) -> bool:
    """Adjacency rule of S(K_n, t).

    u and v are adjacent iff for some position s they agree before s, differ at
    s, and every later position of u carries v_s while v carries u_s.
    """
    u = g.validate_word(u)
    v = g.validate_word(v)
    # only the first differing position can play the role of s
    for s in range(g.t):
        if u[s] != v[s]:
            return all(u[j] == v[s] and v[j] == u[s] for j in range(s + 1, g.t))
    return False


def neighbors(g: GraphParams, v: Sequence[int]) -> List[Word]:
    """Sorted neighbors of v, built directly in O(n*t)."""
    v = g.validate_word(v)
    prefix = v[:-1]
    result = [prefix + (alpha,) for alpha in range(1, g.n + 1) if alpha != v[-1]]
    bridge = bridge_neighbor(v)
    if bridge is not None:
        result.append(bridge)
    result.sort()
    return result


def closed_neighborhood(g: GraphParams, v: Sequence[int]) -> List[Word]:
    """N[v]: v together with its neighbors, sorted."""
    v = g.validate_word(v)
    result = neighbors(g, v)
    result.append(v)
    result.sort()
    return result


def degree(g: GraphParams, v: Sequence[int]) -> int:
    """n, or n-1 for the extreme vertices."""
    v = g.validate_word(v)
    return g.n - 1 if is_extreme(v) else g.n


def word_index(g: GraphParams, v: Sequence[int]) -> int:
    """Position of v in lexicographic order (base-n packing, 0-based)."""
    index = 0
    for label in v:
        index = index * g.n + (label - 1)
    return index


def word_from_index(g: GraphParams, index: int) -> Word:
    """Inverse of word_index: base-n digits, most significant first."""
    if not 0 <= index < g.vertex_count:
        raise InvalidWordError(f"index {index} outside 0..{g.vertex_count - 1}")
    labels = []
    for _ in range(g.t):
        index, digit = divmod(index, g.n)
        labels.append(digit + 1)
    return tuple(reversed(labels))


def iter_words(g: GraphParams) -> Iterator[Word]:
    """All n^t words in lexicographic order."""
    return itertools.product(range(1, g.n + 1), repeat=g.t)


def neighbor_indices(g: GraphParams, index: int) -> List[int]:
    """Neighbors of the vertex at ``index`` as packed indices.

    Unvalidated fast path for whole-graph scans.
    """
    v = word_from_index(g, index)
    base = index - (v[-1] - 1)
    result = [base + alpha for alpha in range(g.n) if alpha != v[-1] - 1]
    bridge = bridge_neighbor(v)
    if bridge is not None:
        result.append(word_index(g, bridge))
    return result


def distance(g: GraphParams, u: Sequence[int], v: Sequence[int],
             vertex_cap: int = DEFAULT_VERTEX_CAP) -> int:
    """Shortest-path length between u and v by breadth-first search."""
    u = g.validate_word(u)
    v = g.validate_word(v)
    if u == v:
        return 0
    g.require_within(vertex_cap, "distance")

    source = word_index(g, u)
    target = word_index(g, v)
    seen = bytearray(g.vertex_count)
    seen[source] = 1
    frontier = deque([(source, 0)])
    while frontier:
        current, depth = frontier.popleft()
        for nxt in neighbor_indices(g, current):
            if nxt == target:
                return depth + 1
            if not seen[nxt]:
                seen[nxt] = 1
                frontier.append((nxt, depth + 1))
    # S(K_n, t) is connected
    raise RuntimeError(f"no path between {format_word(u)} and {format_word(v)}")


def edge_count(g: GraphParams) -> int:
    """(n^(t+1) - n) / 2 edges."""
    return (g.n ** (g.t + 1) - g.n) // 2


def edges(g: GraphParams, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Iterator[Tuple[Word, Word]]:
    """Every edge once as (u, v) with u < v, ordered lexicographically."""
    g.require_within(vertex_cap, "edge enumeration")
    for u in iter_words(g):
        for v in neighbors(g, u):
            if u < v:
                yield u, v


def to_networkx(g: GraphParams, vertex_cap: int = DEFAULT_VERTEX_CAP):
    """Materialize the graph as a networkx Graph with dot-separated node names."""
    import networkx as nx

    g.require_within(vertex_cap, "networkx export")
    graph = nx.Graph(name=f"S_K{g.n}_{g.t}")
    graph.add_nodes_from(format_word(v) for v in iter_words(g))
    graph.add_edges_from((format_word(u), format_word(v)) for u, v in edges(g, vertex_cap))
    logger.debug(f"Built networkx graph with {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
    return graph


def to_edgelist(g: GraphParams, vertex_cap: int = DEFAULT_VERTEX_CAP) -> str:
    """One "u v" line per edge, u < v."""
    lines = [f"{format_word(u)} {format_word(v)}" for u, v in edges(g, vertex_cap)]
    return "\n".join(lines) + "\n"


def to_dot(g: GraphParams, vertex_cap: int = DEFAULT_VERTEX_CAP) -> str:
    """Undirected DOT rendering via networkx and pydot."""
    from networkx.drawing.nx_pydot import to_pydot

    return to_pydot(to_networkx(g, vertex_cap)).to_string()


def to_json_dict(g: GraphParams, vertex_cap: int = DEFAULT_VERTEX_CAP) -> Dict[str, object]:
    """Vertices and edges as dotted words."""
    g.require_within(vertex_cap, "JSON export")
    return {
        "n": g.n,
        "t": g.t,
        "vertices": [format_word(v) for v in iter_words(g)],
        "edges": [[format_word(u), format_word(v)] for u, v in edges(g, vertex_cap)],
    }


def to_json(g: GraphParams, vertex_cap: int = DEFAULT_VERTEX_CAP) -> str:
    """to_json_dict serialized with sorted keys."""
    return json.dumps(to_json_dict(g, vertex_cap), indent=2, sort_keys=True) + "\n"
