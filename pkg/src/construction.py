"""The dominating sets D_{n,t} and D*_{n,t} of S(K_n, t).

D_{n,t} is built level by level from the base D_{n,1} = {1} (odd t) or
D_{n,2} = {11, 21, ..., n1} (even t). Each member v of level t-2 is lifted
to level t through the word families E1(v), E2(v) and E3(v); the all-ones
parent is handled by its own branch.
"""

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from loguru import logger

from .graph import (
    CapacityError,
    GraphParams,
    InvalidWordError,
    Word,
    bridge_neighbor,
    format_word,
    last_change,
    parse_word,
)

# Constants
DEFAULT_MEMBER_CAP = 10 ** 7

KIND_D = "D"
KIND_D_STAR = "D_star"

BLOCK_E1 = "E1"
BLOCK_E2 = "E2"
BLOCK_E3 = "E3"
BLOCK_ONES = "ONES"  # {1^{t-2} alpha 1}, even t only
BLOCK_BASE = "BASE"


class UndefinedEllError(Exception):
    """Raised when l(v) or the flip is requested for a word where it is undefined."""
    pass


class ConstructionError(Exception):
    """Raised when generated blocks overlap, which the construction never allows."""
    pass


@dataclass(frozen=True)
class VertexSet:
    """Sorted, duplicate-free collection of words of one graph."""

    params: GraphParams
    members: Tuple[Word, ...]
    kind: str = "set"

    def __post_init__(self) -> None:
        previous = None
        for word in self.members:
            self.params.validate_word(word)
            if previous is not None and word <= previous:
                raise ValueError(f"members not strictly increasing at {format_word(word)}")
            previous = word

    @classmethod
    def from_words(cls, params: GraphParams, words: Iterable[Sequence[int]], kind: str = "set") -> "VertexSet":
        """Sort and deduplicate arbitrary words into a VertexSet."""
        return cls(params, tuple(sorted({tuple(w) for w in words})), kind)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.members)

    def __contains__(self, word: object) -> bool:
        word = tuple(word)  # type: ignore[arg-type]
        index = bisect_left(self.members, word)
        return index < len(self.members) and self.members[index] == word

    def without(self, word: Word, kind: Optional[str] = None) -> "VertexSet":
        """Copy without ``word``, optionally relabeled."""
        return VertexSet(self.params, tuple(m for m in self.members if m != word), kind or self.kind)

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "n": self.params.n,
            "t": self.params.t,
            "kind": self.kind,
            "members": [format_word(m) for m in self.members],
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, object]) -> "VertexSet":
        params = GraphParams(int(data["n"]), int(data["t"]))
        words = [parse_word(str(text), params) for text in data["members"]]  # type: ignore[union-attr]
        return cls.from_words(params, words, str(data.get("kind", "set")))


class Block(NamedTuple):
    """One generated family of level-t words and the level-(t-2) parent it came from."""

    kind: str
    parent: Optional[Word]
    members: Tuple[Word, ...]


@dataclass
class LevelStats:
    """Block count and sizes of one construction level."""

    t: int
    blocks: int
    block_total: int
    union_size: int


@dataclass
class ConstructionStats:
    """Per-level bookkeeping of a build: block sizes must add up to the union size."""

    levels: List[LevelStats] = field(default_factory=list)

    @property
    def duplicate_incidents(self) -> int:
        return sum(level.block_total - level.union_size for level in self.levels)


def ell(v: Sequence[int]) -> int:
    """Largest 1-based index l with v_l != v_{l+1}."""
    if len(v) < 2:
        raise UndefinedEllError(f"l(v) needs a word of length at least 2, got {format_word(v)}")
    index = last_change(v)
    if index is None:
        raise UndefinedEllError(f"l(v) is undefined for the constant word {format_word(v)}")
    return index


def flip(v: Sequence[int]) -> Word:
    """v^flip = v_1..v_{l-1} v_{l+1} v_l..v_l, the bridge neighbor of v."""
    result = bridge_neighbor(tuple(v))
    if result is None:
        raise UndefinedEllError(f"flip is undefined for the constant word {format_word(v)}")
    return result


def _parent(v: Sequence[int], g: GraphParams) -> Word:
    if g.t < 3:
        raise InvalidWordError(f"E-blocks need t >= 3, got t={g.t}")
    v = tuple(v)
    if len(v) != g.t - 2:
        raise InvalidWordError(f"parent {format_word(v)} must have length t-2={g.t - 2}")
    return GraphParams(g.n, g.t - 2).validate_word(v)


def e1(v: Sequence[int], g: GraphParams) -> List[Word]:
    """E1(v) = {v alpha alpha : alpha in [n]}."""
    v = _parent(v, g)
    return [v + (alpha, alpha) for alpha in range(1, g.n + 1)]


def e2(v: Sequence[int], g: GraphParams) -> List[Word]:
    """E2(v) = {v_1..v_{t-3} alpha beta v_{t-2} : alpha, beta != v_{t-2}}."""
    v = _parent(v, g)
    last = v[-1]
    others = [label for label in range(1, g.n + 1) if label != last]
    return [v[:-1] + (alpha, beta, last) for alpha in others for beta in others]


def e3(v: Sequence[int], g: GraphParams) -> List[Word]:
    """E3(v) = {v_1..v_{l-1} v_{l+1} v_l^{t-l-2} alpha v_l : alpha != v_l}."""
    v = _parent(v, g)
    index = ell(v)
    if not 1 <= index <= g.t - 3:
        raise UndefinedEllError(f"l({format_word(v)}) = {index} is outside [1, {g.t - 3}]")
    pivot = v[index - 1]
    head = v[: index - 1] + (v[index],) + (pivot,) * (g.t - index - 2)
    return [head + (alpha, pivot) for alpha in range(1, g.n + 1) if alpha != pivot]


def ones_block(g: GraphParams) -> List[Word]:
    """{1^{t-2} alpha 1 : alpha in [n]}, replacing E1/E2 of 1^{t-2} for even t."""
    stem = (1,) * (g.t - 2)
    return [stem + (alpha, 1) for alpha in range(1, g.n + 1)]


def base_members(g: GraphParams) -> List[Word]:
    """D_{n,1} = {1} and D_{n,2} = {11, 21, ..., n1}."""
    if g.t == 1:
        return [(1,)]
    if g.t == 2:
        return [(alpha, 1) for alpha in range(1, g.n + 1)]
    raise ValueError(f"no base level for t={g.t}")


def generate_blocks(parents: Iterable[Word], g: GraphParams) -> Iterator[Block]:
    """Blocks of level g.t generated from the members of level g.t - 2."""
    all_ones = (1,) * (g.t - 2)
    odd = g.t % 2 == 1
    for parent in parents:
        if parent == all_ones:
            if odd:
                yield Block(BLOCK_E1, parent, tuple(e1(parent, g)))
                yield Block(BLOCK_E2, parent, tuple(e2(parent, g)))
            else:
                yield Block(BLOCK_ONES, parent, tuple(ones_block(g)))
            continue
        yield Block(BLOCK_E1, parent, tuple(e1(parent, g)))
        yield Block(BLOCK_E2, parent, tuple(e2(parent, g)))
        yield Block(BLOCK_E3, parent, tuple(e3(parent, g)))


def cardinality_formula(g: GraphParams) -> int:
    """|D_{n,t}| = ceil(n^t / (n+1)), exact integer arithmetic."""
    return -(-g.vertex_count // (g.n + 1))


def cardinality_recurrence(g: GraphParams) -> int:
    """|D_{n,t}| from the base sizes and the odd/even recurrences.

    odd t:  n + (n-1)^2 + n^2 (|D_{n,t-2}| - 1)
    even t: n + n^2 (|D_{n,t-2}| - 1)
    """
    n = g.n
    size = 1 if g.t % 2 == 1 else n
    for _ in range(3 if g.t % 2 == 1 else 4, g.t + 1, 2):
        if g.t % 2 == 1:
            size = n + (n - 1) ** 2 + n * n * (size - 1)
        else:
            size = n + n * n * (size - 1)
    return size


def _levels(g: GraphParams) -> range:
    start = 1 if g.t % 2 == 1 else 2
    return range(start, g.t + 1, 2)


def build_D(g: GraphParams, member_cap: int = DEFAULT_MEMBER_CAP,
            stats: Optional[ConstructionStats] = None) -> VertexSet:
    """Materialize D_{n,t}, iterating from the base level up to t in steps of 2."""
    expected = cardinality_formula(g)
    if expected > member_cap:
        raise CapacityError(f"|D_{g.n},{g.t}| = {expected} exceeds the member cap of {member_cap}")

    members: List[Word] = []
    for level_t in _levels(g):
        level = GraphParams(g.n, level_t)
        if level_t <= 2:
            members = base_members(level)
            if stats is not None:
                stats.levels.append(LevelStats(level_t, 1, len(members), len(members)))
            continue

        union = set()
        block_count = 0
        block_total = 0
        for block in generate_blocks(members, level):
            block_count += 1
            block_total += len(block.members)
            for word in block.members:
                if word in union:
                    raise ConstructionError(
                        f"{format_word(word)} from block {block.kind} of parent "
                        f"{format_word(block.parent or ())} already generated at level t={level_t}"
                    )
                union.add(word)
        if stats is not None:
            stats.levels.append(LevelStats(level_t, block_count, block_total, len(union)))
        members = sorted(union)
        logger.debug(f"Level t={level_t}: {block_count} blocks, {len(members)} members")

    return VertexSet(g, tuple(members), KIND_D)


def build_D_star(g: GraphParams, member_cap: int = DEFAULT_MEMBER_CAP) -> VertexSet:
    """D*_{n,t} = D_{n,t} without 1^t."""
    return build_D(g, member_cap).without(g.ones(), KIND_D_STAR)


def iter_D(g: GraphParams) -> Iterator[Word]:
    """Stream the members of D_{n,t} without materializing any level.

    Order follows the recursion, not lexicographic order; use it for size-only
    queries beyond the member cap.
    """
    if g.t <= 2:
        yield from base_members(g)
        return
    for block in generate_blocks(iter_D(GraphParams(g.n, g.t - 2)), g):
        yield from block.members


def count_D_streaming(g: GraphParams) -> int:
    """|D_{n,t}| from iter_D; memory stays O(t)."""
    return sum(1 for _ in iter_D(g))
