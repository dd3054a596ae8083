"""Domination, Roman domination and double Roman domination on S(K_n, t).

Verifiers scan all n^t vertices through packed indices; labelings are stored
sparsely with an implicit 0 for unlisted words.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence

from loguru import logger

from .construction import (
    DEFAULT_MEMBER_CAP,
    ConstructionError,
    VertexSet,
    build_D,
    cardinality_formula,
)
from .graph import (
    DEFAULT_VERTEX_CAP,
    GraphParams,
    Word,
    closed_neighborhood,
    format_word,
    iter_words,
    neighbor_indices,
    neighbors,
    parse_word,
    word_from_index,
    word_index,
)


class Variant(str, Enum):
    PLAIN = "plain"
    ROMAN = "roman"
    DOUBLE_ROMAN = "double_roman"


class LabelingMode(str, Enum):
    ROMAN = "roman"
    DOUBLE_ROMAN = "double_roman"

    @property
    def max_value(self) -> int:
        return 2 if self is LabelingMode.ROMAN else 3


class LabelingModeError(Exception):
    """Raised when a verifier receives a labeling of the other mode."""
    pass


class InvalidLabelingError(Exception):
    """Raised when a labeling stores a zero or a value outside its mode's range."""
    pass


@dataclass(frozen=True)
class Labeling:
    """A map Word -> value with implicit 0 for unlisted words."""

    params: GraphParams
    mode: LabelingMode
    values: Mapping[Word, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", LabelingMode(self.mode))
        for word, value in self.values.items():
            self.params.validate_word(word)
            if not isinstance(value, int) or not 1 <= value <= self.mode.max_value:
                raise InvalidLabelingError(
                    f"{format_word(word)} -> {value!r} is not a stored {self.mode.value} value "
                    f"(expected 1..{self.mode.max_value})"
                )

    @classmethod
    def from_assignments(cls, params: GraphParams, mode: LabelingMode,
                         assignments: Iterable) -> "Labeling":
        """Build from (word, value) pairs, dropping zeros."""
        values = {tuple(word): value for word, value in assignments if value != 0}
        return cls(params, LabelingMode(mode), values)

    @classmethod
    def uniform(cls, params: GraphParams, mode: LabelingMode, value: int,
                vertex_cap: int = DEFAULT_VERTEX_CAP) -> "Labeling":
        params.require_within(vertex_cap, "uniform labeling")
        return cls.from_assignments(params, mode, ((w, value) for w in iter_words(params)))

    def value(self, word: Sequence[int]) -> int:
        return self.values.get(tuple(word), 0)

    @property
    def weight(self) -> int:
        return sum(self.values.values())

    def preimage(self, value: int) -> VertexSet:
        """V_k = f^{-1}(k) for a nonzero k."""
        if value == 0:
            raise ValueError("V_0 is implicit; only nonzero preimages are stored")
        return VertexSet.from_words(self.params, (w for w, v in self.values.items() if v == value), f"V{value}")

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "n": self.params.n,
            "t": self.params.t,
            "mode": self.mode.value,
            "weight": self.weight,
            "assignments": {format_word(w): self.values[w] for w in sorted(self.values)},
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, object]) -> "Labeling":
        params = GraphParams(int(data["n"]), int(data["t"]))
        assignments = data.get("assignments", {})
        pairs = [(parse_word(key, params), int(value)) for key, value in assignments.items()]  # type: ignore[union-attr]
        labeling = cls.from_assignments(params, LabelingMode(data["mode"]), pairs)
        if "weight" in data and int(data["weight"]) != labeling.weight:
            raise InvalidLabelingError(f"stated weight {data['weight']} differs from computed {labeling.weight}")
        return labeling


@dataclass
class DominationReport:
    """Closed form versus constructed witness versus (optionally) the exact optimum."""

    params: GraphParams
    variant: Variant
    formula_value: int
    witness_weight: Optional[int] = None
    exact_value: Optional[int] = None
    lower_bound: Optional[int] = None
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "n": self.params.n,
            "t": self.params.t,
            "variant": self.variant.value,
            "formula_value": self.formula_value,
            "witness_weight": self.witness_weight,
            "exact_value": self.exact_value,
            "lower_bound": self.lower_bound,
            "checks": dict(sorted(self.checks.items())),
            "passed": self.passed,
        }


# Verifiers

def _check_mode(f: Labeling, expected: LabelingMode) -> None:
    """Refuse a labeling of the other mode."""
    if f.mode is not expected:
        raise LabelingModeError(f"expected a {expected.value} labeling, got {f.mode.value}")


def _packed_values(g: GraphParams, f: Labeling) -> bytearray:
    packed = bytearray(g.vertex_count)
    for word, value in f.values.items():
        packed[word_index(g, word)] = value
    return packed


def first_undominated(g: GraphParams, s: Iterable[Sequence[int]],
                      vertex_cap: int = DEFAULT_VERTEX_CAP) -> Optional[Word]:
    """The lexicographically first word outside every N[v], v in s."""
    g.require_within(vertex_cap, "domination check")
    covered = bytearray(g.vertex_count)
    for member in s:
        index = word_index(g, g.validate_word(member))
        covered[index] = 1
        for other in neighbor_indices(g, index):
            covered[other] = 1
    missing = covered.find(0)
    return None if missing < 0 else word_from_index(g, missing)


def first_unseparated(g: GraphParams, s: VertexSet) -> Optional[Word]:
    """First member of a D*-style set that breaks separation.

    Members must stay off N[1^t] and keep pairwise disjoint closed
    neighborhoods, which is distance >= 3. Word-local, so no vertex cap applies.
    """
    for word in closed_neighborhood(g, g.ones()):
        if word in s:
            return word
    claimed = set()
    for member in s:
        near = closed_neighborhood(g, member)
        if claimed.intersection(near):
            return member
        claimed.update(near)
    return None


def is_dominating(g: GraphParams, s: Iterable[Sequence[int]],
                  vertex_cap: int = DEFAULT_VERTEX_CAP) -> bool:
    return first_undominated(g, s, vertex_cap) is None


def roman_violation(g: GraphParams, f: Labeling,
                    vertex_cap: int = DEFAULT_VERTEX_CAP) -> Optional[Word]:
    """First 0-valued word without a 2-valued neighbor."""
    _check_mode(f, LabelingMode.ROMAN)
    g.require_within(vertex_cap, "Roman check")
    values = _packed_values(g, f)
    guarded = bytearray(g.vertex_count)
    for word, value in f.values.items():
        if value == 2:
            for other in neighbor_indices(g, word_index(g, word)):
                guarded[other] = 1
    for index in range(g.vertex_count):
        if values[index] == 0 and not guarded[index]:
            return word_from_index(g, index)
    return None


def is_roman(g: GraphParams, f: Labeling, vertex_cap: int = DEFAULT_VERTEX_CAP) -> bool:
    return roman_violation(g, f, vertex_cap) is None


def double_roman_violation(g: GraphParams, f: Labeling,
                           vertex_cap: int = DEFAULT_VERTEX_CAP) -> Optional[Word]:
    """First word breaking a double Roman clause.

    A 0 needs a 3-neighbor or two 2-neighbors; a 1 needs a neighbor valued at least 3.
    """
    _check_mode(f, LabelingMode.DOUBLE_ROMAN)
    g.require_within(vertex_cap, "double Roman check")
    values = _packed_values(g, f)
    has_three = bytearray(g.vertex_count)
    twos = bytearray(g.vertex_count)
    for word, value in f.values.items():
        if value < 2:
            continue
        for other in neighbor_indices(g, word_index(g, word)):
            if value == 3:
                has_three[other] = 1
            elif twos[other] < 2:
                twos[other] += 1
    for index in range(g.vertex_count):
        value = values[index]
        if value == 0 and not has_three[index] and twos[index] < 2:
            return word_from_index(g, index)
        if value == 1 and not has_three[index]:
            return word_from_index(g, index)
    return None


def is_double_roman(g: GraphParams, f: Labeling, vertex_cap: int = DEFAULT_VERTEX_CAP) -> bool:
    return double_roman_violation(g, f, vertex_cap) is None


# Labelings built from D_{n,t}

def _labeling_from_D(g: GraphParams, mode: LabelingMode, high: int, member_cap: int) -> Labeling:
    dominators = build_D(g, member_cap)
    ones = g.ones()
    values = {word: high for word in dominators}
    if g.t % 2 == 0:
        # 1^t has no neighbor in D*, so it guards only itself and drops by one
        adjacent = [w for w in neighbors(g, ones) if w in dominators]
        if adjacent:
            raise ConstructionError(
                f"1^t is adjacent to D* member {format_word(adjacent[0])} in S(K_{g.n},{g.t})"
            )
        values[ones] = high - 1
    labeling = Labeling(g, mode, values)
    logger.debug(f"Built {mode.value} labeling of S(K_{g.n},{g.t}) with weight {labeling.weight}")
    return labeling


def roman_labeling_from_D(g: GraphParams, member_cap: int = DEFAULT_MEMBER_CAP) -> Labeling:
    """2 on D (odd t) or on D* with 1 on 1^t (even t)."""
    return _labeling_from_D(g, LabelingMode.ROMAN, 2, member_cap)


def double_roman_labeling_from_D(g: GraphParams, member_cap: int = DEFAULT_MEMBER_CAP) -> Labeling:
    """3 on D (odd t) or on D* with 2 on 1^t (even t)."""
    return _labeling_from_D(g, LabelingMode.DOUBLE_ROMAN, 3, member_cap)


# Closed forms and bounds

def gamma_formula(g: GraphParams) -> int:
    """gamma(S(K_n,t)) = |D_{n,t}|."""
    return cardinality_formula(g)


def gamma_R_formula(g: GraphParams) -> int:
    """2|D|, less one for even t."""
    return 2 * cardinality_formula(g) - (1 if g.t % 2 == 0 else 0)


def gamma_dR_formula(g: GraphParams) -> int:
    """3|D|, less one for even t."""
    return 3 * cardinality_formula(g) - (1 if g.t % 2 == 0 else 0)


def formula_for(g: GraphParams, variant: Variant) -> int:
    return {
        Variant.PLAIN: gamma_formula,
        Variant.ROMAN: gamma_R_formula,
        Variant.DOUBLE_ROMAN: gamma_dR_formula,
    }[Variant(variant)](g)


def roman_upper_bound_previous(g: GraphParams) -> int:
    """Earlier upper bound on gamma_R: (2n^t+2)/(n+1) for odd t, (2n^t+n-1)/(n+1) for even t."""
    numerator = 2 * g.vertex_count + (2 if g.t % 2 == 1 else g.n - 1)
    quotient, remainder = divmod(numerator, g.n + 1)
    if remainder:
        raise ArithmeticError(f"{numerator} is not divisible by {g.n + 1}")
    return quotient


def domination_lower_bound(g: GraphParams) -> int:
    """Each closed neighborhood has at most n+1 vertices."""
    return -(-g.vertex_count // (g.n + 1))


def roman_lower_bound(g: GraphParams) -> int:
    """min |V1| + 2|V2| subject to |V1| + (n+1)|V2| >= n^t over the integers."""
    twos, rest = divmod(g.vertex_count, g.n + 1)
    return min(2 * twos + rest, 2 * (twos + 1))


def double_roman_lower_bound(g: GraphParams) -> int:
    """ceil(3 n^t / (n+1)): a 3 guards at most n+1 vertices and a 2 is never cheaper per vertex."""
    return -(-3 * g.vertex_count // (g.n + 1))


def lower_bound_for(g: GraphParams, variant: Variant) -> int:
    return {
        Variant.PLAIN: domination_lower_bound,
        Variant.ROMAN: roman_lower_bound,
        Variant.DOUBLE_ROMAN: double_roman_lower_bound,
    }[Variant(variant)](g)


def build_report(g: GraphParams, variant: Variant, exact_value: Optional[int] = None,
                 vertex_cap: int = DEFAULT_VERTEX_CAP,
                 member_cap: int = DEFAULT_MEMBER_CAP) -> DominationReport:
    """Compare the closed form with the constructed witness and an optional exact value."""
    variant = Variant(variant)
    report = DominationReport(
        params=g,
        variant=variant,
        formula_value=formula_for(g, variant),
        exact_value=exact_value,
        lower_bound=lower_bound_for(g, variant),
    )
    within_cap = g.vertex_count <= vertex_cap
    if variant is Variant.PLAIN:
        witness = build_D(g, member_cap)
        report.witness_weight = len(witness)
        if within_cap:
            report.checks["witness_valid"] = is_dominating(g, witness, vertex_cap)
    elif variant is Variant.ROMAN:
        labeling = roman_labeling_from_D(g, member_cap)
        report.witness_weight = labeling.weight
        if within_cap:
            report.checks["witness_valid"] = is_roman(g, labeling, vertex_cap)
    else:
        labeling = double_roman_labeling_from_D(g, member_cap)
        report.witness_weight = labeling.weight
        if within_cap:
            report.checks["witness_valid"] = is_double_roman(g, labeling, vertex_cap)

    report.checks["witness_matches_formula"] = report.witness_weight == report.formula_value
    report.checks["lower_bound_sound"] = report.lower_bound <= report.formula_value
    if exact_value is not None:
        report.checks["exact_matches_formula"] = exact_value == report.formula_value
    return report
