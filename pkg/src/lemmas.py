"""Structural checks of D_{n,t}: disjointness, size, separation and domination."""

import random
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from loguru import logger

from .construction import (
    DEFAULT_MEMBER_CAP,
    ConstructionError,
    ConstructionStats,
    UndefinedEllError,
    VertexSet,
    build_D,
    cardinality_formula,
    cardinality_recurrence,
    count_D_streaming,
    flip,
    generate_blocks,
)
from .domination import (
    double_roman_labeling_from_D,
    first_undominated,
    gamma_dR_formula,
    gamma_R_formula,
    double_roman_violation,
    roman_violation,
    roman_labeling_from_D,
)
from .graph import (
    DEFAULT_VERTEX_CAP,
    GraphParams,
    are_adjacent,
    closed_neighborhood,
    format_word,
    is_extreme,
)
from .solver import distance_from_set, minimum_pairwise_distance

# Constants
DEFAULT_PAIR_THRESHOLD = 10 ** 6
DEFAULT_SAMPLE_SIZE = 10 ** 4
DEFAULT_SEED = 2024

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"
COUNTING = "counting"
STREAMING = "streaming"
WEIGHT_ONLY = "weight_only"


@dataclass
class LemmaCheck:
    name: str
    mode: str
    result: str
    counterexample: Optional[str] = None
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "mode": self.mode,
            "result": self.result,
            "counterexample": self.counterexample,
            "detail": self.detail,
        }


@dataclass
class LemmaReport:
    params: GraphParams
    checks: List[LemmaCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.result != FAIL for check in self.checks)

    @property
    def failures(self) -> List[LemmaCheck]:
        return [check for check in self.checks if check.result == FAIL]

    def get(self, name: str) -> LemmaCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "n": self.params.n,
            "t": self.params.t,
            "passed": self.passed,
            "checks": [check.to_json_dict() for check in self.checks],
        }


class LemmaVerifier:
    """Run every structural check on one instance S(K_n, t)."""

    def __init__(self, g: GraphParams, vertex_cap: int = DEFAULT_VERTEX_CAP,
                 member_cap: int = DEFAULT_MEMBER_CAP, pair_threshold: int = DEFAULT_PAIR_THRESHOLD,
                 sample_size: int = DEFAULT_SAMPLE_SIZE, seed: int = DEFAULT_SEED):
        self.g = g
        self.vertex_cap = vertex_cap
        self.member_cap = member_cap
        self.pair_threshold = pair_threshold
        self.sample_size = sample_size
        self.seed = seed

    @property
    def _within_cap(self) -> bool:
        return self.g.vertex_count <= self.vertex_cap

    def _build(self, report: LemmaReport) -> Optional[VertexSet]:
        """Build D_{n,t}, recording disjointness and the l(v) range on the way."""
        stats = ConstructionStats()
        try:
            dominators = build_D(self.g, self.member_cap, stats)
        except UndefinedEllError as e:
            report.checks.append(LemmaCheck("ell_range", EXHAUSTIVE, FAIL, detail={"error": str(e)}))
            return None
        except ConstructionError as e:
            report.checks.append(LemmaCheck("ell_range", EXHAUSTIVE, PASS))
            report.checks.append(LemmaCheck("disjointness", EXHAUSTIVE, FAIL, detail={"error": str(e)}))
            return None

        levels = [
            {"t": level.t, "blocks": level.blocks, "block_total": level.block_total, "union_size": level.union_size}
            for level in stats.levels
        ]
        report.checks.append(LemmaCheck("ell_range", EXHAUSTIVE, PASS))
        report.checks.append(LemmaCheck(
            "disjointness", EXHAUSTIVE, PASS if stats.duplicate_incidents == 0 else FAIL,
            detail={"levels": levels, "duplicate_incidents": stats.duplicate_incidents},
        ))
        return dominators

    def _check_cardinality(self, dominators: VertexSet) -> LemmaCheck:
        formula = cardinality_formula(self.g)
        recurrence = cardinality_recurrence(self.g)
        ok = len(dominators) == formula == recurrence
        return LemmaCheck("cardinality", EXHAUSTIVE, PASS if ok else FAIL, detail={
            "size": len(dominators), "formula": formula, "recurrence": recurrence,
        })

    def _stream_cardinality(self) -> LemmaCheck:
        """Count D_{n,t} block by block when it is too large to hold."""
        logger.info(f"|D| above the member cap of {self.member_cap}; counting by streaming only")
        size = count_D_streaming(self.g)
        formula = cardinality_formula(self.g)
        recurrence = cardinality_recurrence(self.g)
        return LemmaCheck("cardinality", STREAMING, PASS if size == formula == recurrence else FAIL, detail={
            "size": size, "formula": formula, "recurrence": recurrence, "member_cap": self.member_cap,
        })

    def _check_constant_entries(self, dominators: VertexSet) -> LemmaCheck:
        ones = self.g.ones()
        if ones not in dominators:
            return LemmaCheck("constant_entries", EXHAUSTIVE, FAIL, counterexample=format_word(ones),
                              detail={"missing": format_word(ones)})
        for alpha in range(2, self.g.n + 1):
            word = (alpha,) * self.g.t
            if word in dominators:
                return LemmaCheck("constant_entries", EXHAUSTIVE, FAIL, counterexample=format_word(word))
        return LemmaCheck("constant_entries", EXHAUSTIVE, PASS)

    def _check_anchoring(self) -> LemmaCheck:
        """Closed neighbors of a top-level block member keep their prefix next to the parent."""
        if self.g.t < 3:
            return LemmaCheck("anchoring", EXHAUSTIVE, SKIPPED, detail={"reason": "t < 3 has no parent level"})
        lower = GraphParams(self.g.n, self.g.t - 2)
        parents = build_D(lower, self.member_cap)
        checked = 0
        for block in generate_blocks(parents, self.g):
            allowed = set(closed_neighborhood(lower, block.parent))
            for member in block.members:
                for near in closed_neighborhood(self.g, member):
                    checked += 1
                    if near[: lower.t] not in allowed:
                        return LemmaCheck("anchoring", EXHAUSTIVE, FAIL,
                                          counterexample=f"{format_word(member)} ~ {format_word(near)}",
                                          detail={"parent": format_word(block.parent), "block": block.kind})
        return LemmaCheck("anchoring", EXHAUSTIVE, PASS, detail={"neighbors_checked": checked})

    def _check_flip(self, dominators: VertexSet) -> LemmaCheck:
        checked = 0
        for word in dominators:
            if is_extreme(word):
                continue
            image = flip(word)
            checked += 1
            if flip(image) != word or not are_adjacent(self.g, word, image):
                return LemmaCheck("flip_involution", EXHAUSTIVE, FAIL, counterexample=format_word(word))
        return LemmaCheck("flip_involution", EXHAUSTIVE, PASS, detail={"words_checked": checked})

    def _separated_set(self, dominators: VertexSet) -> VertexSet:
        """D for odd t, D* for even t."""
        return dominators if self.g.t % 2 == 1 else dominators.without(self.g.ones(), "D_star")

    def _check_distance(self, dominators: VertexSet) -> LemmaCheck:
        members = self._separated_set(dominators)
        if len(members) < 2:
            return LemmaCheck("distance_separation", EXHAUSTIVE, SKIPPED,
                              detail={"reason": "fewer than two members", "members": len(members)})
        pairs = len(members) * (len(members) - 1) // 2
        if pairs <= self.pair_threshold and self._within_cap:
            observed = minimum_pairwise_distance(self.g, members.members, self.vertex_cap)
            return LemmaCheck("distance_separation", EXHAUSTIVE, PASS if observed >= 3 else FAIL,
                              detail={"pairs": pairs, "minimum_distance": observed})
        return self._sample_distance(members, pairs)

    def _sample_distance(self, members: VertexSet, pairs: int) -> LemmaCheck:
        """Distance >= 3 iff closed neighborhoods are disjoint; test seeded random pairs."""
        rng = random.Random(self.seed)
        words = members.members
        for _ in range(self.sample_size):
            i, j = rng.sample(range(len(words)), 2)
            x, y = words[i], words[j]
            if set(closed_neighborhood(self.g, x)) & set(closed_neighborhood(self.g, y)):
                return LemmaCheck("distance_separation", SAMPLED, FAIL,
                                  counterexample=f"{format_word(x)} {format_word(y)}",
                                  detail={"pairs": pairs, "sampled": self.sample_size, "seed": self.seed})
        return LemmaCheck("distance_separation", SAMPLED, PASS,
                          detail={"pairs": pairs, "sampled": self.sample_size, "seed": self.seed})

    def _check_domination(self, dominators: VertexSet) -> LemmaCheck:
        if self._within_cap:
            missing = first_undominated(self.g, dominators, self.vertex_cap)
            return LemmaCheck("domination", EXHAUSTIVE, PASS if missing is None else FAIL,
                              counterexample=None if missing is None else format_word(missing))
        return self._count_domination(dominators)

    def _count_domination(self, dominators: VertexSet) -> LemmaCheck:
        """Disjoint closed neighborhoods whose sizes add up to n^t cover every vertex."""
        # the covered set holds up to (n+1) |D| words
        bound = (self.g.n + 1) * len(dominators)
        if bound > self.member_cap:
            return LemmaCheck("domination", COUNTING, SKIPPED, detail={
                "reason": "closed neighborhoods of D exceed the member cap",
                "neighborhood_words": bound, "member_cap": self.member_cap,
            })
        covered = set()
        overlaps = 0
        for word in dominators:
            for near in closed_neighborhood(self.g, word):
                if near in covered:
                    overlaps += 1
                else:
                    covered.add(near)
        ok = len(covered) == self.g.vertex_count
        return LemmaCheck("domination", COUNTING, PASS if ok else FAIL, detail={
            "covered": len(covered), "vertices": self.g.vertex_count, "overlaps": overlaps,
        })

    def _check_ones(self, dominators: VertexSet) -> LemmaCheck:
        """For even t, 1^t has no neighbor in D*; the observed distance is reported only."""
        if self.g.t % 2 == 1:
            return LemmaCheck("ones_isolation", EXHAUSTIVE, SKIPPED, detail={"reason": "odd t"})
        ones = self.g.ones()
        adjacent = [w for w in closed_neighborhood(self.g, ones) if w != ones and w in dominators]
        detail: Dict[str, Any] = {}
        if self._within_cap:
            star = dominators.without(ones)
            detail["minimum_distance_to_D_star"] = distance_from_set(self.g, ones, star.members, self.vertex_cap)
        if adjacent:
            return LemmaCheck("ones_isolation", EXHAUSTIVE, FAIL, counterexample=format_word(adjacent[0]),
                              detail=detail)
        return LemmaCheck("ones_isolation", EXHAUSTIVE, PASS, detail=detail)

    def _check_labelings(self) -> List[LemmaCheck]:
        checks = []
        for name, build, verify, formula in (
            ("roman_labeling", roman_labeling_from_D, roman_violation, gamma_R_formula),
            ("double_roman_labeling", double_roman_labeling_from_D, double_roman_violation, gamma_dR_formula),
        ):
            labeling = build(self.g, self.member_cap)
            detail = {"weight": labeling.weight, "formula": formula(self.g)}
            weight_ok = labeling.weight == formula(self.g)
            if not self._within_cap:
                checks.append(LemmaCheck(name, WEIGHT_ONLY, PASS if weight_ok else FAIL, detail=detail))
                continue
            violation = verify(self.g, labeling, self.vertex_cap)
            ok = weight_ok and violation is None
            checks.append(LemmaCheck(name, EXHAUSTIVE, PASS if ok else FAIL,
                                     counterexample=None if violation is None else format_word(violation),
                                     detail=detail))
        return checks

    def _log_summary(self, report: LemmaReport, execution_time: float) -> None:
        for check in report.checks:
            log = logger.info if check.result != FAIL else logger.error
            log(f"{check.name}: {check.result} ({check.mode})")
        logger.info(f"Checked S(K_{self.g.n},{self.g.t}) in {execution_time:.2f} seconds")

    def run(self) -> LemmaReport:
        """Execute every check and return the report."""
        start_time = time.time()
        logger.info(f"Checking D_{self.g.n},{self.g.t} ({self.g.vertex_count} vertices)")
        report = LemmaReport(self.g)

        if cardinality_formula(self.g) > self.member_cap:
            report.checks.append(self._stream_cardinality())
            self._log_summary(report, time.time() - start_time)
            return report

        dominators = self._build(report)
        if dominators is not None:
            report.checks.append(self._check_cardinality(dominators))
            report.checks.append(self._check_constant_entries(dominators))
            report.checks.append(self._check_anchoring())
            report.checks.append(self._check_flip(dominators))
            report.checks.append(self._check_distance(dominators))
            report.checks.append(self._check_domination(dominators))
            report.checks.append(self._check_ones(dominators))
            report.checks.extend(self._check_labelings())

        self._log_summary(report, time.time() - start_time)
        return report
