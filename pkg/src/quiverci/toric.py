"""Relations between cycle invariants: strong/weak cycles, equivalence of
partitions, E(U), and the minimal binomial generating set.

E(U) is computed two independent ways. The primary route classifies the
cycles contained in U into chain-equivalence classes (consecutive sums
staying inside U) and counts classes minus one. The oracle route builds
the fiber graph on all partitions of U, joining partitions that share a
cycle, and counts components minus one. The routes must agree; tests and
the corpus runner enforce it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping

from .core import QuiverSetting, is_strongly_connected
from .cycles import (
    CyclePartition,
    PrimitiveCycle,
    contained_cycles,
    f_value,
    greedy_partition,
    is_eulerian,
    iter_partitions,
    primitive_cycles,
)
from .errors import DomainError, ResourceLimitError

__all__ = [
    "classify_cycle",
    "sim_u_classes",
    "e_value",
    "e_value_fiber",
    "weak_cycle_check",
    "min_generators",
    "is_ci_toric",
    "BinomialRelation",
    "MultisetReport",
    "GeneratorReport",
    "multiset_key",
]

DEFAULT_FIBER_CAP = 200_000


def multiset_key(multiset: Mapping[str, int]) -> tuple[tuple[str, int], ...]:
    return tuple(sorted((aid, m) for aid, m in multiset.items() if m))


def _contains(big: Mapping[str, int], small: Mapping[str, int]) -> bool:
    return all(big.get(aid, 0) >= m for aid, m in small.items())


def _single_cycle_of(cycle_sets: Mapping[frozenset, PrimitiveCycle], rem: Counter) -> PrimitiveCycle | None:
    """The primitive cycle whose multiset equals rem, if rem is squarefree."""
    if any(m > 1 for m in rem.values()):
        return None
    return cycle_sets.get(frozenset(rem))


def classify_cycle(setting: QuiverSetting, multiset: Mapping[str, int], cycle: PrimitiveCycle) -> str:
    """'strong' iff the complement of the cycle in the multiset is exactly one
    primitive cycle, 'weak' otherwise."""
    u = Counter({aid: m for aid, m in multiset.items() if m})
    if not _contains(u, cycle.multiset()):
        raise DomainError("cycle is not contained in the multiset")
    cycle_sets = {frozenset(c.arrows): c for c in primitive_cycles(setting)}
    rem = u - cycle.multiset()
    return "strong" if _single_cycle_of(cycle_sets, rem) is not None else "weak"


def sim_u_classes(
    setting: QuiverSetting,
    multiset: Mapping[str, int],
    cycles: list[PrimitiveCycle] | None = None,
) -> list[list[PrimitiveCycle]]:
    """Chain-equivalence classes of the cycles contained in the multiset.

    Union-find over pairs (c, d) with c + d still inside the multiset;
    the chain definition is the transitive closure of that relation.
    """
    if not is_eulerian(setting, multiset):
        raise DomainError("equivalence classes are defined for Eulerian multisets")
    u = Counter({aid: m for aid, m in multiset.items() if m})
    members = contained_cycles(setting, u, cycles)
    parent = list(range(len(members)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(members)):
        mi = members[i].multiset()
        for j in range(i + 1, len(members)):
            if _contains(u, mi + members[j].multiset()):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[PrimitiveCycle]] = {}
    for i, c in enumerate(members):
        groups.setdefault(find(i), []).append(c)
    out = [sorted(g, key=lambda c: c.arrows) for g in groups.values()]
    out.sort(key=lambda g: g[0].arrows)
    return out


def _require_partitionable(setting: QuiverSetting, multiset: Mapping[str, int]) -> Counter:
    u = Counter({aid: m for aid, m in multiset.items() if m})
    if not is_eulerian(setting, u):
        raise DomainError("E(U) is defined for Eulerian multisets")
    if not u:
        raise DomainError("the empty multiset has no cycle partition")
    return u


def e_value(
    setting: QuiverSetting,
    multiset: Mapping[str, int],
    cycles: list[PrimitiveCycle] | None = None,
) -> int:
    """Number of chain-equivalence classes minus one."""
    u = _require_partitionable(setting, multiset)
    return len(sim_u_classes(setting, u, cycles)) - 1


def e_value_fiber(
    setting: QuiverSetting,
    multiset: Mapping[str, int],
    cap: int = DEFAULT_FIBER_CAP,
) -> int:
    """Independent oracle: connected components of the graph whose nodes are
    the partitions of U and whose edges join partitions sharing a cycle,
    minus one."""
    u = _require_partitionable(setting, multiset)
    parts: list[CyclePartition] = []
    for p in iter_partitions(setting, u):
        parts.append(p)
        if len(parts) > cap:
            raise ResourceLimitError(f"more than {cap} partitions in the fiber graph")
    parent = list(range(len(parts)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if parts[i].shares_cycle(parts[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    return len({find(i) for i in range(len(parts))}) - 1


def weak_cycle_check(setting: QuiverSetting, multiset: Mapping[str, int]) -> bool:
    """All cycles weak in the multiset lie in a single chain-equivalence class.

    Expected to hold always; used as a test oracle.
    """
    u = Counter({aid: m for aid, m in multiset.items() if m})
    if not is_eulerian(setting, u):
        raise DomainError("weak-cycle check needs an Eulerian multiset")
    cycle_sets = {frozenset(c.arrows): c for c in primitive_cycles(setting)}
    weak = [
        c
        for c in contained_cycles(setting, u)
        if _single_cycle_of(cycle_sets, u - c.multiset()) is None
    ]
    if len(weak) <= 1:
        return True
    classes = sim_u_classes(setting, u)
    weak_set = {c.arrows for c in weak}
    hit = [g for g in classes if any(c.arrows in weak_set for c in g)]
    return len(hit) == 1


# -- minimal generating sets ---------------------------------------------------


@dataclass(frozen=True)
class BinomialRelation:
    """lhs - rhs with both sides partitioning the same arrow multiset."""

    lhs: CyclePartition
    rhs: CyclePartition
    multiset: tuple[tuple[str, int], ...]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.multiset)

    def describe(self) -> str:
        return f"{self.lhs.describe()} - {self.rhs.describe()}"


@dataclass(frozen=True)
class MultisetReport:
    multiset: tuple[tuple[str, int], ...]
    strong_partition_count: int
    has_weak_partition: bool
    e_value: int


@dataclass(frozen=True)
class GeneratorReport:
    per_multiset: tuple[MultisetReport, ...]
    total: int
    generators: tuple[BinomialRelation, ...]

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "multisets": [
                {
                    "multiset": [f"{aid}:{m}" for aid, m in r.multiset],
                    "two_cycle_partitions": r.strong_partition_count,
                    "has_weak_partition": r.has_weak_partition,
                    "e_value": r.e_value,
                }
                for r in self.per_multiset
                if r.e_value
            ],
            "generators": [
                {
                    "lhs": [list(c.arrows) for c in g.lhs.cycles],
                    "rhs": [list(c.arrows) for c in g.rhs.cycles],
                    "degree": g.degree,
                }
                for g in self.generators
            ],
        }


def min_generators(setting: QuiverSetting) -> GeneratorReport:
    """Minimal homogeneous generating set of the ideal of relations.

    Candidate multisets are exactly the pairwise sums of primitive cycles
    (with repetition). A multiset with k two-cycle partitions contributes
    k - 1 chained binomials, plus one more against a three-or-more-cycle
    partition when one exists.
    """
    if not setting.alpha_is_one():
        raise DomainError("minimal generators are computed for dimension vector (1,...,1)")
    if not is_strongly_connected(setting):
        raise DomainError("minimal generators need a strongly connected setting")
    cycles = primitive_cycles(setting)
    cycle_sets = {frozenset(c.arrows): c for c in cycles}

    candidates: dict[tuple, Counter] = {}
    for i in range(len(cycles)):
        mi = cycles[i].multiset()
        for j in range(i, len(cycles)):
            u = mi + cycles[j].multiset()
            candidates.setdefault(multiset_key(u), u)

    reports: list[MultisetReport] = []
    generators: list[BinomialRelation] = []
    for key in sorted(candidates):
        u = candidates[key]
        two_part: set[CyclePartition] = set()
        weak: list[PrimitiveCycle] = []
        for c in contained_cycles(setting, u, cycles):
            partner = _single_cycle_of(cycle_sets, u - c.multiset())
            if partner is not None:
                two_part.add(CyclePartition.of([c, partner]))
            else:
                weak.append(c)
        k = len(two_part)
        has_weak = bool(weak)
        e = (k - 1) + (1 if has_weak else 0)
        reports.append(MultisetReport(key, k, has_weak, e))
        if e == 0:
            continue
        chain = sorted(two_part, key=lambda p: tuple(c.arrows for c in p.cycles))
        for a, b in zip(chain, chain[1:]):
            generators.append(BinomialRelation(a, b, key))
        if has_weak:
            w = min(weak, key=lambda c: c.arrows)
            rest = greedy_partition(setting, u - w.multiset())
            m_u = CyclePartition.of((w,) + rest.cycles)
            generators.append(BinomialRelation(chain[-1], m_u, key))

    total = sum(r.e_value for r in reports)
    return GeneratorReport(tuple(reports), total, tuple(generators))


def is_ci_toric(setting: QuiverSetting) -> bool:
    """The relations ideal is generated by exactly codimension-many elements."""
    return min_generators(setting).total == f_value(setting)
