"""Primitive cycles, the codimension functional F, and Eulerian multisets.

Arrow multisets are plain Counters keyed by arrow id. A primitive cycle
visits no vertex twice, so its arrow multiset is squarefree; parallel
arrows give distinct cycles and must be enumerated separately.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping

from .core import QuiverSetting, is_strongly_connected
from .errors import DomainError, ResourceLimitError

__all__ = [
    "PrimitiveCycle",
    "CyclePartition",
    "primitive_cycles",
    "f_value",
    "is_eulerian",
    "partitions_into_cycles",
    "iter_partitions",
    "trivially_intersecting",
    "cycle_from_multiset",
]

DEFAULT_CYCLE_CAP = 10**6
DEFAULT_PARTITION_CAP = 10**6


@dataclass(frozen=True)
class PrimitiveCycle:
    """Cyclically ordered arrow ids, canonically rotated for hashing.

    The canonical rotation starts at the lexicographically smallest arrow
    id; arrow ids are unique within a cycle so the rotation is unique.
    """

    arrows: tuple[str, ...]
    vertex_seq: tuple[str, ...]

    @staticmethod
    def from_arrows(setting: QuiverSetting, arrow_ids) -> "PrimitiveCycle":
        aids = list(arrow_ids)
        if not aids:
            raise DomainError("a primitive cycle needs at least one arrow")
        k = min(range(len(aids)), key=lambda i: aids[i])
        aids = aids[k:] + aids[:k]
        arrs = [setting.arrow(i) for i in aids]
        for a, b in zip(arrs, arrs[1:] + arrs[:1]):
            if a.target != b.source:
                raise DomainError("arrows do not compose cyclically")
        verts = tuple(a.source for a in arrs)
        if len(set(verts)) != len(verts):
            raise DomainError("cycle visits a vertex twice")
        return PrimitiveCycle(tuple(aids), verts)

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertex_seq)

    def multiset(self) -> Counter:
        return Counter(self.arrows)

    def __le__(self, other) -> bool:
        return self.arrows <= other.arrows

    def __lt__(self, other) -> bool:
        return self.arrows < other.arrows

    def describe(self) -> str:
        return "(" + ",".join(self.arrows) + ")"


@dataclass(frozen=True)
class CyclePartition:
    """Multiset of primitive cycles, stored sorted for a stable identity."""

    cycles: tuple[PrimitiveCycle, ...]

    @staticmethod
    def of(cycles) -> "CyclePartition":
        return CyclePartition(tuple(sorted(cycles, key=lambda c: c.arrows)))

    def __len__(self) -> int:
        return len(self.cycles)

    def multiset(self) -> Counter:
        total: Counter = Counter()
        for c in self.cycles:
            total.update(c.arrows)
        return total

    def shares_cycle(self, other: "CyclePartition") -> bool:
        mine = Counter(self.cycles)
        return any(c in mine for c in other.cycles)

    def describe(self) -> str:
        return "".join(c.describe() for c in self.cycles)


def primitive_cycles(setting: QuiverSetting, cap: int = DEFAULT_CYCLE_CAP) -> list[PrimitiveCycle]:
    """All primitive cycles; loops count as cycles of length 1.

    Backtracking enumeration rooted at each cycle's smallest vertex, so
    every cycle is produced exactly once. Exceeding `cap` raises: a
    silently truncated count would corrupt F(Q).
    """
    order = {v: i for i, v in enumerate(setting.vertices)}
    found: list[PrimitiveCycle] = []

    def emit(path_arrows: list):
        if len(found) >= cap:
            raise ResourceLimitError(f"more than {cap} primitive cycles")
        found.append(PrimitiveCycle.from_arrows(setting, [a.id for a in path_arrows]))

    for root in setting.vertices:
        rmin = order[root]
        # DFS over vertices with order >= rmin, no revisits, closing at root
        stack = [(root, [], {root})]
        while stack:
            v, path, visited = stack.pop()
            for a in sorted(setting.arrows_from(v), key=lambda a: a.id, reverse=True):
                w = a.target
                if w == root:
                    emit(path + [a])
                elif w not in visited and order[w] > rmin:
                    stack.append((w, path + [a], visited | {w}))
    found.sort(key=lambda c: (len(c.arrows), c.arrows))
    return found


def f_value(setting: QuiverSetting, cap: int = DEFAULT_CYCLE_CAP) -> int:
    """|C| + |V| - |A| - 1 for a strongly connected setting with all dims 1."""
    if not setting.alpha_is_one():
        raise DomainError("F(Q) is defined for dimension vector (1,...,1)")
    if not is_strongly_connected(setting):
        raise DomainError("F(Q) requires a strongly connected setting")
    cycles = primitive_cycles(setting, cap=cap)
    return len(cycles) + setting.vertex_count - setting.arrow_count - 1


def _check_support(setting: QuiverSetting, multiset: Mapping[str, int]) -> None:
    for aid, m in multiset.items():
        setting.arrow(aid)
        if m < 0:
            raise DomainError(f"negative multiplicity for arrow {aid!r}")


def is_eulerian(setting: QuiverSetting, multiset: Mapping[str, int]) -> bool:
    """Every vertex has equal in- and out-multiplicity with respect to the multiset."""
    _check_support(setting, multiset)
    balance: Counter = Counter()
    for aid, m in multiset.items():
        if m == 0:
            continue
        a = setting.arrow(aid)
        balance[a.source] -= m
        balance[a.target] += m
    return all(b == 0 for b in balance.values())


def contained_cycles(
    setting: QuiverSetting, multiset: Mapping[str, int], cycles: list[PrimitiveCycle] | None = None
) -> list[PrimitiveCycle]:
    """Primitive cycles whose arrow multiset is contained in the multiset."""
    if cycles is None:
        cycles = primitive_cycles(setting)
    u = dict(multiset)
    return [c for c in cycles if all(u.get(aid, 0) >= 1 for aid in c.arrows)]


def cycle_from_multiset(setting: QuiverSetting, multiset: Mapping[str, int]) -> PrimitiveCycle | None:
    """The primitive cycle whose arrow multiset equals `multiset`, if any.

    A squarefree multiset is a single primitive cycle iff every touched
    vertex has in- and out-multiplicity exactly 1 and the arrows chain into
    one closed walk.
    """
    aids = [aid for aid, m in multiset.items() if m]
    if not aids:
        return None
    if any(multiset[aid] != 1 for aid in aids):
        return None
    nxt: dict[str, str] = {}
    by_source: dict[str, str] = {}
    for aid in aids:
        a = setting.arrow(aid)
        if a.source in by_source:
            return None
        by_source[a.source] = aid
    seq = [min(aids)]
    cur = setting.arrow(seq[0])
    seen_targets = {cur.source}
    while True:
        t = cur.target
        if t == setting.arrow(seq[0]).source:
            break
        if t in seen_targets or t not in by_source:
            return None
        seen_targets.add(t)
        seq.append(by_source[t])
        cur = setting.arrow(seq[-1])
    if len(seq) != len(aids):
        return None
    return PrimitiveCycle.from_arrows(setting, seq)


def iter_partitions(
    setting: QuiverSetting,
    multiset: Mapping[str, int],
    cycles: list[PrimitiveCycle] | None = None,
) -> Iterator[CyclePartition]:
    """Lazily yield all multiset partitions of `multiset` into primitive cycles.

    Parts are chosen in non-decreasing catalog order, so each partition is
    produced exactly once.
    """
    if not is_eulerian(setting, multiset):
        raise DomainError("only Eulerian multisets partition into cycles")
    catalog = sorted(contained_cycles(setting, multiset, cycles), key=lambda c: c.arrows)
    target = {aid: m for aid, m in multiset.items() if m}

    def rec(remaining: dict[str, int], start: int, chosen: list[PrimitiveCycle]):
        if not remaining:
            yield CyclePartition(tuple(chosen))
            return
        for i in range(start, len(catalog)):
            c = catalog[i]
            if all(remaining.get(aid, 0) >= 1 for aid in c.arrows):
                nxt = dict(remaining)
                for aid in c.arrows:
                    if nxt[aid] == 1:
                        del nxt[aid]
                    else:
                        nxt[aid] -= 1
                chosen.append(c)
                yield from rec(nxt, i, chosen)
                chosen.pop()

    return rec(target, 0, [])


def partitions_into_cycles(
    setting: QuiverSetting,
    multiset: Mapping[str, int],
    max_parts: int | None = None,
    exact_parts: int | None = None,
    cap: int = DEFAULT_PARTITION_CAP,
) -> list[CyclePartition]:
    """All partitions of an Eulerian multiset into primitive cycles.

    `max_parts` / `exact_parts` filter by part count. Deterministic order.
    """
    out: list[CyclePartition] = []
    for p in iter_partitions(setting, multiset):
        if max_parts is not None and len(p) > max_parts:
            continue
        if exact_parts is not None and len(p) != exact_parts:
            continue
        out.append(p)
        if len(out) > cap:
            raise ResourceLimitError(f"more than {cap} cycle partitions")
    out.sort(key=lambda p: tuple(c.arrows for c in p.cycles))
    return out


def trivially_intersecting(c1: PrimitiveCycle, c2: PrimitiveCycle) -> bool:
    """True iff the two cycles admit no nontrivial relation.

    Distinct cycles intersect trivially iff they are vertex-disjoint or
    their intersection (shared vertices and shared arrows) is a single
    directed path. A cycle intersects itself trivially: the doubled
    multiset has no partition besides {c, c}.
    """
    if c1 == c2:
        return True
    shared_v = c1.vertex_set & c2.vertex_set
    if not shared_v:
        return True
    shared_a = set(c1.arrows) & set(c2.arrows)
    # Path test on the intersection digraph (shared vertices + shared arrows).
    if len(shared_a) != len(shared_v) - 1:
        return False
    src: dict[str, str] = {}
    dst: dict[str, str] = {}
    ends: Counter = Counter()
    arrows1 = {a: (c1.vertex_seq[i], c1.vertex_seq[(i + 1) % len(c1.vertex_seq)]) for i, a in enumerate(c1.arrows)}
    for aid in shared_a:
        u, w = arrows1[aid]
        if u in src or w in dst:
            return False  # branching: not a simple path
        src[u] = aid
        dst[w] = aid
        ends[u] += 1
        ends[w] += 1
    # Connectivity: walk from the unique start (shared vertex with no in-arrow).
    starts = [v for v in shared_v if v not in dst]
    if len(starts) != 1:
        return False
    v = starts[0]
    seen = 0
    while v in src:
        u, w = arrows1[src[v]]
        v = w
        seen += 1
    return seen == len(shared_a) and len(shared_v) == seen + 1


def greedy_partition(setting: QuiverSetting, multiset: Mapping[str, int]) -> CyclePartition:
    """Some partition of a nonempty Eulerian multiset into primitive cycles.

    Walks from the least remaining arrow until a vertex repeats, extracts
    that primitive cycle, and restarts. Deterministic.
    """
    if not is_eulerian(setting, multiset):
        raise DomainError("only Eulerian multisets partition into cycles")
    remaining = Counter({aid: m for aid, m in multiset.items() if m})
    if not remaining:
        raise DomainError("the empty multiset has no cycle partition")
    parts: list[PrimitiveCycle] = []
    while remaining:
        start = setting.arrow(min(remaining))
        walk = [start]
        seen_at = {start.source: 0}
        while True:
            v = walk[-1].target
            if v in seen_at:
                cycle_arrows = walk[seen_at[v]:]
                parts.append(PrimitiveCycle.from_arrows(setting, [a.id for a in cycle_arrows]))
                for a in cycle_arrows:
                    remaining[a.id] -= 1
                    if not remaining[a.id]:
                        del remaining[a.id]
                break
            seen_at[v] = len(walk)
            used = Counter(a.id for a in walk)
            nxt = min(
                a.id
                for a in setting.arrows_from(v)
                if remaining.get(a.id, 0) - used.get(a.id, 0) >= 1
            )
            walk.append(setting.arrow(nxt))
    return CyclePartition.of(parts)
