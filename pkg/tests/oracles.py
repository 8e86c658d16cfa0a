"""Independent brute-force oracles.

These deliberately avoid the library's enumeration code paths: cycles are
found by subset filtering, partitions by instance-level set partitioning,
and path counts by plain recursion. Slow but obviously correct at desk
scale; expected values frozen in the tests were computed with these.
"""

from collections import Counter
from itertools import combinations

from quiverci.core import QuiverSetting


def subset_is_single_cycle(setting: QuiverSetting, arrow_ids: frozenset) -> bool:
    """A set of arrows is one primitive cycle iff every touched vertex has
    in- and out-degree exactly 1 within the set and the set is connected."""
    if not arrow_ids:
        return False
    arrows = [setting.arrow(a) for a in arrow_ids]
    outs = Counter(a.source for a in arrows)
    ins = Counter(a.target for a in arrows)
    verts = set(outs) | set(ins)
    if any(outs.get(v, 0) != 1 or ins.get(v, 0) != 1 for v in verts):
        return False
    # walk: must visit every arrow once before closing
    start = arrows[0]
    nxt = {a.source: a for a in arrows}
    cur, seen = start, 1
    while True:
        cur = nxt[cur.target]
        if cur == start:
            break
        seen += 1
    return seen == len(arrows)


def brute_cycles(setting: QuiverSetting) -> list[frozenset]:
    """All primitive cycles as arrow-id sets, by filtering arrow subsets."""
    aids = [a.id for a in setting.arrows]
    found = []
    for size in range(1, len(aids) + 1):
        for combo in combinations(aids, size):
            s = frozenset(combo)
            if subset_is_single_cycle(setting, s):
                found.append(s)
    return found


def brute_partitions(setting: QuiverSetting, multiset) -> set[tuple]:
    """All partitions of an arrow multiset into primitive cycles.

    Works on expanded arrow instances and projects back, deduplicating by
    the sorted tuple of per-part arrow-id tuples.
    """
    instances = []
    for aid, m in sorted(multiset.items()):
        instances.extend((aid, k) for k in range(m))

    results: set[tuple] = set()

    def rec(remaining: tuple, parts: tuple):
        if not remaining:
            results.add(tuple(sorted(parts)))
            return
        first = remaining[0]
        rest = remaining[1:]
        for size in range(0, len(rest) + 1):
            for combo in combinations(rest, size):
                group = (first,) + combo
                ids = [aid for aid, _ in group]
                if len(set(ids)) != len(ids):
                    continue
                if not subset_is_single_cycle(setting, frozenset(ids)):
                    continue
                left = tuple(x for x in rest if x not in set(combo))
                rec(left, parts + (tuple(sorted(ids)),))

    rec(tuple(instances), ())
    return results


def brute_simple_paths(setting: QuiverSetting, source: str, target: str) -> int:
    """Simple directed paths by naive recursion; parallel arrows distinct."""

    def rec(v: str, visited: frozenset) -> int:
        total = 0
        for a in setting.arrows_from(v):
            if a.target == target:
                total += 1
            elif a.target not in visited:
                total += rec(a.target, visited | {a.target})
        return total

    return rec(source, frozenset([source]))


def brute_e_value(setting: QuiverSetting, multiset) -> int:
    """Components of the share-a-cycle graph on brute-forced partitions, minus 1."""
    parts = sorted(brute_partitions(setting, multiset))
    n = len(parts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            pi, pj = Counter(parts[i]), Counter(parts[j])
            if any(c in pi for c in pj):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    return len({find(i) for i in range(n)}) - 1
