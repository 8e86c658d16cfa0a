"""Seeded corpora and the cross-validation property suite.

Every deep claim in the library is guarded by at least two independent
computation routes; this module drives them against deterministic random
corpora and reports the first counterexample (minimized by greedy arrow
deletion) when a property fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .classify import (
    coregular_obstruction,
    find_forbidden_descendant,
    is_ci,
    is_coregular,
    random_setting,
)
from .core import (
    Arrow,
    QuiverSetting,
    delete_arrows,
    is_isomorphic,
    strongly_connected_components,
)
from .cycles import f_value, primitive_cycles
from .errors import QuiverError
from .localquiver import Decomposition, glue_subquiver, local_quiver
from .reductions import (
    apply_ri,
    apply_rii,
    apply_riv,
    replay_linear,
    ri_applicable,
    rii_applicable,
    riv_applicable,
)
from .toric import e_value, e_value_fiber, is_ci_toric, min_generators, multiset_key, weak_cycle_check

__all__ = [
    "sc_alpha1_setting",
    "reduced_alpha1_setting",
    "general_setting",
    "CorpusConfig",
    "Violation",
    "PropertyResult",
    "run_corpus",
    "minimize_counterexample",
    "two_cycle_sums",
    "PROPERTY_NAMES",
]


# -- corpora -------------------------------------------------------------------


def sc_alpha1_setting(seed: int, max_vertices: int = 6, max_arrows: int = 12) -> QuiverSetting:
    """Strongly connected, all dims 1; sizes drawn deterministically from the seed."""
    rng = random.Random(seed * 7919)
    n = rng.randint(1, max_vertices)
    if n == 1:
        m = rng.randint(0, min(4, max_arrows))
    else:
        lo = min(max(n, int(1.4 * n)), max_arrows)
        m = rng.randint(lo, max_arrows)
    return random_setting(seed, n, m, strongly_connected=True)


def reduced_alpha1_setting(seed: int, max_vertices: int = 4, max_arrows: int = 12) -> QuiverSetting:
    """Strongly connected, loopless, in- and out-degrees at least 2, dims 1."""
    rng = random.Random(seed * 104729)
    n = rng.randint(2, max_vertices)
    m = rng.randint(min(2 * n + 1, max_arrows), max_arrows)
    return random_setting(seed, n, m, strongly_connected=True, loopless=True, min_degree=2)


def general_setting(seed: int, max_vertices: int = 4, max_arrows: int = 8, max_dim: int = 3) -> QuiverSetting:
    """Strongly connected with dims up to max_dim."""
    rng = random.Random(seed * 31337)
    n = rng.randint(1, max_vertices)
    m = rng.randint(0 if n == 1 else n, max_arrows)
    return random_setting(seed, n, m, strongly_connected=True, max_dim=max_dim)


def two_cycle_sums(setting: QuiverSetting) -> dict[tuple, "Counter"]:
    """All distinct multisets arising as the sum of two primitive cycles."""
    from collections import Counter  # local: keeps module import surface small

    cycles = primitive_cycles(setting)
    out: dict[tuple, Counter] = {}
    for i in range(len(cycles)):
        mi = cycles[i].multiset()
        for j in range(i, len(cycles)):
            u = mi + cycles[j].multiset()
            out.setdefault(multiset_key(u), u)
    return out


# -- violations and minimization ---------------------------------------------------


@dataclass(frozen=True)
class Violation:
    seed: int
    message: str
    setting: QuiverSetting


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    inconclusive: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations


def minimize_counterexample(setting: QuiverSetting, still_fails: Callable[[QuiverSetting], bool]) -> QuiverSetting:
    """Greedy arrow deletion preserving the failure."""
    current = setting
    shrunk = True
    while shrunk:
        shrunk = False
        for a in current.arrows:
            cand = delete_arrows(current, [a.id], prune_isolated=True)
            try:
                bad = still_fails(cand)
            except QuiverError:
                bad = False
            if bad:
                current = cand
                shrunk = True
                break
    return current


# -- properties ----------------------------------------------------------------------


def prop_ci_agreement(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """is_ci (reduction pipeline) agrees with is_ci_toric (generator count vs F)."""
    res = PropertyResult("ci-agreement")
    for seed in seeds:
        s = sc_alpha1_setting(seed, cfg.max_vertices, cfg.max_arrows)
        res.checked += 1
        a, b = is_ci(s).answer, is_ci_toric(s)
        if a != b:
            res.violations.append(Violation(seed, f"is_ci={a} but is_ci_toric={b}", s))
    return res


def prop_descendant_soundness(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """Witnesses replay to their target and imply non-C.I.; C.I. settings get none."""
    res = PropertyResult("descendant-soundness")
    from .classify import SEARCH_TARGETS

    for seed in seeds:
        s = sc_alpha1_setting(seed, cfg.max_vertices, cfg.max_arrows)
        res.checked += 1
        ci = is_ci(s).answer
        r = find_forbidden_descendant(s, ("g1", "g2"), budget=cfg.budget)
        if r.status == "inconclusive":
            res.inconclusive += 1
            continue
        if r.found:
            final = replay_linear(s, r.trace)
            if not is_isomorphic(final, SEARCH_TARGETS[r.target.lower()].setting):
                res.violations.append(Violation(seed, "witness replay missed the target", s))
            elif ci:
                res.violations.append(Violation(seed, "witness found for a C.I. setting", s))
        elif not ci:
            res.violations.append(Violation(seed, "search exhausted but setting is not C.I.", s))
    return res


def prop_e_oracle(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """E(U) via cycle classes equals E(U) via the partition fiber graph."""
    res = PropertyResult("e-oracle")
    for seed in seeds:
        s = sc_alpha1_setting(seed, cfg.max_vertices, cfg.max_arrows)
        for key, u in sorted(two_cycle_sums(s).items()):
            res.checked += 1
            a, b = e_value(s, u), e_value_fiber(s, u)
            if a != b:
                res.violations.append(Violation(seed, f"E(U)={a} but fiber oracle={b} for U={key}", s))
    return res


def prop_weak_cycles(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """All weak cycles of a two-cycle-sum multiset are equivalent."""
    res = PropertyResult("weak-cycles")
    for seed in seeds:
        s = sc_alpha1_setting(seed, cfg.max_vertices, cfg.max_arrows)
        for key, u in sorted(two_cycle_sums(s).items()):
            res.checked += 1
            if not weak_cycle_check(s, u):
                res.violations.append(Violation(seed, f"weak cycles inequivalent for U={key}", s))
    return res


def prop_f_nonneg(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    res = PropertyResult("f-nonneg")
    for seed in seeds:
        s = sc_alpha1_setting(seed, cfg.max_vertices, cfg.max_arrows)
        res.checked += 1
        if f_value(s) < 0:
            res.violations.append(Violation(seed, f"F(Q)={f_value(s)} < 0", s))
    return res


def prop_reduced_f_positive(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """Loopless, strongly connected, in/out degrees >= 2 forces F >= 1."""
    res = PropertyResult("reduced-f-positive")
    for seed in seeds:
        s = reduced_alpha1_setting(seed, min(cfg.max_vertices, 4), cfg.max_arrows)
        res.checked += 1
        if f_value(s) < 1:
            res.violations.append(Violation(seed, f"F(Q)={f_value(s)} < 1 on a reduced setting", s))
    return res


def _toric_profile(s: QuiverSetting) -> tuple[bool, bool, int]:
    f = f_value(s)
    total = min_generators(s).total
    return (total == f, f == 0, total - f)


def prop_reduction_invariance(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """(is_ci_toric, F==0) and the deficiency D = generators - F are unchanged
    by every applicable RI, RII, RIV step."""
    res = PropertyResult("reduction-invariance")
    for seed in seeds:
        s = sc_alpha1_setting(seed, cfg.max_vertices, cfg.max_arrows)
        before = _toric_profile(s)
        steps: list[tuple[str, QuiverSetting]] = []
        for v in s.vertices:
            if rii_applicable(s, v):
                steps.append((f"RII({v})", apply_rii(s, v)[0]))
            if s.vertex_count > 1 and ri_applicable(s, v):
                steps.append((f"RI({v})", apply_ri(s, v)))
        for v1 in s.vertices:
            for v2 in s.vertices:
                if v1 != v2 and riv_applicable(s, v1, v2):
                    steps.append((f"RIV({v1},{v2})", apply_riv(s, v1, v2)))
        for label, after in steps:
            res.checked += 1
            post = _toric_profile(after)
            if post != before:
                res.violations.append(
                    Violation(
                        seed,
                        f"{label}: (ci,F==0,D) changed {before} -> {post}",
                        s,
                    )
                )
    return res


def prop_coregular_agreement(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """is_coregular agrees with the constructive obstruction on conclusive cases."""
    res = PropertyResult("coregular-agreement")
    for seed in seeds:
        s = general_setting(seed, min(cfg.max_vertices, 4), min(cfg.max_arrows, 8))
        res.checked += 1
        v = is_coregular(s).answer
        r = coregular_obstruction(s)
        if r.status == "inconclusive":
            res.inconclusive += 1
            continue
        if v != (r.status == "none"):
            res.violations.append(Violation(seed, f"is_coregular={v} but obstruction={r.status}", s))
        elif r.found and len(r.trace):
            from .classify import contains_c1_subquiver

            final = replay_linear(s, r.trace)
            if not contains_c1_subquiver(final):
                res.violations.append(Violation(seed, "obstruction witness replay lacks the double pair", s))
    return res


def _relabel(setting: QuiverSetting, prefix: str) -> QuiverSetting:
    verts = {v: f"{prefix}{v}" for v in setting.vertices}
    arrows = [Arrow(f"{prefix}{a.id}", verts[a.source], verts[a.target]) for a in setting.arrows]
    return QuiverSetting(verts.values(), arrows, {verts[v]: setting.dim(v) for v in setting.vertices})


def connected_sum(a: QuiverSetting, va: str, b: QuiverSetting, vb: str) -> QuiverSetting:
    """Glue two settings at a shared dimension-1 vertex (b is relabeled)."""
    if a.dim(va) != 1 or b.dim(vb) != 1:
        raise QuiverError("connected sums join at dimension-1 vertices")
    b2 = _relabel(b, "q_")
    vb2 = f"q_{vb}"
    mapping = {v: (va if v == vb2 else v) for v in b2.vertices}
    verts = list(a.vertices) + [v for v in b2.vertices if v != vb2]
    arrows = list(a.arrows) + [
        Arrow(x.id, mapping[x.source], mapping[x.target]) for x in b2.arrows
    ]
    dims = a.dims
    for v in b2.vertices:
        if v != vb2:
            dims[v] = b2.dim(v)
    return QuiverSetting(verts, arrows, dims)


def scc_composite(a: QuiverSetting, b: QuiverSetting, cross: int, rng: random.Random) -> QuiverSetting:
    """Disjoint union plus cross arrows from a to b only, so the strongly
    connected components are exactly the two factors."""
    b2 = _relabel(b, "q_")
    verts = list(a.vertices) + list(b2.vertices)
    arrows = list(a.arrows) + list(b2.arrows)
    dims = a.dims | b2.dims
    for i in range(cross):
        arrows.append(Arrow(f"x{i + 1}", rng.choice(a.vertices), rng.choice(b2.vertices)))
    return QuiverSetting(verts, arrows, dims)


def prop_decomposition_laws(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """Connected sums and SCC composites classify as the conjunction of factors."""
    res = PropertyResult("decomposition-laws")
    for seed in seeds:
        rng = random.Random(seed * 65537)
        f1 = sc_alpha1_setting(2 * seed, min(cfg.max_vertices, 4), min(cfg.max_arrows, 8))
        f2 = sc_alpha1_setting(2 * seed + 1, min(cfg.max_vertices, 4), min(cfg.max_arrows, 8))
        ci1, ci2 = is_ci(f1).answer, is_ci(f2).answer
        co1, co2 = is_coregular(f1).answer, is_coregular(f2).answer
        if seed % 2 == 0:
            comp = connected_sum(f1, rng.choice(f1.vertices), f2, rng.choice(f2.vertices))
            label = "connected-sum"
        else:
            comp = scc_composite(f1, f2, rng.randint(1, 3), rng)
            label = "scc-composite"
        res.checked += 1
        if is_ci(comp).answer != (ci1 and ci2):
            res.violations.append(Violation(seed, f"{label}: C.I. verdict is not the conjunction", comp))
        if is_coregular(comp).answer != (co1 and co2):
            res.violations.append(Violation(seed, f"{label}: coregular verdict is not the conjunction", comp))
    return res


def prop_glue_local(seeds: Iterable[int], cfg: "CorpusConfig") -> PropertyResult:
    """Gluing is the local quiver of the subset decomposition up to the
    |subset|-1 extra loops the graph quotient keeps at the merged vertex."""
    from .classify import _sc_subsets

    res = PropertyResult("glue-local")
    for seed in seeds:
        s = sc_alpha1_setting(seed, min(cfg.max_vertices, 5), min(cfg.max_arrows, 10))
        subsets = list(_sc_subsets(s, 4))
        if not subsets:
            continue
        subset = subsets[random.Random(seed).randrange(len(subsets))]
        res.checked += 1
        glued = glue_subquiver(s, subset)
        parts = [(1, {v: 1 for v in subset})] + [
            (1, {v: 1}) for v in s.vertices if v not in subset
        ]
        local = local_quiver(s, Decomposition.of(parts))
        extra = len(subset) - 1
        padded = QuiverSetting(
            local.vertices,
            list(local.arrows) + [Arrow(f"pad{i}", "s1", "s1") for i in range(extra)],
            local.dims,
        )
        if not is_isomorphic(glued, padded):
            res.violations.append(
                Violation(seed, f"glue vs local quiver mismatch on subset {subset}", s)
            )
    return res


PROPERTIES: dict[str, Callable] = {
    "ci-agreement": prop_ci_agreement,
    "descendant-soundness": prop_descendant_soundness,
    "e-oracle": prop_e_oracle,
    "weak-cycles": prop_weak_cycles,
    "f-nonneg": prop_f_nonneg,
    "reduced-f-positive": prop_reduced_f_positive,
    "reduction-invariance": prop_reduction_invariance,
    "coregular-agreement": prop_coregular_agreement,
    "decomposition-laws": prop_decomposition_laws,
    "glue-local": prop_glue_local,
}

PROPERTY_NAMES = tuple(PROPERTIES)


@dataclass
class CorpusConfig:
    seeds: int = 200
    seed_start: int = 0
    max_vertices: int = 6
    max_arrows: int = 12
    budget: int = 2000
    properties: tuple[str, ...] = PROPERTY_NAMES


def run_corpus(cfg: CorpusConfig) -> list[PropertyResult]:
    seeds = range(cfg.seed_start, cfg.seed_start + cfg.seeds)
    results = []
    for name in cfg.properties:
        if name not in PROPERTIES:
            raise QuiverError(f"unknown property {name!r} (known: {', '.join(PROPERTIES)})")
        results.append(PROPERTIES[name](seeds, cfg))
    return results


# -- per-setting violation predicates (for counterexample minimization) -----------


def _violates_ci_agreement(s: QuiverSetting) -> bool:
    if not (s.alpha_is_one() and len(strongly_connected_components(s)) == 1):
        return False
    return is_ci(s).answer != is_ci_toric(s)


def _violates_f_nonneg(s: QuiverSetting) -> bool:
    if not (s.alpha_is_one() and len(strongly_connected_components(s)) == 1):
        return False
    return f_value(s) < 0


def _violates_reduced_f_positive(s: QuiverSetting) -> bool:
    from .core import degrees

    if not (s.alpha_is_one() and len(strongly_connected_components(s)) == 1):
        return False
    if any(a.is_loop() for a in s.arrows):
        return False
    if any(min(degrees(s, v)) < 2 for v in s.vertices):
        return False
    return f_value(s) < 1


def _violates_e_oracle(s: QuiverSetting) -> bool:
    if not (s.alpha_is_one() and len(strongly_connected_components(s)) == 1):
        return False
    return any(e_value(s, u) != e_value_fiber(s, u) for u in two_cycle_sums(s).values())


def _violates_weak_cycles(s: QuiverSetting) -> bool:
    if not (s.alpha_is_one() and len(strongly_connected_components(s)) == 1):
        return False
    return any(not weak_cycle_check(s, u) for u in two_cycle_sums(s).values())


def _violates_reduction_invariance(s: QuiverSetting) -> bool:
    if not (s.alpha_is_one() and len(strongly_connected_components(s)) == 1):
        return False
    before = _toric_profile(s)
    for v in s.vertices:
        if rii_applicable(s, v) and _toric_profile(apply_rii(s, v)[0]) != before:
            return True
        if s.vertex_count > 1 and ri_applicable(s, v) and _toric_profile(apply_ri(s, v)) != before:
            return True
    for v1 in s.vertices:
        for v2 in s.vertices:
            if v1 != v2 and riv_applicable(s, v1, v2):
                if _toric_profile(apply_riv(s, v1, v2)) != before:
                    return True
    return False


def _violates_coregular_agreement(s: QuiverSetting) -> bool:
    r = coregular_obstruction(s)
    if r.status == "inconclusive":
        return False
    return is_coregular(s).answer != (r.status == "none")


SINGLE_SETTING_CHECKS: dict[str, Callable[[QuiverSetting], bool]] = {
    "ci-agreement": _violates_ci_agreement,
    "f-nonneg": _violates_f_nonneg,
    "reduced-f-positive": _violates_reduced_f_positive,
    "e-oracle": _violates_e_oracle,
    "weak-cycles": _violates_weak_cycles,
    "reduction-invariance": _violates_reduction_invariance,
    "coregular-agreement": _violates_coregular_agreement,
}
