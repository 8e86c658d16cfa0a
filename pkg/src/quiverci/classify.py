"""Top-level verdicts with certificates: smoothness of the semisimple
moduli (any dimension vector), complete intersection (all dims 1), and
bounded forbidden-descendant search.

Descendant moves are reductions, local quivers (vertex-subset gluings),
and subquivers, so a witness reaching a known-bad target certifies a
negative verdict independently of the reduction pipeline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    QuiverSetting,
    ReductionStep,
    ReductionTrace,
    canonical_key,
    degrees,
    delete_arrows,
    induced_subquiver,
    is_isomorphic,
    is_strongly_connected,
    prime_decomposition,
    strongly_connected_components,
)
from .cycles import f_value, primitive_cycles
from .errors import DomainError, GenerationError, QuiverError, ResourceLimitError
from .localquiver import Decomposition, glue_subquiver, has_simple_rep, local_quiver
from .reductions import apply_ri, apply_rii, reduce_fully, ri_applicable, rii_applicable

__all__ = [
    "TargetQuiver",
    "Verdict",
    "SearchResult",
    "target_g1",
    "target_g2",
    "target_c1",
    "target_coreg_a",
    "target_coreg_b",
    "target_coreg_c",
    "SEARCH_TARGETS",
    "matches_coregular_form",
    "contains_c1_subquiver",
    "is_coregular",
    "is_ci",
    "find_forbidden_descendant",
    "coregular_obstruction",
    "random_setting",
]

DEFAULT_SEARCH_BUDGET = 10**5
DEFAULT_GLUE_BOUND = 4


# -- targets -------------------------------------------------------------------


def target_g1() -> QuiverSetting:
    """Two vertices, three parallel arrows one way and two back; not a C.I."""
    return QuiverSetting(
        ["v1", "v2"],
        [("a1", "v1", "v2"), ("a2", "v1", "v2"), ("a3", "v1", "v2"),
         ("b1", "v2", "v1"), ("b2", "v2", "v1")],
    )


def target_g2() -> QuiverSetting:
    """Oriented triangle with every side doubled; not a C.I."""
    return QuiverSetting(
        ["v1", "v2", "v3"],
        [("a1", "v1", "v2"), ("a2", "v1", "v2"),
         ("b1", "v2", "v3"), ("b2", "v2", "v3"),
         ("c1", "v3", "v1"), ("c2", "v3", "v1")],
    )


def target_c1() -> QuiverSetting:
    """Two vertices with two parallel arrows each way; C.I. but not coregular."""
    return QuiverSetting(
        ["v1", "v2"],
        [("a1", "v1", "v2"), ("a2", "v1", "v2"), ("b1", "v2", "v1"), ("b2", "v2", "v1")],
    )


def target_coreg_a(k: int = 1) -> QuiverSetting:
    """Single vertex of dimension k, no loops."""
    return QuiverSetting(["v"], [], {"v": k})


def target_coreg_b(k: int = 2) -> QuiverSetting:
    """Single vertex of dimension k with one loop."""
    return QuiverSetting(["v"], [("l", "v", "v")], {"v": k})


def target_coreg_c() -> QuiverSetting:
    """Single vertex of dimension 2 with two loops."""
    return QuiverSetting(["v"], [("l1", "v", "v"), ("l2", "v", "v")], {"v": 2})


@dataclass(frozen=True)
class TargetQuiver:
    name: str
    setting: QuiverSetting


SEARCH_TARGETS = {
    "g1": TargetQuiver("G1", target_g1()),
    "g2": TargetQuiver("G2", target_g2()),
    "c1": TargetQuiver("C1", target_c1()),
}


def matches_coregular_form(setting: QuiverSetting) -> bool:
    """Whether a reduced factor is one of the three coregular shapes:
    a bare vertex, a one-loop vertex, or a dimension-2 vertex with two loops."""
    if setting.is_empty():
        return True
    if setting.vertex_count != 1:
        return False
    v = setting.vertices[0]
    loops = len(setting.loops_at(v))
    if loops != setting.arrow_count:
        return False
    if loops == 0:
        return True
    if loops == 1:
        return True
    return loops == 2 and setting.dim(v) == 2


def contains_c1_subquiver(setting: QuiverSetting) -> bool:
    """Two dimension-1 vertices with at least two arrows each way."""
    verts = [v for v in setting.vertices if setting.dim(v) == 1]
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if setting.multiplicity(u, v) >= 2 and setting.multiplicity(v, u) >= 2:
                return True
    return False


# -- verdicts -------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    answer: bool
    trace: ReductionTrace
    terminals: tuple[QuiverSetting, ...]
    free_vars: int


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" | "none" | "inconclusive"
    target: str | None = None
    trace: ReductionTrace | None = None
    states_explored: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def is_coregular(setting: QuiverSetting) -> Verdict:
    """Reduce with RI-RIII after splitting; coregular iff every terminal
    factor is one of the three coregular shapes.

    For all-dims-1 inputs the verdict is cross-checked against F = 0 on
    every prime strongly connected factor.
    """
    res = reduce_fully(setting, steps=("RI", "RII", "RIII"))
    answer = all(matches_coregular_form(t) for t in res.terminals)
    if setting.alpha_is_one():
        by_f = all(
            f_value(f) == 0
            for comp in strongly_connected_components(setting)
            for f in prime_decomposition(comp)
        )
        if by_f != answer:
            raise QuiverError(
                "internal inconsistency: reduction verdict disagrees with F = 0"
            )
    return Verdict(answer, res.trace, res.terminals, res.free_vars_total)


def is_ci(setting: QuiverSetting) -> Verdict:
    """Reduce with RI, RII, RIV after splitting; a complete intersection iff
    every terminal factor is a single bare vertex."""
    if not setting.alpha_is_one():
        raise DomainError("the C.I. decision is implemented for dimension vector (1,...,1)")
    res = reduce_fully(setting, steps=("RI", "RII", "RIV"))
    answer = all(t.vertex_count <= 1 and t.arrow_count == 0 for t in res.terminals)
    return Verdict(answer, res.trace, res.terminals, res.free_vars_total)


# -- descendant search ------------------------------------------------------------


def _sc_subsets(setting: QuiverSetting, bound: int):
    """Vertex subsets of size 2..bound inducing a strongly connected sub-digraph."""
    from itertools import combinations

    from .core import restrict

    verts = setting.vertices
    for size in range(2, min(bound, len(verts)) + 1):
        for subset in combinations(verts, size):
            if is_strongly_connected(restrict(setting, subset)):
                yield subset


def _successors(state: QuiverSetting, glue_bound: int):
    """Descendant moves in a fixed order: RII, RI, arrow deletion, gluing."""
    for v in state.vertices:
        if rii_applicable(state, v):
            yield ReductionStep("RII", (v,), state, apply_rii(state, v)[0], free_vars=len(state.loops_at(v)))
    if state.vertex_count > 1:
        for v in state.vertices:
            if ri_applicable(state, v):
                yield ReductionStep("RI", (v,), state, apply_ri(state, v))
    for a in state.arrows:
        after = delete_arrows(state, [a.id], prune_isolated=True)
        yield ReductionStep("SUBQUIVER", ("delete", (a.id,)), state, after)
    for subset in _sc_subsets(state, glue_bound):
        yield ReductionStep("GLUE", ("subset", subset), state, glue_subquiver(state, subset))


def find_forbidden_descendant(
    setting: QuiverSetting,
    targets=("g1", "g2"),
    budget: int = DEFAULT_SEARCH_BUDGET,
    glue_bound: int = DEFAULT_GLUE_BOUND,
) -> SearchResult:
    """Breadth-first search over descendants for an isomorphic copy of a target.

    States are deduplicated by canonical form and each depth is processed
    in canonical order, so the returned witness is deterministic. The
    search is a witness-finder, not the decider: exhausting the budget
    yields an explicit 'inconclusive', and 'none' is only returned when
    the whole descendant space was enumerated.
    """
    if not setting.alpha_is_one():
        raise DomainError("descendant search is implemented for dimension vector (1,...,1)")
    resolved = [SEARCH_TARGETS[t.lower()] if isinstance(t, str) else t for t in targets]
    for tq in resolved:
        if is_isomorphic(setting, tq.setting):
            return SearchResult("found", tq.name, ReductionTrace(), 1)

    seen = {canonical_key(setting)}
    frontier: list[tuple[QuiverSetting, ReductionTrace]] = [(setting, ReductionTrace())]
    explored = 1
    while frontier:
        frontier.sort(key=lambda item: canonical_key(item[0]))
        nxt: list[tuple[QuiverSetting, ReductionTrace]] = []
        for state, trace in frontier:
            for step in _successors(state, glue_bound):
                key = canonical_key(step.after)
                if key in seen:
                    continue
                seen.add(key)
                explored += 1
                extended = trace.extended(step)
                for tq in resolved:
                    if is_isomorphic(step.after, tq.setting):
                        return SearchResult("found", tq.name, extended, explored)
                if explored >= budget:
                    return SearchResult("inconclusive", None, None, explored)
                nxt.append((step.after, extended))
        frontier = nxt
    return SearchResult("none", None, None, explored)


# -- the coregularity obstruction ---------------------------------------------------


def _branch_to(trace: ReductionTrace, terminal: QuiverSetting) -> list[ReductionStep]:
    """Extract the linear branch of a working-set trace ending at `terminal`."""
    branch: list[ReductionStep] = []
    cur = terminal
    for step in reversed(trace.steps):
        if step.after == cur:
            branch.insert(0, step)
            cur = step.before
    return branch


def _first_bad_factor(setting: QuiverSetting):
    """Reduce by RI-RIII; return (factor, branch steps) for the first terminal
    that is not a coregular shape, or None if the setting is coregular."""
    res = reduce_fully(setting, steps=("RI", "RII", "RIII"))
    for t in res.terminals:
        if not matches_coregular_form(t):
            return t, _branch_to(res.trace, t)
    return None


def coregular_obstruction(setting: QuiverSetting) -> SearchResult:
    """Constructive witness that the setting is not coregular, or none.

    Follows the structure of the smoothness classification: reduce, pick a
    non-coregular factor, and either glue a non-Hamiltonian cycle and
    recurse (all dims 1), extract the doubled Hamiltonian cycle, or take
    the local quiver splitting one dimension off a higher-dimensional
    vertex. Witness traces end at a setting containing the two-vertex
    double-arrow pair as a subquiver.
    """
    steps: list[ReductionStep] = []
    current = setting
    try:
        while True:
            found = _first_bad_factor(current)
            if found is None:
                return SearchResult("none", states_explored=0)
            factor, branch = found
            steps.extend(branch)
            current = factor
            if contains_c1_subquiver(current):
                return SearchResult("found", "C1", ReductionTrace(tuple(steps)))
            vmax = max(current.vertices, key=lambda v: (current.dim(v), v))
            if current.dim(vmax) >= 2:
                step = _split_vertex_step(current, vmax)
                steps.append(step)
                if not contains_c1_subquiver(step.after):
                    return SearchResult("inconclusive")
                return SearchResult("found", "C1", ReductionTrace(tuple(steps)))
            # all dims 1: reduced factor, loopless, degrees >= 2
            cycles = primitive_cycles(current)
            non_ham = next(
                (c for c in cycles if len(c.vertex_set) < current.vertex_count), None
            )
            if non_ham is not None:
                subset = tuple(sorted(non_ham.vertex_set))
                glued = glue_subquiver(current, subset)
                steps.append(ReductionStep("GLUE", ("subset", subset), current, glued))
                current = glued
                continue
            steps.extend(_doubled_cycle_steps(current, cycles))
            return SearchResult("found", "C1", ReductionTrace(tuple(steps)))
    except ResourceLimitError:
        return SearchResult("inconclusive")


def _split_vertex_step(setting: QuiverSetting, v: str) -> ReductionStep:
    """GLUE step for the decomposition (alpha - eps_v) + eps_v."""
    beta = setting.dims
    beta[v] -= 1
    if beta[v] < 1:
        raise QuiverError("splitting needs dimension at least 2")
    support = QuiverSetting(setting.vertices, setting.arrows, beta)
    if not has_simple_rep(support):
        raise ResourceLimitError("no simple representation for the split part")
    parts = (
        (1, tuple(sorted(beta.items()))),
        (1, ((v, 1),)),
    )
    dec = Decomposition.of([(m, dict(b)) for m, b in parts])
    after = local_quiver(setting, dec)
    return ReductionStep("GLUE", ("decomposition", parts), setting, after)


def _doubled_cycle_steps(setting: QuiverSetting, cycles) -> list[ReductionStep]:
    """Witness steps when every primitive cycle is Hamiltonian.

    With all degrees at least 2, every arrow then parallels a Hamiltonian
    cycle arrow, so the setting contains a fully doubled oriented cycle;
    shrink it one vertex at a time down to the double-arrow pair.
    """
    ham = min(cycles, key=lambda c: c.arrows)
    order = ham.vertex_seq
    keep: list[str] = []
    for i, v in enumerate(order):
        w = order[(i + 1) % len(order)]
        parallel = sorted(a.id for a in setting.arrows_from(v) if a.target == w)
        if len(parallel) < 2:
            raise ResourceLimitError("expected a doubled Hamiltonian cycle")
        keep.extend(parallel[:2])
    steps: list[ReductionStep] = []
    current = setting
    if set(keep) != {a.id for a in current.arrows}:
        after = induced_subquiver(current, keep)
        steps.append(ReductionStep("SUBQUIVER", ("keep", tuple(sorted(keep))), current, after))
        current = after
    while current.vertex_count > 2:
        # drop one copy of the arrows leaving the least vertex, then remove it
        u = min(current.vertices)
        out = sorted(current.arrows_from(u), key=lambda a: a.id)
        drop = out[0].id
        after = delete_arrows(current, [drop], prune_isolated=True)
        steps.append(ReductionStep("SUBQUIVER", ("delete", (drop,)), current, after))
        current = after
        after = apply_ri(current, u)
        steps.append(ReductionStep("RI", (u,), current, after))
        current = after
    return steps


# -- corpus generation ----------------------------------------------------------------


def random_setting(
    seed: int,
    vertex_count: int,
    arrow_count: int,
    *,
    strongly_connected: bool = False,
    loopless: bool = False,
    min_degree: int = 0,
    max_dim: int = 1,
    attempts: int = 5000,
) -> QuiverSetting:
    """Deterministic pseudo-random setting satisfying the given constraints.

    Rejection-samples endpoint assignments until the constraints hold;
    raises GenerationError when the attempt budget runs out.
    """
    if vertex_count < 1 or arrow_count < 0:
        raise DomainError("counts must be positive")
    rng = random.Random(seed)
    verts = [f"v{i}" for i in range(1, vertex_count + 1)]
    for _ in range(attempts):
        arrows = []
        for i in range(1, arrow_count + 1):
            while True:
                s = rng.choice(verts)
                t = rng.choice(verts)
                if loopless and s == t:
                    continue
                break
            arrows.append((f"a{i}", s, t))
        dims = {v: (1 if max_dim <= 1 else rng.randint(1, max_dim)) for v in verts}
        cand = QuiverSetting(verts, arrows, dims)
        if strongly_connected and not is_strongly_connected(cand):
            continue
        if min_degree and any(
            min(degrees(cand, v)) < min_degree for v in cand.vertices
        ):
            continue
        return cand
    raise GenerationError(
        f"could not satisfy constraints in {attempts} attempts "
        f"(seed={seed}, {vertex_count}v/{arrow_count}a)"
    )
