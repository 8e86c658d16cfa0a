"""The reduction calculus: applicability tests, step application, and the
full reduction driver producing a replayable trace.

Step priority in the driver is RII, then connectivity/prime splitting,
then RI, RIII, RIV, with lowest-vertex-id tie breaking. The final
classification is order-independent; a fixed order makes traces
reproducible.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .core import (
    Arrow,
    QuiverSetting,
    ReductionStep,
    ReductionTrace,
    induced_subquiver,
    delete_arrows,
    prime_decomposition,
    ringel_form,
    strongly_connected_components,
    unit_vector,
)
from .errors import DomainError, ReductionError, ResourceLimitError
from .localquiver import Decomposition, glue_subquiver, local_quiver

__all__ = [
    "ri_applicable",
    "apply_ri",
    "rii_applicable",
    "apply_rii",
    "riii_applicable",
    "apply_riii",
    "count_simple_paths",
    "riv_applicable",
    "apply_riv",
    "reduce_fully",
    "ReduceResult",
    "apply_step",
    "replay_linear",
    "verify_trace",
]

DEFAULT_PATH_BUDGET = 10**7
ALL_STEPS = ("RI", "RII", "RIII", "RIV")


def _fresh_ids(setting: QuiverSetting, prefix: str):
    used = {a.id for a in setting.arrows}
    counter = itertools.count(1)

    def gen() -> str:
        while True:
            cand = f"{prefix}{next(counter)}"
            if cand not in used:
                used.add(cand)
                return cand

    return gen


# -- RI: removing vertices -----------------------------------------------------


def ri_applicable(setting: QuiverSetting, v: str) -> bool:
    """v has no loops and chi(alpha, eps_v) >= 0 or chi(eps_v, alpha) >= 0.

    For all dims 1 this says the in-degree or the out-degree is at most 1.
    """
    if setting.loops_at(v):
        return False
    alpha = setting.dims
    ev = unit_vector(setting, v)
    return ringel_form(setting, alpha, ev) >= 0 or ringel_form(setting, ev, alpha) >= 0


def apply_ri(setting: QuiverSetting, v: str) -> QuiverSetting:
    """Remove v, composing each in-arrow with each out-arrow into a fresh arrow."""
    if not ri_applicable(setting, v):
        raise ReductionError(f"RI is not applicable at {v!r}")
    incoming = sorted(setting.arrows_into(v), key=lambda a: a.id)
    outgoing = sorted(setting.arrows_from(v), key=lambda a: a.id)
    fresh = _fresh_ids(setting, "c")
    arrows = [a for a in setting.arrows if v not in (a.source, a.target)]
    for a in incoming:
        for b in outgoing:
            arrows.append(Arrow(fresh(), a.source, b.target, parents=(a.id, b.id)))
    verts = [u for u in setting.vertices if u != v]
    return QuiverSetting(verts, arrows, {u: setting.dim(u) for u in verts})


# -- RII: removing loops at dimension-1 vertices --------------------------------


def rii_applicable(setting: QuiverSetting, v: str) -> bool:
    return setting.dim(v) == 1 and bool(setting.loops_at(v))


def apply_rii(setting: QuiverSetting, v: str) -> tuple[QuiverSetting, int]:
    """Strip the k loops at a dimension-1 vertex; each is one free variable."""
    if setting.dim(v) != 1:
        raise ReductionError(f"RII needs dimension 1 at {v!r}")
    loops = setting.loops_at(v)
    if not loops:
        raise ReductionError(f"RII needs at least one loop at {v!r}")
    return delete_arrows(setting, [a.id for a in loops]), len(loops)


# -- RIII: removing a loop at a higher-dimensional vertex -----------------------


def _riii_direction(setting: QuiverSetting, v: str) -> str | None:
    """'out' or 'in' when RIII applies at v, preferring the out-form."""
    if setting.dim(v) < 2 or len(setting.loops_at(v)) != 1:
        return None
    alpha = setting.dims
    ev = unit_vector(setting, v)
    if ringel_form(setting, ev, alpha) == -1:
        return "out"
    if ringel_form(setting, alpha, ev) == -1:
        return "in"
    return None


def riii_applicable(setting: QuiverSetting, v: str) -> bool:
    """dim(v) = k >= 2, exactly one loop, and aside from the loop a single
    arrow leaving toward (or entering from) a dimension-1 vertex."""
    return _riii_direction(setting, v) is not None


def apply_riii(setting: QuiverSetting, v: str) -> tuple[QuiverSetting, int]:
    """Remove the loop and widen the single through-arrow to k parallel arrows.

    The k loop invariants split off as free variables, so dim iss drops by
    exactly k; the invariance suite checks this bookkeeping.
    """
    direction = _riii_direction(setting, v)
    if direction is None:
        raise ReductionError(f"RIII is not applicable at {v!r}")
    k = setting.dim(v)
    loop = setting.loops_at(v)[0]
    if direction == "out":
        single = [a for a in setting.arrows_from(v) if not a.is_loop()]
    else:
        single = [a for a in setting.arrows_into(v) if not a.is_loop()]
    assert len(single) == 1 and setting.dim(single[0].target if direction == "out" else single[0].source) == 1
    old = single[0]
    base = delete_arrows(setting, [loop.id, old.id])
    fresh = _fresh_ids(setting, "r")
    widened = [Arrow(fresh(), old.source, old.target, parents=(loop.id, old.id)) for _ in range(k)]
    return QuiverSetting(base.vertices, list(base.arrows) + widened, base.dims), k


# -- simple path counting and RIV ------------------------------------------------


def count_simple_paths(
    setting: QuiverSetting, source: str, target: str, budget: int = DEFAULT_PATH_BUDGET
) -> int:
    """Directed paths visiting no vertex twice; parallel arrows give distinct paths."""
    if source == target:
        raise DomainError("path counting requires distinct endpoints")
    setting.dim(source)
    setting.dim(target)
    count = 0
    expansions = 0
    stack = [(source, frozenset([source]))]
    while stack:
        v, visited = stack.pop()
        for a in setting.arrows_from(v):
            expansions += 1
            if expansions > budget:
                raise ResourceLimitError(f"path counting exceeded {budget} expansions")
            w = a.target
            if w == target:
                count += 1
            elif w not in visited:
                stack.append((w, visited | {w}))
    return count


def riv_applicable(setting: QuiverSetting, v1: str, v2: str) -> bool:
    """Connected pair with (2,2) simple-path counts, or a unique path one way."""
    if not setting.alpha_is_one():
        return False
    if v1 == v2:
        return False
    if setting.multiplicity(v1, v2) < 1 or setting.multiplicity(v2, v1) < 1:
        return False
    fwd = count_simple_paths(setting, v1, v2)
    if fwd == 1:
        return True
    bwd = count_simple_paths(setting, v2, v1)
    return bwd == 1 or (fwd == 2 and bwd == 2)


def apply_riv(setting: QuiverSetting, v1: str, v2: str) -> QuiverSetting:
    """Glue the connected pair; arrows between them become loops and are
    retained for RII to collect."""
    if not riv_applicable(setting, v1, v2):
        raise ReductionError(f"RIV is not applicable to ({v1!r}, {v2!r})")
    return glue_subquiver(setting, [v1, v2])


# -- the driver -------------------------------------------------------------------


@dataclass(frozen=True)
class ReduceResult:
    terminals: tuple[QuiverSetting, ...]
    trace: ReductionTrace
    free_vars_total: int


def _is_terminal_point(s: QuiverSetting) -> bool:
    return s.vertex_count <= 1 and s.arrow_count == 0


def reduce_fully(setting: QuiverSetting, steps=ALL_STEPS) -> ReduceResult:
    """Split into strongly connected components and prime factors and apply
    the enabled steps until nothing applies; returns all terminal factors.

    RIV is attempted only on all-dims-1 factors. Deterministic: factors are
    processed in sorted order and steps pick the lowest applicable vertex.
    """
    recorded: list[ReductionStep] = []
    terminals: list[QuiverSetting] = []
    work: deque[QuiverSetting] = deque([setting])

    while work:
        s = work.popleft()
        if _is_terminal_point(s):
            terminals.append(s)
            continue

        if "RII" in steps:
            v = next((u for u in s.vertices if rii_applicable(s, u)), None)
            if v is not None:
                after, k = apply_rii(s, v)
                recorded.append(ReductionStep("RII", (v,), s, after, free_vars=k))
                work.appendleft(after)
                continue

        comps = strongly_connected_components(s)
        if len(comps) > 1:
            for c in comps:
                recorded.append(ReductionStep("SCC-SPLIT", (c.vertices,), s, c))
            work.extendleft(reversed(comps))
            continue

        factors = prime_decomposition(s)
        if len(factors) > 1:
            for f in factors:
                recorded.append(ReductionStep("PRIME-SPLIT", (f.vertices,), s, f))
            work.extendleft(reversed(factors))
            continue

        applied = False
        if "RI" in steps and s.vertex_count > 1:
            v = next((u for u in s.vertices if ri_applicable(s, u)), None)
            if v is not None:
                after = apply_ri(s, v)
                recorded.append(ReductionStep("RI", (v,), s, after))
                work.appendleft(after)
                applied = True
        if not applied and "RIII" in steps:
            v = next((u for u in s.vertices if riii_applicable(s, u)), None)
            if v is not None:
                after, k = apply_riii(s, v)
                recorded.append(ReductionStep("RIII", (v,), s, after, free_vars=k))
                work.appendleft(after)
                applied = True
        if not applied and "RIV" in steps and s.alpha_is_one():
            pair = next(
                (
                    (x, y)
                    for x, y in itertools.permutations(s.vertices, 2)
                    if riv_applicable(s, x, y)
                ),
                None,
            )
            if pair is not None:
                after = apply_riv(s, *pair)
                recorded.append(ReductionStep("RIV", pair, s, after))
                work.appendleft(after)
                applied = True
        if not applied:
            terminals.append(s)

    trace = ReductionTrace(tuple(recorded))
    return ReduceResult(tuple(terminals), trace, trace.free_vars_total)


# -- replay -------------------------------------------------------------------------


def apply_step(kind: str, setting: QuiverSetting, params: tuple) -> QuiverSetting:
    """Re-apply a recorded step; used to replay certificates."""
    if kind == "RI":
        return apply_ri(setting, params[0])
    if kind == "RII":
        return apply_rii(setting, params[0])[0]
    if kind == "RIII":
        return apply_riii(setting, params[0])[0]
    if kind == "RIV":
        return apply_riv(setting, params[0], params[1])
    if kind == "GLUE":
        mode, arg = params
        if mode == "subset":
            return glue_subquiver(setting, arg)
        if mode == "decomposition":
            parts = [(mult, dict(beta)) for mult, beta in arg]
            return local_quiver(setting, Decomposition.of(parts))
        raise DomainError(f"unknown GLUE mode {mode!r}")
    if kind == "SUBQUIVER":
        mode, arg = params
        if mode == "delete":
            return delete_arrows(setting, arg, prune_isolated=True)
        if mode == "keep":
            return induced_subquiver(setting, arg)
        raise DomainError(f"unknown SUBQUIVER mode {mode!r}")
    if kind in ("SCC-SPLIT", "PRIME-SPLIT"):
        splitter = strongly_connected_components if kind == "SCC-SPLIT" else prime_decomposition
        wanted = set(params[0])
        for f in splitter(setting):
            if set(f.vertices) == wanted:
                return f
        raise DomainError(f"{kind} factor {sorted(wanted)} not found")
    raise DomainError(f"unknown step kind {kind!r}")


def replay_linear(start: QuiverSetting, trace: ReductionTrace) -> QuiverSetting:
    """Replay a single-branch trace, verifying every recorded snapshot."""
    current = start
    for step in trace:
        if step.before != current:
            raise DomainError(f"trace mismatch: step {step.kind} does not chain")
        current = apply_step(step.kind, current, step.params)
        if current != step.after:
            raise DomainError(f"trace mismatch: recorded after-state differs at {step.kind}")
    return current


def verify_trace(start: QuiverSetting, trace: ReductionTrace) -> bool:
    """Verify a (possibly branching) trace as a working-set certificate."""
    working: list[QuiverSetting] = [start]
    for step in trace:
        if step.before in working:
            working.remove(step.before)
        elif step.kind not in ("SCC-SPLIT", "PRIME-SPLIT"):
            return False
        result = apply_step(step.kind, step.before, step.params)
        if result != step.after:
            return False
        working.append(step.after)
    return True
