"""Local quiver construction and simple-representation existence.

Two constructions live here. `glue_subquiver` is the all-dims-1 gluing:
a graph quotient that merges a strongly connected vertex subset and keeps
every arrow (internal arrows become loops, ids preserved). `local_quiver`
is the general construction from a semisimple decomposition, with arrow
counts delta_ij - chi(beta_i, beta_j); it carries fewer loops at a merged
part than the graph quotient (the difference, |subset| - 1 loops, is pure
free variables). Gluing keeps the quotient form so that loop stripping is
accounted for in exactly one place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    Arrow,
    QuiverSetting,
    is_strongly_connected,
    restrict,
    ringel_form,
    unit_vector,
)
from .errors import DecompositionError, DomainError

__all__ = [
    "Decomposition",
    "DecompositionPart",
    "has_simple_rep",
    "simple_class_count_kind",
    "iss_dimension",
    "glue_subquiver",
    "local_quiver",
    "merged_vertex_name",
]


def _is_oriented_cycle_shape(setting: QuiverSetting) -> bool:
    """Graph shape test: one directed cycle through all vertices, nothing else."""
    n = setting.vertex_count
    if n < 2 or setting.arrow_count != n:
        return False
    for v in setting.vertices:
        ins, outs = len(setting.arrows_into(v)), len(setting.arrows_from(v))
        if ins != 1 or outs != 1:
            return False
        if setting.loops_at(v):
            return False
    return is_strongly_connected(setting)


def _special_form(setting: QuiverSetting) -> str | None:
    """One of 'point', 'one-loop', 'cycle' if the underlying graph matches."""
    if setting.vertex_count == 1:
        if setting.arrow_count == 0:
            return "point"
        if setting.arrow_count == 1:
            return "one-loop"
        return None
    if _is_oriented_cycle_shape(setting):
        return "cycle"
    return None


def has_simple_rep(setting: QuiverSetting) -> bool:
    """Whether a simple representation with the setting's dimension vector exists.

    The three special graph shapes (a bare vertex, a vertex with one loop,
    an oriented cycle) admit simples exactly when every dimension is 1.
    Anything else needs strong connectivity plus chi(eps_v, alpha) <= 0 and
    chi(alpha, eps_v) <= 0 at every vertex.
    """
    if setting.is_empty():
        return False
    form = _special_form(setting)
    if form is not None:
        return setting.alpha_is_one()
    if not is_strongly_connected(setting):
        return False
    alpha = setting.dims
    for v in setting.vertices:
        ev = unit_vector(setting, v)
        if ringel_form(setting, ev, alpha) > 0 or ringel_form(setting, alpha, ev) > 0:
            return False
    return True


def simple_class_count_kind(setting: QuiverSetting) -> str:
    """'unique' for the single bare vertex, 'infinite' for every other simple setting."""
    if not has_simple_rep(setting):
        raise DomainError("setting has no simple representation")
    if setting.vertex_count == 1 and setting.arrow_count == 0:
        return "unique"
    return "infinite"


def iss_dimension(setting: QuiverSetting) -> int:
    """dim iss = 1 - chi(alpha, alpha); 0 for the single bare vertex."""
    if not has_simple_rep(setting):
        raise DomainError("setting has no simple representation")
    return 1 - ringel_form(setting, setting.dims, setting.dims)


def merged_vertex_name(subset, taken) -> str:
    """Deterministic name for a merged vertex, avoiding collisions."""
    name = "_".join(sorted(subset))
    while name in taken:
        name += "_m"
    return name


def glue_subquiver(setting: QuiverSetting, subset) -> QuiverSetting:
    """Merge a strongly connected vertex subset of an all-dims-1 setting.

    Every arrow survives with its id; arrows internal to the subset become
    loops at the merged vertex. Loops created this way are free variables
    and are left for RII to collect.
    """
    if not setting.alpha_is_one():
        raise DomainError("gluing is defined for dimension vector (1,...,1)")
    sub = set(subset)
    if not sub:
        raise DomainError("cannot glue an empty vertex subset")
    for v in sub:
        setting.dim(v)
    if len(sub) == 1:
        return setting
    if not is_strongly_connected(restrict(setting, sub)):
        raise DomainError(
            "glued subset must induce a strongly connected sub-digraph "
            "(no simple component exists for it)"
        )
    keep = [v for v in setting.vertices if v not in sub]
    merged = merged_vertex_name(sub, set(keep))

    def img(v: str) -> str:
        return merged if v in sub else v

    arrows = [Arrow(a.id, img(a.source), img(a.target), a.parents) for a in setting.arrows]
    return QuiverSetting(keep + [merged], arrows)


@dataclass(frozen=True)
class DecompositionPart:
    """One isotypic part: a multiplicity and a dimension vector (zeros allowed)."""

    multiplicity: int
    beta: tuple[tuple[str, int], ...]

    @staticmethod
    def of(multiplicity: int, beta: Mapping[str, int]) -> "DecompositionPart":
        return DecompositionPart(multiplicity, tuple(sorted((v, d) for v, d in beta.items() if d)))

    def beta_dict(self) -> dict[str, int]:
        return dict(self.beta)

    def support(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.beta)


@dataclass(frozen=True)
class Decomposition:
    """Semisimple decomposition alpha = sum multiplicity_i * beta_i."""

    parts: tuple[DecompositionPart, ...]

    @staticmethod
    def of(parts: Sequence[tuple[int, Mapping[str, int]]]) -> "Decomposition":
        return Decomposition(tuple(DecompositionPart.of(m, b) for m, b in parts))


def _support_setting(setting: QuiverSetting, part: DecompositionPart) -> QuiverSetting:
    sub = restrict(setting, part.support())
    return QuiverSetting(sub.vertices, sub.arrows, part.beta_dict())


def validate_decomposition(setting: QuiverSetting, decomposition: Decomposition) -> None:
    """Raise DecompositionError naming the failed clause, if any."""
    total: dict[str, int] = dict.fromkeys(setting.vertices, 0)
    for part in decomposition.parts:
        if part.multiplicity < 1:
            raise DecompositionError("sum-mismatch: multiplicities must be positive")
        for v, d in part.beta:
            if v not in total:
                raise DecompositionError(f"sum-mismatch: unknown vertex {v!r}")
            if d < 0:
                raise DecompositionError("sum-mismatch: negative dimension entry")
            total[v] += part.multiplicity * d
    if total != setting.dims:
        raise DecompositionError("sum-mismatch: parts do not sum to the dimension vector")
    kinds: dict[DecompositionPart, str] = {}
    for part in decomposition.parts:
        support = _support_setting(setting, part)
        if not has_simple_rep(support):
            raise DecompositionError(
                f"no-simple-rep: part {dict(part.beta)} admits no simple representation"
            )
        kinds[part] = simple_class_count_kind(support)
    seen: dict[tuple, int] = {}
    for part in decomposition.parts:
        seen[part.beta] = seen.get(part.beta, 0) + part.multiplicity
    for part in decomposition.parts:
        if seen[part.beta] > 1 and kinds[part] != "infinite":
            raise DecompositionError(
                "repeated-part-finite-classes: a repeated part needs at least as many "
                "distinct simple classes as its multiplicity"
            )


def local_quiver(setting: QuiverSetting, decomposition: Decomposition) -> QuiverSetting:
    """Local quiver of a validated decomposition.

    One vertex per part, of dimension equal to the part's multiplicity;
    delta_ij - chi(beta_i, beta_j) arrows from part i to part j. Negative
    counts mean the decomposition validation is wrong, so they fail loudly.
    """
    validate_decomposition(setting, decomposition)
    parts = decomposition.parts
    names = [f"s{i + 1}" for i in range(len(parts))]
    dims = {names[i]: parts[i].multiplicity for i in range(len(parts))}

    def full(beta: DecompositionPart) -> dict[str, int]:
        vec = dict.fromkeys(setting.vertices, 0)
        vec.update(beta.beta_dict())
        return vec

    arrows = []
    n = 1
    for i, pi in enumerate(parts):
        for j, pj in enumerate(parts):
            delta = 1 if i == j else 0
            count = delta - ringel_form(setting, full(pi), full(pj))
            if count < 0:
                raise DecompositionError(
                    f"negative-arrow-count: {count} arrows from part {i + 1} to part {j + 1}"
                )
            for _ in range(count):
                arrows.append(Arrow(f"a{n}", names[i], names[j]))
                n += 1
    return QuiverSetting(names, arrows, dims)
