"""Core data model: quiver settings and their structural decompositions.

A quiver setting is a directed multigraph (loops and parallel arrows
allowed) together with a strictly positive integer dimension per vertex.
Settings are immutable values; every operation returns a new setting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DomainError

__all__ = [
    "Arrow",
    "QuiverSetting",
    "ReductionStep",
    "ReductionTrace",
    "ringel_form",
    "degrees",
    "strongly_connected_components",
    "prime_decomposition",
    "induced_subquiver",
    "is_isomorphic",
    "canonical_key",
]


@dataclass(frozen=True)
class Arrow:
    """A single arrow with a stable identity.

    Parallel arrows are distinguished by id; `parents` records the pair of
    arrow ids a composed arrow was built from (RI) and is ignored by
    equality so that structurally equal settings compare equal.
    """

    id: str
    source: str
    target: str
    parents: tuple[str, ...] = field(default=(), compare=False)

    def is_loop(self) -> bool:
        return self.source == self.target


def _as_arrow(spec, auto: Iterator[int], used: set[str]) -> Arrow:
    if isinstance(spec, Arrow):
        return spec
    if len(spec) == 3:
        aid, src, dst = spec
        return Arrow(str(aid), str(src), str(dst))
    src, dst = spec
    n = next(auto)
    while f"a{n}" in used:
        n = next(auto)
    return Arrow(f"a{n}", str(src), str(dst))


class QuiverSetting:
    """Immutable quiver setting: vertices with dimensions plus arrows.

    Vertices are identified by non-empty strings; arrow ids are unique
    within a setting. Dimension defaults to 1 for any vertex not listed in
    `dims`. Zero or negative dimensions are rejected: callers must delete
    zero-dimensional vertices before constructing a setting.
    """

    __slots__ = ("_dims", "_arrows", "_by_id", "_out", "_in", "_key", "_canon")

    def __init__(
        self,
        vertices: Iterable[str],
        arrows: Iterable = (),
        dims: Mapping[str, int] | None = None,
    ):
        vs = [str(v) for v in vertices]
        vset = set(vs)
        if len(vset) != len(vs):
            raise DomainError("duplicate vertex names")
        if any(not v for v in vs):
            raise DomainError("vertex names must be non-empty")
        dmap = dict.fromkeys(vs, 1)
        if dims:
            for v, d in dims.items():
                v = str(v)
                if v not in vset:
                    raise DomainError(f"dimension given for unknown vertex {v!r}")
                if not isinstance(d, int) or d < 1:
                    raise DomainError(f"vertex {v!r} has non-positive dimension {d!r}")
                dmap[v] = d

        auto = itertools.count(1)
        alist: list[Arrow] = []
        ids: set[str] = set()
        for spec in arrows:
            a = _as_arrow(spec, auto, ids)
            if a.id in ids:
                raise DomainError(f"duplicate arrow id {a.id!r}")
            if a.source not in vset or a.target not in vset:
                raise DomainError(f"arrow {a.id!r} has endpoint outside the vertex set")
            ids.add(a.id)
            alist.append(a)
        alist.sort(key=lambda a: a.id)

        self._dims = dmap
        self._arrows = tuple(alist)
        self._by_id = {a.id: a for a in alist}
        out: dict[str, list[Arrow]] = {v: [] for v in vs}
        inc: dict[str, list[Arrow]] = {v: [] for v in vs}
        for a in alist:
            out[a.source].append(a)
            inc[a.target].append(a)
        self._out = {v: tuple(l) for v, l in out.items()}
        self._in = {v: tuple(l) for v, l in inc.items()}
        self._key = (
            tuple(sorted(dmap.items())),
            tuple((a.id, a.source, a.target) for a in alist),
        )
        self._canon = None

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self._dims))

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self._arrows

    @property
    def dims(self) -> dict[str, int]:
        return dict(self._dims)

    def dim(self, v: str) -> int:
        try:
            return self._dims[v]
        except KeyError:
            raise DomainError(f"unknown vertex {v!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._dims

    def arrow(self, aid: str) -> Arrow:
        try:
            return self._by_id[aid]
        except KeyError:
            raise DomainError(f"unknown arrow id {aid!r}") from None

    def arrows_from(self, v: str) -> tuple[Arrow, ...]:
        self.dim(v)
        return self._out[v]

    def arrows_into(self, v: str) -> tuple[Arrow, ...]:
        self.dim(v)
        return self._in[v]

    def loops_at(self, v: str) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows_from(v) if a.is_loop())

    def multiplicity(self, u: str, v: str) -> int:
        """Number of arrows from u to v."""
        return sum(1 for a in self.arrows_from(u) if a.target == v)

    @property
    def vertex_count(self) -> int:
        return len(self._dims)

    @property
    def arrow_count(self) -> int:
        return len(self._arrows)

    def alpha_is_one(self) -> bool:
        return all(d == 1 for d in self._dims.values())

    def is_empty(self) -> bool:
        return not self._dims

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, QuiverSetting) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"QuiverSetting({self.vertex_count}v/{self.arrow_count}a)"

    def describe(self) -> str:
        """Short human-readable summary, e.g. '2v/5a dims=1'."""
        ds = sorted(set(self._dims.values()))
        dtxt = ",".join(map(str, ds)) if ds else "-"
        return f"{self.vertex_count}v/{self.arrow_count}a dims={dtxt}"


# -- reduction traces -------------------------------------------------------

STEP_KINDS = ("RI", "RII", "RIII", "RIV", "GLUE", "SUBQUIVER", "PRIME-SPLIT", "SCC-SPLIT")


@dataclass(frozen=True)
class ReductionStep:
    """One applied rewrite with before/after snapshots.

    `free_vars` is nonzero only for RII and RIII steps. Split steps
    (SCC-SPLIT / PRIME-SPLIT) record one step per extracted factor, with
    `before` the composite and `after` the factor, so a trace replays as a
    working set of settings rather than a single chain.
    """

    kind: str
    params: tuple
    before: "QuiverSetting"
    after: "QuiverSetting"
    free_vars: int = 0

    def __post_init__(self):
        if self.kind not in STEP_KINDS:
            raise DomainError(f"unknown step kind {self.kind!r}")
        if self.free_vars and self.kind not in ("RII", "RIII"):
            raise DomainError("free variables can only be extracted by RII/RIII")

    def describe(self) -> str:
        p = ",".join(str(x) for x in self.params)
        extra = f" free={self.free_vars}" if self.free_vars else ""
        return f"{self.kind}({p}){extra}  {self.before.describe()} -> {self.after.describe()}"


@dataclass(frozen=True)
class ReductionTrace:
    """Ordered certificate of applied steps."""

    steps: tuple[ReductionStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def free_vars_total(self) -> int:
        return sum(s.free_vars for s in self.steps)

    def extended(self, *steps: ReductionStep) -> "ReductionTrace":
        return ReductionTrace(self.steps + tuple(steps))


# -- the Ringel form and degrees ---------------------------------------------


def _check_dimvec(setting: QuiverSetting, vec: Mapping[str, int], name: str) -> None:
    if set(vec) != set(setting._dims):
        raise DomainError(f"{name} is not defined on exactly the vertex set")


def ringel_form(setting: QuiverSetting, beta: Mapping[str, int], gamma: Mapping[str, int]) -> int:
    """Bilinear form sum_v beta(v)gamma(v) - sum_arrows beta(s)gamma(t)."""
    _check_dimvec(setting, beta, "beta")
    _check_dimvec(setting, gamma, "gamma")
    total = sum(beta[v] * gamma[v] for v in setting._dims)
    total -= sum(beta[a.source] * gamma[a.target] for a in setting.arrows)
    return total


def unit_vector(setting: QuiverSetting, v: str) -> dict[str, int]:
    """The dimension vector that is 1 at v and 0 elsewhere."""
    setting.dim(v)
    vec = dict.fromkeys(setting._dims, 0)
    vec[v] = 1
    return vec


def degrees(setting: QuiverSetting, v: str) -> tuple[int, int]:
    """(in-degree, out-degree) as raw arrow counts; a loop counts toward both."""
    return len(setting.arrows_into(v)), len(setting.arrows_from(v))


# -- connectivity ------------------------------------------------------------


def _tarjan_sccs(setting: QuiverSetting) -> list[frozenset[str]]:
    """Strongly connected components, iterative Tarjan."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[frozenset[str]] = []
    counter = itertools.count()

    for root in sorted(setting._dims):
        if root in index:
            continue
        work = [(root, iter(setting._out[root]))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for a in it:
                w = a.target
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(setting._out[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(frozenset(comp))
    return sccs


def restrict(setting: QuiverSetting, vertex_subset: Iterable[str]) -> QuiverSetting:
    """Induced sub-setting on a vertex subset: keeps arrows with both ends inside."""
    keep = set(vertex_subset)
    for v in keep:
        setting.dim(v)
    arrows = [a for a in setting.arrows if a.source in keep and a.target in keep]
    return QuiverSetting(keep, arrows, {v: setting._dims[v] for v in keep})


def strongly_connected_components(setting: QuiverSetting) -> list[QuiverSetting]:
    """Induced sub-settings on the SCCs; arrows between components are dropped.

    Components are returned sorted by their smallest vertex name.
    """
    comps = _tarjan_sccs(setting)
    comps.sort(key=min)
    return [restrict(setting, c) for c in comps]


def is_strongly_connected(setting: QuiverSetting) -> bool:
    if setting.vertex_count <= 1:
        return True
    return len(_tarjan_sccs(setting)) == 1


# -- prime decomposition -----------------------------------------------------


def _arrow_groups_at(setting: QuiverSetting, v: str) -> list[list[Arrow]]:
    """Partition the arrows into connected-sum summands meeting only at v.

    Deleting v from the underlying undirected graph leaves components;
    arrows are grouped by the component they touch. Loops at v form
    singleton groups: each shares only the vertex v with everything else.
    """
    comp: dict[str, str] = {}  # vertex -> component representative
    others = [u for u in setting._dims if u != v]
    # union-find over the remaining vertices
    parent = {u: u for u in others}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in setting.arrows:
        if v in (a.source, a.target):
            continue
        ra, rb = find(a.source), find(a.target)
        if ra != rb:
            parent[ra] = rb
    for u in others:
        comp[u] = find(u)

    groups: dict[str, list[Arrow]] = {}
    singletons: list[list[Arrow]] = []
    for a in setting.arrows:
        if a.source == v and a.target == v:
            singletons.append([a])
        elif a.source == v:
            groups.setdefault(comp[a.target], []).append(a)
        elif a.target == v:
            groups.setdefault(comp[a.source], []).append(a)
        else:
            groups.setdefault(comp[a.source], []).append(a)
    ordered = [groups[k] for k in sorted(groups, key=lambda k: min(a.id for a in groups[k]))]
    return ordered + sorted(singletons, key=lambda g: g[0].id)


def prime_decomposition(setting: QuiverSetting) -> list[QuiverSetting]:
    """Maximal connected-sum decomposition at dimension-1 cut vertices.

    Each returned factor is prime; factors sharing a cut vertex each
    contain their own copy of it. Requires a strongly connected input.
    """
    if not is_strongly_connected(setting):
        raise DomainError("prime decomposition requires a strongly connected setting")
    out: list[QuiverSetting] = []
    work = [setting]
    while work:
        s = work.pop()
        for v in sorted(s._dims):
            if s._dims[v] != 1:
                continue
            groups = _arrow_groups_at(s, v)
            if len(groups) < 2:
                continue
            for g in groups:
                verts = {v}
                for a in g:
                    verts.update((a.source, a.target))
                work.append(QuiverSetting(verts, g, {u: s._dims[u] for u in verts}))
            break
        else:
            out.append(s)
    out.sort(key=lambda f: (min(f.vertices), f._key))
    return out


# -- subquivers ----------------------------------------------------------------


def induced_subquiver(
    setting: QuiverSetting,
    keep_arrows: Iterable[str],
    extra_vertices: Iterable[str] = (),
) -> QuiverSetting:
    """Sub-setting retaining the given arrows, their endpoints, and any
    explicitly listed extra vertices; dimensions are restricted."""
    aids = set(keep_arrows)
    arrows = [setting.arrow(aid) for aid in sorted(aids)]
    verts = set(extra_vertices)
    for v in verts:
        setting.dim(v)
    for a in arrows:
        verts.update((a.source, a.target))
    return QuiverSetting(verts, arrows, {v: setting._dims[v] for v in verts})


def delete_arrows(setting: QuiverSetting, drop: Iterable[str], prune_isolated: bool = False) -> QuiverSetting:
    """Setting without the given arrows; optionally drops vertices left isolated."""
    dropset = set(drop)
    for aid in dropset:
        setting.arrow(aid)
    arrows = [a for a in setting.arrows if a.id not in dropset]
    verts = set(setting.vertices)
    if prune_isolated:
        touched = set()
        for a in arrows:
            touched.update((a.source, a.target))
        verts = touched
    return QuiverSetting(verts, arrows, {v: setting._dims[v] for v in verts})


# -- isomorphism and canonical forms ------------------------------------------


def _signatures(setting: QuiverSetting) -> dict[str, tuple]:
    """Iteratively refined vertex signatures; isomorphism-invariant."""
    sig = {
        v: (setting._dims[v], len(setting.loops_at(v)), len(setting._in[v]), len(setting._out[v]))
        for v in setting._dims
    }
    for _ in range(setting.vertex_count):
        nxt = {}
        for v in setting._dims:
            outs = sorted((sig[a.target] for a in setting._out[v]), key=repr)
            ins = sorted((sig[a.source] for a in setting._in[v]), key=repr)
            nxt[v] = (sig[v], tuple(outs), tuple(ins))
        # compress to small ints to keep tuples bounded
        codes = {s: i for i, s in enumerate(sorted(set(nxt.values()), key=repr))}
        compressed = {v: (sig[v][0], codes[nxt[v]]) for v in setting._dims}
        if len(set(compressed.values())) == len(set(sig.values())):
            break
        sig = compressed
    return sig


def _encode(setting: QuiverSetting, order: Sequence[str]) -> tuple:
    pos = {v: i for i, v in enumerate(order)}
    dims = tuple(setting._dims[v] for v in order)
    mult: dict[tuple[int, int], int] = {}
    for a in setting.arrows:
        key = (pos[a.source], pos[a.target])
        mult[key] = mult.get(key, 0) + 1
    return dims, tuple(sorted(mult.items()))


def canonical_key(setting: QuiverSetting) -> tuple:
    """Isomorphism-invariant canonical encoding.

    Two settings have equal keys iff they are isomorphic (vertex bijection
    preserving dimensions and per-pair arrow multiplicities). Exhaustive
    over signature-respecting vertex orders; intended for small settings.
    """
    if setting._canon is not None:
        return setting._canon
    sig = _signatures(setting)
    classes: dict[tuple, list[str]] = {}
    for v, s in sig.items():
        classes.setdefault(s, []).append(v)
    ordered_classes = [sorted(classes[s]) for s in sorted(classes, key=repr)]
    class_sizes = tuple(len(c) for c in ordered_classes)

    best = None
    for perms in itertools.product(*(itertools.permutations(c) for c in ordered_classes)):
        order = [v for p in perms for v in p]
        enc = _encode(setting, order)
        if best is None or enc < best:
            best = enc
    key = (class_sizes, best)
    setting._canon = key
    return key


def is_isomorphic(a: QuiverSetting, b: QuiverSetting) -> bool:
    """True iff some vertex bijection preserves dims and arrow multiplicities.

    Arrow ids are ignored; parallel arrows are counted with multiplicity.
    """
    if a.vertex_count != b.vertex_count or a.arrow_count != b.arrow_count:
        return False
    if sorted(a._dims.values()) != sorted(b._dims.values()):
        return False
    return canonical_key(a) == canonical_key(b)
