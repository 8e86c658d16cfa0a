import pytest
from hypothesis import given, settings

from quiverci.core import QuiverSetting, is_isomorphic, strongly_connected_components
from quiverci.cycles import f_value
from quiverci.errors import DomainError, ReductionError
from quiverci.localquiver import has_simple_rep, iss_dimension
from quiverci.reductions import (
    apply_ri,
    apply_rii,
    apply_riii,
    apply_riv,
    count_simple_paths,
    reduce_fully,
    replay_linear,
    ri_applicable,
    rii_applicable,
    riii_applicable,
    riv_applicable,
    verify_trace,
)
from quiverci.toric import is_ci_toric, min_generators

from . import oracles
from .conftest import build, oriented_cycle, small_settings


class TestRI:
    def test_cycle_vertices_applicable(self):
        tri = oriented_cycle(3)
        assert all(ri_applicable(tri, v) for v in tri.vertices)

    def test_g1_not_applicable(self, g1):
        assert not ri_applicable(g1, "v1") and not ri_applicable(g1, "v2")

    def test_loop_blocks_ri(self):
        s = build(["v"], [("l", "v", "v")])
        assert not ri_applicable(s, "v")

    def test_triangle_becomes_two_cycle(self):
        tri = oriented_cycle(3)
        out = apply_ri(tri, "v3")
        assert is_isomorphic(out, oriented_cycle(2))

    def test_two_cycle_becomes_loop(self):
        out = apply_ri(oriented_cycle(2), "v2")
        assert out.vertex_count == 1 and len(out.loops_at(out.vertices[0])) == 1

    def test_fan_in_composition(self):
        s = build(
            ["u1", "u2", "v", "w"],
            [("a1", "u1", "v"), ("a2", "u2", "v"), ("b", "v", "w"),
             ("r1", "w", "u1"), ("r2", "w", "u2")],
        )
        out = apply_ri(s, "v")
        composed = [a for a in out.arrows if a.parents]
        assert len(composed) == 2
        assert {a.parents for a in composed} == {("a1", "b"), ("a2", "b")}

    def test_not_applicable_raises(self, g1):
        with pytest.raises(ReductionError):
            apply_ri(g1, "v1")

    @given(small_settings())
    @settings(max_examples=50, deadline=None)
    def test_preserves_iss_dimension(self, s):
        # RI keeps the invariant ring, hence dim iss, whenever defined
        if not has_simple_rep(s):
            return
        for v in s.vertices:
            if s.vertex_count > 1 and ri_applicable(s, v):
                out = apply_ri(s, v)
                if has_simple_rep(out):
                    assert iss_dimension(out) == iss_dimension(s)


class TestRII:
    def test_strips_all_loops(self):
        s = build(["v"], [("l1", "v", "v"), ("l2", "v", "v"), ("l3", "v", "v")])
        out, k = apply_rii(s, "v")
        assert k == 3 and out.arrow_count == 0

    def test_two_cycle_plus_loop(self):
        s = build(["v1", "v2"], [("a", "v1", "v2"), ("b", "v2", "v1"), ("l", "v1", "v1")])
        out, k = apply_rii(s, "v1")
        assert k == 1 and is_isomorphic(out, oriented_cycle(2))

    def test_loopless_vertex_raises(self):
        with pytest.raises(ReductionError):
            apply_rii(oriented_cycle(2), "v1")

    def test_needs_dim_one(self):
        s = build(["v"], [("l", "v", "v")], {"v": 2})
        assert not rii_applicable(s, "v")
        with pytest.raises(ReductionError):
            apply_rii(s, "v")


class TestRIII:
    def setup_method(self):
        # dim-2 vertex with one loop, single arrow to a dim-1 vertex and back
        self.s = build(
            ["v", "w"],
            [("l", "v", "v"), ("f", "v", "w"), ("g", "w", "v")],
            {"v": 2, "w": 1},
        )

    def test_applicable(self):
        assert riii_applicable(self.s, "v")

    def test_rewrite_widens_single_arrow(self):
        out, k = apply_riii(self.s, "v")
        assert k == 2
        assert not out.loops_at("v")
        assert out.multiplicity("v", "w") == 2
        assert out.multiplicity("w", "v") == 1

    def test_dimension_bookkeeping(self):
        # C[iss] factors as C[iss'] (x) k free variables
        out, k = apply_riii(self.s, "v")
        assert iss_dimension(self.s) == 1 - (-3)  # 4, from 1 - chi
        # the reduced quiver has a 2-dimensional moduli: 4 - 2 free vars
        from quiverci.core import ringel_form

        assert (1 - ringel_form(out, out.dims, out.dims)) == iss_dimension(self.s) - k

    def test_dim_one_not_applicable(self):
        s = build(["v"], [("l", "v", "v")])
        assert not riii_applicable(s, "v")

    def test_two_arrows_each_way_not_applicable(self):
        s = build(
            ["v", "w"],
            [("l", "v", "v"), ("f1", "v", "w"), ("f2", "v", "w"),
             ("g1", "w", "v"), ("g2", "w", "v")],
            {"v": 3, "w": 1},
        )
        assert not riii_applicable(s, "v")

    def test_in_form(self):
        s = build(
            ["u", "v"],
            [("l", "v", "v"), ("g", "u", "v"), ("f1", "v", "u"), ("f2", "v", "u"), ("f3", "v", "u")],
            {"v": 2, "u": 1},
        )
        assert riii_applicable(s, "v")
        out, k = apply_riii(s, "v")
        assert k == 2
        assert out.multiplicity("u", "v") == 2  # the in-arrow was widened
        assert out.multiplicity("v", "u") == 3

    def test_coregular_verdict_unchanged(self):
        # the rewrite is validated against the classification pipeline
        from quiverci.classify import coregular_obstruction, is_coregular

        before = is_coregular(self.s).answer
        out, _ = apply_riii(self.s, "v")
        assert is_coregular(out).answer == before
        assert (coregular_obstruction(self.s).status == "none") == before


class TestPathCounting:
    def test_c1(self, c1):
        assert count_simple_paths(c1, "v1", "v2") == 2

    def test_g1(self, g1):
        assert count_simple_paths(g1, "v1", "v2") == 3
        assert count_simple_paths(g1, "v2", "v1") == 2

    def test_triangle(self):
        assert count_simple_paths(oriented_cycle(3), "v1", "v2") == 1

    def test_same_vertex_rejected(self, g1):
        with pytest.raises(DomainError):
            count_simple_paths(g1, "v1", "v1")

    @given(small_settings())
    @settings(max_examples=40, deadline=None)
    def test_matches_recursion_oracle(self, s):
        verts = s.vertices
        for u in verts[:3]:
            for v in verts[:3]:
                if u != v:
                    assert count_simple_paths(s, u, v) == oracles.brute_simple_paths(s, u, v)


class TestRIV:
    def test_c1_applicable(self, c1):
        assert riv_applicable(c1, "v1", "v2")

    def test_g1_not(self, g1):
        assert not riv_applicable(g1, "v1", "v2")
        assert not riv_applicable(g1, "v2", "v1")

    def test_single_two_cycle(self):
        s = oriented_cycle(2)
        assert riv_applicable(s, "v1", "v2")
        out = apply_riv(s, "v1", "v2")
        assert out.vertex_count == 1 and len(out.loops_at(out.vertices[0])) == 2

    def test_c1_glues_to_four_loops(self, c1):
        out = apply_riv(c1, "v1", "v2")
        assert out.vertex_count == 1 and out.arrow_count == 4
        assert all(a.is_loop() for a in out.arrows)

    def test_pair_with_tail(self):
        s = build(
            ["v1", "v2", "v3"],
            [("a", "v1", "v2"), ("b", "v2", "v1"), ("c", "v2", "v3"), ("d", "v3", "v1")],
        )
        assert riv_applicable(s, "v1", "v2")
        out = apply_riv(s, "v1", "v2")
        merged = next(v for v in out.vertices if v != "v3")
        assert len(out.loops_at(merged)) == 2
        assert out.multiplicity(merged, "v3") == 1 and out.multiplicity("v3", merged) == 1

    def test_not_connected_pair(self):
        assert not riv_applicable(oriented_cycle(3), "v1", "v2")


class TestReduceFully:
    def test_c1(self, c1):
        res = reduce_fully(c1)
        assert [t.describe() for t in res.terminals] == ["1v/0a dims=1"]
        assert res.free_vars_total == 4
        assert [s.kind for s in res.trace] == ["RIV", "RII"]

    def test_oriented_cycles(self):
        for k in (2, 3, 6):
            res = reduce_fully(oriented_cycle(k))
            assert len(res.terminals) == 1
            assert res.terminals[0].arrow_count == 0
            assert res.free_vars_total == 1
            kinds = [s.kind for s in res.trace]
            assert kinds == ["RI"] * (k - 1) + ["RII"]

    def test_g1_is_terminal(self, g1):
        res = reduce_fully(g1)
        assert res.terminals == (g1,)
        assert len(res.trace) == 0

    def test_connected_sum_of_two_c1(self):
        s = build(
            ["x", "y", "z"],
            [("a1", "x", "y"), ("a2", "x", "y"), ("b1", "y", "x"), ("b2", "y", "x"),
             ("c1", "y", "z"), ("c2", "y", "z"), ("d1", "z", "y"), ("d2", "z", "y")],
        )
        res = reduce_fully(s)
        assert len(res.terminals) == 2
        assert all(t.arrow_count == 0 for t in res.terminals)
        assert res.free_vars_total == 8
        assert res.trace.steps[0].kind == "PRIME-SPLIT"

    def test_scc_split(self):
        s = build(
            ["a", "b", "c", "d"],
            [("e1", "a", "b"), ("e2", "b", "a"), ("e3", "c", "d"), ("e4", "d", "c"),
             ("x", "a", "c")],
        )
        res = reduce_fully(s)
        assert len(res.terminals) == 2
        assert any(st.kind == "SCC-SPLIT" for st in res.trace)

    def test_determinism(self, c1):
        assert reduce_fully(c1) == reduce_fully(c1)

    def test_step_restriction(self, c1):
        res = reduce_fully(c1, steps=("RI", "RII"))
        assert res.terminals == (c1,)  # RIV disabled: C1 is stuck

    @given(small_settings())
    @settings(max_examples=40, deadline=None)
    def test_traces_verify(self, s):
        res = reduce_fully(s)
        assert verify_trace(s, res.trace)

    @given(small_settings(max_dim=3))
    @settings(max_examples=40, deadline=None)
    def test_terminates_on_general_dims(self, s):
        res = reduce_fully(s)
        assert verify_trace(s, res.trace)


def _profile(s):
    return (is_ci_toric(s), f_value(s) == 0, min_generators(s).total - f_value(s))


class TestClassificationInvariance:
    """Paper-backed invariance: the toric C.I. verdict under RI/RII/RIV, the
    smoothness test under RI/RII (ring isomorphism up to free variables),
    and the deficiency D = generators - F under all three."""

    @given(small_settings())
    @settings(max_examples=30, deadline=None)
    def test_ri_rii_full_profile(self, s):
        if len(strongly_connected_components(s)) != 1:
            return
        before = _profile(s)
        for v in s.vertices:
            if rii_applicable(s, v):
                assert _profile(apply_rii(s, v)[0]) == before
            if s.vertex_count > 1 and ri_applicable(s, v):
                assert _profile(apply_ri(s, v)) == before

    @given(small_settings())
    @settings(max_examples=30, deadline=None)
    def test_riv_ci_and_deficiency(self, s):
        if len(strongly_connected_components(s)) != 1:
            return
        ci, _, d = _profile(s)
        for v1 in s.vertices:
            for v2 in s.vertices:
                if v1 != v2 and riv_applicable(s, v1, v2):
                    ci2, _, d2 = _profile(apply_riv(s, v1, v2))
                    assert ci2 == ci
                    assert d2 == d

    def test_riv_can_change_smoothness(self, c1):
        # the known asymmetry: gluing the double pair smooths the quadric cone
        assert f_value(c1) == 1
        glued = apply_riv(c1, "v1", "v2")
        assert f_value(glued) == 0
