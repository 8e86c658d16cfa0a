import pytest
from hypothesis import given, settings

from quiverci.core import Arrow, QuiverSetting, is_isomorphic, strongly_connected_components
from quiverci.errors import DecompositionError, DomainError
from quiverci.localquiver import (
    Decomposition,
    glue_subquiver,
    has_simple_rep,
    iss_dimension,
    local_quiver,
    simple_class_count_kind,
    validate_decomposition,
)

from .conftest import build, oriented_cycle, small_settings


class TestHasSimpleRep:
    def test_bare_vertex(self):
        assert has_simple_rep(build(["v"], []))

    def test_one_loop_dim1(self):
        assert has_simple_rep(build(["v"], [("l", "v", "v")]))

    def test_one_loop_dim2_has_none(self):
        # a single linear map always has an eigenvector
        assert not has_simple_rep(build(["v"], [("l", "v", "v")], {"v": 2}))

    def test_two_loops_dim2(self):
        assert has_simple_rep(build(["v"], [("l1", "v", "v"), ("l2", "v", "v")], {"v": 2}))

    def test_oriented_cycle_alpha_one(self):
        assert has_simple_rep(oriented_cycle(4))

    def test_oriented_cycle_higher_dims_has_none(self):
        s = build(["x", "y"], [("a", "x", "y"), ("b", "y", "x")], {"x": 2, "y": 2})
        assert not has_simple_rep(s)

    @given(small_settings())
    @settings(max_examples=50, deadline=None)
    def test_alpha_one_iff_strongly_connected(self, s):
        if s.vertex_count == 0:
            return
        expected = len(strongly_connected_components(s)) == 1
        assert has_simple_rep(s) == expected

    def test_chi_condition_general(self, g1):
        # unbalanced dims break the chi conditions
        s = QuiverSetting(g1.vertices, g1.arrows, {"v1": 1, "v2": 5})
        assert not has_simple_rep(s)


class TestClassCountKind:
    def test_unique_for_point(self):
        assert simple_class_count_kind(build(["v"], [])) == "unique"

    def test_infinite_for_cycle(self):
        assert simple_class_count_kind(oriented_cycle(2)) == "infinite"

    def test_infinite_for_two_loops(self):
        s = build(["v"], [("l1", "v", "v"), ("l2", "v", "v")], {"v": 2})
        assert simple_class_count_kind(s) == "infinite"

    def test_precondition(self):
        with pytest.raises(DomainError):
            simple_class_count_kind(build(["v"], [("l", "v", "v")], {"v": 2}))


class TestIssDimension:
    def test_cycles(self):
        for k in (2, 3, 5):
            assert iss_dimension(oriented_cycle(k)) == 1

    def test_g1(self, g1):
        assert iss_dimension(g1) == 4

    def test_point(self):
        assert iss_dimension(build(["v"], [])) == 0


class TestGlue:
    def test_singleton_is_identity(self, g1):
        assert glue_subquiver(g1, ["v1"]) == g1

    def test_non_strongly_connected_subset_rejected(self):
        tri = oriented_cycle(3)
        with pytest.raises(DomainError):
            glue_subquiver(tri, ["v1", "v2"])

    def test_two_cycle_with_tail(self):
        s = build(
            ["v1", "v2", "v3"],
            [("a", "v1", "v2"), ("b", "v2", "v1"), ("c", "v2", "v3"), ("d", "v3", "v1")],
        )
        glued = glue_subquiver(s, ["v1", "v2"])
        merged = "v1_v2"
        assert glued.vertex_count == 2
        assert len(glued.loops_at(merged)) == 2
        assert glued.multiplicity(merged, "v3") == 1
        assert glued.multiplicity("v3", merged) == 1

    def test_arrow_ids_survive(self, c1):
        glued = glue_subquiver(c1, ["v1", "v2"])
        assert sorted(a.id for a in glued.arrows) == ["a1", "a2", "b1", "b2"]

    def test_glue_of_g2_like_pair(self):
        # doubled triangle with a doubled 2-cycle between v1, v2 so the
        # subset induces a strongly connected sub-digraph
        s = build(
            ["v1", "v2", "v3"],
            [("a1", "v1", "v2"), ("a2", "v1", "v2"), ("r1", "v2", "v1"),
             ("b1", "v2", "v3"), ("b2", "v2", "v3"), ("c1", "v3", "v1"), ("c2", "v3", "v1")],
        )
        glued = glue_subquiver(s, ["v1", "v2"])
        merged = "v1_v2"
        assert len(glued.loops_at(merged)) == 3
        assert glued.multiplicity(merged, "v3") == 2
        assert glued.multiplicity("v3", merged) == 2

    def test_alpha_one_required(self):
        s = build(["x", "y"], [("a", "x", "y"), ("b", "y", "x")], {"x": 2})
        with pytest.raises(DomainError):
            glue_subquiver(s, ["x", "y"])


class TestLocalQuiver:
    def test_two_loops_split(self):
        s = build(["v"], [("l1", "v", "v"), ("l2", "v", "v")], {"v": 2})
        lq = local_quiver(s, Decomposition.of([(1, {"v": 1}), (1, {"v": 1})]))
        assert lq.vertex_count == 2
        assert all(lq.dim(v) == 1 for v in lq.vertices)
        assert len(lq.loops_at("s1")) == 2 and len(lq.loops_at("s2")) == 2
        assert lq.multiplicity("s1", "s2") == 1 and lq.multiplicity("s2", "s1") == 1

    def test_whole_alpha_for_cycle(self):
        s = oriented_cycle(3)
        lq = local_quiver(s, Decomposition.of([(1, s.dims)]))
        assert lq.vertex_count == 1 and lq.arrow_count == 1
        assert lq.arrows[0].is_loop()

    def test_matches_glue_up_to_free_loops(self):
        s = build(
            ["v1", "v2", "v3"],
            [("a", "v1", "v2"), ("b", "v2", "v1"), ("c", "v2", "v3"), ("d", "v3", "v1")],
        )
        glued = glue_subquiver(s, ["v1", "v2"])
        parts = Decomposition.of([(1, {"v1": 1, "v2": 1}), (1, {"v3": 1})])
        lq = local_quiver(s, parts)
        padded = QuiverSetting(
            lq.vertices,
            list(lq.arrows) + [Arrow("pad1", "s1", "s1")],
            lq.dims,
        )
        assert is_isomorphic(glued, padded)

    def test_validation_sum_mismatch(self):
        s = build(["v"], [], {"v": 2})
        with pytest.raises(DecompositionError, match="sum-mismatch"):
            local_quiver(s, Decomposition.of([(1, {"v": 1})]))

    def test_validation_no_simple_rep(self):
        s = build(["x", "y"], [("a", "x", "y"), ("b", "y", "x")], {"x": 2, "y": 1})
        dec = Decomposition.of([(1, {"x": 2}), (1, {"y": 1})])
        with pytest.raises(DecompositionError, match="no-simple-rep"):
            local_quiver(s, dec)

    def test_validation_repeated_unique_part(self):
        s = build(["v"], [], {"v": 2})
        with pytest.raises(DecompositionError, match="repeated-part"):
            validate_decomposition(s, Decomposition.of([(2, {"v": 1})]))

    def test_repeated_part_with_infinite_classes_allowed(self):
        s = build(["v"], [("l1", "v", "v"), ("l2", "v", "v"), ("l3", "v", "v")], {"v": 2})
        lq = local_quiver(s, Decomposition.of([(1, {"v": 1}), (1, {"v": 1})]))
        # delta - chi gives 2 arrows each way: contains the double pair
        assert lq.multiplicity("s1", "s2") == 2 and lq.multiplicity("s2", "s1") == 2

    def test_split_off_one_dimension(self):
        # dimension splitting (alpha - eps_v) + eps_v on a reduced setting
        # gives at least two arrows each way between the two parts
        from quiverci.reductions import ri_applicable, riii_applicable

        s = build(["v", "w"], [("f1", "v", "w"), ("f2", "v", "w"), ("f3", "v", "w"),
                               ("g1", "w", "v"), ("g2", "w", "v"), ("g3", "w", "v")],
                  {"v": 2, "w": 1})
        assert not any(ri_applicable(s, u) or riii_applicable(s, u) for u in s.vertices)
        dec = Decomposition.of([(1, {"v": 1, "w": 1}), (1, {"v": 1})])
        lq = local_quiver(s, dec)
        assert lq.vertex_count == 2
        assert lq.multiplicity("s1", "s2") >= 2 and lq.multiplicity("s2", "s1") >= 2
