import pytest
from hypothesis import given, settings

from quiverci.errors import ParseError
from quiverci.io import parse_setting, serialize_setting, setting_to_json, to_dot

from .conftest import small_settings


SAMPLE = """
# a two-vertex example
vertex v1
vertex v2 dim 2
arrow a1: v1 -> v2
arrow v2 -> v1
"""


def test_parse_basic():
    s = parse_setting(SAMPLE)
    assert s.vertices == ("v1", "v2")
    assert s.dim("v2") == 2
    assert {a.id for a in s.arrows} == {"a1", "a2"}  # auto id skips a1


def test_parse_dim_defaults_to_one():
    s = parse_setting("vertex x\n")
    assert s.dim("x") == 1


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as e:
        parse_setting("vertex v\nfrobnicate\n")
    assert e.value.line == 2


@pytest.mark.parametrize(
    "text",
    [
        "vertex v dim 0\n",
        "vertex v dim -1\n",
        "vertex v\nvertex v\n",
        "arrow a: x -> y\n",
        "vertex v!\n",
        "vertex v\narrow a: v -> v\narrow a: v -> v\n",
    ],
)
def test_parse_rejections(text):
    with pytest.raises(ParseError):
        parse_setting(text)


def test_trailing_comments_and_blanks():
    s = parse_setting("vertex v  # the vertex\n\n  \narrow l: v -> v # loop\n")
    assert s.arrow_count == 1


@given(small_settings(max_dim=3))
@settings(max_examples=60, deadline=None)
def test_round_trip_preserves_ids(s):
    again = parse_setting(serialize_setting(s))
    assert again == s


def test_dot_output(c1):
    dot = to_dot(c1)
    assert dot.startswith("digraph")
    assert '"v1" [label="v1:1"];' in dot
    # parallel arrows drawn individually
    assert dot.count('"v1" -> "v2"') == 2


def test_json_form_is_sorted(g1):
    payload = setting_to_json(g1)
    assert [v["name"] for v in payload["vertices"]] == ["v1", "v2"]
    assert [a["id"] for a in payload["arrows"]] == ["a1", "a2", "a3", "b1", "b2"]
