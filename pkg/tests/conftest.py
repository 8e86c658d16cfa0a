import pytest
from hypothesis import strategies as st

from quiverci.core import QuiverSetting
from quiverci.classify import target_c1, target_g1, target_g2


def build(vertices, arrows, dims=None):
    return QuiverSetting(vertices, arrows, dims)


def oriented_cycle(k: int) -> QuiverSetting:
    verts = [f"v{i}" for i in range(1, k + 1)]
    arrows = [(f"e{i}", f"v{i}", f"v{i % k + 1}") for i in range(1, k + 1)]
    return QuiverSetting(verts, arrows)


def doubled_cycle(k: int) -> QuiverSetting:
    verts = [f"v{i}" for i in range(1, k + 1)]
    arrows = []
    for i in range(1, k + 1):
        arrows.append((f"e{i}a", f"v{i}", f"v{i % k + 1}"))
        arrows.append((f"e{i}b", f"v{i}", f"v{i % k + 1}"))
    return QuiverSetting(verts, arrows)


@pytest.fixture(scope="session")
def g1():
    return target_g1()


@pytest.fixture(scope="session")
def g2():
    return target_g2()


@pytest.fixture(scope="session")
def c1():
    return target_c1()


@st.composite
def small_settings(draw, max_vertices=4, max_arrows=7, max_dim=1, min_vertices=1):
    n = draw(st.integers(min_vertices, max_vertices))
    verts = [f"v{i}" for i in range(1, n + 1)]
    m = draw(st.integers(0, max_arrows))
    arrows = []
    for i in range(1, m + 1):
        s = draw(st.integers(0, n - 1))
        t = draw(st.integers(0, n - 1))
        arrows.append((f"a{i}", verts[s], verts[t]))
    dims = {v: draw(st.integers(1, max_dim)) for v in verts} if max_dim > 1 else None
    return QuiverSetting(verts, arrows, dims)
