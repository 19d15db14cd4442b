import numpy as np
import pytest

import graphbec as gb
from graphbec.errors import (DanglingEndpoint, DisconnectedGraph,
                             NonPositiveLength, NonPositiveScale)


def test_interval_construction():
    g = gb.new_graph(2, [(1, 2, np.pi)])
    assert g.vertex_count == 2
    assert g.num_edges == 1
    assert g.total_length == pytest.approx(np.pi, rel=1e-15)


def test_loop_construction():
    g = gb.new_graph(1, [(1, 1, 2 * np.pi)])
    assert g.vertex_count == 1
    assert g.degree(1) == 2  # both endpoints of the loop
    assert g.total_length == pytest.approx(2 * np.pi)


def test_star_construction():
    g = gb.new_graph(4, [(1, 2, 1.0), (1, 3, 1.0), (1, 4, 1.0)])
    assert g.degree(1) == 3
    assert all(g.degree(v) == 1 for v in (2, 3, 4))
    assert g.total_length == pytest.approx(3.0)
    assert g.boundary_dim == 6


def test_star_helper_matches_manual():
    assert gb.star(3).edges == gb.new_graph(4, [(1, 2, 1), (1, 3, 1), (1, 4, 1)]).edges


def test_vertex_ends_ordering():
    g = gb.new_graph(4, [(1, 2, 1.0), (1, 3, 1.0), (1, 4, 1.0)])
    # starts of edges 0..2 are boundary indices 0..2, ends are 3..5
    assert g.vertex_ends(1) == [0, 1, 2]
    assert g.vertex_ends(3) == [4]


def test_rejects_nonpositive_length():
    with pytest.raises(NonPositiveLength):
        gb.new_graph(2, [(1, 2, -1.0)])
    with pytest.raises(NonPositiveLength):
        gb.new_graph(2, [(1, 2, 0.0)])


def test_rejects_disconnected():
    with pytest.raises(DisconnectedGraph):
        gb.new_graph(4, [(1, 2, 1.0), (3, 4, 1.0)])
    with pytest.raises(DisconnectedGraph):
        gb.new_graph(3, [(1, 2, 1.0)])  # vertex 3 unreachable


def test_rejects_dangling_endpoint():
    with pytest.raises(DanglingEndpoint):
        gb.new_graph(4, [(1, 5, 1.0)])
    with pytest.raises(DanglingEndpoint):
        gb.new_graph(2, [(0, 1, 1.0)])


def test_scale_examples():
    g = gb.new_graph(2, [(1, 2, np.pi)])
    assert gb.scale(g, 2.0).total_length == pytest.approx(2 * np.pi, rel=1e-15)
    star = gb.star(3)
    assert gb.scale(star, 1.0).edges == star.edges
    assert gb.total_length(gb.scale(gb.loop(1.0), 10.0)) == pytest.approx(10.0)


def test_scale_rejects_nonpositive():
    g = gb.interval(1.0)
    for eta in (0.0, -2.0, float("nan"), float("inf")):
        with pytest.raises(NonPositiveScale):
            gb.scale(g, eta)


@pytest.mark.parametrize("seed", range(4))
def test_scale_composition(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(0.1, 10.0, size=2)
    g = gb.new_graph(3, [(1, 2, 0.7), (2, 3, 1.9), (3, 1, 0.4)])
    once = gb.scale(g, a * b)
    twice = gb.scale(gb.scale(g, a), b)
    assert [(e.start, e.end) for e in once.edges] == [(e.start, e.end) for e in twice.edges]
    np.testing.assert_allclose(twice.lengths, once.lengths, rtol=1e-14)


@pytest.mark.parametrize("eta", [0.3, 1.0, 7.5, 160.0])
def test_total_length_scales_linearly(eta):
    g = gb.new_graph(3, [(1, 2, 0.7), (2, 3, 1.9), (3, 1, 0.4)])
    assert gb.total_length(gb.scale(g, eta)) == pytest.approx(
        eta * gb.total_length(g), rel=1e-14)
