import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lamlab import ValidationError
from lamlab.plane_tree import (LatticePath, PlaneTree, contour_path, enumerate_plane_trees,
                               find_heavy_vertices, lukasiewicz_path, tree_from_lukasiewicz)


def catalan(k):
    return math.comb(2 * k, k) // (k + 1)


@st.composite
def trees(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    # random parent with parent < child gives a recursive tree; from_parents reorders it
    parents = [-1] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    return PlaneTree.from_parents(parents)


def test_enumeration_counts_are_catalan():
    for n in range(1, 9):
        assert len(list(enumerate_plane_trees(n))) == catalan(n - 1)


def test_exhaustive_roundtrips_up_to_8():
    for n in range(1, 9):
        seen = set()
        for t in enumerate_plane_trees(n):
            seen.add(t)
            assert tree_from_lukasiewicz(lukasiewicz_path(t)) == t
            assert PlaneTree.from_json(t.to_json()) == t
            assert PlaneTree.from_degrees(t.degrees()) == t
            c = contour_path(t).values
            assert c[0] == 0 and c[-1] == 0 and np.all(c >= 0)
            assert np.all(np.abs(np.diff(c[: 2 * n - 1])) == 1)
        assert len(seen) == catalan(n - 1)


@given(trees())
def test_lukasiewicz_is_an_excursion(t):
    w = lukasiewicz_path(t).values
    assert w[0] == 0 and w[-1] == -1
    assert np.all(w[:-1] >= 0)
    assert tree_from_lukasiewicz(w) == t


@given(trees())
def test_subtree_sizes_and_heights(t):
    sizes = t.subtree_sizes()
    assert sizes[0] == t.n
    par = t.parents
    for v in range(1, t.n):
        assert t.heights()[v] == t.heights()[par[v]] + 1
    # size = 1 + sum of children sizes
    for v in range(t.n):
        assert sizes[v] == 1 + sum(sizes[c] for c in t.children(v))


@given(trees())
def test_contour_interval_matches_contour(t):
    g, d = t.contour_interval()
    c = contour_path(t).values
    h = t.heights()
    for v in range(t.n):
        assert c[g[v]] == h[v] and c[d[v]] == h[v]
        assert np.all(c[g[v]:d[v] + 1] >= h[v])


def test_json_format():
    t = PlaneTree.from_parents([-1, 0, 0, 1])
    data = json.loads(t.to_json())
    assert data["n"] == 4 and data["parents"][0] is None
    with pytest.raises(ValidationError):
        PlaneTree.from_json('{"n": 3, "parents": [null, 0]}')


def test_invalid_inputs():
    with pytest.raises(ValidationError):
        tree_from_lukasiewicz([0, 1, 0])
    with pytest.raises(ValidationError):
        tree_from_lukasiewicz([0, -1, 0, -1])
    with pytest.raises(ValidationError):
        PlaneTree.from_parents([-1, -1])


def test_path_evaluation():
    p = LatticePath(np.array([0, 2, 1]), 0.5, "linear")
    assert p(0.25) == pytest.approx(1.0)
    s = LatticePath(np.array([0, 2, 1]), 1.0, "step")
    assert s(1.7) == 2


def _heavy_brute(t, a, kind):
    from itertools import product
    sizes = t.subtree_sizes()
    out = set()
    for v in range(t.n):
        cs = [int(sizes[c]) for c in t.children(v)]
        if kind == "branching-point":
            if sum(s >= a for s in cs) >= 2:
                out.add(v)
            continue
        for bits in product((0, 1), repeat=len(cs)):
            left = sum(s for s, b in zip(cs, bits) if b)
            right = sum(cs) - left
            if left >= a and right >= a:
                out.add(v)
                break
    return out


@settings(max_examples=60)
@given(trees(max_n=14), st.integers(1, 6))
def test_heavy_vertices_against_brute_force(t, a):
    for kind in ("node", "branching-point"):
        assert find_heavy_vertices(t, a, kind) == _heavy_brute(t, a, kind)


def test_heavy_vertex_example():
    # root with children of subtree sizes 2, 1, 1: a 2-node but not a 2-branching point
    t = PlaneTree.from_parents([-1, 0, 1, 0, 0])
    assert find_heavy_vertices(t, 2, "node") == {0}
    assert find_heavy_vertices(t, 2, "branching-point") == set()
