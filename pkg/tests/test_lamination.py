import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lamlab.lamination import (CrossingChordsError, Lamination, MassSequence, epsilon_sublamination,
                               hausdorff_distance, lamination_from_path, lamination_from_tree_contour)
from lamlab.plane_tree import PlaneTree, lukasiewicz_path

from test_plane_tree import trees


def crosses(c1, c2):
    (a, b), (x, y) = sorted(c1), sorted(c2)
    return a < x < b < y or x < a < y < b


def brute_masses(a, b, N):
    # each unit arc belongs to the face of the shortest chord enclosing it
    counts = {}
    for i in range(N):
        best = None
        for x, y in zip(a, b):
            if x <= i and i + 1 <= y and x != y and (best is None or y - x < best[1] - best[0]):
                best = (x, y)
        counts[best] = counts.get(best, 0) + 1
    return sorted((Fraction(v, N) for v in counts.values()), reverse=True)


@st.composite
def chord_lists(draw, max_n=14, max_k=10):
    N = draw(st.integers(2, max_n))
    k = draw(st.integers(0, max_k))
    pairs = [tuple(sorted(draw(st.tuples(st.integers(0, N - 1), st.integers(0, N - 1))))) for _ in range(k)]
    return N, pairs


@given(chord_lists())
def test_noncrossing_validation_matches_pairwise(data):
    N, pairs = data
    bad = any(crosses(p, q) for i, p in enumerate(pairs) for q in pairs[i + 1:])
    if bad:
        with pytest.raises(CrossingChordsError):
            Lamination.from_pairs(pairs, N)
    else:
        Lamination.from_pairs(pairs, N)


@given(chord_lists())
def test_face_masses_against_arc_oracle(data):
    N, pairs = data
    keep = []
    for p in pairs:
        if not any(crosses(p, q) for q in keep):
            keep.append(p)
    lam = Lamination.from_pairs(keep, N)
    m = lam.face_masses()
    assert m.as_fractions() == brute_masses([p[0] for p in keep], [p[1] for p in keep], N)
    assert sum(m.as_fractions()) == 1


def test_face_masses_small():
    lam = Lamination.from_pairs([(0, 2), (2, 4)], 6)
    assert lam.face_masses().as_fractions() == [Fraction(1, 3)] * 3
    assert Lamination.empty(5).face_masses().as_fractions() == [1]


def test_json_roundtrip_and_labels():
    lam = Lamination.from_pairs([(1, 3), (0, 4)], 8, labels=[2, 3])
    back = Lamination.from_json(lam.to_json())
    assert back == lam and back.labels.tolist() == [2, 3]
    flt = Lamination.from_pairs([(0.25, 0.5)])
    assert Lamination.from_json(flt.to_json()) == flt


def test_reflect_is_involution():
    lam = Lamination.from_pairs([(1, 3), (0, 4), (5, 7)], 8)
    assert lam.reflect().reflect() == lam
    assert lam.reflect().face_masses() == lam.face_masses()


def test_mass_sequence_validation():
    with pytest.raises(Exception):
        MassSequence.from_numerators([1, 1], 3)
    assert MassSequence.from_values([0.25, 0.75]).values.tolist() == [0.75, 0.25]


def test_lukasiewicz_lamination_chords():
    # root with two leaves: W = 0, 1, 0, -1
    t = PlaneTree.from_parents([-1, 0, 0])
    lam = lamination_from_path(lukasiewicz_path(t))
    # endpoint 3 is the full turn, stored as 0
    assert sorted(zip(lam.a.tolist(), lam.b.tolist())) == [(0, 0), (0, 2), (1, 2)]


@given(trees())
def test_tree_laminations_are_noncrossing(t):
    lamination_from_tree_contour(t).check_noncrossing()
    lamination_from_path(lukasiewicz_path(t)).check_noncrossing()


def test_cadlag_mode():
    lam = lamination_from_path([0.0, 2.0, 1.0, 0.0], mode="cadlag-excursion")
    # the chord [1/3, 1] is stored as (0, 1) over 3
    assert sorted(zip(lam.a.tolist(), lam.b.tolist())) == [(0, 1)]


def test_hausdorff_basic():
    lam = Lamination.from_pairs([(0.0, 0.5)])
    assert hausdorff_distance(lam, lam) == 0.0
    empty = Lamination.empty()
    # a diameter is at distance 1 from the circle
    assert hausdorff_distance(lam, empty, 1e-3) == pytest.approx(1.0, abs=2e-3)


@settings(max_examples=40)
@given(st.lists(st.tuples(st.floats(0, 0.999), st.floats(0, 0.999)), max_size=30),
       st.sampled_from([0.05, 0.2, 0.7]))
def test_epsilon_sublamination_bound(raw, eps):
    keep = []
    for p in raw:
        p = tuple(sorted(p))
        if not any(crosses(p, q) for q in keep):
            keep.append(p)
    lam = Lamination.from_pairs(keep)
    sub = epsilon_sublamination(lam, eps)
    r = math.floor(2 * math.pi / eps) + 1
    assert len(sub) <= r * r
    assert sub.is_subset_of(lam)
    assert hausdorff_distance(lam, sub, 1e-3) <= eps + 2e-3
