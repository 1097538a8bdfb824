import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lamlab import ValidationError
from lamlab.fragmentation import (epigraph_ppp_general, excursion_slabs, expected_epigraph_points,
                                  fragmentation_masses, lamination_process, sample_tree_cut_process,
                                  step_contour, tree_component_masses, vertex_marking_process)
from lamlab.lamination import Lamination, lamination_from_tree_contour
from lamlab.plane_tree import PlaneTree

from test_plane_tree import trees


def brute_component_masses(tree, cut):
    # union-find over uncut edges; piece mass counts 2 per vertex, minus 2 at the piece top,
    # plus 2 per cut edge below it, plus 2 extra for the root piece
    n = tree.n
    top = list(range(n))

    def find(v):
        while top[v] != v:
            v = top[v]
        return v

    par = tree.parents
    cut = set(int(v) for v in cut) - {0}
    for v in range(1, n):
        if v not in cut:
            top[find(v)] = find(int(par[v]))
    mass = {}
    for v in range(n):
        r = find(v)
        mass[r] = mass.get(r, 0) + (0 if v == r else 2)
    for v in cut:
        mass[find(int(par[v]))] += 2
    mass[find(0)] += 2
    return sorted((m for m in mass.values() if m), reverse=True)


@settings(max_examples=80)
@given(trees(max_n=30), st.data())
def test_mass_identity_property(t, data):
    if t.n < 2:
        return
    cut = data.draw(st.sets(st.integers(1, t.n - 1)))
    g, d = t.contour_interval()
    v = np.array(sorted(cut), dtype=np.int64)
    lam = Lamination(g[v], d[v], 2 * t.n, check=True)
    frag = tree_component_masses(t, v)
    assert lam.face_masses() == frag
    assert frag.numerators.tolist() == brute_component_masses(t, cut)


def test_no_cut_and_all_cut():
    t = PlaneTree.from_parents([-1, 0, 1, 0])
    assert tree_component_masses(t, []).values.tolist() == [1.0]
    m = tree_component_masses(t, [1, 2, 3])
    # leaves cut off on their own carry no contour time
    assert m.numerators.tolist() == [6, 2]


def test_cut_process_monotone_coupling():
    t = PlaneTree.from_parents([-1, 0, 1, 1, 0, 4, 4, 6])
    cp = sample_tree_cut_process(t, 0.7, 3.0, seed=9)
    lams = lamination_process(cp, np.linspace(0, 3.0, 13))
    for x, y in zip(lams, lams[1:]):
        assert x.is_subset_of(y)
    assert np.all(np.diff(cp.times) >= 0)
    trace = fragmentation_masses(cp, [0.0, 3.0])
    assert trace.mass_sequences[0].values.tolist() == [1.0]
    assert trace.to_csv().startswith("time,mass_1")


def test_cut_process_count_is_poisson():
    t = PlaneTree.from_parents([-1] + list(range(49)))  # a chain with 49 edges
    counts = [len(sample_tree_cut_process(t, 0.1, 2.0, s)) for s in range(400)]
    assert np.mean(counts) == pytest.approx(9.8, rel=0.08)
    assert np.var(counts) == pytest.approx(9.8, rel=0.25)


def test_cut_process_validation():
    with pytest.raises(ValidationError):
        sample_tree_cut_process(PlaneTree.single(), 1.0, 1.0, 0)
    cp = sample_tree_cut_process(PlaneTree.from_parents([-1, 0]), 1.0, 1.0, 0)
    with pytest.raises(ValidationError):
        lamination_process(cp, [0.5, 0.2])


def test_vertex_marking_nested():
    t = PlaneTree.from_parents([-1, 0, 1, 1, 0])
    vm = vertex_marking_process(t, 3)
    assert vm.order[0] == 0 and sorted(vm.order.tolist()) == list(range(5))
    for s in range(5):
        assert vm.lamination(s).is_subset_of(vm.lamination(s + 1))
    assert vm.lamination(5) == lamination_from_tree_contour(t)


def test_excursion_slabs_cover_area():
    v = np.array([1.0, 3.0, 2.0, 2.5, 0.5])
    g, d, lo, hi = excursion_slabs(v)
    assert np.sum((d - g) * (hi - lo)) == pytest.approx(v.sum())


def test_step_contour_slabs_are_vertex_chords():
    t = PlaneTree.from_parents([-1, 0, 1, 1, 0, 4])
    f = step_contour(t)
    g, d, lo, hi = excursion_slabs(f.values)
    chords = set(zip(g.tolist(), d.tolist()))
    gg, dd = t.contour_interval()
    internal = [v for v in range(1, t.n) if len(t.children(v))]
    assert chords == {(int(gg[v]), int(dd[v])) for v in internal}


def test_epigraph_point_count():
    f = np.array([1.0, 2.0, 2.0, 1.0])
    mean = expected_epigraph_points(f, 3.0, 1e-9)
    assert mean == pytest.approx(2 * 3.0 * 2.0)
    counts = [len(epigraph_ppp_general(f, 3.0, 1e-9, s)) for s in range(400)]
    assert np.mean(counts) == pytest.approx(mean, rel=0.05)
