"""Poisson cut processes on trees and under excursions, and the laminations and
mass partitions they produce over time.

Cuts carry uniform arrival times on ``[0, horizon]``, so the cuts with arrival
at most ``c`` form the process at time ``c`` and all times are coupled.
"""

from dataclasses import dataclass

import numpy as np

from ._random import stream
from ._validation import ValidationError, check_int, check_real
from .lamination import Lamination, MassSequence
from .plane_tree import LatticePath


@dataclass(frozen=True)
class CutProcess:
    """Cuts sorted by arrival time.

    For tree cuts ``vertex[i]`` is the vertex below the cut edge and
    ``position[i]`` the place on that edge.  For excursion cuts ``vertex`` is
    ``-1`` and ``position`` holds ``(s, y)`` points.  ``a, b`` are the chord
    endpoints over ``denominator``.
    """

    times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    denominator: int
    horizon: float
    vertex: np.ndarray
    position: np.ndarray
    tree: object = None
    path: object = None

    def __len__(self):
        return self.times.size

    def upto(self, c):
        """Number of cuts with arrival time at most ``c``."""
        return int(np.searchsorted(self.times, c, side="right"))


@dataclass(frozen=True)
class FragmentationTrace:
    times: np.ndarray
    mass_sequences: list

    def to_csv(self):
        width = max((len(m) for m in self.mass_sequences), default=0)
        lines = ["time," + ",".join(f"mass_{i + 1}" for i in range(width))]
        for t, m in zip(self.times, self.mass_sequences):
            vals = [repr(float(x)) for x in m.values] + ["0"] * (width - len(m))
            lines.append(",".join([repr(float(t))] + vals))
        return "\n".join(lines) + "\n"


def _check_times(times, horizon):
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or np.any(np.diff(ts) < 0):
        raise ValidationError("times must be a nondecreasing 1-d sequence")
    if ts.size and (ts[0] < 0 or ts[-1] > horizon):
        raise ValidationError("times must lie within [0, horizon]")
    return ts


def sample_tree_cut_process(tree, rate, horizon, seed):
    """Poisson cuts of intensity ``rate`` per unit edge length, up to ``horizon``."""
    rate = check_real(rate, "rate", minimum=0.0, strict_min=True)
    horizon = check_real(horizon, "horizon", minimum=0.0, strict_min=True)
    if tree.n < 2:
        raise ValidationError("cutting needs at least one edge")
    rng = stream(seed, "tree-cuts")
    counts = rng.poisson(rate * horizon, size=tree.n - 1)
    vertex = np.repeat(np.arange(1, tree.n), counts)
    k = vertex.size
    position = rng.random(k)
    times = rng.random(k) * horizon
    order = np.argsort(times, kind="stable")
    vertex, position, times = vertex[order], position[order], times[order]
    g, d = tree.contour_interval()
    return CutProcess(times, g[vertex], d[vertex], 2 * tree.n, horizon, vertex, position, tree=tree)


def lamination_process(cp, times):
    """Lamination made of the chords of all cuts arrived by each time."""
    ts = _check_times(times, cp.horizon)
    out = []
    for t in ts:
        k = cp.upto(t)
        out.append(Lamination(cp.a[:k], cp.b[:k], cp.denominator, check=False))
    return out


def tree_component_masses(tree, cut_vertices):
    """Contour-time shares of the pieces left when cutting above ``cut_vertices``.

    A piece topped by vertex ``t`` owns two contour steps per non-top vertex,
    two per cut edge hanging below it, and the root's piece two more for the
    final stretch of the contour.
    """
    n = tree.n
    cut = np.zeros(n, dtype=bool)
    cut[np.asarray(list(cut_vertices), dtype=np.int64)] = True
    cut[0] = False
    par = tree.parents.tolist()
    top = list(range(n))
    cl = cut.tolist()
    for i in range(1, n):
        if not cl[i]:
            top[i] = top[par[i]]
    top = np.asarray(top)
    members = np.bincount(top, minlength=n)
    cut_idx = np.flatnonzero(cut)
    hanging = np.bincount(top[tree.parents[cut_idx]], minlength=n)
    heads = np.flatnonzero(members)
    num = 2 * (members[heads] - 1) + 2 * hanging[heads]
    num[heads == 0] += 2
    return MassSequence.from_numerators(num, 2 * n)


def fragmentation_masses(cp, times):
    """Masses of the tree pieces at each time, computed on the tree itself."""
    if cp.tree is None:
        raise ValidationError("component masses need a tree-based cut process")
    ts = _check_times(times, cp.horizon)
    seqs = [tree_component_masses(cp.tree, cp.vertex[:cp.upto(t)]) for t in ts]
    return FragmentationTrace(ts, seqs)


@dataclass(frozen=True)
class VertexMarking:
    """Vertices revealed one at a time: the root first, then a uniform order."""

    tree: object
    order: np.ndarray

    def lamination(self, s):
        """Chords of the first ``floor(s)`` revealed vertices."""
        k = min(int(np.floor(s)), self.tree.n)
        g, d = self.tree.contour_interval()
        v = self.order[:k]
        return Lamination(g[v], d[v], 2 * self.tree.n, labels=v, check=False)


def vertex_marking_process(tree, seed):
    rng = stream(seed, "vertex-marking")
    rest = rng.permutation(np.arange(1, tree.n))
    return VertexMarking(tree, np.concatenate([[0], rest]).astype(np.int64))


# Poisson points under an excursion ------------------------------------------------

def excursion_slabs(values):
    """Split the region under a step function into horizontal slabs.

    ``values[i]`` is the height on cell ``[i, i+1)``.  Returns arrays
    ``(g, d, lo, hi)``: on the band ``lo < y <= hi`` over ``[g, d)`` the points
    below the graph all see the same excursion interval ``[g, d)``.
    """
    v = np.asarray(values, dtype=float)
    if np.any(v < 0):
        raise ValidationError("an excursion is nonnegative")
    gs, ds, los, his = [], [], [], []
    stack = []  # (start, level), levels strictly increasing
    for i, x in enumerate(np.append(v, 0.0).tolist()):
        start = i
        while stack and stack[-1][1] > x:
            s0, lvl = stack.pop()
            below = max(x, stack[-1][1] if stack else 0.0)
            gs.append(s0)
            ds.append(i)
            los.append(below)
            his.append(lvl)
            start = s0
        if x > 0 and (not stack or stack[-1][1] < x):
            stack.append((start, x))
    return (np.asarray(gs, dtype=np.int64), np.asarray(ds, dtype=np.int64),
            np.asarray(los), np.asarray(his))


def step_contour(tree, scale=1.0):
    """Step function with cell value ``min(C_i, C_{i+1})`` of the contour, times ``scale``.

    Its slabs are exactly the edges above non-leaf vertices, so its chords
    are the vertex chords of the tree.
    """
    from .plane_tree import contour_path
    c = contour_path(tree).values.astype(float)
    cells = np.minimum(c[:-1], c[1:]) * scale
    return LatticePath(cells, 1.0 / cells.size, "step")


def epigraph_ppp_general(f, c, delta, seed):
    """Poisson points below a step excursion, restricted to chord extent above ``delta``.

    A point at ``(s, y)`` has chord ``[g, d]`` where ``(g, d)`` is the excursion
    interval above level ``y`` around ``s``; the areal intensity is
    ``2 / (d - g)`` per unit of time ``c``.  Over a slab of height ``h`` the
    expected number of points by time ``c`` is therefore ``2 c h``.  Extents
    are measured with total duration 1.
    """
    c = check_real(c, "c", minimum=0.0)
    delta = check_real(delta, "delta", minimum=0.0, strict_min=True)
    values = np.asarray(getattr(f, "values", f), dtype=float)
    m = values.size
    check_int(m, "number of cells", minimum=1)
    g, d, lo, hi = excursion_slabs(values)
    keep = (d - g) / m > delta
    g, d, lo, hi = g[keep], d[keep], lo[keep], hi[keep]
    rng = stream(seed, "epigraph-cuts")
    counts = rng.poisson(2.0 * c * (hi - lo)) if c > 0 else np.zeros(g.size, dtype=np.int64)
    idx = np.repeat(np.arange(g.size), counts)
    k = idx.size
    s = (g[idx] + rng.random(k) * (d[idx] - g[idx])) / m
    y = lo[idx] + rng.random(k) * (hi[idx] - lo[idx])
    times = rng.random(k) * c
    order = np.argsort(times, kind="stable")
    idx = idx[order]
    pos = np.column_stack([s[order], y[order]])
    path = f if isinstance(f, LatticePath) else LatticePath(values, 1.0 / m, "step")
    return CutProcess(times[order], g[idx], d[idx], m, c, np.full(k, -1), pos, path=path)


def expected_epigraph_points(f, c, delta):
    """Closed-form mean number of points: ``2 c`` times the summed kept slab heights."""
    values = np.asarray(getattr(f, "values", f), dtype=float)
    g, d, lo, hi = excursion_slabs(values)
    keep = (d - g) / values.size > delta
    return float(2.0 * c * np.sum(hi[keep] - lo[keep]))
