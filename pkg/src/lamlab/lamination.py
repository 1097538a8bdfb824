"""Finite noncrossing chord systems on the unit circle.

A point of the circle is a fraction ``x`` of a full turn and sits at
``exp(-2 i pi x)``.  In exact mode chord endpoints are integers ``k`` standing
for ``k / denominator``; in float mode they are floats in ``[0, 1)``.  Chords
are stored with ``a <= b`` after reducing endpoints modulo one full turn, and
the chord ``(a, b)`` bounds the arc ``[a, b]`` on one side.
"""

from dataclasses import dataclass
from fractions import Fraction
import json
import math

import numpy as np
from scipy.spatial import cKDTree

from ._validation import ValidationError, check_choice, check_real


class CrossingChordsError(ValidationError):
    """Two chords of a would-be lamination cross in the open disk."""


@dataclass(frozen=True)
class MassSequence:
    """Nonincreasing masses; exact ones carry integer numerators over ``denominator``."""

    values: np.ndarray
    numerators: np.ndarray = None
    denominator: int = None

    @property
    def exact(self):
        return self.numerators is not None

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    def as_fractions(self):
        if not self.exact:
            raise ValidationError("float masses have no exact form")
        return [Fraction(int(k), self.denominator) for k in self.numerators]

    def top(self, k):
        """First ``k`` masses, zero padded."""
        out = np.zeros(k)
        m = min(k, self.values.size)
        out[:m] = self.values[:m]
        return out

    def __eq__(self, other):
        if not isinstance(other, MassSequence):
            return NotImplemented
        if self.exact and other.exact:
            return self.as_fractions() == other.as_fractions()
        return self.values.shape == other.values.shape and np.allclose(self.values, other.values, atol=1e-12)

    __hash__ = None

    @classmethod
    def from_numerators(cls, numerators, denominator):
        num = np.sort(np.asarray(numerators, dtype=np.int64))[::-1]
        num = num[num > 0]
        if num.sum() != denominator:
            raise ValidationError("exact masses must sum to one")
        return cls(num / denominator, num, int(denominator))

    @classmethod
    def from_values(cls, values):
        vals = np.sort(np.asarray(values, dtype=float))[::-1]
        vals = vals[vals > 0]
        if abs(vals.sum() - 1.0) > 1e-12 * max(1, vals.size):
            raise ValidationError("masses must sum to one")
        return cls(vals)


class Lamination:
    """The unit circle together with finitely many noncrossing chords.

    Parameters
    ----------
    a, b : chord endpoints (integers if ``denominator`` is given, else turns).
    denominator : common denominator for exact mode, or ``None``.
    labels : optional integer label per chord.
    blocks : optional list of vertex tuples marking faces bounded only by chords.
    check : verify the noncrossing property (on by default).
    """

    def __init__(self, a=(), b=(), denominator=None, labels=None, blocks=None, check=True):
        if denominator is not None:
            N = int(denominator)
            if N < 1:
                raise ValidationError("denominator must be positive")
            aa = np.mod(np.asarray(a, dtype=np.int64), N)
            bb = np.mod(np.asarray(b, dtype=np.int64), N)
        else:
            N = None
            aa = np.mod(np.asarray(a, dtype=float), 1.0)
            bb = np.mod(np.asarray(b, dtype=float), 1.0)
        if aa.shape != bb.shape or aa.ndim != 1:
            raise ValidationError("endpoint arrays must be 1-d and of equal length")
        lo, hi = np.minimum(aa, bb), np.maximum(aa, bb)
        self.a, self.b = lo, hi
        self.a.setflags(write=False)
        self.b.setflags(write=False)
        self.denominator = N
        self.labels = None if labels is None else np.asarray(labels, dtype=np.int64)
        if self.labels is not None and self.labels.shape != lo.shape:
            raise ValidationError("one label per chord is required")
        self.blocks = [tuple(bl) for bl in blocks] if blocks else []
        if check:
            self.check_noncrossing()

    @classmethod
    def empty(cls, denominator=None):
        return cls([], [], denominator)

    @classmethod
    def from_pairs(cls, pairs, denominator=None, labels=None, check=True):
        pairs = list(pairs)
        a = [p[0] for p in pairs]
        b = [p[1] for p in pairs]
        if denominator is not None:
            return cls(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64),
                       denominator, labels, check=check)
        return cls(np.asarray(a, dtype=float), np.asarray(b, dtype=float), None, labels, check=check)

    # basic views ----------------------------------------------------------
    def __len__(self):
        return self.a.size

    @property
    def exact(self):
        return self.denominator is not None

    @property
    def scale(self):
        return self.denominator if self.exact else 1.0

    def turns(self):
        """Endpoints as fractions of a turn (floats)."""
        s = float(self.scale)
        return self.a / s, self.b / s

    def degenerate(self):
        return self.a == self.b

    def extents(self):
        """Arc span ``(b - a)`` as a fraction of the circle."""
        return (self.b - self.a) / float(self.scale)

    def chord_lengths(self):
        """Euclidean lengths ``2 sin(pi * span)``."""
        return 2.0 * np.sin(np.pi * self.extents())

    def chord_set(self):
        """Nondegenerate chords as a frozenset of endpoint pairs."""
        keep = ~self.degenerate()
        return frozenset(zip(self.a[keep].tolist(), self.b[keep].tolist()))

    def subset(self, mask):
        mask = np.asarray(mask)
        labels = None if self.labels is None else self.labels[mask]
        return Lamination(self.a[mask], self.b[mask], self.denominator, labels, check=False)

    def reflect(self, axis=0):
        """Mirror image under ``x -> axis - x`` (mod one turn)."""
        labels = self.labels
        if self.exact:
            return Lamination(axis - self.a, axis - self.b, self.denominator, labels, check=False)
        return Lamination(axis - self.a, axis - self.b, None, labels, check=False)

    def is_subset_of(self, other):
        return self.chord_set() <= other.chord_set()

    def __eq__(self, other):
        if not isinstance(other, Lamination):
            return NotImplemented
        return self.denominator == other.denominator and self.chord_set() == other.chord_set()

    __hash__ = None

    def __repr__(self):
        return f"Lamination(chords={len(self)}, denominator={self.denominator})"

    # structure --------------------------------------------------------------
    def _sorted_unique(self):
        keep = ~self.degenerate()
        a, b = self.a[keep], self.b[keep]
        if a.size == 0:
            return a, b
        order = np.lexsort((-b, a))
        a, b = a[order], b[order]
        first = np.ones(a.size, dtype=bool)
        first[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
        return a[first], b[first]

    def check_noncrossing(self):
        """Raise :class:`CrossingChordsError` if two chords cross."""
        a, b = self._sorted_unique()
        stack = []
        for x, y in zip(a.tolist(), b.tolist()):
            while stack and stack[-1][1] <= x:
                stack.pop()
            if stack and y > stack[-1][1]:
                raise CrossingChordsError(f"chords {stack[-1]} and {(x, y)} cross")
            stack.append((x, y))

    def face_masses(self):
        """Masses of the faces that touch the circle, nonincreasing.

        The face just inside chord ``(a, b)`` owns the part of arc ``[a, b]``
        not enclosed by a deeper chord; the outermost face owns the rest.
        """
        a, b = self._sorted_unique()
        total = self.scale
        spans = b - a
        inner = np.zeros_like(spans)
        top_level = 0
        stack = []
        for i, (x, y) in enumerate(zip(a.tolist(), b.tolist())):
            while stack and b[stack[-1]] <= x:
                stack.pop()
            if stack:
                inner[stack[-1]] += spans[i]
            else:
                top_level += spans[i]
            stack.append(i)
        masses = np.append(spans - inner, total - top_level)
        if self.exact:
            return MassSequence.from_numerators(masses, self.denominator)
        return MassSequence.from_values(masses)

    # serialization ----------------------------------------------------------
    def to_json(self):
        rows = []
        for i in range(len(self)):
            if self.exact:
                row = [int(self.a[i]), self.denominator, int(self.b[i]), self.denominator]
            else:
                fa = Fraction(float(self.a[i]))
                fb = Fraction(float(self.b[i]))
                row = [fa.numerator, fa.denominator, fb.numerator, fb.denominator]
            if self.labels is not None:
                row.append(int(self.labels[i]))
            rows.append(row)
        out = {"denominator": self.denominator, "chords": rows}
        if self.blocks:
            out["blocks"] = [list(bl) for bl in self.blocks]
        return json.dumps(out)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        N = data.get("denominator")
        rows = data["chords"]
        labels = [r[4] for r in rows] if rows and all(len(r) > 4 for r in rows) else None
        if N is not None:
            a = [r[0] * N // r[1] for r in rows]
            b = [r[2] * N // r[3] for r in rows]
            if any(r[0] * N % r[1] or r[2] * N % r[3] for r in rows):
                raise ValidationError("endpoint is not a multiple of 1/denominator")
            lam = cls(np.asarray(a, np.int64), np.asarray(b, np.int64), N, labels)
        else:
            lam = cls(np.asarray([r[0] / r[1] for r in rows], float),
                      np.asarray([r[2] / r[3] for r in rows], float), None, labels)
        lam.blocks = [tuple(bl) for bl in data.get("blocks", [])]
        return lam


def face_masses(lam):
    return lam.face_masses()


# constructions from paths ------------------------------------------------------

def _next_strictly_below(vals):
    """``d[i] = min{j > i : vals[j] < vals[i]}`` (``len`` if none)."""
    n = len(vals)
    out = [n] * n
    stack = []
    for j, v in enumerate(vals):
        while stack and vals[stack[-1]] > v:
            out[stack.pop()] = j
        stack.append(j)
    return out


def lamination_from_path(path, mode="lukasiewicz"):
    """Chords coded by an excursion.

    ``mode="lukasiewicz"``: for a walk ``W_0..W_n`` returns the ``n`` chords
    ``[a/n, d(a)/n]`` with ``d(a) = min{b > a : W_b < W_a}``.

    ``mode="cadlag-excursion"``: for a step function sampled at ``0..m``, each
    up-jump at index ``s`` gives the chord ``[s/m, t/m]`` where
    ``t = min{u > s : f_u <= f_{s-1}}``.
    """
    check_choice(mode, "mode", {"lukasiewicz", "cadlag-excursion"})
    vals = np.asarray(getattr(path, "values", path))
    if vals.ndim != 1 or vals.size < 2:
        raise ValidationError("an excursion needs at least two samples")
    if mode == "lukasiewicz":
        if not np.all(np.mod(vals, 1) == 0):
            raise ValidationError("a Lukasiewicz path is integer valued")
        v = vals.astype(np.int64)
        if v[0] != 0 or v[-1] != -1 or np.any(v[:-1] < 0) or np.any(np.diff(v) < -1):
            raise ValidationError("not a Lukasiewicz excursion")
        n = v.size - 1
        d = _next_strictly_below(v.tolist())[:n]
        return Lamination(np.arange(n), np.asarray(d, dtype=np.int64), n)
    m = vals.size - 1
    if vals[0] != 0 or vals[-1] != 0 or np.any(vals < 0):
        raise ValidationError("a cadlag excursion is nonnegative and starts and ends at 0")
    v = vals.tolist()
    jumps = [s for s in range(1, m + 1) if v[s] > v[s - 1]]
    # first return to level f_{s-1}: scan with a monotone stack over levels
    ends = []
    for s in jumps:
        level = v[s - 1]
        u = s + 1
        while u < m and v[u] > level:
            u += 1
        ends.append(min(u, m))
    return Lamination(np.asarray(jumps, dtype=np.int64), np.asarray(ends, dtype=np.int64), m)


def lamination_from_tree_contour(tree):
    """One chord ``[g_u / 2n, d_u / 2n]`` per vertex, from its contour visit times."""
    g, d = tree.contour_interval()
    return Lamination(g, d, 2 * tree.n, labels=np.arange(tree.n))


# geometry -----------------------------------------------------------------------

def _points(turns):
    ang = 2.0 * np.pi * np.asarray(turns, dtype=float)
    return np.column_stack([np.cos(ang), -np.sin(ang)])


def chord_sample_points(lam, spacing):
    """Points along every chord, consecutive ones at most ``spacing`` apart."""
    ta, tb = lam.turns()
    if ta.size == 0:
        return np.zeros((0, 2))
    p, q = _points(ta), _points(tb)
    lengths = np.linalg.norm(q - p, axis=1)
    counts = np.ceil(lengths / spacing).astype(np.int64) + 1
    idx = np.repeat(np.arange(ta.size), counts)
    starts = np.cumsum(counts) - counts
    frac = (np.arange(idx.size) - starts[idx]) / np.maximum(counts[idx] - 1, 1)
    return p[idx] + frac[:, None] * (q[idx] - p[idx])


def hausdorff_distance(l1, l2, resolution=1e-2):
    """Hausdorff distance between two laminations (circle included), error <= resolution.

    Both sets contain the circle, so only chord points need checking: each is
    compared with the exact distance to the circle and with a sampling of the
    other lamination's chords.
    """
    res = check_real(resolution, "resolution", minimum=0.0, strict_min=True)
    p1 = chord_sample_points(l1, res)
    p2 = chord_sample_points(l2, res)

    def one_side(src, dst):
        if src.shape[0] == 0:
            return 0.0
        d = 1.0 - np.linalg.norm(src, axis=1)
        if dst.shape[0]:
            d = np.minimum(d, cKDTree(dst).query(src)[0])
        return float(max(d.max(), 0.0))

    return max(one_side(p1, p2), one_side(p2, p1))


def epsilon_sublamination(lam, eps):
    """Keep one chord per pair of arcs, for ``r = floor(2 pi / eps) + 1`` equal arcs.

    At most ``r**2`` chords remain and every dropped chord has a kept one
    within ``eps`` (both endpoints lie in arcs shorter than ``eps``).
    """
    eps = check_real(eps, "eps", minimum=0.0, strict_min=True)
    r = int(math.floor(2.0 * math.pi / eps)) + 1
    if len(lam) == 0:
        return lam.subset(np.zeros(0, dtype=bool))
    ta, tb = lam.turns()
    ia = np.minimum((ta * r).astype(np.int64), r - 1)
    ib = np.minimum((tb * r).astype(np.int64), r - 1)
    _, first = np.unique(ia * r + ib, return_index=True)
    mask = np.zeros(len(lam), dtype=bool)
    mask[first] = True
    return lam.subset(mask)
