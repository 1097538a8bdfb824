"""Rooted plane trees stored as flat preorder arrays, plus their path encodings.

Vertices are numbered ``0..n-1`` in lexicographic (depth-first, children in
order) order, so ``parents[0] == -1`` and ``parents[i] < i`` for ``i > 0``.
Siblings appear in increasing index order.  Every traversal is iterative.
"""

from dataclasses import dataclass
import json

import numpy as np

from ._validation import ValidationError, check_choice, check_int, check_real


@dataclass(frozen=True)
class LatticePath:
    """Values sampled at times ``0, step, 2*step, ...``.

    ``interpolation`` is ``"linear"`` (contour functions) or ``"step"``
    (cadlag paths such as Lukasiewicz walks).
    """

    values: np.ndarray
    step: float = 1.0
    interpolation: str = "linear"

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or vals.size < 1:
            raise ValidationError("a path needs at least one value")
        object.__setattr__(self, "values", vals)
        check_real(self.step, "step", minimum=0.0, strict_min=True)
        check_choice(self.interpolation, "interpolation", {"linear", "step"})

    def __len__(self):
        return self.values.size

    @property
    def duration(self):
        return self.step * (self.values.size - 1)

    def __call__(self, t):
        """Evaluate the path at real times ``t``."""
        x = np.asarray(t, dtype=float) / self.step
        vals = self.values.astype(float)
        if self.interpolation == "linear":
            return np.interp(x, np.arange(vals.size), vals)
        idx = np.clip(np.floor(x).astype(np.int64), 0, vals.size - 1)
        return vals[idx]

    def __eq__(self, other):
        if not isinstance(other, LatticePath):
            return NotImplemented
        return (self.step == other.step and self.interpolation == other.interpolation
                and np.array_equal(self.values, other.values))

    __hash__ = None


class PlaneTree:
    """An ordered rooted tree in canonical preorder numbering."""

    __slots__ = ("_parents", "_sizes", "_heights", "_child_ptr", "_child_idx")

    def __init__(self, parents):
        par = np.asarray(parents, dtype=np.int64)
        if par.ndim != 1 or par.size == 0:
            raise ValidationError("a tree needs at least one vertex")
        if par[0] != -1:
            raise ValidationError("vertex 0 must be the root (parent -1)")
        idx = np.arange(par.size)
        if par.size > 1 and not np.all((par[1:] >= 0) & (par[1:] < idx[1:])):
            raise ValidationError("parents must satisfy 0 <= parents[i] < i")
        # preorder: each vertex's parent is the most recent vertex on the current branch
        _check_preorder(par)
        par.setflags(write=False)
        self._parents = par
        self._sizes = None
        self._heights = None
        order = np.argsort(par[1:], kind="stable") + 1
        counts = np.bincount(par[1:], minlength=par.size) if par.size > 1 else np.zeros(1, np.int64)
        ptr = np.zeros(par.size + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        self._child_ptr = ptr
        self._child_idx = order

    # construction -----------------------------------------------------
    @classmethod
    def from_parents(cls, parents):
        """Build from any parent array where siblings are ordered by index.

        ``None`` or ``-1`` marks the root.  Vertices are renumbered in preorder.
        """
        par = [-1 if p is None else int(p) for p in parents]
        n = len(par)
        roots = [i for i, p in enumerate(par) if p == -1]
        if len(roots) != 1:
            raise ValidationError("exactly one root is required")
        children = [[] for _ in range(n)]
        for i, p in enumerate(par):
            if p != -1:
                if not 0 <= p < n:
                    raise ValidationError(f"parent index {p} out of range")
                children[p].append(i)
        new_index = [-1] * n
        new_par = []
        stack = [(roots[0], -1)]
        while stack:
            v, p = stack.pop()
            new_index[v] = len(new_par)
            new_par.append(p)
            for c in reversed(children[v]):
                stack.append((c, new_index[v]))
        if len(new_par) != n:
            raise ValidationError("parent array contains a cycle or is disconnected")
        return cls(new_par)

    @classmethod
    def from_children(cls, children):
        """Build from nested child lists indexed by vertex (root is vertex 0)."""
        par = [None] * len(children)
        seen = set()
        for v, kids in enumerate(children):
            for c in kids:
                if c in seen or c == 0:
                    raise ValidationError(f"vertex {c} has more than one parent")
                seen.add(c)
                par[c] = v
        # reorder so sibling order follows the child lists
        n = len(children)
        order, stack = [], [0]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(children[v]))
        if len(order) != n:
            raise ValidationError("child lists do not describe a single tree")
        pos = {v: i for i, v in enumerate(order)}
        return cls([-1] + [pos[par[v]] for v in order[1:]])

    @classmethod
    def from_degrees(cls, degrees):
        """Build from the preorder sequence of child counts."""
        deg = [int(d) for d in degrees]
        n = len(deg)
        if n == 0:
            raise ValidationError("empty degree sequence")
        par = [-1] * n
        stack = []  # (vertex, children still to attach)
        for i, d in enumerate(deg):
            if d < 0:
                raise ValidationError("degrees must be nonnegative")
            if i > 0:
                if not stack:
                    raise ValidationError("degree sequence closes the tree early")
                v, left = stack[-1]
                par[i] = v
                if left == 1:
                    stack.pop()
                else:
                    stack[-1] = (v, left - 1)
            if d:
                stack.append((i, d))
        if stack:
            raise ValidationError("degree sequence leaves unfilled children")
        return cls(par)

    @classmethod
    def single(cls):
        return cls([-1])

    # basic accessors ----------------------------------------------------
    @property
    def n(self):
        return int(self._parents.size)

    def __len__(self):
        return self.n

    @property
    def parents(self):
        return self._parents

    @property
    def root(self):
        return 0

    def children(self, v):
        return self._child_idx[self._child_ptr[v]:self._child_ptr[v + 1]]

    def degrees(self):
        return np.diff(self._child_ptr)

    def subtree_sizes(self):
        """Number of vertices in the subtree of each vertex (itself included)."""
        if self._sizes is None:
            par = self._parents.tolist()
            size = [1] * len(par)
            for i in range(len(par) - 1, 0, -1):
                size[par[i]] += size[i]
            arr = np.asarray(size, dtype=np.int64)
            arr.setflags(write=False)
            self._sizes = arr
        return self._sizes

    def heights(self):
        """Distance to the root for each vertex."""
        if self._heights is None:
            par = self._parents.tolist()
            h = [0] * len(par)
            for i in range(1, len(par)):
                h[i] = h[par[i]] + 1
            arr = np.asarray(h, dtype=np.int64)
            arr.setflags(write=False)
            self._heights = arr
        return self._heights

    def height(self):
        return int(self.heights().max())

    def contour_interval(self):
        """First and last contour-visit times ``(g, d)`` of each vertex.

        For the vertex of preorder rank ``r`` at height ``h`` whose subtree has
        ``k`` vertices, ``g = 2r - h`` and ``d = g + 2(k - 1)``.
        """
        r = np.arange(self.n, dtype=np.int64)
        g = 2 * r - self.heights()
        return g, g + 2 * (self.subtree_sizes() - 1)

    # equality / serialization -------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PlaneTree):
            return NotImplemented
        return np.array_equal(self._parents, other._parents)

    def __hash__(self):
        return hash(self._parents.tobytes())

    def __repr__(self):
        return f"PlaneTree(n={self.n}, degrees={self.degrees().tolist()})" if self.n <= 20 \
            else f"PlaneTree(n={self.n})"

    def to_json(self):
        return json.dumps({"n": self.n, "parents": [None] + self._parents[1:].tolist()})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        parents = data["parents"]
        if "n" in data and data["n"] != len(parents):
            raise ValidationError("'n' does not match the parent array length")
        return cls.from_parents(parents)


def _check_preorder(par):
    # In preorder each parent must lie on the branch ending at the previous vertex.
    stack = [0]
    for i, p in enumerate(par.tolist()[1:], start=1):
        while stack and stack[-1] != p:
            stack.pop()
        if not stack:
            raise ValidationError("parent array is not in preorder; use PlaneTree.from_parents")
        stack.append(i)


# encodings ---------------------------------------------------------------

def contour_path(t):
    """Contour function of ``t``: ``2n+1`` integer samples at times ``0..2n``.

    Heights along the left-to-right exploration for times ``0..2n-2``, then
    zero on ``[2n-2, 2n]``.
    """
    n = t.n
    steps = -np.ones(max(2 * n - 2, 0), dtype=np.int64)
    if n > 1:
        g, _ = t.contour_interval()
        steps[g[1:] - 1] = 1
    vals = np.zeros(2 * n + 1, dtype=np.int64)
    vals[1:2 * n - 1] = np.cumsum(steps)
    return LatticePath(vals, 1.0, "linear")


def lukasiewicz_path(t):
    """Lukasiewicz walk: ``W_0 = 0`` and ``W_{i+1} - W_i = k_{v_i} - 1``."""
    vals = np.zeros(t.n + 1, dtype=np.int64)
    np.cumsum(t.degrees() - 1, out=vals[1:])
    return LatticePath(vals, 1.0, "step")


def tree_from_lukasiewicz(path):
    """Inverse of :func:`lukasiewicz_path`."""
    vals = np.asarray(path.values if isinstance(path, LatticePath) else path)
    if vals.ndim != 1 or vals.size < 2:
        raise ValidationError("a Lukasiewicz path has at least two values")
    if not np.all(np.mod(vals, 1) == 0):
        raise ValidationError("a Lukasiewicz path is integer valued")
    vals = vals.astype(np.int64)
    if vals[0] != 0:
        raise ValidationError("a Lukasiewicz path starts at 0")
    inc = np.diff(vals)
    if np.any(inc < -1):
        raise ValidationError("Lukasiewicz increments must be >= -1")
    if vals[-1] != -1 or np.any(vals[:-1] < 0):
        raise ValidationError("the path must first hit -1 at its final index")
    return PlaneTree.from_degrees(inc + 1)


def subtree_sizes(t):
    return t.subtree_sizes()


def heights(t):
    return t.heights()


# heavy vertices ------------------------------------------------------------

def _splittable(sizes, a):
    """True if ``sizes`` can be split into two groups each of total >= a."""
    total = sum(sizes)
    hi = total - a
    if len(sizes) < 2 or hi < a:
        return False
    if max(sizes) >= a:
        # the largest child alone, or everything else, lands in the window
        big = max(sizes)
        if big <= hi:
            return True
        return False  # big > total - a: the rest can never reach a
    acc = 0
    for s in sorted(sizes, reverse=True):
        acc += s
        if acc >= a:
            if acc <= hi:
                return True
            break
    # exact subset-sum over reachable totals
    reach = 1
    mask = (1 << (hi + 1)) - 1
    for s in sizes:
        reach = (reach | (reach << s)) & mask
    return (reach >> a) != 0


def find_heavy_vertices(t, a, kind="node"):
    """Vertices whose children's subtrees are heavy in the sense of ``kind``.

    ``kind="node"``: the children can be split into two groups, each with
    total subtree size at least ``a``.  ``kind="branching-point"``: at least
    two children have subtree size at least ``a``.
    """
    a = check_int(a, "a", minimum=1)
    check_choice(kind, "kind", {"node", "branching-point"})
    sizes = t.subtree_sizes()
    out = set()
    if a > t.n:
        return out
    deg = t.degrees()
    for v in np.flatnonzero(deg >= 2).tolist():
        cs = sizes[t.children(v)]
        if kind == "branching-point":
            if np.count_nonzero(cs >= a) >= 2:
                out.add(v)
        elif _splittable(cs.tolist(), a):
            out.add(v)
    return out


def enumerate_plane_trees(n):
    """Yield every plane tree with ``n`` vertices (Catalan(n-1) of them)."""
    n = check_int(n, "n", minimum=1)

    def rec(prefix, level, remaining):
        # level = current walk value before the next step
        if remaining == 0:
            if level == -1:
                yield PlaneTree.from_degrees(prefix)
            return
        if level < 0:
            return
        for d in range(0, remaining):
            new = level + d - 1
            # must still be able to descend to -1 in the remaining steps
            if new + 1 > remaining - 1:
                break
            prefix.append(d)
            yield from rec(prefix, new, remaining - 1)
            prefix.pop()

    yield from rec([], 0, n)
