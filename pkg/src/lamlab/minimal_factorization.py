"""Minimal factorizations of the n-cycle into transpositions and their
bijection with labelled trees.

Transpositions are read left to right: ``t_1 t_2`` acts as ``t_2 o t_1``, and
a factorization is minimal when ``t_1 ... t_{n-1}`` maps ``i`` to ``i + 1``
(mod n).  Point ``k`` of the circle sits at turn ``k / n``.

The labelled tree attached to a factorization has one vertex per face of its
chord diagram.  Each face touches exactly one circle arc, where arc ``k``
joins points ``k`` and ``k + 1`` (arc ``n`` closes the circle).  The root,
labelled 1, is the face on arc ``n``.  The face beyond chord ``t_i`` from the
root gets label ``i + 1``.
"""

from dataclasses import dataclass
import json

import networkx as nx
import numpy as np

from ._random import stream
from ._validation import ValidationError, check_int
from .lamination import Lamination
from .plane_tree import PlaneTree


@dataclass(frozen=True)
class MinimalFactorization:
    n: int
    transpositions: tuple

    def __post_init__(self):
        n = check_int(self.n, "n", minimum=1)
        pairs = []
        for t in self.transpositions:
            if len(t) != 2:
                raise ValidationError(f"malformed transposition {t!r}")
            a, b = sorted((int(t[0]), int(t[1])))
            if not 1 <= a < b <= n:
                raise ValidationError(f"transposition {t!r} is not in 1..{n}")
            pairs.append((a, b))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "transpositions", tuple(pairs))

    def __len__(self):
        return len(self.transpositions)

    def __str__(self):
        return "".join(f"({a}{b})" if self.n < 10 else f"({a} {b})" for a, b in self.transpositions)

    def to_text(self):
        return "".join(f"{a} {b}\n" for a, b in self.transpositions)

    @classmethod
    def from_text(cls, text, n=None):
        pairs = [tuple(int(x) for x in line.split()) for line in text.splitlines() if line.strip()]
        if n is None:
            n = len(pairs) + 1
        return cls(n, tuple(pairs))


def partial_products(f):
    """Yield ``sigma_k = t_1 ... t_k`` (as 1-based arrays) for ``k = 0..len(f)``."""
    n = f.n
    sigma = np.arange(n + 1)
    inv = np.arange(n + 1)
    yield sigma.copy()
    for a, b in f.transpositions:
        # (a b) applied after sigma swaps the preimages of a and b
        pa, pb = inv[a], inv[b]
        sigma[pa], sigma[pb] = b, a
        inv[a], inv[b] = pb, pa
        yield sigma.copy()


def product(f):
    """The permutation ``t_1 ... t_k`` as a 1-based array (index 0 unused)."""
    n = f.n
    sigma = list(range(n + 1))
    inv = list(range(n + 1))
    for a, b in f.transpositions:
        pa, pb = inv[a], inv[b]
        sigma[pa], sigma[pb] = b, a
        inv[a], inv[b] = pb, pa
    return np.asarray(sigma)


def verify_minimal(f):
    """True iff ``f`` has ``n - 1`` factors whose product is ``(1 2 ... n)``."""
    if not isinstance(f, MinimalFactorization):
        raise ValidationError("expected a MinimalFactorization")
    if len(f) != f.n - 1:
        return False
    sigma = product(f)
    target = np.append([0], np.arange(2, f.n + 2))
    target[f.n] = 1
    return bool(np.array_equal(sigma, target))


def enumerate_minimal_factorizations(n):
    """Every element of the set of minimal factorizations of the n-cycle, by brute force."""
    n = check_int(n, "n", minimum=1)
    from itertools import combinations, product as cartesian
    trans = list(combinations(range(1, n + 1), 2))
    for seq in cartesian(trans, repeat=n - 1):
        f = MinimalFactorization(n, seq)
        if verify_minimal(f):
            yield f


# labelled trees -----------------------------------------------------------

class LabelledTree:
    """A plane tree whose vertices carry the labels ``1..n``, root labelled 1."""

    __slots__ = ("shape", "labels")

    def __init__(self, shape, labels):
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (shape.n,):
            raise ValidationError("one label per vertex is required")
        if labels[0] != 1 or not np.array_equal(np.sort(labels), np.arange(1, shape.n + 1)):
            raise ValidationError("labels must be a permutation of 1..n with the root labelled 1")
        labels.setflags(write=False)
        self.shape = shape
        self.labels = labels

    @property
    def n(self):
        return self.shape.n

    def parent_labels(self):
        """``p[l]`` is the label of the parent of label ``l`` (0 for the root)."""
        p = np.zeros(self.n + 1, dtype=np.int64)
        par = self.shape.parents
        p[self.labels[1:]] = self.labels[par[1:]]
        return p

    @classmethod
    def canonical(cls, parent_labels):
        """The plane embedding where labels decrease clockwise around each vertex.

        ``parent_labels[l]`` is the parent of label ``l`` for ``l = 2..n``
        (entries 0 and 1 are ignored).  Around label ``l`` the children come as
        the labels below ``l`` in decreasing order, then those above ``l`` in
        decreasing order.
        """
        p = [int(x) for x in parent_labels]
        n = len(p) - 1
        kids = [[] for _ in range(n + 1)]
        for lab in range(n, 1, -1):
            if not 1 <= p[lab] <= n or p[lab] == lab:
                raise ValidationError(f"bad parent for label {lab}")
            kids[p[lab]].append(lab)  # decreasing
        order = []
        par_index = []
        stack = [(1, -1)]
        while stack:
            lab, pi = stack.pop()
            idx = len(order)
            order.append(lab)
            par_index.append(pi)
            ch = _c_delta_order(lab, kids[lab])
            stack.extend((c, idx) for c in reversed(ch))
        if len(order) != n:
            raise ValidationError("parent labels do not form a tree rooted at 1")
        return cls(PlaneTree(par_index), order)

    def is_c_delta(self):
        """True if the stored child order is the canonical clockwise-decreasing one."""
        for v in range(self.n):
            ch = self.labels[self.shape.children(v)].tolist()
            if ch != _c_delta_order(int(self.labels[v]), sorted(ch, reverse=True)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, LabelledTree):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((hash(self.shape), self.labels.tobytes()))

    def __repr__(self):
        return f"LabelledTree(n={self.n}, parents={self.parent_labels()[2:].tolist()})"

    def to_json(self):
        return json.dumps({"parents": [None] + self.shape.parents[1:].tolist(),
                           "labels": self.labels.tolist()})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        par = [-1 if x is None else x for x in data["parents"]]
        return cls(PlaneTree(par), data["labels"])


def _c_delta_order(label, children_desc):
    return [c for c in children_desc if c < label] + [c for c in children_desc if c > label]


def enumerate_labelled_trees(n):
    """All labelled trees on ``1..n`` (``n**(n-2)`` of them), canonically embedded."""
    from itertools import product as cartesian
    n = check_int(n, "n", minimum=1)
    if n == 1:
        yield LabelledTree.canonical([0, 0])
        return
    if n == 2:
        yield LabelledTree.canonical([0, 0, 1])
        return
    for seq in cartesian(range(n), repeat=n - 2):
        yield _tree_from_prufer(list(seq), n)


def _tree_from_prufer(seq, n):
    g = nx.from_prufer_sequence(seq) if n > 2 else nx.path_graph(n)
    p = [0] * (n + 1)
    for child, parent in nx.bfs_predecessors(g, 0):
        p[child + 1] = parent + 1
    return LabelledTree.canonical(p)


# the bijection ------------------------------------------------------------------

def goulden_yong_forward(f, check=True):
    """Chord diagram (labels ``2..n``) and labelled tree of a minimal factorization."""
    if check and not verify_minimal(f):
        raise ValidationError("factorization is not minimal")
    n = f.n
    if n == 1:
        return Lamination.empty(1), LabelledTree.canonical([0, 0])
    a = np.array([t[0] for t in f.transpositions], dtype=np.int64)
    b = np.array([t[1] for t in f.transpositions], dtype=np.int64)
    labels = np.arange(2, n + 1)
    lam = Lamination(a, b, n, labels=labels)
    # chord (a, b) encloses the arcs a..b-1
    lo, hi = a, b - 1
    order = np.lexsort((-hi, lo))
    parent = [0] * (n + 1)
    own = [0] * (n + 1)
    stack = []
    for i in order.tolist():
        x, y, lab = int(lo[i]), int(hi[i]), i + 2
        while stack and stack[-1][1] < x:
            stack.pop()
        if stack:
            if stack[-1][1] < y:
                raise ValidationError("chords cross")
            parent[lab] = stack[-1][2]
            own[stack[-1][2]] -= y - x + 1
        else:
            parent[lab] = 1
            own[1] -= y - x + 1
        own[lab] += y - x + 1
        stack.append((x, y, lab))
    own[1] += n
    if any(own[lab] != 1 for lab in range(1, n + 1)):
        raise ValidationError("some face does not touch exactly one arc; input is not minimal")
    tree = LabelledTree.canonical(parent)
    return lam, tree


def goulden_yong_inverse(tree):
    """Minimal factorization whose labelled tree is ``tree``.

    Arcs are handed out by an in-order walk of the canonical embedding: the
    root takes arc ``n``, and every other vertex first visits its children
    with smaller labels (decreasing), then takes the next arc, then visits its
    children with larger labels (decreasing).  Label ``j`` then gets the chord
    spanning the arcs of its subtree.
    """
    n = tree.n
    p = tree.parent_labels()
    kids = [[] for _ in range(n + 1)]
    for lab in range(n, 1, -1):
        kids[int(p[lab])].append(lab)
    lo = [0] * (n + 1)
    hi = [0] * (n + 1)
    counter = 1
    # iterative in-order walk; stage 0 enters, 1 takes the own arc, 2 leaves
    stack = [(c, 0) for c in reversed(kids[1])]
    while stack:
        lab, stage = stack.pop()
        if stage == 0:
            lo[lab] = counter
            stack.append((lab, 1))
            stack.extend((c, 0) for c in reversed([c for c in kids[lab] if c < lab]))
        elif stage == 1:
            counter += 1
            stack.append((lab, 2))
            stack.extend((c, 0) for c in reversed([c for c in kids[lab] if c > lab]))
        else:
            hi[lab] = counter - 1
    pairs = tuple((lo[j], hi[j] + 1) for j in range(2, n + 1))
    return MinimalFactorization(n, pairs)


def sample_uniform_factorization(n, seed):
    """Uniform minimal factorization via a uniform Pruefer sequence."""
    n = check_int(n, "n", minimum=1)
    rng = stream(seed, "uniform-factorization")
    if n <= 2:
        tree = LabelledTree.canonical([0] * 2 if n == 1 else [0, 0, 1])
    else:
        tree = _tree_from_prufer(rng.integers(0, n, size=n - 2).tolist(), n)
    return goulden_yong_inverse(tree)


def sample_uniform_labelled_tree(n, seed):
    n = check_int(n, "n", minimum=1)
    rng = stream(seed, "uniform-labelled-tree")
    if n <= 2:
        return LabelledTree.canonical([0] * 2 if n == 1 else [0, 0, 1])
    return _tree_from_prufer(rng.integers(0, n, size=n - 2).tolist(), n)


# laminations from a factorization ------------------------------------------------

def prefix_lamination(f, k, suffix=False):
    """Chords of the first ``k`` transpositions (or the last ``k`` with ``suffix``)."""
    k = check_int(k, "k", minimum=0, maximum=len(f))
    pairs = f.transpositions[len(f) - k:] if suffix else f.transpositions[:k]
    first = len(f) - k + 2 if suffix else 2
    return Lamination([p[0] for p in pairs], [p[1] for p in pairs], f.n,
                      labels=np.arange(first, first + k), check=True)


def cycles(sigma):
    """Cycles of a 1-based permutation array, each starting at its smallest element."""
    n = sigma.size - 1
    seen = np.zeros(n + 1, dtype=bool)
    out = []
    s = sigma.tolist()
    for i in range(1, n + 1):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = s[j]
            out.append(tuple(cyc))
    return out


def partition_lamination(sigma):
    """Chords between consecutive elements of each cycle of ``sigma``; blocks are cycles of length >= 3."""
    n = sigma.size - 1
    a, b, blocks = [], [], []
    for cyc in cycles(sigma):
        k = len(cyc)
        if k == 2:
            a.append(cyc[0])
            b.append(cyc[1])
        elif k >= 3:
            for i in range(k):
                a.append(cyc[i])
                b.append(cyc[(i + 1) % k])
            blocks.append(tuple(sorted(cyc)))
    return Lamination(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), n, blocks=blocks)


def partition_process(f, k):
    """Noncrossing partition given by the cycles of ``t_1 ... t_k``, as a lamination."""
    k = check_int(k, "k", minimum=0, maximum=len(f))
    sub = MinimalFactorization(f.n, f.transpositions[:k])
    return partition_lamination(product(sub))


def block_sizes(sigma):
    """Cycle lengths of ``sigma``, largest first."""
    return sorted((len(c) for c in cycles(sigma)), reverse=True)


# tree operations ----------------------------------------------------------------

def shuffle_tree(tree, K, seed):
    """Randomly relabel/reorder children root-first, governed by the threshold ``K``.

    At a vertex whose children all carry labels above ``K`` the children's
    labels are shuffled while the subtrees stay in place.  Otherwise the
    children are permuted together with their subtrees.
    """
    n = tree.n
    K = check_int(K, "K", minimum=0, maximum=n)
    rng = stream(seed, "shuffle-tree")
    shape = tree.shape
    # children lists in terms of current labels, processed root-first
    kids = {int(tree.labels[v]): [int(tree.labels[c]) for c in shape.children(v)] for v in range(n)}
    # subtree structure keyed by label; relabelling swaps the label sets of child positions
    children_of = dict(kids)
    out_kids = {}
    queue = [1]
    while queue:
        lab = queue.pop(0)
        ch = children_of.get(lab, [])
        if not ch:
            out_kids[lab] = []
            continue
        if all(c > K for c in ch):
            perm = rng.permutation(len(ch))
            new = [ch[i] for i in perm]
            # position j keeps its subtree but receives label new[j]
            subtrees = [children_of.get(c, []) for c in ch]
            for j, c in enumerate(new):
                children_of[c] = subtrees[j]
            relabel = dict(zip(ch, new))
            out_kids[lab] = [relabel[c] for c in ch]
        else:
            perm = rng.permutation(len(ch))
            out_kids[lab] = [ch[i] for i in perm]
        queue.extend(out_kids[lab])
    order, par_index = [], []
    stack = [(1, -1)]
    while stack:
        lab, pi = stack.pop()
        idx = len(order)
        order.append(lab)
        par_index.append(pi)
        stack.extend((c, idx) for c in reversed(out_kids[lab]))
    return LabelledTree(PlaneTree(par_index), order)


def reverse_involution(tree):
    """Relabel every non-root vertex ``e -> n + 2 - e`` and re-embed canonically."""
    n = tree.n
    p = tree.parent_labels()
    flip = np.arange(n + 1)
    flip[2:] = n + 2 - flip[2:]
    q = np.zeros(n + 1, dtype=np.int64)
    q[flip[2:]] = flip[p[2:]]
    return LabelledTree.canonical(q)


def reversed_factorization(f):
    """Factorization of the reverse-involuted tree.

    Its first ``k`` chords, mirrored by ``x -> 1 - x`` on the circle, are the
    last ``k`` chords of ``f``.
    """
    return goulden_yong_inverse(reverse_involution(goulden_yong_forward(f, check=False)[1]))
