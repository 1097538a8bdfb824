"""Seeded statistical experiments comparing the discrete models with each other
and with the continuum objects.  Every function returns an :class:`ExperimentReport`.

Process-level statements are only probed through fixed-time marginals and
trends across ``n``; each report says so in its ``notes``.
"""

from dataclasses import dataclass, field
import json
import math

import numpy as np
from scipy import stats

from ._random import stream
from ._validation import ValidationError, check_int, check_real
from .fragmentation import sample_tree_cut_process, tree_component_masses
from .gw_sampler import (builtin_distribution, compute_Bn, gw_tree_probability,
                         sample_conditioned_gw)
from .lamination import (Lamination, MassSequence, hausdorff_distance,
                         lamination_from_path, lamination_from_tree_contour)
from .levy import ExponentParams, density_q, density_tau, mu_n_law, walk_distribution
from .minimal_factorization import (block_sizes, partition_process, prefix_lamination,
                                    product, sample_uniform_factorization)
from .plane_tree import PlaneTree, enumerate_plane_trees, lukasiewicz_path

MARGINALS_NOTE = "process-level convergence is probed through fixed-time marginals only"


@dataclass
class ExperimentReport:
    name: str
    seed: int
    config: dict
    stats: dict
    threshold: dict
    verdict: bool
    notes: list = field(default_factory=list)
    samples: dict = field(default_factory=dict)

    def to_json(self):
        body = {"name": self.name, "seed": self.seed, "config": self.config,
                "stats": self.stats, "threshold": self.threshold,
                "verdict": "pass" if self.verdict else "fail", "notes": self.notes}
        return json.dumps(body, indent=2, sort_keys=True, default=_jsonable)

    def samples_csv(self):
        cols = sorted(self.samples)
        if not cols:
            return ""
        rows = max(len(self.samples[c]) for c in cols)
        lines = [",".join(["index"] + cols)]
        for i in range(rows):
            vals = [repr(float(self.samples[c][i])) if i < len(self.samples[c]) else "" for c in cols]
            lines.append(",".join([str(i)] + vals))
        return "\n".join(lines) + "\n"

    def summary(self):
        return f"{self.name}: {'pass' if self.verdict else 'fail'}"


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _ks(a, b):
    r = stats.ks_2samp(a, b)
    return {"statistic": float(r.statistic), "pvalue": float(r.pvalue)}


def _int_seed(rng):
    return int(rng.integers(2**63))


# mass identity ---------------------------------------------------------------------

def exp_mass_identity(samples=1000, max_n=500, times=5, seed=0):
    """Face masses of cut laminations against component masses of the cut tree.

    Both are exact rationals over ``2n``, so any difference is a bug.  Sample
    0 has no cuts at all and sample 1 cuts every edge.
    """
    samples = check_int(samples, "samples", minimum=2)
    max_n = check_int(max_n, "max_n", minimum=2)
    rng = stream(seed, "mass-identity")
    mu = builtin_distribution("poisson1")
    grid = np.linspace(0.0, 1.0, times)
    failures = 0
    checked = 0
    for i in range(samples):
        n = int(rng.integers(2, max_n + 1))
        tree = sample_conditioned_gw(mu, n, _int_seed(rng))
        if i == 0:
            rate = 1e-12
        elif i == 1:
            rate = 60.0
        else:
            rate = float(rng.exponential(3.0 / math.sqrt(n)))
        cp = sample_tree_cut_process(tree, rate, 1.0, _int_seed(rng))
        for t in grid:
            k = cp.upto(t)
            lam = Lamination(cp.a[:k], cp.b[:k], cp.denominator, check=False)
            frag = tree_component_masses(tree, cp.vertex[:k])
            checked += 1
            if lam.face_masses() != frag:
                failures += 1
    return ExperimentReport(
        "mass_identity", int(seed),
        {"samples": samples, "max_n": max_n, "times": grid.tolist()},
        {"comparisons": checked, "failures": failures},
        {"failures": 0}, failures == 0,
        ["sample 0 has no cuts, sample 1 saturates every edge"])


# factorizations against fragmentation ----------------------------------------------------

def _largest_face(lam):
    return float(lam.face_masses().values[0])


def _longest_chord(lam):
    lengths = lam.chord_lengths()
    return float(lengths.max()) if lengths.size else 0.0


def exp_factorization_vs_fragmentation(n=2000, c=1.0, samples=2000, seed=0):
    """Prefix laminations of uniform minimal factorizations against cut laminations of Poisson(1) trees.

    Population A keeps the first ``floor(c sqrt n)`` transpositions.  Population
    B cuts a conditioned Poisson(1)-GW tree with edge rate ``c B_n / n`` where
    ``B_n = sqrt(n / 2)``; this rate drives the verdict.  The same trees are
    also cut at ``c / sqrt n`` (about ``c sqrt n`` cuts, matching A's chord
    count) and that comparison is reported alongside.
    """
    n = check_int(n, "n", minimum=500)
    c = check_real(c, "c", minimum=0.0)
    samples = check_int(samples, "samples", minimum=10)
    rng = stream(seed, "facto-vs-frag")
    k = int(math.floor(c * math.sqrt(n)))
    B = math.sqrt(n / 2.0)
    rates = {"spec_rate": c * B / n, "matched_rate": c / math.sqrt(n)}
    mu = builtin_distribution("poisson1")
    a_face, a_chord = np.empty(samples), np.empty(samples)
    b = {key: (np.empty(samples), np.empty(samples)) for key in rates}
    for i in range(samples):
        f = sample_uniform_factorization(n, _int_seed(rng))
        lam = prefix_lamination(f, k)
        a_face[i], a_chord[i] = _largest_face(lam), _longest_chord(lam)
        tree = sample_conditioned_gw(mu, n, _int_seed(rng))
        cut_seed = _int_seed(rng)
        for key, r in rates.items():
            if c == 0:
                b[key][0][i], b[key][1][i] = 1.0, 0.0
                continue
            cp = sample_tree_cut_process(tree, r, 1.0, cut_seed)
            lam_b = Lamination(cp.a, cp.b, cp.denominator, check=False)
            b[key][0][i] = float(tree_component_masses(tree, cp.vertex).values[0])
            b[key][1][i] = _longest_chord(lam_b)
    st = {"chords_A": k}
    for key in rates:
        st[key] = {"rate": rates[key],
                   "largest_face": _ks(a_face, b[key][0]),
                   "longest_chord": _ks(a_chord, b[key][1]),
                   "mean_largest_face_B": float(b[key][0].mean())}
    st["mean_largest_face_A"] = float(a_face.mean())
    if c == 0:
        ok = bool(np.all(a_face == 1.0))
    else:
        ok = min(st["spec_rate"]["largest_face"]["pvalue"], st["spec_rate"]["longest_chord"]["pvalue"]) >= 0.01
    return ExperimentReport(
        "factorization_vs_fragmentation", int(seed),
        {"n": n, "c": c, "samples": samples, "B_n": B},
        st, {"pvalue_min": 0.01}, bool(ok),
        [MARGINALS_NOTE, "verdict uses the edge rate c B_n / n with B_n = sqrt(n/2)"],
        {"A_largest_face": a_face, "A_longest_chord": a_chord,
         "B_largest_face": b["spec_rate"][0], "B_longest_chord": b["spec_rate"][1]})


# reduced trees against cut trees ----------------------------------------------------------

def filtered_top_masses(lam, delta, k=3):
    """Top ``k`` face masses after dropping chords of extent at most ``delta``."""
    keep = lam.extents() > delta
    masses = lam.subset(keep).face_masses().values
    out = np.zeros(k)
    out[:min(k, masses.size)] = masses[:k]
    return out


def _base_law(alpha):
    return builtin_distribution("poisson1") if alpha == 2.0 else builtin_distribution("stable", alpha=alpha)


def exp_levy_marginal(n=2000, c=1.0, alpha=2.0, samples=2000, delta=0.05, seed=0):
    """Lukasiewicz laminations of reduced trees against cut laminations of the host tree.

    Population A: a mu_n-GW tree conditioned on ``floor(c B_n)`` vertices,
    ``p_n = c B_n / n``.  Population B: Poisson cuts at rate ``c B_n / n`` on
    a mu-GW tree conditioned on ``n`` vertices.  A finite Lukasiewicz
    lamination gives every face the same mass, so both sides first drop
    chords of extent at most ``delta`` and then compare their top three face
    masses by KS.  A's masses are multiples of ``1/m``; each positive value
    is spread uniformly over its lattice cell before the test, and the
    unspread statistics are reported as ``lattice_ks``.
    """
    n = check_int(n, "n", minimum=500)
    c = check_real(c, "c", minimum=0.0, strict_min=True)
    alpha = check_real(alpha, "alpha", minimum=1.0, maximum=2.0, strict_min=True)
    samples = check_int(samples, "samples", minimum=10)
    rng = stream(seed, "levy-marginal")
    mu = _base_law(alpha)
    B = compute_Bn(mu, n).B_n
    p = min(1.0, c * B / n)
    m = int(math.floor(c * B))
    law = mu_n_law(mu, p)
    A = np.empty((samples, 3))
    Bm = np.empty((samples, 3))

    for i in range(samples):
        red = sample_conditioned_gw(law, m, _int_seed(rng))
        if red.n != m:
            raise ValidationError("conditioned sampler returned the wrong size")
        lam = lamination_from_path(lukasiewicz_path(red))
        A[i] = filtered_top_masses(lam, delta)
        tree = sample_conditioned_gw(mu, n, _int_seed(rng))
        cp = sample_tree_cut_process(tree, p, 1.0, _int_seed(rng))
        Bm[i] = filtered_top_masses(Lamination(cp.a, cp.b, cp.denominator, check=False), delta)
    # A lives on the lattice k/m: spread each positive value over its cell
    jitter = (rng.random(A.shape) - 0.5) / m
    Aj = np.where(A > 0, np.clip(A + jitter, 0.0, 1.0), 0.0)
    st = {f"top{j + 1}": _ks(Aj[:, j], Bm[:, j]) for j in range(3)}
    st["lattice_ks"] = {f"top{j + 1}": _ks(A[:, j], Bm[:, j]) for j in range(3)}
    st.update({"B_n": B, "p_n": p, "reduced_size": m, "mu_n_mean": law.mean})
    ok = min(st[f"top{j + 1}"]["pvalue"] for j in range(3)) >= 0.01
    return ExperimentReport(
        "levy_marginal", int(seed),
        {"n": n, "c": c, "alpha": alpha, "samples": samples, "delta": delta},
        st, {"pvalue_min": 0.01}, bool(ok),
        [MARGINALS_NOTE, f"faces are compared after dropping chords of extent <= {delta}"],
        {"A_top1": A[:, 0], "B_top1": Bm[:, 0]})


# local limit --------------------------------------------------------------------------------

def local_limit_error(n, u=1.0, alpha=2.0, c=1.0, j=0, density="tau", tail_from=60.0):
    """``sup_k |B_n P(S_m = k) - q(k / B_n)|`` with ``m = floor(u c B_n + j)`` and its reference maximum.

    ``tail_max`` is the larger of both sides over ``x >= tail_from * u``.
    """
    mu = _base_law(alpha)
    B = compute_Bn(mu, n).B_n
    law = mu_n_law(mu, min(1.0, c * B / n))
    m = int(math.floor(u * c * B + j))
    pmf = walk_distribution(law, m)
    k = np.arange(pmf.size) - m
    x = k / B
    p = ExponentParams(alpha, c)
    sel = x <= max(20.0, 40.0 * u)
    dens = density_tau if density == "tau" else density_q
    q = dens(u, x[sel], p)
    err = np.abs(B * pmf[sel] - q)
    i = int(np.argmax(err))
    far = np.flatnonzero(x >= tail_from * u)
    tail = 0.0
    if far.size:
        pick = far[np.linspace(0, far.size - 1, min(32, far.size)).astype(np.int64)]
        tail = float(max(np.max(B * pmf[pick]), np.max(np.abs(dens(u, x[pick], p)))))
    return {"sup_error": float(err[i]), "argmax_x": float(x[sel][i]), "max_q": float(q.max()),
            "steps": m, "B_n": B, "tail_max": tail}


def exp_local_limit(n=10**4, u=1.0, alpha=2.0, c=1.0, sweep=True):
    """Exact walk law against the density of ``tau_u`` on the lattice ``k / B_n``.

    ``S^(n)`` has centred steps, so it is compared with the density of
    ``tau_u`` (``density_tau``).  The uncentred ``density_q`` is reported too.
    """
    n = check_int(n, "n", minimum=10)
    base = local_limit_error(n, u, alpha, c, 0)
    st = {"j0": base, "uncentred_density": local_limit_error(n, u, alpha, c, 0, density="q")}
    if sweep:
        jj = int(math.floor(n ** 0.375))
        st["j_sweep"] = {str(j): local_limit_error(n, u, alpha, c, j)["sup_error"] for j in (-jj, jj)}
    threshold = 0.05 * base["max_q"]
    return ExperimentReport(
        "local_limit", 0, {"n": n, "u": u, "alpha": alpha, "c": c},
        st, {"sup_error": threshold}, base["sup_error"] <= threshold,
        ["exact convolution of the truncated mu_n law; density by Fourier inversion",
         "the j sweep moves the time index by j / B_n, a visible fraction of u at desk-scale n"])


# reduced tree law -----------------------------------------------------------------------

def sample_reduced_shape(p, smax, rng, size_cap=10**6):
    """Reduced tree of a Poisson(1)-GW tree marked with probability ``p``.

    The host is generated in depth-first order and abandoned as soon as it
    has more than ``smax`` marked vertices.  Returns the reduced parent list
    or ``None``.
    """
    mark_draws = rng.random(4096)
    kids = rng.poisson(1.0, 4096)
    pos = 0
    parents = [-1]
    stack = []  # (remaining children, index of nearest marked vertex at or above)
    first = int(kids[0])
    pos = 1
    if first:
        stack.append([first, 0])
    seen = 1
    while stack:
        top = stack[-1]
        top[0] -= 1
        anc = top[1]
        if top[0] == 0:
            stack.pop()
        if pos >= kids.size:
            kids = rng.poisson(1.0, 4096)
            mark_draws = rng.random(4096)
            pos = 0
        marked = mark_draws[pos] < p
        nk = int(kids[pos])
        pos += 1
        seen += 1
        if seen > size_cap:
            return None
        if marked:
            parents.append(anc)
            if len(parents) > smax:
                return None
            here = len(parents) - 1
        else:
            here = anc
        if nk:
            stack.append([nk, here])
    return parents


def exp_reduced_tree_law(n=50, c=1.0, sizes=(1, 2, 3, 4), hosts=10**5, seed=0):
    """Shapes of reduced Poisson(1)-GW trees against the mu_n-GW law on each size."""
    n = check_int(n, "n", minimum=2)
    rng = stream(seed, "reduced-tree-law")
    mu = builtin_distribution("poisson1")
    B = compute_Bn(mu, n).B_n
    p = min(1.0, c * B / n)
    law = mu_n_law(mu, p)
    smax = max(sizes)
    counts = {s: {} for s in sizes}
    for _ in range(int(hosts)):
        par = sample_reduced_shape(p, smax, rng)
        if par is None or len(par) not in counts:
            continue
        key = tuple(par)
        counts[len(par)][key] = counts[len(par)].get(key, 0) + 1
    st = {"p_n": p}
    ok = True
    for s in sizes:
        shapes = list(enumerate_plane_trees(s))
        probs = np.array([gw_tree_probability(law, t) for t in shapes])
        probs /= probs.sum()
        obs = np.array([counts[s].get(tuple(t.parents.tolist()), 0) for t in shapes], dtype=float)
        total = obs.sum()
        entry = {"accepted": int(total), "shapes": len(shapes),
                 "expected_freq": probs.tolist(),
                 "observed_freq": (obs / total).tolist() if total else []}
        if len(shapes) > 1 and total > 0:
            chi = stats.chisquare(obs, probs * total)
            entry.update({"chi2": float(chi.statistic), "pvalue": float(chi.pvalue)})
            ok &= chi.pvalue >= 0.01
        elif total > 0:
            entry["pvalue"] = 1.0
        st[f"size{s}"] = entry
    return ExperimentReport(
        "reduced_tree_law", int(seed), {"n": n, "c": c, "sizes": list(sizes), "hosts": int(hosts)},
        st, {"pvalue_min": 0.01}, bool(ok),
        ["host trees are unconditioned Poisson(1)-GW; shapes conditioned on the number of marks"])


# lukasiewicz against contour -------------------------------------------------------------

def exp_luka_vs_contour(n=2000, samples=50, resolution=1e-2, height_exponent=0.75, seed=0):
    """Hausdorff distance between the contour and Lukasiewicz laminations of the same tree."""
    n = check_int(n, "n", minimum=1)
    rng = stream(seed, "luka-vs-contour")
    mu = builtin_distribution("poisson1")
    cap = n ** height_exponent
    dists, bounds = [], []
    skipped = 0
    for _ in range(samples):
        tree = sample_conditioned_gw(mu, n, _int_seed(rng)) if n > 1 else PlaneTree.single()
        h = tree.height()
        if h > cap:
            skipped += 1
            continue
        d = hausdorff_distance(lamination_from_tree_contour(tree),
                               lamination_from_path(lukasiewicz_path(tree)), resolution)
        dists.append(d)
        bounds.append(2 * math.pi * (h + 2) / n + 2 * resolution)
    dists, bounds = np.asarray(dists), np.asarray(bounds)
    ok = bool(np.all(dists <= bounds))
    return ExperimentReport(
        "luka_vs_contour", int(seed), {"n": n, "samples": samples, "resolution": resolution},
        {"max_distance": float(dists.max()) if dists.size else 0.0,
         "max_ratio": float(np.max(dists / bounds)) if dists.size else 0.0,
         "skipped_tall": skipped},
        {"bound": "2 pi (H + 2) / n + 2 resolution"}, ok, [],
        {"distance": dists, "bound": bounds})


# partition process ----------------------------------------------------------------------

def _largest_block(f, k):
    sigma = product(type(f)(f.n, f.transpositions[:k]))
    return block_sizes(sigma)[0] / f.n


def exp_partition_process(ns=(500, 4000), c=1.0, samples=200, ks_n=2000, ks_samples=2000,
                          resolution=1e-2, seed=0):
    """Partition laminations near the start and near the end of a uniform factorization."""
    rng = stream(seed, "partition-process")
    st = {"forward_q95": {}, "backward_q95": {}}
    for n in ns:
        k = int(math.floor(c * math.sqrt(n)))
        fw, bw = [], []
        for _ in range(samples):
            f = sample_uniform_factorization(n, _int_seed(rng))
            fw.append(hausdorff_distance(prefix_lamination(f, k), partition_process(f, k), resolution))
            bw.append(hausdorff_distance(prefix_lamination(f, k, suffix=True),
                                         partition_process(f, n - k), resolution))
        st["forward_q95"][str(n)] = float(np.quantile(fw, 0.95))
        st["backward_q95"][str(n)] = float(np.quantile(bw, 0.95))
    fq = [st["forward_q95"][str(n)] for n in ns]
    bq = [st["backward_q95"][str(n)] for n in ns]
    dec = all(x > y for x, y in zip(fq, fq[1:])) and all(x > y for x, y in zip(bq, bq[1:]))
    k = int(math.floor(c * math.sqrt(ks_n)))
    blocks, faces = np.empty(ks_samples), np.empty(ks_samples)
    for i in range(ks_samples):
        f = sample_uniform_factorization(ks_n, _int_seed(rng))
        blocks[i] = _largest_block(f, ks_n - k)
        faces[i] = _largest_face(prefix_lamination(f, k))
    st["largest_block_vs_face"] = _ks(blocks, faces)
    ok = dec and st["largest_block_vs_face"]["pvalue"] >= 0.01
    return ExperimentReport(
        "partition_process", int(seed),
        {"ns": list(ns), "c": c, "samples": samples, "ks_n": ks_n, "ks_samples": ks_samples},
        st, {"monotone_decrease": True, "pvalue_min": 0.01}, bool(ok),
        [MARGINALS_NOTE, "the late phase uses n - floor(c sqrt n) transpositions",
         "block mass is block size over n"])


SUITES = {
    "mass_identity": exp_mass_identity,
    "factorization_vs_fragmentation": exp_factorization_vs_fragmentation,
    "levy_marginal": exp_levy_marginal,
    "local_limit": exp_local_limit,
    "reduced_tree_law": exp_reduced_tree_law,
    "luka_vs_contour": exp_luka_vs_contour,
    "partition_process": exp_partition_process,
}
