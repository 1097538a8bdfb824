"""Critical offspring laws in a stable domain of attraction and exact samplers
for Galton-Watson trees conditioned on their number of vertices.

Two built-in families are provided:

* ``poisson1``: Poisson(1), variance 1, attracted to the Gaussian (alpha = 2);
* ``stable(alpha)``: the law with generating function
  ``F(s) = s + (1 - s)**alpha / alpha``, which has ``mu_1 = 0`` and an exact
  power tail ``F(1 - s) - (1 - s) = s**alpha / alpha``.

Conditioned trees are produced through the cycle lemma: draw ``n`` i.i.d.
offspring counts conditioned on summing to ``n - 1`` and rotate the sequence so
that its Lukasiewicz walk is an excursion.
"""

from dataclasses import dataclass
import json
import math
import re

import numpy as np
from scipy import optimize, special

from ._random import stream
from ._validation import ValidationError, check_int, check_real
from .plane_tree import PlaneTree

DEFAULT_TRUNCATION = 2 ** 20


class OffspringDistribution:
    """Probability weights on ``0, 1, 2, ...`` with stable-tail metadata.

    Parameters
    ----------
    weights : array of nonnegative floats summing to 1.
    alpha : stability index in (1, 2].
    L : the slowly varying factor in ``E[X^2; X <= x] ~ x^(2-alpha) L(x)``,
        either a positive constant or a callable.
    gf : optional closed-form generating function (accepts complex input).
    """

    def __init__(self, weights, alpha, L=1.0, name="custom", gf=None, truncation=None,
                 params=None):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("weights must be a nonempty 1-d array")
        if np.any(w < 0):
            raise ValidationError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValidationError(f"weights sum to {w.sum()!r}, expected 1")
        self.alpha = check_real(alpha, "alpha", minimum=1.0, maximum=2.0, strict_min=True)
        if not callable(L):
            L = check_real(L, "L", minimum=0.0, strict_min=True)
        self.weights = w
        self.weights.setflags(write=False)
        self.L = L
        self.name = name
        self.truncation = truncation
        self.params = dict(params or {})
        self._gf = gf
        self._cdf = None
        self._pmf_cache = {}

    def __repr__(self):
        return f"OffspringDistribution(name={self.name!r}, alpha={self.alpha}, support={self.weights.size})"

    @property
    def mean(self):
        return float(np.dot(np.arange(self.weights.size), self.weights))

    @property
    def variance(self):
        k = np.arange(self.weights.size)
        return float(np.dot(k * k, self.weights) - self.mean ** 2)

    def slowly_varying(self, x):
        return self.L(x) if callable(self.L) else self.L

    def generating_function(self, s):
        """``F(s) = sum_k mu_k s^k``; closed form when available."""
        if self._gf is not None:
            return self._gf(s)
        return np.polynomial.polynomial.polyval(s, self.weights)

    @property
    def has_closed_form(self):
        return self._gf is not None

    def to_json(self):
        return json.dumps({"name": self.name, "alpha": self.alpha, "truncation": self.truncation})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        name = data["name"]
        if name == "poisson1":
            return builtin_distribution("poisson1")
        if name.startswith("stable"):
            return builtin_distribution("stable", alpha=data["alpha"],
                                        truncation=data.get("truncation") or DEFAULT_TRUNCATION)
        raise ValidationError(f"cannot rebuild distribution {name!r} from JSON")

    # sampling helpers ---------------------------------------------------
    def sample(self, size, rng):
        """Draw i.i.d. offspring counts by inversion of the cumulative weights."""
        if self._cdf is None:
            self._cdf = np.cumsum(self.weights)
        u = rng.random(size) * self._cdf[-1]
        return np.minimum(np.searchsorted(self._cdf, u, side="right"), self.weights.size - 1)

    def sum_pmf(self, m, smax):
        """Law of the sum of ``m`` i.i.d. draws, restricted to ``0..smax``."""
        key = (m, smax)
        if key not in self._pmf_cache:
            self._pmf_cache[key] = _power_pmf(self.weights[:smax + 1], m, smax)
        return self._pmf_cache[key]


def _convolve_trunc(a, b, smax):
    size = min(a.size + b.size - 1, smax + 1)
    nfft = 1 << int(math.ceil(math.log2(max(a.size + b.size - 1, 2))))
    if a.size * b.size < 4096:
        out = np.convolve(a, b)[:size]
    else:
        out = np.fft.irfft(np.fft.rfft(a, nfft) * np.fft.rfft(b, nfft), nfft)[:size]
    return np.clip(out, 0.0, None)


def _power_pmf(w, m, smax):
    result = np.ones(1)
    base = np.asarray(w, dtype=float)[:smax + 1]
    while m:
        if m & 1:
            result = _convolve_trunc(result, base, smax)
        m >>= 1
        if m:
            base = _convolve_trunc(base, base, smax)
    out = np.zeros(smax + 1)
    out[:result.size] = result
    return out


def _stable_weights(alpha, kmax):
    # coefficients of (1 - s)^alpha: a_k = a_{k-1} (k - 1 - alpha) / k
    k = np.arange(1, kmax + 1, dtype=float)
    a = np.empty(kmax + 1)
    a[0] = 1.0
    a[1:] = np.cumprod((k - 1.0 - alpha) / k)
    mu = a / alpha
    mu[0] = 1.0 / alpha
    mu[1] = 0.0
    return mu


def _close_tail(mu):
    """Put the missing mass on two buckets so total is 1 and mean is 1."""
    k = np.arange(mu.size, dtype=float)
    mass = 1.0 - math.fsum(mu)
    mean_gap = 1.0 - math.fsum(k * mu)
    x = mean_gap / mass if mass > 0.0 else -1.0
    lo = int(math.floor(x))
    if mass <= 0.0 or mean_gap <= 0.0 or lo < mu.size:
        # rounding-level tail: renormalize, then trade mass between 0 and the heaviest bucket j >= 2
        out = mu / math.fsum(mu)
        j = 2 + int(np.argmax(out[2:]))
        shift = (1.0 - math.fsum(k * out)) / j
        out[j] += shift
        out[0] -= shift
        if out[-1] < 0 or out[0] < 0 or abs(shift) > 1e-9:
            raise ValidationError("truncation too small to re-center the mean")
        return out
    frac = x - lo
    out = np.zeros(lo + 2)
    out[:mu.size] = mu
    out[lo] += mass * (1.0 - frac)
    out[lo + 1] += mass * frac
    return out


def builtin_distribution(name, alpha=None, truncation=DEFAULT_TRUNCATION):
    """Return ``poisson1`` or ``stable(alpha)``; ``"stable(1.5)"`` is also accepted."""
    m = re.fullmatch(r"\s*stable\s*\(\s*([0-9.eE+-]+)\s*\)\s*", name)
    if m:
        name, alpha = "stable", float(m.group(1))
    if name == "poisson1":
        kmax = 40  # mass beyond 40 is below 1e-48
        k = np.arange(kmax + 1)
        w = np.exp(-1.0 - special.gammaln(k + 1))
        w[-1] += 1.0 - math.fsum(w)
        return OffspringDistribution(w, 2.0, L=1.0, name="poisson1",
                                     gf=lambda s: np.exp(np.asarray(s) - 1.0))
    if name == "stable":
        if alpha is None:
            raise ValidationError("stable family needs alpha")
        alpha = check_real(alpha, "alpha", minimum=1.0, maximum=2.0, strict_min=True, strict_max=True)
        kmax = check_int(truncation, "truncation", minimum=16)
        w = _close_tail(_stable_weights(alpha, kmax))
        L = (alpha - 1.0) / math.gamma(3.0 - alpha)

        def gf(s, a=alpha):
            s = np.asarray(s)
            return s + (1.0 - s) ** a / a

        return OffspringDistribution(w, alpha, L=L, name=f"stable({alpha:g})", gf=gf,
                                     truncation=kmax, params={"alpha": alpha})
    raise ValidationError(f"unknown distribution {name!r}")


# scaling -------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingConstant:
    n: int
    B_n: float
    residual: float = 0.0


def _kappa(alpha):
    return alpha * (alpha - 1.0) / math.gamma(3.0 - alpha)


def compute_Bn(d, n, L=None):
    """Solve ``n L(B) / B^alpha = alpha (alpha - 1) / Gamma(3 - alpha)`` for ``B``.

    ``L`` overrides the distribution's own slowly varying factor.
    """
    n = check_int(n, "n", minimum=1)
    alpha = d.alpha
    L = d.L if L is None else L
    kappa = _kappa(alpha)
    if not callable(L):
        B = (n * L / kappa) ** (1.0 / alpha)
    else:
        def g(logb):
            b = math.exp(logb)
            return math.log(n * L(b)) - alpha * logb - math.log(kappa)

        lo, hi = -50.0, 50.0
        try:
            B = math.exp(optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500))
        except ValueError as exc:
            raise ValidationError(f"scaling equation has no root for n={n}: {exc}") from None
    Lb = L(B) if callable(L) else L
    residual = abs(n * Lb / B ** alpha - kappa) / kappa
    if residual > 1e-9:
        raise ValidationError(f"scaling solve did not converge (relative residual {residual:.3g})")
    return ScalingConstant(n, B, residual)


def stable_density_at_zero(alpha):
    """Density at 0 of the limit law with ``E[exp(-l X)] = exp(l^alpha)``."""
    return math.gamma(1.0 + 1.0 / alpha) * math.cos(math.pi * (1.0 - alpha / 2.0) / alpha) / math.pi


def size_probability_asymptotic(d, n):
    """Leading-order ``P(|T| = n) ~ p(0) / (n B_n)`` from the local limit theorem."""
    return stable_density_at_zero(d.alpha) / (n * compute_Bn(d, n).B_n)


def estimate_size_probability(d, n, trials, seed):
    """Monte Carlo ``P(|T| = n) = P(S_n = -1) / n`` from unconditioned walks.

    This is the acceptance rate of the plain rejection sampler divided by n.
    For Poisson(1) the walk total is drawn directly as Poisson(n) - n.
    """
    rng = stream(seed, "size-probability")
    n = check_int(n, "n", minimum=1)
    trials = check_int(trials, "trials", minimum=1)
    if d.name == "poisson1":
        hits = np.count_nonzero(rng.poisson(n, size=trials) == n - 1)
    else:
        hits = 0
        chunk = max(1, min(trials, 2 ** 22 // n))
        done = 0
        while done < trials:
            k = min(chunk, trials - done)
            hits += np.count_nonzero(d.sample((k, n), rng).sum(axis=1) == n - 1)
            done += k
    return hits / trials / n


# conditioned sampling -----------------------------------------------------------

def _reachable(d, n):
    """Can n i.i.d. offspring counts sum to n - 1?"""
    if n == 1:
        return d.weights[0] > 0
    if d.weights[0] <= 0:
        return False
    target = n - 1
    pos = np.flatnonzero(d.weights[1:target + 1] > 0) + 1
    if pos.size == 0:
        return False
    if pos[0] == 1:
        return True
    # zeros pad the count, so only the additive monoid of the positive support matters
    mask = (1 << (target + 1)) - 1
    reach = 1
    for s in pos.tolist():
        shift = s
        while shift <= target:
            reach |= (reach << shift) & mask
            shift *= 2
        if (reach >> target) & 1:
            return True
    return bool((reach >> target) & 1)


def cycle_lemma_rotation(counts):
    """Rotate offspring counts summing to ``n - 1`` into a Lukasiewicz excursion.

    The rotation starts right after the first index where the partial sums of
    ``counts - 1`` reach their minimum.  Works row-wise on 2-d input.
    """
    c = np.asarray(counts)
    one = c.ndim == 1
    c2 = np.atleast_2d(c)
    n = c2.shape[1]
    walk = np.cumsum(c2 - 1, axis=1)
    if np.any(walk[:, -1] != -1):
        raise ValidationError("counts must sum to n - 1")
    start = (np.argmin(walk, axis=1) + 1) % n
    idx = (start[:, None] + np.arange(n)[None, :]) % n
    out = np.take_along_axis(c2, idx, axis=1)
    return out[0] if one else out


def _conditioned_counts(d, n, rng):
    """n i.i.d. offspring counts conditioned to sum to n - 1 (exact)."""
    total = n - 1
    if d.name == "poisson1":
        # i.i.d. Poisson given their sum is multinomial with equal cells
        return rng.multinomial(total, np.full(n, 1.0 / n))
    out = np.zeros(n, dtype=np.int64)
    # split blocks in halves; the sum of the left half has law p_{m1}(x) p_{m2}(s - x)
    stack = [(0, n, total)]
    while stack:
        lo, m, s = stack.pop()
        if m == 1:
            out[lo] = s
            continue
        if s == 0:
            continue
        m1 = m // 2
        m2 = m - m1
        p1 = d.sum_pmf(m1, total)[:s + 1]
        p2 = d.sum_pmf(m2, total)[s::-1]
        w = p1 * p2
        tot = w.sum()
        if not tot > 0:
            raise ValidationError("conditioning event has zero probability")
        cdf = np.cumsum(w)
        x = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
        x = min(x, s)
        stack.append((lo, m1, x))
        stack.append((lo + m1, m2, s - x))
    return out


def sample_degree_sequences(d, n, size, seed):
    """``size`` preorder degree sequences of conditioned trees, as an array ``(size, n)``."""
    n = check_int(n, "n", minimum=1)
    size = check_int(size, "size", minimum=0)
    rng = stream(seed, "conditioned-gw")
    if not _reachable(d, n):
        raise ValidationError(f"trees with {n} vertices have probability zero under {d.name}")
    if n == 1:
        return np.zeros((size, 1), dtype=np.int64)
    if d.name == "poisson1":
        counts = rng.multinomial(n - 1, np.full(n, 1.0 / n), size=size)
        return cycle_lemma_rotation(counts).reshape(size, n)
    if n <= 24:
        rows = []
        have = 0
        while have < size:
            batch = d.sample((max(4 * (size - have), 1024), n), rng)
            ok = batch[batch.sum(axis=1) == n - 1]
            rows.append(ok)
            have += ok.shape[0]
        counts = np.concatenate(rows)[:size]
        return cycle_lemma_rotation(counts).reshape(size, n)
    out = np.empty((size, n), dtype=np.int64)
    for i in range(size):
        out[i] = cycle_lemma_rotation(_conditioned_counts(d, n, rng))
    return out


def sample_conditioned_gw(d, n, seed):
    """A Galton-Watson tree with offspring law ``d`` conditioned to have ``n`` vertices."""
    n = check_int(n, "n", minimum=1)
    if n == 1:
        return PlaneTree.single()
    rng = stream(seed, "conditioned-gw")
    if not _reachable(d, n):
        raise ValidationError(f"trees with {n} vertices have probability zero under {d.name}")
    counts = _conditioned_counts(d, n, rng)
    return PlaneTree.from_degrees(cycle_lemma_rotation(counts))


def gw_tree_probability(d, tree):
    """Unconditioned probability ``prod_v mu_{k_v}`` of a given plane tree."""
    deg = tree.degrees()
    w = d.weights
    if deg.max() >= w.size:
        return 0.0
    return float(np.prod(w[deg]))
