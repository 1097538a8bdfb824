"""The Levy process tau^(alpha,c) and its discrete approximations.

``tau_s = inf{t : Y_t - c^(1/alpha) t < -c^(1 + 1/alpha) s} - c s`` where ``Y``
is the spectrally positive stable process with ``E[exp(-l Y_s)] = exp(s l^alpha)``.

Complex powers use the principal branch (cut along the negative reals).
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import optimize, special, stats

from ._random import stream
from ._validation import ValidationError, check_choice, check_int, check_real
from .gw_sampler import OffspringDistribution, _power_pmf, builtin_distribution, compute_Bn
from .plane_tree import LatticePath, PlaneTree


@dataclass(frozen=True)
class ExponentParams:
    alpha: float
    c: float = 1.0

    def __post_init__(self):
        check_real(self.alpha, "alpha", minimum=1.0, maximum=2.0, strict_min=True)
        check_real(self.c, "c", minimum=0.0, strict_min=True)


# exponents ---------------------------------------------------------------------

def phibar_quadratic(lam, c):
    """Closed form of the Laplace exponent root for alpha = 2."""
    lam = np.asarray(lam, dtype=float)
    return (-c + np.sqrt(c * c + 4.0 * lam * c)) / 2.0


def laplace_exponent_phibar(lam, p):
    """Nonnegative root ``X`` of ``X^alpha + c X - c lam = 0`` (vectorized in ``lam``).

    Newton iteration from the upper bound ``min(lam, (c lam)^(1/alpha))``; the
    function is convex and increasing on ``[0, inf)`` so the iterates decrease
    monotonically to the root.
    """
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr < 0):
        raise ValidationError("lam must be nonnegative")
    a, c = p.alpha, p.c
    x = np.minimum(lam_arr, (c * lam_arr) ** (1.0 / a))
    for _ in range(200):
        g = x ** a + c * x - c * lam_arr
        dg = a * np.where(x > 0, x, 0.0) ** (a - 1.0) + c
        step = g / dg
        new = np.maximum(x - step, 0.0)
        if np.all(new >= x):
            break
        x = np.minimum(new, x)
    return float(x) if np.ndim(lam) == 0 else x


def _psi_residual(z, t, a, c):
    return z ** a + c * z + 1j * t * c


def _psi_newton(z, t, a, c, iters=60):
    z = np.array(z, dtype=complex)
    for _ in range(iters):
        f = _psi_residual(z, t, a, c)
        df = a * z ** (a - 1.0) + c
        dz = f / df
        z = z - dz
        if np.all(np.abs(dz) <= 1e-15 * np.maximum(np.abs(z), 1e-300)):
            break
    return z


def _psi_scalar_continuation(t_target, a, c, start=1e6, per_decade=40):
    """Follow the root with Re >= 0 from |t| = start down (or up) to ``t_target > 0``."""
    t0 = max(start, t_target)
    z = complex((-1j * t0 * c) ** (1.0 / a))
    z = complex(_psi_newton(z, t0, a, c))
    t = t0
    ratio = 10.0 ** (-1.0 / per_decade)
    while t > t_target:
        step = ratio
        while True:
            t_next = max(t * step, t_target)
            z_next = complex(_psi_newton(z, t_next, a, c))
            ok = (abs(_psi_residual(z_next, t_next, a, c)) <= 1e-9 * max(1.0, t_next * c)
                  and z_next.real >= -1e-12 and abs(z_next - z) <= 0.5 * abs(z) + 1e-12)
            if ok:
                break
            step = math.sqrt(step)  # halve the log-step
            if step > 1 - 1e-12:
                raise ValidationError("continuation for psibar stalled")
        t, z = t_next, z_next
    return z


def _psi_path(a, c, t_min, t_max, per_decade=40):
    """Reference solutions on a log grid from ``t_max`` down to ``t_min``."""
    top = max(1e6, 2.0 * t_max)
    n = int(math.ceil(math.log10(top / t_min) * per_decade)) + 1
    ts = np.geomspace(top, t_min, n)
    zs = np.empty(n, dtype=complex)
    z = complex(_psi_newton((-1j * top * c) ** (1.0 / a), top, a, c))
    zs[0] = z
    for i in range(1, n):
        z_new = complex(_psi_newton(z, ts[i], a, c))
        if not (z_new.real >= -1e-12 and abs(z_new - z) <= 0.5 * abs(z) + 1e-12):
            z_new = _psi_scalar_continuation(ts[i], a, c, start=ts[i - 1])
        zs[i] = z = z_new
    return ts[::-1], zs[::-1]


def char_exponent_psibar(t, p):
    """Root ``z`` of ``z^alpha + c z + i t c = 0`` with ``Re z >= 0`` (vectorized in ``t``).

    Reference roots are tracked from ``|t| = 1e6`` (where ``(-itc)^(1/alpha)``
    is an accurate start) down a logarithmic grid.  Each requested point is
    then polished by Newton from the interpolated reference.  Negative ``t``
    uses ``psi(-t) = conj(psi(t))``.
    """
    a, c = p.alpha, p.c
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t_arr.shape, dtype=complex)
    mag = np.abs(t_arr)
    nz = mag > 0
    if a == 2.0:
        root = (-c + np.sqrt(c * c - 4j * mag[nz] * c)) / 2.0
        out[nz] = _psi_newton(root, mag[nz], a, c, iters=3)
    elif np.any(nz):
        tm = mag[nz]
        ts, zs = _psi_path(a, c, max(tm.min(), 1e-12) * 0.5, tm.max())
        lt = np.log(ts)
        seed = (np.interp(np.log(tm), lt, zs.real) + 1j * np.interp(np.log(tm), lt, zs.imag))
        z = _psi_newton(seed, tm, a, c)
        res = np.abs(_psi_residual(z, tm, a, c))
        bad = (~np.isfinite(res)) | (z.real < -1e-12) | (np.abs(z - seed) > 0.25 * np.abs(seed) + 1e-12)
        for i in np.flatnonzero(bad):
            z[i] = _psi_scalar_continuation(tm[i], a, c)
        out[nz] = z
    out = np.where(t_arr < 0, np.conj(out), out)
    return complex(out[0]) if np.ndim(t) == 0 else out


def psibar_residual(t, p):
    z = char_exponent_psibar(t, p)
    return np.abs(_psi_residual(z, np.asarray(t, dtype=float), p.alpha, p.c))


def _winding(func, path_points):
    vals = func(path_points)
    ang = np.unwrap(np.angle(vals))
    return (ang[-1] - ang[0]) / (2 * np.pi)


def count_psi_roots(t, p, side="right", points=64):
    """Roots of ``z^alpha + c z + i t c`` in the right (or slit left) half-disk.

    Counted with the argument principle along the boundary of a half-disk
    large enough to contain every root.  The boundary starts with ``points``
    samples per piece and is refined until no step turns by more than pi/4.
    """
    check_choice(side, "side", {"right", "left"})
    a, c = p.alpha, p.c
    t = float(t)
    R = 2.0 * max((2.0 * c) ** (1.0 / (a - 1.0)), (2.0 * abs(t) * c + 1.0) ** (1.0 / a), 1.0)

    def g(z):
        return z ** a + c * z + 1j * t * c

    def refine(pts):
        for _ in range(30):
            vals = g(pts)
            turn = np.abs(np.angle(vals[1:] / vals[:-1]))
            if turn.max() <= np.pi / 4:
                break
            mids = (pts[1:] + pts[:-1]) / 2
            bad = turn > np.pi / 4
            new = np.empty(pts.size + bad.sum(), dtype=complex)
            j = 0
            for k in range(pts.size - 1):
                new[j] = pts[k]
                j += 1
                if bad[k]:
                    new[j] = mids[k]
                    j += 1
            new[j] = pts[-1]
            pts = new
        return pts

    if side == "right":
        seg = 1j * np.linspace(-R, R, points)
        arc = R * np.exp(1j * np.linspace(np.pi / 2, -np.pi / 2, points))
        pieces = [seg, arc]
    else:
        # the slit left half-disk splits into two quarter-disks bounded by the cut
        eps = 1e-13
        upper = np.concatenate([
            np.linspace(1j * R, 1j * eps, points),
            np.linspace(1j * eps, -R + 1j * eps, points),
            R * np.exp(1j * np.linspace(np.pi - 1e-12, np.pi / 2, points)),
        ])
        lower = np.concatenate([
            np.linspace(-1j * eps, -1j * R, points),
            R * np.exp(1j * np.linspace(-np.pi / 2, -np.pi + 1e-12, points)),
            np.linspace(-R - 1j * eps, -1j * eps, points),
        ])
        total = 0.0
        for loop in (upper, lower):
            pts = refine(loop)
            total += _winding(g, pts)
        return int(round(-total))
    loop = np.concatenate(pieces)
    pts = refine(loop)
    return int(round(-_winding(g, pts)))


# density by Fourier inversion ---------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _truncation_point(u, p, cutoff=40.0):
    a, c = p.alpha, p.c
    guess = (cutoff / (u * c * math.cos(math.pi / (2 * a)))) ** a / c
    t = max(guess, 1.0)
    for _ in range(200):
        if u * c * char_exponent_psibar(t, p).real > cutoff:
            break
        t *= 1.5
    lo, hi = t / 1.5, t
    for _ in range(60):
        mid = math.sqrt(lo * hi)
        if u * c * char_exponent_psibar(mid, p).real > cutoff:
            hi = mid
        else:
            lo = mid
    return hi


def _quadrature_nodes(T, xmax, refine=1):
    # a 16-point panel comfortably resolves three periods of cos(t x)
    h = min(4.0, 6.0 * math.pi / (xmax + 1.0)) / refine
    edges = np.arange(0.0, T + h, h)
    edges[-1] = T
    left, right = edges[:-1], edges[1:]
    mid = (left + right) / 2
    half = (right - left) / 2
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return t, w


@dataclass
class DensityResult:
    x: np.ndarray
    q: np.ndarray
    error: float
    cutoff_t: float


def density_q(u, x, p, full=False):
    """Density of ``tau_u`` at ``x``: ``(1/2pi) int exp(-itx) exp(-u c psibar(t)) dt``.

    The integral is cut where ``u c Re psibar(t) > 40`` and evaluated with
    16-point Gauss-Legendre panels.  The error estimate compares against a
    run with panels twice as wide.  With ``full=True`` a :class:`DensityResult`
    is returned.
    """
    u = check_real(u, "u", minimum=0.0, strict_min=True)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    T = _truncation_point(u, p)
    xmax = float(np.max(np.abs(xs))) if xs.size else 0.0

    def integrate(refine):
        t, w = _quadrature_nodes(T, xmax, refine)
        f = np.exp(-u * p.c * char_exponent_psibar(t, p))
        wr, wi = w * f.real, w * f.imag
        q = np.empty(xs.size)
        rows = max(1, 4_000_000 // t.size)
        for start in range(0, xs.size, rows):
            tx = np.outer(xs[start:start + rows], t)
            q[start:start + rows] = (np.cos(tx) @ wr + np.sin(tx) @ wi) / np.pi
        return q

    q = integrate(2)
    q_coarse = integrate(1)
    err = float(np.max(np.abs(q - q_coarse))) if q.size else 0.0
    if full:
        return DensityResult(xs, q, err, T)
    return float(q[0]) if np.ndim(x) == 0 else q


def density_tau(u, x, p, full=False):
    """Density of ``tau_u`` itself.

    ``exp(-u c psibar(t))`` is the characteristic function of ``tau_u + u c``
    (the drift term ``itc`` of the exponent is left out), so the centred
    density is ``density_q`` shifted by ``u c``.
    """
    xs = np.asarray(x, dtype=float) + u * p.c
    return density_q(u, xs, p, full=full)


# the law mu_n ---------------------------------------------------------------------------

def _series_mul(a, b, K):
    if min(a.size, b.size) < 64:
        return np.convolve(a, b)[:K]
    m = a.size + b.size - 1
    nfft = 1 << (m - 1).bit_length()
    return np.fft.irfft(np.fft.rfft(a, nfft) * np.fft.rfft(b, nfft), nfft)[:K]


def _series_exp(a, K):
    """exp of a power series (first K coefficients)."""
    a = np.pad(a[:K], (0, max(0, K - a.size)))
    b = np.zeros(K)
    b[0] = math.exp(a[0])
    ja = np.arange(K) * a
    for k in range(1, K):
        b[k] = np.dot(ja[1:k + 1], b[k - 1::-1]) / k
    return b


def _series_pow(a, e, K):
    """a**e for a series with a[0] > 0."""
    a = np.pad(a[:K], (0, max(0, K - a.size)))
    b = np.zeros(K)
    b[0] = a[0] ** e
    j = np.arange(K, dtype=float)
    for k in range(1, K):
        coef = (e + 1.0) * j[1:k + 1] - k
        b[k] = np.dot(coef * a[1:k + 1], b[k - 1::-1]) / (k * a[0])
    return b


def _series_div(a, b, K):
    a = np.pad(a[:K], (0, max(0, K - a.size)))
    b = np.pad(b[:K], (0, max(0, K - b.size)))
    c = np.zeros(K)
    for k in range(K):
        c[k] = (a[k] - np.dot(b[1:k + 1], c[k - 1::-1] if k else c[:0])) / b[0]
    return c


def _gf_series(mu, y, K):
    """``(F(y), F'(y))`` as series, for the built-in families or a finite law."""
    if mu.name == "poisson1":
        shifted = y.copy()
        shifted[0] -= 1.0
        F = _series_exp(shifted, K)
        return F, F
    if mu.name.startswith("stable"):
        a = mu.alpha
        one_minus = -y.copy()
        one_minus[0] += 1.0
        P = _series_pow(one_minus, a, K)
        Pm = _series_pow(one_minus, a - 1.0, K)
        F = np.pad(y, (0, K - y.size))[:K] + P / a
        dF = -Pm
        dF[0] += 1.0
        return F, dF
    w = mu.weights
    if w.size > 256:
        raise ValidationError("series composition needs a closed form or a short support")
    # Horner in y for F and F'
    F = np.zeros(K)
    for k in range(w.size - 1, -1, -1):
        F = _series_mul(F, y, K)
        F[0] += w[k]
    dF = np.zeros(K)
    for k in range(w.size - 1, 0, -1):
        dF = _series_mul(dF, y, K)
        dF[0] += k * w[k]
    return F, dF


@dataclass
class MuNReport:
    law: OffspringDistribution
    p_n: float
    mean_before_closing: float
    tail_estimate: float
    iterations: int = 0
    extra: dict = field(default_factory=dict)


def mu_n_law(mu, p_n, k_max=4096, report=False):
    """Solve ``F_n(x) = F(p x + (1 - p) F_n(x))`` coefficientwise.

    Newton's method on power series doubles the number of exact
    coefficients per step.  The result is truncated at ``k_max`` and the
    missing tail is closed on two buckets so that the law has total mass 1
    and mean exactly 1.
    """
    p = check_real(p_n, "p_n", minimum=0.0, maximum=1.0, strict_min=True)
    K = check_int(k_max, "k_max", minimum=2)
    if mu.weights[0] + (mu.weights[1] if mu.weights.size > 1 else 0.0) >= 1.0:
        raise ValidationError("mu_0 + mu_1 must be below 1")
    if p == 1.0:
        out = mu
        rep = MuNReport(out, p, mu.mean, 0.0)
        return rep if report else out
    F0 = lambda s: float(np.real(mu.generating_function(s)))  # noqa: E731
    g0 = optimize.brentq(lambda g: F0((1.0 - p) * g) - g, 0.0, 1.0, xtol=1e-17, rtol=1e-15)
    G = np.array([g0])
    size = 1
    its = 0
    while True:
        size = min(2 * size, K)
        for _ in range(2 if size == K else 1):
            Gp = np.pad(G, (0, size - G.size))
            y = (1.0 - p) * Gp
            if size > 1:
                y[1] += p
            F, dF = _gf_series(mu, y, size)
            denom = -(1.0 - p) * dF
            denom[0] += 1.0
            G = Gp - _series_div(Gp - F, denom, size)
            its += 1
        if size == K:
            break
    if np.any(G < -1e-14):
        raise ValidationError(f"mu_n has negative coefficients (min {G.min():.3g}); fixed point stalled")
    G = np.clip(G, 0.0, None)
    mean_before = float(np.dot(np.arange(G.size), G))
    tail = float(G[-1])
    from .gw_sampler import _close_tail
    w = _close_tail(G)
    k = np.arange(w.size)
    var = float(np.dot(k * k, w) - 1.0)
    law = OffspringDistribution(w, 2.0, L=max(var, 1e-300), name=f"mu_n[{mu.name},p={p:.6g}]",
                                params={"p_n": p, "base": mu.name})
    if report:
        return MuNReport(law, p, mean_before, tail, its, {"mass_before_closing": float(G.sum())})
    return law


def poisson_mu_n_exact(p, jmax, kmax=None):
    """Reference ``mu_n`` for Poisson(1): a Borel(1 - p) mixture of Poisson(k p).

    The root and its unmarked descendants form a Poisson(1 - p) cluster of
    size ``k``; the marked children of the cluster are Poisson(k p).
    """
    if kmax is None:
        kmax = int(60.0 / max(p * p, 1e-6)) + 100
        kmax = min(kmax, 2_000_000)
    k = np.arange(1, kmax + 1, dtype=float)
    if p < 1:
        # unmarked cluster sizes are Borel(1 - p)
        logw = (k - 1) * np.log(k) + (k - 1) * math.log1p(-p) - (1 - p) * k - special.gammaln(k + 1)
    else:
        logw = np.where(k == 1, 0.0, -np.inf)
    j = np.arange(jmax + 1, dtype=float)
    logp = -k[:, None] * p + j[None, :] * np.log(k[:, None] * p) - special.gammaln(j + 1)[None, :]
    return np.exp(logw[:, None] + logp).sum(axis=0)


# reduced trees -------------------------------------------------------------------------

def reduced_tree(tree, marks):
    """Tree on the marked vertices; each one hangs from its nearest marked strict ancestor."""
    m = np.asarray(marks, dtype=bool)
    if m.shape != (tree.n,):
        raise ValidationError("one mark per vertex is required")
    if not m[0]:
        raise ValidationError("the root must be marked")
    par = tree.parents.tolist()
    ml = m.tolist()
    anc = [-1] * tree.n  # nearest marked strict ancestor
    for i in range(1, tree.n):
        q = par[i]
        anc[i] = q if ml[q] else anc[q]
    idx = np.flatnonzero(m)
    new = {int(v): k for k, v in enumerate(idx.tolist())}
    return PlaneTree([-1] + [new[anc[v]] for v in idx[1:].tolist()])


def mark_vertices(tree, p, seed):
    """Mark the root and every other vertex independently with probability ``p``."""
    rng = stream(seed, "vertex-marks")
    m = rng.random(tree.n) < p
    m[0] = True
    return m


# tau paths ---------------------------------------------------------------------------

def _stable_increments(alpha, dt, size, rng):
    """Increments of Y over ``dt`` with ``E[exp(-l Y_dt)] = exp(dt l^alpha)``."""
    if alpha == 2.0:
        return math.sqrt(2.0 * dt) * rng.standard_normal(size)
    sigma = abs(math.cos(math.pi * alpha / 2.0)) ** (1.0 / alpha)
    if stats.levy_stable.parameterization != "S1":
        raise ValidationError("expected scipy's S1 stable parameterization")
    x = stats.levy_stable.rvs(alpha, 1.0, loc=0.0, scale=sigma, size=size, random_state=rng)
    return dt ** (1.0 / alpha) * x


def sample_tau_marginal(p, s, size, seed):
    """Exact draws of ``tau_s`` for alpha = 2 (first passage of drifted Brownian motion).

    With ``Y = sqrt(2) B`` the passage time below ``-c^(3/2) s`` is inverse
    Gaussian with mean ``c s`` and shape ``c^3 s^2 / 2``.
    """
    if p.alpha != 2.0:
        raise ValidationError("exact marginals are available for alpha = 2 only")
    s = check_real(s, "s", minimum=0.0)
    rng = stream(seed, "tau-marginal")
    if s == 0:
        return np.zeros(size)
    c = p.c
    return rng.wald(c * s, c ** 3 * s * s / 2.0, size=size) - c * s


def sample_tau_path(p, mode="stable-skeleton", steps=100, seed=0, s_max=1.0, n=None, mu=None, dt=None):
    """``tau`` on the grid ``s_k = k s_max / steps``.

    ``stable-skeleton``: alpha = 2 uses exact inverse Gaussian increments of
    the passage-time subordinator; alpha < 2 simulates ``Y`` on a time grid of
    mesh ``dt`` and records first passages below the moving barrier.
    ``gw-walk``: the walk with steps ``mu_n(. + 1)``, ``p_n = c B_n / n``,
    read at times ``floor(c B_n s)`` and divided by ``B_n``.
    """
    check_choice(mode, "mode", {"stable-skeleton", "gw-walk"})
    steps = check_int(steps, "steps", minimum=1)
    s_max = check_real(s_max, "s_max", minimum=0.0, strict_min=True)
    rng = stream(seed, "tau-path")
    a, c = p.alpha, p.c
    grid = np.arange(steps + 1) * (s_max / steps)
    if mode == "stable-skeleton":
        if a == 2.0:
            h = s_max / steps
            inc = rng.wald(c * h, c ** 3 * h * h / 2.0, size=steps)
            T = np.concatenate([[0.0], np.cumsum(inc)])
        else:
            dt = dt or min(1e-4, s_max / steps / 10.0)
            levels = c ** (1.0 + 1.0 / a) * grid
            drift = c ** (1.0 / a)
            T = np.zeros(steps + 1)
            k = 1
            pos, t, run_min = 0.0, 0.0, 0.0
            chunk = 1 << 16
            while k <= steps:
                y = pos + np.cumsum(_stable_increments(a, dt, chunk, rng) - drift * dt)
                mins = np.minimum.accumulate(np.minimum(y, run_min))
                while k <= steps:
                    j = int(np.searchsorted(-mins, levels[k], side="right"))
                    if j >= chunk:
                        break
                    T[k] = t + (j + 1) * dt
                    k += 1
                pos, run_min = float(y[-1]), float(mins[-1])
                t += chunk * dt
        tau = T - c * grid
        return LatticePath(tau, s_max / steps, "step")
    if n is None:
        raise ValidationError("gw-walk mode needs n")
    mu = mu or (builtin_distribution("poisson1") if a == 2.0 else builtin_distribution("stable", alpha=a))
    B = compute_Bn(mu, n).B_n
    law = mu_n_law(mu, min(1.0, c * B / n))
    m = int(math.floor(c * B * s_max))
    walk = np.concatenate([[0], np.cumsum(law.sample(m, rng) - 1)])
    idx = np.floor(c * B * grid).astype(np.int64)
    return LatticePath(walk[np.minimum(idx, m)] / B, s_max / steps, "step")


def walk_distribution(law, m):
    """Exact law of ``S_m`` (sum of ``m`` steps ``X - 1``); index ``k + m`` holds ``P(S_m = k)``."""
    m = check_int(m, "m", minimum=0)
    smax = m * (law.weights.size - 1)
    pmf = _power_pmf(law.weights, m, smax) if m else np.ones(1)
    return pmf


# Vervaat transform ----------------------------------------------------------------------

def vervaat_shift(values):
    """Right-most index in ``0..m-1`` where the bridge attains its minimum."""
    v = np.asarray(values)
    body = v[:-1]
    return int(body.size - 1 - np.argmin(body[::-1]))


def vervaat_transform(path):
    """Cyclically shift a bridge at its right-most minimum and lift it to start at 0."""
    vals = np.asarray(getattr(path, "values", path))
    if vals.ndim != 1 or vals.size < 2:
        raise ValidationError("a bridge needs at least two samples")
    if vals[0] != 0 or vals[-1] != 0:
        raise ValidationError("a bridge starts and ends at 0")
    m = vals.size - 1
    k = vervaat_shift(vals)
    idx = (np.arange(m + 1) + k) % m
    out = vals[idx] - vals[k]
    if isinstance(path, LatticePath):
        return LatticePath(out, path.step, path.interpolation)
    return out


# generating-function estimate --------------------------------------------------------

def admissible_rays(radius, count=16, margin=0.05):
    """``count`` points of modulus ``radius`` with ``|1 + w| < 1``."""
    th = np.linspace(np.pi / 2 + margin, 3 * np.pi / 2 - margin, count)
    w = radius * np.exp(1j * th)
    return w[np.abs(1 + w) < 1]


def _integral_identity(weights, w):
    """Both sides of ``F(e^w) = 1 + w - w int (1 - e^{wx}) M_x dx`` on a finite law."""
    k = np.arange(weights.size)
    lhs = np.sum(weights * np.exp(w * k))
    tail = 1.0 - np.cumsum(weights)  # tail[k] = P(X >= k + 1)
    kk = k[:-1]
    factor = 1.0 - np.exp(w * kk) * (np.expm1(w) / w)
    integral = np.sum(tail[:-1] * factor)
    rhs = 1.0 + w - w * integral
    return lhs, rhs


def verify_generating_estimate(mu, omega_grid):
    """Compare ``F(1+w) - (1+w)`` with ``(-w)^alpha L_F(1/|w|)`` and check the tail-integral identity.

    ``L_F = L Gamma(3 - alpha) / (alpha (alpha - 1))`` is the variance-type
    slowly varying factor rescaled to generating-function normalization.
    """
    ws = np.atleast_1d(np.asarray(omega_grid, dtype=complex))
    if np.any(np.abs(1 + ws) >= 1):
        raise ValidationError("every grid point needs |1 + w| < 1")
    a = mu.alpha
    kappa = a * (a - 1.0) / math.gamma(3.0 - a)
    ratios, residuals = [], []
    for w in ws:
        Fv = complex(mu.generating_function(1.0 + w))
        Lf = mu.slowly_varying(1.0 / abs(w)) / kappa
        ratios.append((Fv - (1.0 + w)) / ((-w) ** a * Lf))
        lhs, rhs = _integral_identity(mu.weights, w)
        residuals.append(abs(lhs - rhs))
    ratios = np.asarray(ratios)
    return {
        "omega": ws,
        "ratio": ratios,
        "max_ratio_error": float(np.max(np.abs(ratios - 1.0))),
        "identity_residual": np.asarray(residuals),
        "max_identity_residual": float(np.max(residuals)),
        "closed_form": mu.has_closed_form,
    }
