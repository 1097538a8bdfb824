"""Command-line entry point: ``lamlab <command> [options]``.

Options may also come from a ``key=value`` file given with ``--config``;
flags on the command line win.  Exit codes: 0 success, 1 failed verdict
(``verify``), 2 bad configuration.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import json
import math
import os
import sys

import numpy as np

from ._validation import ValidationError
from . import experiments as ex
from .fragmentation import fragmentation_masses, sample_tree_cut_process
from .gw_sampler import builtin_distribution, compute_Bn, sample_conditioned_gw
from .lamination import Lamination, lamination_from_path, lamination_from_tree_contour
from .levy import ExponentParams, density_q, density_tau
from .minimal_factorization import (MinimalFactorization, partition_process, prefix_lamination,
                                    sample_uniform_factorization)
from .plane_tree import PlaneTree, lukasiewicz_path
from .render import RenderSpec, render_svg

STOCHASTIC = {"sample-tree", "sample-facto", "cut-process", "partition", "animate", "verify"}


class ConfigError(Exception):
    pass


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for num, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{num}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value.strip('"').strip("'")
    return out


def _add_common(p, *names):
    opts = {
        "seed": dict(type=int, help="random seed (u64)"),
        "alpha": dict(type=float, help="stability index in (1, 2]"),
        "c": dict(type=float, help="time parameter"),
        "n": dict(type=int, help="size"),
        "delta": dict(type=float, help="hide chords with extent at most delta"),
        "out": dict(help="output file (or directory for animate/verify)"),
        "format": dict(choices=["svg", "json", "csv", "txt"]),
    }
    for name in names:
        p.add_argument(f"--{name}", default=None, **opts[name])
    p.add_argument("--config", default=None, help="key=value file with defaults")
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--labels", action="store_true", default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="lamlab", description="Random laminations, trees and factorizations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-tree", help="conditioned Galton-Watson tree")
    _add_common(p, "seed", "alpha", "n", "out", "format")
    p.add_argument("--dist", default=None, help="poisson1 or stable")

    p = sub.add_parser("sample-facto", help="uniform minimal factorization of the n-cycle")
    _add_common(p, "seed", "n", "out", "format")

    p = sub.add_parser("cut-process", help="Poisson cuts on a tree")
    _add_common(p, "seed", "alpha", "c", "n", "delta", "out", "format")
    p.add_argument("--tree", default=None, help="tree JSON (otherwise one is sampled)")
    p.add_argument("--times", type=int, default=None, help="number of report times")

    p = sub.add_parser("lamination", help="lamination of a tree or of a factorization prefix")
    _add_common(p, "delta", "out", "format")
    p.add_argument("--tree", default=None)
    p.add_argument("--mode", choices=["contour", "lukasiewicz"], default=None)
    p.add_argument("--facto", default=None, help="factorization text file")
    p.add_argument("--k", type=int, default=None, help="number of transpositions")

    p = sub.add_parser("partition", help="noncrossing partition after k transpositions")
    _add_common(p, "seed", "n", "out", "format")
    p.add_argument("--facto", default=None)
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("levy-density", help="density table of tau_u")
    _add_common(p, "alpha", "c", "out", "format")
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--centred", action="store_true", default=None,
                   help="density of tau_u instead of the uncentred q_u")

    p = sub.add_parser("verify", help="run experiment suites")
    _add_common(p, "seed", "out")
    p.add_argument("--suite", default=None, help="all or comma-separated names")
    p.add_argument("--scale", choices=["quick", "full"], default=None)
    p.add_argument("--fresh-seed", action="store_true", default=None,
                   help="draw the seed from system entropy")

    p = sub.add_parser("animate", help="frames of the growing cut lamination")
    _add_common(p, "seed", "alpha", "c", "n", "delta", "out")
    p.add_argument("--frames", type=int, default=None)
    return parser


class Options:
    """Flags over config over defaults."""

    def __init__(self, args, config, defaults):
        self._args, self._config, self._defaults = vars(args), config, defaults

    def get(self, key, cast=str):
        v = self._args.get(key)
        if v is not None:
            return v
        if key in self._config:
            raw = self._config[key]
            try:
                if cast is bool:
                    return raw.lower() in ("1", "true", "yes", "on")
                return cast(raw)
            except ValueError as err:
                raise ConfigError(f"bad value for {key}: {raw!r}") from err
        return self._defaults.get(key)


DEFAULTS = {
    "alpha": 2.0, "n": 100, "c": 1.0, "delta": 0.0, "format": None,
    "times": 5, "mode": "contour", "u": 1.0, "xmin": -2.0, "xmax": 8.0, "points": 201,
    "suite": "all", "scale": "quick", "frames": 51, "width": 512, "labels": False,
}


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _fmt(opt, default):
    f = opt.get("format")
    if f:
        return f
    out = opt.get("out")
    if out and "." in os.path.basename(out):
        return os.path.splitext(out)[1][1:]
    return default


def _spec(opt):
    return RenderSpec(width=opt.get("width", int), delta=opt.get("delta", float),
                      labels=bool(opt.get("labels", bool)))


def _distribution(opt):
    # without --dist, alpha < 2 means the stable family
    name = opt.get("dist")
    alpha = opt.get("alpha", float)
    if name is None:
        name = "poisson1" if alpha == 2.0 else "stable"
    return builtin_distribution(name, alpha=alpha if name == "stable" else None)


def _load_tree(path):
    with open(path, encoding="utf-8") as fh:
        return PlaneTree.from_json(fh.read())


def _load_facto(path):
    with open(path, encoding="utf-8") as fh:
        return MinimalFactorization.from_text(fh.read())


def cmd_sample_tree(opt):
    tree = sample_conditioned_gw(_distribution(opt), opt.get("n", int), opt.get("seed", int))
    fmt = _fmt(opt, "json")
    _write(opt.get("out"), render_svg(tree, _spec(opt)) if fmt == "svg" else tree.to_json() + "\n")


def cmd_sample_facto(opt):
    f = sample_uniform_factorization(opt.get("n", int), opt.get("seed", int))
    fmt = _fmt(opt, "txt")
    if fmt == "svg":
        text = render_svg(prefix_lamination(f, len(f)), _spec(opt))
    elif fmt == "json":
        text = json.dumps({"n": f.n, "transpositions": [list(t) for t in f.transpositions]}) + "\n"
    else:
        text = f.to_text() + "\n"
    _write(opt.get("out"), text)


def cmd_cut_process(opt):
    seed = opt.get("seed", int)
    tree_path = opt.get("tree")
    mu = _distribution(opt)
    if tree_path:
        tree = _load_tree(tree_path)
    else:
        tree = sample_conditioned_gw(mu, opt.get("n", int), seed)
    c = opt.get("c", float)
    rate = compute_Bn(mu, tree.n).B_n / tree.n
    cp = sample_tree_cut_process(tree, rate, c, seed)
    fmt = _fmt(opt, "csv")
    if fmt == "csv":
        times = np.linspace(0.0, c, opt.get("times", int))
        text = fragmentation_masses(cp, times).to_csv()
    else:
        lam = Lamination(cp.a, cp.b, cp.denominator, labels=cp.vertex, check=False)
        text = render_svg(lam, _spec(opt)) if fmt == "svg" else lam.to_json() + "\n"
    _write(opt.get("out"), text)


def cmd_lamination(opt):
    if opt.get("tree"):
        tree = _load_tree(opt.get("tree"))
        if opt.get("mode") == "lukasiewicz":
            lam = lamination_from_path(lukasiewicz_path(tree))
        else:
            lam = lamination_from_tree_contour(tree)
    elif opt.get("facto"):
        f = _load_facto(opt.get("facto"))
        k = opt.get("k", int)
        lam = prefix_lamination(f, len(f) if k is None else k)
    else:
        raise ConfigError("lamination needs --tree or --facto")
    fmt = _fmt(opt, "svg")
    _write(opt.get("out"), render_svg(lam, _spec(opt)) if fmt == "svg" else lam.to_json() + "\n")


def cmd_partition(opt):
    if opt.get("facto"):
        f = _load_facto(opt.get("facto"))
    else:
        seed = opt.get("seed", int)
        if seed is None:
            raise ConfigError("--seed is required when sampling")
        f = sample_uniform_factorization(opt.get("n", int), seed)
    k = opt.get("k", int)
    lam = partition_process(f, len(f) if k is None else k)
    fmt = _fmt(opt, "svg")
    _write(opt.get("out"), render_svg(lam, _spec(opt)) if fmt == "svg" else lam.to_json() + "\n")


def cmd_levy_density(opt):
    p = ExponentParams(opt.get("alpha", float), opt.get("c", float))
    u = opt.get("u", float)
    xs = np.linspace(opt.get("xmin", float), opt.get("xmax", float), opt.get("points", int))
    dens = density_tau if opt.get("centred", bool) else density_q
    q = dens(u, xs, p)
    lines = ["x,q"] + [f"{x!r},{v!r}" for x, v in zip(xs.tolist(), q.tolist())]
    _write(opt.get("out"), "\n".join(lines) + "\n")


QUICK = {
    "mass_identity": dict(samples=200),
    "factorization_vs_fragmentation": dict(n=500, samples=300),
    "levy_marginal": dict(n=500, samples=300),
    "local_limit": dict(n=2000, sweep=False),
    "reduced_tree_law": dict(hosts=20000),
    "luka_vs_contour": dict(n=1000, samples=20),
    "partition_process": dict(ns=(200, 800), samples=40, ks_n=500, ks_samples=300),
}


def cmd_verify(opt):
    suite = opt.get("suite")
    names = list(ex.SUITES) if suite == "all" else [s.strip() for s in suite.split(",")]
    unknown = [s for s in names if s not in ex.SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
    seed = opt.get("seed", int)
    if opt.get("fresh_seed", bool):
        seed = int(np.random.SeedSequence().entropy % (2**63))
    out = opt.get("out")
    quick = opt.get("scale") == "quick"
    ok = True
    reports = []
    for name in names:
        kwargs = dict(QUICK[name]) if quick else {}
        if "seed" in ex.SUITES[name].__code__.co_varnames:
            kwargs["seed"] = seed
        rep = ex.SUITES[name](**kwargs)
        reports.append(rep)
        ok &= rep.verdict
        print(rep.summary())
        if out:
            _write(os.path.join(out, f"{name}.json"), rep.to_json() + "\n")
            if rep.samples:
                _write(os.path.join(out, f"{name}.csv"), rep.samples_csv())
    return 0 if ok else 1


def animation_frames(alpha, n, frames, seed, c_max=4.0, delta=1e-3, width=512):
    """SVG frames of the cut lamination at ``frames`` equally spaced times in ``[0, c_max]``."""
    mu = ex._base_law(alpha)
    tree = sample_conditioned_gw(mu, n, seed)
    rate = compute_Bn(mu, n).B_n / n
    cp = sample_tree_cut_process(tree, rate, c_max, seed)
    spec = RenderSpec(width=width, delta=delta)
    times = np.linspace(0.0, c_max, frames)

    def one(t):
        k = cp.upto(t)
        lam = Lamination(cp.a[:k], cp.b[:k], cp.denominator, check=False)
        return render_svg(lam, spec)

    threads = max(1, int(os.environ.get("LAMLAB_THREADS", "1") or 1))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, times)), cp, times


def cmd_animate(opt):
    out = opt.get("out") or "frames"
    delta = opt.get("delta", float)
    svgs, _, _ = animation_frames(opt.get("alpha", float), opt.get("n", int), opt.get("frames", int),
                                  opt.get("seed", int), c_max=4.0 * max(opt.get("c", float), 1e-9),
                                  delta=delta if delta else 1e-3, width=opt.get("width", int))
    os.makedirs(out, exist_ok=True)
    digits = max(3, len(str(len(svgs) - 1)))
    for i, text in enumerate(svgs):
        _write(os.path.join(out, f"frame_{i:0{digits}d}.svg"), text)


COMMANDS = {
    "sample-tree": cmd_sample_tree, "sample-facto": cmd_sample_facto, "cut-process": cmd_cut_process,
    "lamination": cmd_lamination, "partition": cmd_partition, "levy-density": cmd_levy_density,
    "verify": cmd_verify, "animate": cmd_animate,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = read_config(args.config) if args.config else {}
        opt = Options(args, config, DEFAULTS)
        needs_seed = args.command in STOCHASTIC and not (args.command == "partition" and opt.get("facto"))
        if needs_seed and opt.get("seed", int) is None and not opt.get("fresh_seed", bool):
            raise ConfigError(f"{args.command} needs --seed")
        code = COMMANDS[args.command](opt)
        return int(code or 0)
    except (ConfigError, ValidationError, OSError, ValueError) as err:
        print(f"lamlab: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
