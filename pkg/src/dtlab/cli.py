"""Command line front end: ``dtlab <command> [flags]``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from . import jointlaw, rmtsim, snpoly, speclaw, suites
from .errors import DtlabError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

SIMULATE_CHECKS = ("ks", "norms", "moments", "covariance", "fsk")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits for floats, p/q for rationals."""
    if isinstance(x, Fraction):
        return snpoly.fraction_str(x)
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    with _sink(path) as fh:
        fh.write(buf.getvalue())


def _write_text(path, text: str) -> None:
    with _sink(path) as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", ",").split(",") if tok]
    except ValueError as exc:
        raise UsageError(f"expected a comma separated list of integers, got {text!r}") from exc


# -- commands ---------------------------------------------------------------------------


def cmd_density(k, grid_size: int, out_path) -> int:
    if grid_size < 8:
        raise UsageError("--grid must be at least 8")
    if k is None:
        v = math.pi * np.arange(1, grid_size) / grid_size
        y = np.asarray(speclaw.sigma(v))
        rows = zip(y[::-1], np.asarray(speclaw.phi_v(v))[::-1], np.asarray(speclaw.F_v(v))[::-1])
        _write_csv(out_path, ["y", "phi", "F"], rows)
        return EXIT_OK
    grid = jointlaw.density_grid(k, grid_size)
    rows = (
        (grid.x[i], grid.y[j], grid.values[i, j])
        for i in range(grid_size)
        for j in range(grid_size)
    )
    _write_csv(out_path, ["x", "y", "density"], rows)
    return EXIT_OK


def cmd_moments(k: int, n_max: int, out_path=None) -> int:
    if n_max < 0:
        raise UsageError("--nmax must be non-negative")
    rows = []
    ok = True
    for n in range(n_max + 1):
        exact = snpoly.moment(k, n)
        formula = snpoly.moment_formula(k, n)
        ok &= exact == formula
        rows.append((n, exact, formula, exact == formula))
    _write_csv(out_path, ["n", "exact", "formula", "equal"], rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(suite: str, out_path=None) -> int:
    if suite != "all" and suite not in suites.SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join([*suites.SUITES, 'all'])}")
    rep = suites.run(suite)
    _write_text(out_path, rep.to_json())
    return EXIT_OK if rep.overall else EXIT_FAIL


def cmd_distance(k_list: list[int], out_path=None) -> int:
    if not k_list:
        raise UsageError("--k needs at least one value")
    if any(k < 3 for k in k_list):
        raise UsageError("the distance is defined for k >= 3")
    _write_csv(out_path, ["k", "hs_distance"], ((k, jointlaw.hs_distance(k)) for k in k_list))
    return EXIT_OK


def cmd_simulate(N: int, samples: int, seed: int, k_max: int, checks, out_path=None) -> int:
    unknown = set(checks) - set(SIMULATE_CHECKS)
    if unknown:
        raise UsageError(f"unknown checks {sorted(unknown)}; choose from {', '.join(SIMULATE_CHECKS)}")
    cfg = rmtsim.EnsembleConfig(N=N, samples=samples, seed=seed, k_max=k_max)
    out: dict = {"config": {"N": N, "samples": samples, "seed": seed, "k_max": k_max}}
    want_fsk = "fsk" in checks
    spectra = rmtsim.spectrum_suite(cfg, with_fsk=want_fsk) if {"ks", "norms", "fsk"} & set(checks) else []
    if "ks" in checks:
        out["ks_TstarT"] = float(np.mean([rmtsim.ks_distance(s.tstar_eigs) for s in spectra]))
        for k in range(2, k_max + 1):
            out[f"ks_S{k}"] = float(np.mean([rmtsim.ks_distance(s.sk_eigs[k]) for s in spectra]))
        for k in range(1, k_max + 1):
            name = "ks_resolved_TstarT" if k == 1 else f"ks_resolved_S{k}"
            out[name] = float(np.mean([rmtsim.resolved_ks(s, k) for s in spectra]))
    if "norms" in checks:
        for k in range(1, k_max + 1):
            mean_norm = float(np.mean([s.opnorms[k] for s in spectra]))
            out[f"norm_k{k}"] = mean_norm
            out[f"norm_ratio_k{k}"] = mean_norm / rmtsim.norm_target(k)
    if "moments" in checks:
        mean, se = rmtsim.trace_moments(cfg, 4)
        out["trace_moments"] = [float(m) for m in mean]
        out["trace_moment_stderr"] = [float(s) if math.isfinite(s) else None for s in se]
        out["trace_moment_targets"] = [float(snpoly.moment_formula(1, n)) for n in range(1, 5)]
    if "covariance" in checks:
        rep = rmtsim.covariance_check(lambda x: x, cfg)
        out["covariance"] = {e.name: e.residual for e in rep.entries}
    if want_fsk:
        for k in range(1, k_max + 1):
            out[f"fsk_k{k}"] = float(np.mean([s.fsk[k] for s in spectra]))
    _write_text(out_path, json.dumps(out, indent=2))
    return EXIT_OK


def cmd_recursion(t: float, iters: int, out_path=None) -> int:
    if iters < 1:
        raise UsageError("--iters must be at least 1")
    tr = speclaw.an_recursion(t, iters)
    rows = [(n, a) for n, a in enumerate(tr.terms, start=1)]
    rows.append(("final_gap", tr.final_gap))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "a_n"])
    for n, a in rows:
        w.writerow([n if isinstance(n, str) else fmt(n), fmt(a)])
    _write_text(out_path, buf.getvalue())
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dtlab", description="Numerics for the quasinilpotent DT-operator.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", help="joint density grid (with --k) or marginal law table")
    d.add_argument("--k", type=int, default=None)
    d.add_argument("--grid", type=int, default=64)
    d.add_argument("--out", default=None)

    m = sub.add_parser("moments", help="exact moments of the Sniady polynomials")
    m.add_argument("--k", type=int, default=1)
    m.add_argument("--nmax", type=int, default=8)
    m.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    v.add_argument("--suite", default="all")
    v.add_argument("--out", default=None)

    s = sub.add_parser("distance", help="squared Hilbert-Schmidt distance table")
    s.add_argument("--k", default="3,6,12,24,48")
    s.add_argument("--out", default=None)

    r = sub.add_parser("simulate", help="Monte Carlo run of the random matrix model")
    r.add_argument("--n", type=int, default=500)
    r.add_argument("--samples", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--k", type=int, default=2, help="largest k for S_k")
    r.add_argument("--checks", default=",".join(SIMULATE_CHECKS))
    r.add_argument("--out", default=None)

    c = sub.add_parser("recursion", help="iterates of a_{n+1} = a_n F(et/a_n)")
    c.add_argument("--t", type=float, default=0.5)
    c.add_argument("--iters", type=int, default=200)
    c.add_argument("--out", default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "density":
            return cmd_density(args.k, args.grid, args.out)
        if args.command == "moments":
            return cmd_moments(args.k, args.nmax, args.out)
        if args.command == "verify":
            return cmd_verify(args.suite, args.out)
        if args.command == "distance":
            return cmd_distance(_int_list(args.k), args.out)
        if args.command == "simulate":
            checks = [c for c in args.checks.split(",") if c]
            return cmd_simulate(args.n, args.samples, args.seed, args.k, checks, args.out)
        if args.command == "recursion":
            return cmd_recursion(args.t, args.iters, args.out)
    except (UsageError, DtlabError) as exc:
        print(f"dtlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
