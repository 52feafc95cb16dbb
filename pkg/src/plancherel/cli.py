"""Command-line front end.

    plancherel spectrum  --sigma 5 --mu 1
    plancherel transform --sigma 5 --mu 1 --fn exp
    plancherel verify    all --profile quick
    plancherel kernel    --sigma -3 --tau -1.2 --n 2 --m 1 --k 0 --points "0.5,0.8;1,1.5"

Exit codes: 0 success (every check passed), 1 a check failed its
tolerance, 2 invalid input.  Output is JSON (default) or CSV and depends
only on the arguments, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import branching as br
from .hypertransform import (TEST_FUNCTIONS, GridConfig, TransformKernel, build_grid, forward,
                             plancherel_norm, roundtrip_defect, weighted_norm)
from .sl_operator import SpectralParams
from .spectrum import continuous_density, discrete_points, discrete_weight, nu_grid
from .suites import CRITERIA, SUITES, SuiteOptions, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

_SIGMA_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(i)?$")
DENSITY_SAMPLES = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0)


class InvalidInput(ValueError):
    pass


def parse_sigma(text: str, allow_negative: bool = False) -> complex:
    """A decimal literal, optionally suffixed with ``i`` for a purely imaginary value."""
    text = str(text).strip()
    match = _SIGMA_RE.match(text)
    if not match:
        raise InvalidInput(f"cannot parse sigma {text!r}: expected a decimal, optionally "
                           "followed by 'i'")
    value = float(text[:-1] if match.group(4) else text)
    if not math.isfinite(value):
        raise InvalidInput(f"sigma must be finite, got {text!r}")
    if match.group(4):
        return complex(0.0, value)
    if value < 0 and not allow_negative:
        raise InvalidInput("sigma must be purely imaginary or non-negative real")
    return complex(value, 0.0)


def _fmt_sigma(s: complex) -> str:
    return f"{s.real:g}" if s.imag == 0 else f"{s.imag:g}i"


def _num(v) -> float:
    """JSON-safe float (rounding debris below 1e-300 kept as is)."""
    v = float(v)
    if not math.isfinite(v):
        raise InvalidInput("non-finite value in output")
    return v


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _emit(payload: dict, table: list[dict], args) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        if table:
            writer = csv.DictWriter(buf, fieldnames=list(table[0].keys()), lineterminator="\r\n")
            writer.writeheader()
            writer.writerows(table)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _params(args) -> SpectralParams:
    if args.sigma is None or args.mu is None:
        raise InvalidInput("--sigma and --mu are required")
    try:
        return SpectralParams(parse_sigma(args.sigma), args.mu)
    except InvalidInput:
        raise
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


def cmd_spectrum(args) -> int:
    p = _params(args)
    atoms = [{"j": q.j, "tau": _num(q.tau.real), "weight": _num(discrete_weight(p, q.j))}
             for q in discrete_points(p)]
    nus = [v for v in DENSITY_SAMPLES if args.nu_max is None or v <= args.nu_max]
    density = [[v, _num(continuous_density(p, v))] for v in nus]
    payload = {"sigma": _fmt_sigma(p.sigma), "mu": p.mu, "atoms": atoms,
               "density_samples": density}
    table = ([{"kind": "atom", "j": a["j"], "tau": a["tau"], "nu": "", "value": a["weight"]}
              for a in atoms]
             + [{"kind": "density", "j": "", "tau": "", "nu": nu, "value": value}
                for nu, value in density])
    _emit(payload, table, args)
    return EXIT_OK


def cmd_transform(args) -> int:
    p = _params(args)
    name = args.fn or "exp"
    if name not in TEST_FUNCTIONS:
        raise InvalidInput(f"unknown function {name!r}; choose from {sorted(TEST_FUNCTIONS)}")
    f = TEST_FUNCTIONS[name]
    grid_cfg = GridConfig() if args.panels is None else GridConfig(panels=args.panels)
    nu_max = args.nu_max if args.nu_max is not None else 80.0
    if not nu_max > 0:
        raise InvalidInput("--nu-max must be positive")
    nu = nu_grid(nu_max)
    grid = build_grid(p, grid_cfg)
    g = forward(p, f, kernel=TransformKernel(p, grid, nu))
    norm_in = weighted_norm(p, f, grid)
    norm_spec = plancherel_norm(p, g)
    atoms = [{"j": q.j, "tau": _num(q.tau.real), "weight": _num(discrete_weight(p, q.j)),
              "re": _num(g.discrete[q.j].real), "im": _num(g.discrete[q.j].imag)}
             for q in discrete_points(p)]
    cont = [{"nu": _num(v), "re": _num(c.real), "im": _num(c.imag),
             "density": _num(continuous_density(p, v))}
            for v, c in zip(g.nu.nodes, g.values)]
    payload = {"sigma": _fmt_sigma(p.sigma), "mu": p.mu, "fn": name,
               "norm_weighted": _num(norm_in), "norm_spectral": _num(norm_spec),
               "roundtrip_defect": (_num(roundtrip_defect(p, f, g)) if norm_in > 0 else 0.0),
               "grid": {"panels": grid_cfg.panels, "order": grid_cfg.order,
                        "x_max": grid_cfg.x_max, "nu_max": nu_max},
               "atoms": atoms, "continuous": cont}
    table = ([{"kind": "atom", "j": a["j"], "tau": a["tau"], "nu": "", "re": a["re"],
               "im": a["im"]} for a in atoms]
             + [{"kind": "continuous", "j": "", "tau": "", "nu": c["nu"], "re": c["re"],
                 "im": c["im"]} for c in cont])
    _emit(payload, table, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    suite = args.suite_name or args.suite or "all"
    if suite != "all" and suite not in SUITES:
        raise InvalidInput(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    names = list(SUITES) if suite == "all" else [suite]
    try:
        opts = SuiteOptions(
            profile=args.profile, seed=args.seed,
            sigma=parse_sigma(args.sigma) if args.sigma is not None else None,
            mu=args.mu, n=args.n, m=args.m, k=args.k, fn=args.fn, tol=args.tol,
            panels=args.panels, nu_max=args.nu_max)
        if opts.mu is not None:
            SpectralParams(opts.sigma if opts.sigma is not None else 1.0, opts.mu)
        if opts.n is not None and (opts.m is None or opts.k is None):
            raise InvalidInput("--n needs --m and --k")
        results = run_suites(names, opts)
    except InvalidInput:
        raise
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    rows = [r for res in results for r in res.rows]
    if not rows:
        raise InvalidInput("the selection matched no checks")
    payload = {"profile": args.profile, "seed": args.seed,
               "suites": [{"suite": res.name, "criterion": CRITERIA[res.name],
                           "status": "PASS" if res.passed else "FAIL",
                           "rows": [r.as_dict() for r in res.rows]} for res in results],
               "status": "PASS" if all(r.passed for r in rows) else "FAIL"}
    _emit(payload, [r.as_dict() for r in rows], args)
    return EXIT_OK if payload["status"] == "PASS" else EXIT_FAIL


def _parse_points(text: str, n: int) -> np.ndarray:
    try:
        pts = [[float(v) for v in chunk.split(",")] for chunk in text.split(";") if chunk.strip()]
    except ValueError as exc:
        raise InvalidInput(f"cannot parse points {text!r}") from exc
    if not pts or any(len(p) != n for p in pts):
        raise InvalidInput(f"every point needs {n} comma-separated coordinates")
    return np.array(pts)


def cmd_kernel(args) -> int:
    if None in (args.sigma, args.tau, args.n, args.m, args.k):
        raise InvalidInput("--sigma, --tau, --n, --m and --k are required")
    s = parse_sigma(args.sigma, allow_negative=True)
    t = parse_sigma(args.tau, allow_negative=True)
    n, m, k = args.n, args.m, args.k
    if not 0 < m < n or k < 0:
        raise InvalidInput("need 0 < m < n and k >= 0")
    pts = _parse_points(args.points or "0.5,0.8" + ",0.8" * (n - 2), n)
    x, y = pts[:, :m], pts[:, m:]
    if np.any(np.sum(x * x, axis=1) == 0) or np.any(np.sum(y * y, axis=1) == 0):
        raise InvalidInput("points need non-zero components in both R^m and R^(n-m)")
    a_vals = br.kernel_A(s, t, k, n, m, x, y)
    i_vals = br.kernel_I(s, t, k, n, m, x, y)
    const = br.kernel_constant(s, t, k, n, m)
    rows = [{"point": [float(v) for v in p], "A_re": _num(a.real), "A_im": _num(a.imag),
             "I_re": _num(i.real), "I_im": _num(i.imag)}
            for p, a, i in zip(pts, np.atleast_1d(a_vals), np.atleast_1d(i_vals))]
    payload = {"sigma": _fmt_sigma(s), "tau": _fmt_sigma(t), "n": n, "m": m, "k": k,
               "mu": 2 * k + n - m, "constant": {"re": _num(const.real), "im": _num(const.imag)},
               "points": rows}
    table = [{**{f"z{i + 1}": v for i, v in enumerate(r["point"])},
              **{key: r[key] for key in ("A_re", "A_im", "I_re", "I_im")}} for r in rows]
    _emit(payload, table, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON file of option values; flags override it")
    p.add_argument("--sigma", help="decimal, optionally suffixed with i (e.g. 5, 3i, 1.5)")
    p.add_argument("--mu", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--fn", help=f"test function: {', '.join(sorted(TEST_FUNCTIONS))}")
    p.add_argument("--suite")
    p.add_argument("--tol", type=float)
    p.add_argument("--panels", type=int)
    p.add_argument("--nu-max", dest="nu_max", type=float)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--seed", type=int)
    p.add_argument("--profile", choices=("quick", "full"))


DEFAULTS = {"format": "json", "seed": 42, "profile": "full"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plancherel", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("spectrum", "atoms, weights and density samples"),
                           ("transform", "forward transform of a named test function")):
        _common(sub.add_parser(name, help=helptext))
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite_name", nargs="?", help=f"all, {', '.join(SUITES)}")
    _common(v)
    kp = sub.add_parser("kernel", help="evaluate the A and I kernels at probe points")
    _common(kp)
    kp.add_argument("--tau", help="decimal, optionally suffixed with i")
    kp.add_argument("--points", help="points of R^n as 'z1,z2,...;z1,z2,...'")
    return parser


def _apply_config(args) -> None:
    merged = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
            raise InvalidInput("config must be a flat JSON object")
        for key, value in data.items():
            key = key.replace("-", "_")
            if not hasattr(args, key) or key in ("command", "config"):
                raise InvalidInput(f"unknown config key {key!r}")
            merged[key] = str(value) if key in ("sigma", "tau") else value
    for key, value in merged.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.tol is not None and not args.tol > 0:
        raise InvalidInput("--tol must be positive")


COMMANDS = {"spectrum": cmd_spectrum, "transform": cmd_transform, "verify": cmd_verify,
            "kernel": cmd_kernel}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return COMMANDS[args.command](args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
