"""Command-line front end.

    hodgekit verify-algebra [--n-max 5]
    hodgekit decompose IN.hform OUT_ALPHA.hform OUT_BETA.hform REPORT.json
    hodgekit poly FILE {d,delta,laplacian,invlap,harmdecomp}
    hodgekit experiment NAME [--config cfg.json] [--out DIR] [--n 2 --p 2 ...]

Exit codes: 0 pass, 1 check failure, 2 usage or format error.
``HODGEKIT_THREADS`` (integer, 0 = all cores) sets the FFT worker count.
"""

from __future__ import annotations

import argparse
from dataclasses import asdict, dataclass, field, fields
import json
import math
import os
from pathlib import Path
import sys

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EXPERIMENTS = ("gaffney", "apriori", "sobolev-scaling", "sobolev-constant", "cohomology", "riesz-oracle")


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    command: str = "experiment"
    name: str = ""
    input: str | None = None
    out: str = "reports"
    n: int = 2
    k: int = 1
    N: int = 64
    L: float = 2 * math.pi
    p: float = 2.0
    q: float | None = 4.0
    alpha: float = 1.0
    seed: int = 0
    mu: int = 0
    nu: int = 1
    corpus_size: int = 3
    t_list: list = field(default_factory=lambda: [1, 2, 4])
    resolutions: list = field(default_factory=lambda: [32, 64, 128])
    width_cells: float | None = None
    tol: float = 1e-10
    exponent_tol: float = 0.05
    growth_tol: float = 0.10

    def validate(self):
        if self.name and self.name not in EXPERIMENTS:
            raise UsageError(f"unknown experiment {self.name!r}; choose from {', '.join(EXPERIMENTS)}")
        if not 1 <= self.n <= 4:
            raise UsageError(f"n must be in 1..4, got {self.n}")
        if not 0 <= self.k <= self.n:
            raise UsageError(f"k must be in 0..n, got {self.k}")
        for N in [self.N, *self.resolutions]:
            if N < 2 or N & (N - 1):
                raise UsageError(f"grid sizes must be powers of two, got {N}")
        if self.L <= 0:
            raise UsageError(f"L must be positive, got {self.L}")
        if self.p < 1 or (self.q is not None and self.q < 1):
            raise UsageError(f"need p, q >= 1, got p={self.p}, q={self.q}")
        if not (0 <= self.mu < self.n and 0 <= self.nu < self.n):
            raise UsageError(f"mu, nu must be axes in 0..{self.n - 1}")
        if self.corpus_size < 1:
            raise UsageError("corpus_size must be positive")


CONFIG_KEYS = {f.name for f in fields(JobConfig)} - {"command"}

# per-experiment defaults layered over the JobConfig defaults
EXPERIMENT_DEFAULTS = {
    "gaffney": {},
    "apriori": {},
    "sobolev-scaling": {"N": 256, "p": 1.5, "q": 6.0},
    "sobolev-constant": {"p": 1.5, "q": None, "width_cells": 3.0, "corpus_size": 4},
    "cohomology": {"p": 2.0, "q": 2.0},
    "riesz-oracle": {"N": 256, "L": 1.0},
}


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, value in data.items():
        _check_type(key, value)
    return data


_KINDS = {"input": (str, type(None)), "out": (str,), "name": (str,), "t_list": (list,), "resolutions": (list,),
          "n": (int,), "k": (int,), "N": (int,), "seed": (int,), "mu": (int,), "nu": (int,), "corpus_size": (int,),
          "q": (int, float, type(None)), "width_cells": (int, float, type(None))}


def _check_type(key, value):
    kinds = _KINDS.get(key, (int, float))
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise UsageError(f"config key {key!r} has bad value {value!r}")
    if isinstance(value, list) and not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        raise UsageError(f"config key {key!r} must be a list of numbers")


def resolve_config(name: str, file_values: dict, flag_values: dict) -> tuple[JobConfig, dict]:
    """flags > config file > experiment defaults > JobConfig defaults."""
    defaults = asdict(JobConfig())
    defaults.update(EXPERIMENT_DEFAULTS.get(name, {}))
    defaults["name"] = name
    merged = dict(defaults)
    merged.update(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    merged["name"] = name
    cfg = JobConfig(**merged)
    cfg.validate()
    return cfg, defaults


# -- commands ----------------------------------------------------------------------

def cmd_verify_algebra(args) -> int:
    from hodgekit.verify import IDENTITIES, algebra_suite

    if not 1 <= args.n_max <= 5:
        raise UsageError(f"--n-max must be in 1..5, got {args.n_max}")
    if args.inject_fault is not None and args.inject_fault not in IDENTITIES:
        raise UsageError(f"unknown identity {args.inject_fault!r}")
    results, runtime = algebra_suite(args.n_max, args.corpus_size, args.seed, fault=args.inject_fault)
    width = max(len(r.name) for r in results)
    print(f"{'identity':<{width}}  cases  failures  status")
    for r in results:
        print(f"{r.name:<{width}}  {r.cases:5d}  {r.failures:8d}  {'PASS' if r.passed else 'FAIL'}")
    print(f"runtime {runtime:.2f}s")
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAILED identity {r.name}: first failure at {r.first_failure}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_decompose(args) -> int:
    from hodgekit.hform import HFormError, read_form, write_form
    from hodgekit.report import write_json
    from hodgekit.spectral import hodge_decompose

    try:
        theta = read_form(args.input)
    except HFormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not theta.is_finite():
        print(f"error: {args.input} contains NaN or infinite values", file=sys.stderr)
        return EXIT_USAGE
    if not 0 <= theta.k <= theta.spec.n:
        print(f"error: degree {theta.k} has no components to decompose", file=sys.stderr)
        return EXIT_USAGE
    result = hodge_decompose(theta)
    write_form(result.alpha, args.out_alpha)
    write_form(result.beta, args.out_beta)
    rep = dict(result.report)
    norm = rep["norm_theta"]
    rep["relative_norm_alpha"] = rep["norm_alpha"] / norm if norm else 0.0
    rep["relative_norm_beta"] = rep["norm_beta"] / norm if norm else 0.0
    rep["tolerance"] = args.tol
    rep["passed"] = bool(rep["residual"] <= args.tol)
    write_json(rep, args.report)
    print(f"residual {rep['residual']:.3e}  |alpha|/|theta| {rep['relative_norm_alpha']:.3e}  "
          f"|beta|/|theta| {rep['relative_norm_beta']:.3e}")
    if rep["projected"]:
        print(f"note: input projected onto mean-zero modes (defect {rep['projection_defect']:.3e})")
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def _format_harmonic(f) -> str:
    from hodgekit.polyform import harmonic_decompose, iter_components
    from hodgekit.polynomial import format_polynomial

    lines = [f"n={f.n}; k={f.k}"]
    for idx, p in iter_components(f):
        if not p:
            continue
        axes = ",".join(str(a + 1) for a in idx.axes)
        for t in harmonic_decompose(p).terms:
            lines.append(f"idx=[{axes}]; m={t.m}; nu={t.nu}; weight={t.weight}; h={format_polynomial(t.h)}")
    return "\n".join(lines) + "\n"


def cmd_poly(args) -> int:
    from hodgekit.polyform import (
        format_polyform,
        parse_polyform,
        poly_d,
        poly_delta,
        poly_inverse_laplacian,
        poly_laplacian,
    )

    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        f = parse_polyform(text)
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ops = {"d": poly_d, "delta": poly_delta, "laplacian": poly_laplacian, "invlap": poly_inverse_laplacian}
    if args.action == "harmdecomp":
        sys.stdout.write(_format_harmonic(f))
    else:
        sys.stdout.write(format_polyform(ops[args.action](f)))
    return EXIT_OK


def _theta(cfg: JobConfig):
    from hodgekit.corpus import random_bandlimited
    from hodgekit.grid import GridSpec
    from hodgekit.hform import read_form

    if cfg.input:
        return read_form(cfg.input)
    return random_bandlimited(GridSpec(cfg.n, cfg.N, cfg.L), cfg.k, cfg.seed)


def run_experiment(cfg: JobConfig):
    from hodgekit import experiments as ex
    from hodgekit.corpus import bump_form
    from hodgekit.grid import GridSpec

    name = cfg.name
    if name == "gaffney":
        return ex.gaffney_check(_theta(cfg), cfg.mu, tol=cfg.tol)
    if name == "apriori":
        return ex.apriori_check(_theta(cfg), cfg.mu, cfg.nu, tol=cfg.tol)
    if name == "sobolev-scaling":
        if cfg.q is None:
            raise UsageError("sobolev-scaling needs q")
        spec = GridSpec(cfg.n, cfg.N, cfg.L)
        width = cfg.width_cells or cfg.N / 16
        theta = _theta(cfg) if cfg.input else bump_form(spec, cfg.k, cfg.seed, width)
        return ex.sobolev_scaling(theta, cfg.p, cfg.q, cfg.t_list, tol=cfg.exponent_tol)
    if name == "sobolev-constant":
        try:
            return ex.sobolev_constant_probe(cfg.n, cfg.k, cfg.p, cfg.q, cfg.resolutions, cfg.corpus_size,
                                             cfg.seed, cfg.width_cells or 3.0, cfg.L, cfg.growth_tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if name == "cohomology":
        if cfg.q is None:
            raise UsageError("cohomology needs q")
        if cfg.k < 1:
            raise UsageError("cohomology needs k >= 1")
        return ex.cohomology_check(cfg.n, cfg.k, cfg.p, cfg.q, cfg.corpus_size, cfg.seed, cfg.N,
                                   cfg.resolutions, cfg.t_list, cfg.L, cfg.tol, cfg.exponent_tol)
    if name == "riesz-oracle":
        return ex.riesz_oracle_check(cfg.N, cfg.L, cfg.width_cells)
    raise UsageError(f"unknown experiment {name!r}")


def cmd_experiment(args) -> int:
    from hodgekit.report import write_experiment

    file_values = load_config_file(args.config) if args.config else {}
    flags = {k: getattr(args, k) for k in ("input", "out", "n", "k", "N", "L", "p", "q", "alpha", "seed", "mu",
                                           "nu", "corpus_size", "t_list", "resolutions", "width_cells", "tol",
                                           "exponent_tol", "growth_tol")}
    cfg, defaults = resolve_config(args.name, file_values, flags)
    report = run_experiment(cfg)
    payload = report.to_dict()
    payload["config"] = asdict(cfg)
    payload["defaults"] = defaults
    stem = cfg.name.replace("-", "_")
    paths = write_experiment(payload, report.runtime, cfg.out, stem)
    for c in report.criteria:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.value:.6g} ({c.comparison} {c.tolerance:g})")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK if report.passed else EXIT_FAIL


# -- parser --------------------------------------------------------------------------

def _float_list(text: str) -> list:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    return [int(v) if v.is_integer() else v for v in vals]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hodgekit", description="Hodge decomposition toolkit for differential forms.")
    parser.add_argument("--threads", type=int, default=None,
                        help="FFT worker threads (overrides HODGEKIT_THREADS; 0 = all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    va = sub.add_parser("verify-algebra", help="exhaustive sign-lemma and exact-calculus suites")
    va.add_argument("--n-max", type=int, default=5)
    va.add_argument("--corpus-size", type=int, default=60)
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    va.set_defaults(func=cmd_verify_algebra)

    dc = sub.add_parser("decompose", help="theta = d(alpha) + delta(beta) on an HFORM file")
    dc.add_argument("input")
    dc.add_argument("out_alpha")
    dc.add_argument("out_beta")
    dc.add_argument("report")
    dc.add_argument("--tol", type=float, default=1e-10)
    dc.set_defaults(func=cmd_decompose)

    po = sub.add_parser("poly", help="exact operations on a polynomial-form text file")
    po.add_argument("file")
    po.add_argument("action", choices=["d", "delta", "laplacian", "invlap", "harmdecomp"])
    po.set_defaults(func=cmd_poly)

    ex = sub.add_parser("experiment", help="run an experiment and write JSON/CSV/PNG reports")
    ex.add_argument("name", choices=EXPERIMENTS)
    ex.add_argument("--config", help="JSON file of JobConfig values")
    ex.add_argument("--out", help="output directory (default: reports)")
    ex.add_argument("--input", help="HFORM input instead of a generated form")
    for flag, typ in (("n", int), ("k", int), ("N", int), ("L", float), ("p", float), ("q", float),
                      ("alpha", float), ("seed", int), ("mu", int), ("nu", int), ("width-cells", float),
                      ("tol", float), ("exponent-tol", float), ("growth-tol", float)):
        ex.add_argument(f"--{flag}", type=typ, default=None, dest=flag.replace("-", "_"))
    ex.add_argument("--corpus-size", type=int, default=None)
    ex.add_argument("--t-list", type=_float_list, default=None)
    ex.add_argument("--resolutions", type=_float_list, default=None)
    ex.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads is not None:
        if args.threads < 0:
            print("error: --threads must be >= 0", file=sys.stderr)
            return EXIT_USAGE
        os.environ["HODGEKIT_THREADS"] = str(args.threads)
    from hodgekit.grid import fft_workers
    from hodgekit.hform import HFormError

    try:
        fft_workers()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, HFormError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
