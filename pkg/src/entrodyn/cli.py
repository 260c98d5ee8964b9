"""Command-line front door.

    entrodyn degrees|entropy|autoeq|ht <config-path> [--tol R] [--n-max N]
             [--t-grid a,b,...] [--out PATH]

Exit codes, usable directly in CI:

    0  success (all checked equalities within tolerance)
    2  config/model/action validation failure (violations printed)
    3  ambiguous growth-order fit
    4  an equality verdict failed at the requested tolerance
    5  autoeq on a model without the (anti-)canonical ampleness flag
    6  unsupported functor (or non-projective-space model) for ht
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import reports
from .config import ConfigError, JobConfig, load_job
from .endomorphisms import (
    ActionValidationError,
    dynamical_degree,
    multiplicity,
    validate,
)
from .entropy import (
    AmplenessFlagError,
    ChiVanishedError,
    UnsupportedFunctorError,
    entropy_function,
    standard_autoeq_entropy,
    verify_endo_entropy,
)
from .rational import as_rational
from .roots import DEFAULT_TOL, AmbiguousGrowthError
from .varieties import ModelValidationError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_AMBIGUOUS_GROWTH = 3
EXIT_VERDICT_FAILED = 4
EXIT_FLAG_MISSING = 5
EXIT_UNSUPPORTED_FUNCTOR = 6

N_MAX_DEFAULT = 48
N_MAX_AUTOEQ_DEFAULT = 240  # polynomial-growth sequences need the longer window


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrodyn",
        description="entropy, dynamical degrees and spectral radii for model varieties",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("degrees", "per-codimension dynamical degrees by two routes"),
        ("entropy", "verify the endomorphism entropy equality chain"),
        ("autoeq", "entropy and lattice spectral radius of a standard autoequivalence"),
        ("ht", "weighted entropy h_t on a parameter grid"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to a job config (strict JSON)")
        cmd.add_argument("--tol", help="verdict tolerance, exact rational or decimal string")
        cmd.add_argument("--n-max", type=int, dest="n_max", help="sequence window length")
        cmd.add_argument("--t-grid", dest="t_grid", help="comma-separated parameter grid for ht")
        cmd.add_argument("--out", help="write the machine-readable JSON report here")
    return parser


def _resolve(job: JobConfig, args) -> tuple[Fraction, int, tuple[Fraction, ...], str | None]:
    tol = as_rational(args.tol) if args.tol else job.tol
    if tol <= 0:
        raise ConfigError("tol must be positive")
    default = N_MAX_AUTOEQ_DEFAULT if args.command == "autoeq" else N_MAX_DEFAULT
    n_max = args.n_max if args.n_max is not None else (job.n_max or default)
    if n_max < 8:
        raise ConfigError("n_max must be at least 8")
    t_grid = (
        tuple(as_rational(v) for v in args.t_grid.split(",")) if args.t_grid else job.t_grid
    )
    out = args.out or job.out
    return tol, n_max, t_grid, out


def _spectral_tol(tol: Fraction) -> Fraction:
    return min(DEFAULT_TOL, tol)


def _emit(payload: dict, table: str, out: str | None) -> None:
    print(table)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(reports.to_json(payload))


def _cmd_degrees(job: JobConfig, tol: Fraction, n_max: int, out: str | None) -> int:
    if job.action is None:
        print("error: degrees needs an 'action' in the config", file=sys.stderr)
        return EXIT_VALIDATION
    violations = validate(job.action)
    if violations:
        for v in violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    rows = []
    tol_float = float(tol)
    for q in range(job.model.dim + 1):
        routes = dynamical_degree(job.action, q, _spectral_tol(tol), n_max)
        mult = multiplicity(job.action, q, _spectral_tol(tol))
        agree = abs(routes.eigen.log_midpoint() - math.log(routes.seq)) <= tol_float
        rows.append(
            {
                "q": q,
                "eigen": routes.eigen,
                "seq": routes.seq,
                "seq_residual": routes.seq_residual,
                "seq_reliable": routes.seq_reliable,
                "multiplicity": mult,
                "agree": agree,
            }
        )
    payload = reports.degrees_payload(job.model.name, job.action.label, rows, tol, n_max)
    _emit(payload, reports.degrees_table(rows), out)
    return EXIT_OK if payload["all_agree"] else EXIT_VERDICT_FAILED


def _cmd_entropy(job: JobConfig, tol: Fraction, n_max: int, out: str | None) -> int:
    if job.action is None:
        print("error: entropy needs an 'action' in the config", file=sys.stderr)
        return EXIT_VALIDATION
    report = verify_endo_entropy(
        job.model, job.action, float(tol), n_max, _spectral_tol(tol)
    )
    payload = reports.entropy_payload(report, tol)
    _emit(payload, reports.entropy_table(report), out)
    return EXIT_OK if report.passed else EXIT_VERDICT_FAILED


def _cmd_autoeq(job: JobConfig, tol: Fraction, n_max: int, out: str | None) -> int:
    if job.autoequivalence is None:
        print("error: autoeq needs an 'autoequivalence' in the config", file=sys.stderr)
        return EXIT_VALIDATION
    spec = job.autoequivalence
    report = standard_autoeq_entropy(
        job.model,
        spec.f_action,
        spec.twist,
        spec.shift,
        float(tol),
        n_max,
        _spectral_tol(tol),
    )
    payload = reports.autoeq_payload(report, tol)
    _emit(payload, reports.autoeq_table(report), out)
    return EXIT_OK if report.passed else EXIT_VERDICT_FAILED


def _cmd_ht(job: JobConfig, n_max: int, t_grid, out: str | None) -> int:
    if job.functor is None:
        print("error: ht needs a 'functor' in the config", file=sys.stderr)
        return EXIT_UNSUPPORTED_FUNCTOR
    rows = entropy_function(job.model, job.functor, t_grid, n_max)
    payload = reports.ht_payload(job.model.name, job.functor, rows, n_max)
    _emit(payload, reports.ht_table(rows), out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        job = load_job(args.config)
        tol, n_max, t_grid, out = _resolve(job, args)
        if args.command == "degrees":
            return _cmd_degrees(job, tol, n_max, out)
        if args.command == "entropy":
            return _cmd_entropy(job, tol, n_max, out)
        if args.command == "autoeq":
            return _cmd_autoeq(job, tol, n_max, out)
        return _cmd_ht(job, n_max, t_grid, out)
    except AmplenessFlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAG_MISSING
    except UnsupportedFunctorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED_FUNCTOR
    except AmbiguousGrowthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS_GROWTH
    except ActionValidationError as exc:
        for v in exc.violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    except ModelValidationError as exc:
        for v in exc.violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConfigError, ChiVanishedError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def console_main() -> None:
    sys.exit(main())
