"""Deterministic report rendering: machine-readable JSON and aligned tables.

Every float is pre-formatted with fixed 12-digit precision and every
exact rational is embedded as a "p/q" string next to its decimal
rendering, so identical jobs produce byte-identical reports.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .entropy import AutoeqReport, EntropyReport
from .rational import format_rational
from .roots import SpectralInterval

FORMAT_VERSION = 1


def fmt_float(x: float) -> str:
    if x == 0.0:  # normalize -0.0
        x = 0.0
    if math.isinf(x) or math.isnan(x):
        return repr(x)
    return f"{x:.12f}"


def interval_dict(interval: SpectralInterval) -> dict:
    return {
        "lower": format_rational(interval.lower),
        "upper": format_rational(interval.upper),
        "lower_decimal": fmt_float(float(interval.lower)),
        "upper_decimal": fmt_float(float(interval.upper)),
        "width_decimal": fmt_float(float(interval.width)),
    }


def verdicts_list(verdicts) -> list[dict]:
    return [
        {
            "name": v.name,
            "lhs": fmt_float(v.lhs),
            "rhs": fmt_float(v.rhs),
            "residual": fmt_float(v.residual),
            "tol": fmt_float(v.tol),
            "pass": v.passed,
        }
        for v in verdicts
    ]


def to_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# per-command payloads
# ---------------------------------------------------------------------------


def degrees_payload(model_name, action_label, rows, tol: Fraction, n_max: int) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": "degrees",
        "model": model_name,
        "action": action_label,
        "tol": format_rational(tol),
        "n_max": n_max,
        "rows": [
            {
                "q": row["q"],
                "eigen": interval_dict(row["eigen"]),
                "seq_estimate": fmt_float(row["seq"]),
                "seq_residual": fmt_float(row["seq_residual"]),
                "seq_reliable": row["seq_reliable"],
                "multiplicity": row["multiplicity"],
                "routes_agree": row["agree"],
            }
            for row in rows
        ],
        "all_agree": all(row["agree"] for row in rows),
    }


def degrees_table(rows) -> str:
    header = f"{'q':>3}  {'eigen radius':>16}  {'seq estimate':>16}  {'mult':>4}  agree"
    lines = [header, "-" * len(header)]
    for row in rows:
        mid = float(row["eigen"].midpoint())
        lines.append(
            f"{row['q']:>3}  {mid:>16.10f}  {row['seq']:>16.10f}  "
            f"{row['multiplicity']:>4}  {'yes' if row['agree'] else 'NO'}"
        )
    return "\n".join(lines)


def entropy_payload(report: EntropyReport, tol: Fraction) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": "entropy",
        "model": report.model_name,
        "action": report.action_label,
        "tol": format_rational(tol),
        "n_max": report.n_max,
        "h_estimate": fmt_float(report.h_estimate),
        "h_error_bar": fmt_float(report.h_error_bar),
        "rho_interval": interval_dict(report.rho_interval),
        "log_rho": fmt_float(report.log_rho),
        "log_max_rq": fmt_float(report.log_max_rq),
        "log_max_dq_seq": fmt_float(report.log_max_dq_seq),
        "per_q": [
            {
                "q": p.q,
                "eigen": interval_dict(p.routes.eigen),
                "seq_estimate": fmt_float(p.routes.seq),
                "seq_residual": fmt_float(p.routes.seq_residual),
            }
            for p in report.per_q
        ],
        "verdicts": verdicts_list(report.verdicts),
        "pass": report.passed,
    }


def entropy_table(report: EntropyReport) -> str:
    lines = [
        f"model:          {report.model_name}",
        f"action:         {report.action_label}",
        f"h estimate:     {report.h_estimate:+.10f}  (error bar {report.h_error_bar:.2e})",
        f"log rho:        {report.log_rho:+.10f}",
        f"log max r_q:    {report.log_max_rq:+.10f}",
        f"log max d_q:    {report.log_max_dq_seq:+.10f}  (sequence route)",
        "verdicts:",
    ]
    for v in report.verdicts:
        lines.append(
            f"  {v.name:<30} residual {v.residual:.3e}  tol {v.tol:.1e}  "
            f"{'pass' if v.passed else 'FAIL'}"
        )
    return "\n".join(lines)


def autoeq_payload(report: AutoeqReport, tol: Fraction) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": "autoeq",
        "model": report.model_name,
        "autoequivalence": report.descriptor,
        "tol": format_rational(tol),
        "n_max": report.n_max,
        "anti_ample_level": report.twist_level,
        "h_estimate": fmt_float(report.h_estimate),
        "h_error_bar": fmt_float(report.h_error_bar),
        "rho_interval": interval_dict(report.rho_interval),
        "verdicts": verdicts_list(report.verdicts),
        "pass": report.passed,
    }


def autoeq_table(report: AutoeqReport) -> str:
    rho = report.rho_interval
    lines = [
        f"model:            {report.model_name}",
        f"autoequivalence:  {report.descriptor}",
        f"anti-ample level: canonical multiple l = {report.twist_level}",
        f"h estimate:       {report.h_estimate:+.10f}  (error bar {report.h_error_bar:.2e})",
        f"rho interval:     [{float(rho.lower):.12f}, {float(rho.upper):.12f}]",
        "verdicts:",
    ]
    for v in report.verdicts:
        lines.append(
            f"  {v.name:<10} residual {v.residual:.3e}  tol {v.tol:.1e}  "
            f"{'pass' if v.passed else 'FAIL'}"
        )
    return "\n".join(lines)


def ht_payload(model_name: str, functor: tuple, rows, n_max: int) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": "ht",
        "model": model_name,
        "functor": {"kind": functor[0], "parameter": functor[1]},
        "n_max": n_max,
        "rows": [{"t": fmt_float(t), "h_t": fmt_float(h)} for t, h in rows],
    }


def ht_table(rows) -> str:
    header = f"{'t':>12}  {'h_t':>16}"
    lines = [header, "-" * len(header)]
    for t, h in rows:
        lines.append(f"{t:>12.6f}  {h:>16.10f}")
    return "\n".join(lines)
