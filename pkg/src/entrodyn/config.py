"""Job configuration parsing for the command-line front end.

Configs are strict JSON: exact rationals are written as integers or
"p/q" strings, and any floating-point literal is rejected outright so
that a config round-trips bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .endomorphisms import EndoAction, action_from_dict, identity_action
from .rational import as_rational
from .riemann_roch import KClassSum, line_bundle_sum
from .varieties import GradedClass, VarietyModel, model_from_dict, strict_json_loads

DEFAULT_VERDICT_TOL = Fraction(1, 10**6)


class ConfigError(ValueError):
    """The job config is malformed."""


@dataclass(frozen=True)
class AutoeqSpec:
    """A standard autoequivalence: automorphism action, twist divisor, shift."""

    f_action: EndoAction
    twist: GradedClass
    shift: int


@dataclass(frozen=True)
class JobConfig:
    """One parsed job: a model plus exactly the inputs its command needs."""

    model: VarietyModel
    action: Optional[EndoAction]
    autoequivalence: Optional[AutoeqSpec]
    functor: Optional[tuple]
    tol: Fraction
    n_max: Optional[int]
    t_grid: tuple[Fraction, ...]
    out: Optional[str]


def _parse_divisor(model: VarietyModel, raw) -> GradedClass:
    if isinstance(raw, (int, str)):
        raw = [raw]
    if not isinstance(raw, list):
        raise ConfigError("twist divisor must be a coefficient array (or a single rational)")
    coeffs = [as_rational(v) for v in raw]
    if len(coeffs) != model.ranks[1]:
        raise ConfigError(
            f"divisor has {len(coeffs)} coefficients, model rank at codim 1 is {model.ranks[1]}"
        )
    return model.divisor_class(coeffs)


def _parse_autoeq(model: VarietyModel, raw) -> AutoeqSpec:
    if not isinstance(raw, dict):
        raise ConfigError("autoequivalence spec must be an object")
    f_spec = raw.get("f", {"helper": "identity"})
    f_action = action_from_dict(model, f_spec)
    twist = _parse_divisor(model, raw.get("twist", [0] * model.ranks[1]))
    shift = int(raw.get("shift", 0))
    return AutoeqSpec(f_action=f_action, twist=twist, shift=shift)


def _parse_functor(raw) -> tuple:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ConfigError("functor spec must be an object with a 'kind'")
    kind = raw["kind"]
    if kind == "shift":
        return ("shift", int(raw["m"]))
    if kind == "twist":
        return ("twist", int(raw["degree"]))
    if kind == "pullback":
        return ("pullback", int(raw["k"]))
    raise ConfigError(f"unknown functor kind {kind!r}")


def parse_kclass_sum(model: VarietyModel, raw) -> KClassSum:
    """KClassSum literal: a list of (divisor coefficients, shift, multiplicity)."""
    if not isinstance(raw, list):
        raise ConfigError("KClassSum literal must be a list of terms")
    entries = []
    for item in raw:
        if isinstance(item, dict):
            divisor = _parse_divisor(model, item["divisor"])
            entries.append((divisor, int(item.get("shift", 0)), int(item.get("mult", 1))))
        elif isinstance(item, list) and len(item) == 3:
            divisor = _parse_divisor(model, item[0])
            entries.append((divisor, int(item[1]), int(item[2])))
        else:
            raise ConfigError(
                "each KClassSum term must be [coeffs, shift, mult] or "
                "{'divisor': ..., 'shift': ..., 'mult': ...}"
            )
    return line_bundle_sum(model, entries)


def parse_job(text: str) -> JobConfig:
    """Parse job config text; raises ConfigError on malformed input."""
    try:
        data = strict_json_loads(text)
    except ValueError as exc:
        raise ConfigError(f"config is not valid strict JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("job config must be a JSON object")
    if "model" not in data:
        raise ConfigError("job config needs exactly one 'model'")
    model = model_from_dict(data["model"])

    action = None
    if "action" in data:
        try:
            action = action_from_dict(model, data["action"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad action spec: {exc}") from exc
    autoeq = _parse_autoeq(model, data["autoequivalence"]) if "autoequivalence" in data else None
    functor = _parse_functor(data["functor"]) if "functor" in data else None
    if action is None and autoeq is None and functor is None:
        raise ConfigError("job config needs an 'action', 'autoequivalence' or 'functor'")

    tol = as_rational(data["tol"]) if "tol" in data else DEFAULT_VERDICT_TOL
    if tol <= 0:
        raise ConfigError("tol must be positive")
    n_max = int(data["n_max"]) if "n_max" in data else None
    if n_max is not None and n_max < 8:
        raise ConfigError("n_max must be at least 8")
    t_grid = tuple(as_rational(v) for v in data.get("t_grid", [0]))
    out = data.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("'out' must be a path string")
    return JobConfig(
        model=model,
        action=action,
        autoequivalence=autoeq,
        functor=functor,
        tol=tol,
        n_max=n_max,
        t_grid=t_grid,
        out=out,
    )


def load_job(path: str) -> JobConfig:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_job(handle.read())
