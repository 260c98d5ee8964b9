"""Entropy sequences, limit extraction, and the verification suites.

The headline computations: for a surjective endomorphism, the growth rate
of Euler pairings against iterated pullbacks of a generator equals the log
spectral radius of the induced lattice action, the log of the largest
per-codimension spectral radius, and the log of the largest dynamical
degree; for standard autoequivalences of (anti-)canonically polarized
models, both the growth rate and the lattice spectral radius collapse to
zero and one.  Each equality is checked numerically at an explicit
tolerance and reported with its residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .endomorphisms import (
    ActionValidationError,
    DegreeRoutes,
    EndoAction,
    dynamical_degree,
    validate,
)
from .linalg import mat_pow
from .rational import as_rational, log_rational
from .riemann_roch import (
    KClassSum,
    autoeq_action,
    chern_character,
    endo_K_action,
    line_bundle_sum,
    log_weighted_hom_sum,
)
from .roots import DEFAULT_TOL, SpectralInterval, spectral_radius
from .varieties import GradedClass, VarietyModel


class ChiVanishedError(ValueError):
    """An Euler pairing in the sequence vanished, so its log growth is undefined."""


class AmplenessFlagError(ValueError):
    """The model is not flagged (anti-)canonically ample."""


class UnsupportedFunctorError(ValueError):
    """The requested functor is outside the computable classes."""


@dataclass(frozen=True)
class EntropySequence:
    """Terms (n, log |chi_n|) with the exact pairings retained alongside."""

    terms: tuple[tuple[int, float], ...]
    exact_values: tuple[Fraction, ...]
    descriptor: str


@dataclass(frozen=True)
class Verdict:
    """One checked equality: passes iff |lhs - rhs| <= tol."""

    name: str
    lhs: float
    rhs: float
    tol: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class PerCodimDegrees:
    q: int
    routes: DegreeRoutes


@dataclass(frozen=True)
class EntropyReport:
    """All four quantities of the endomorphism equality chain plus verdicts."""

    model_name: str
    action_label: str
    n_max: int
    h_estimate: float
    h_error_bar: float
    rho_interval: SpectralInterval
    per_q: tuple[PerCodimDegrees, ...]
    verdicts: tuple[Verdict, ...]

    @property
    def log_rho(self) -> float:
        return self.rho_interval.log_midpoint()

    @property
    def log_max_rq(self) -> float:
        return max(p.routes.eigen.log_midpoint() for p in self.per_q)

    @property
    def log_max_dq_seq(self) -> float:
        return max(math.log(p.routes.seq) for p in self.per_q)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


@dataclass(frozen=True)
class AutoeqReport:
    """Entropy and lattice spectral radius of a standard autoequivalence."""

    model_name: str
    descriptor: str
    n_max: int
    twist_level: int  # the canonical multiple folded into the twist
    h_estimate: float
    h_error_bar: float
    rho_interval: SpectralInterval
    verdicts: tuple[Verdict, ...]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


# ---------------------------------------------------------------------------
# sequences and limits
# ---------------------------------------------------------------------------


def _generator_duals(model: VarietyModel) -> list[GradedClass]:
    """ch(O(-i c1L)) cup td for i = 1 .. dim + 1, the fixed test classes."""
    out = []
    for i in range(1, model.dim + 2):
        ch_dual = chern_character(model, model.c1L.scale(-i))
        out.append(model.cup(ch_dual, model.todd))
    return out


def generator_sum(model: VarietyModel) -> KClassSum:
    """The split generator used throughout: the sum of O(i c1L), i = 1 .. dim + 1."""
    return line_bundle_sum(
        model, [(model.c1L.scale(i), 0, 1) for i in range(1, model.dim + 2)]
    )


def chi_sequence(model: VarietyModel, action: EndoAction, n_max: int = 48) -> EntropySequence:
    """Euler pairings of the generator against iterated pullbacks of its dual.

    chi_n pairs each O(i c1L) against the n-th pullback of each O(-j c1L);
    every value is exact.  A vanishing value aborts: its log is undefined
    and, on the supported models, vanishing signals invalid input.
    """
    violations = validate(action)
    if violations:
        raise ActionValidationError(violations)
    d = model.dim
    duals = _generator_duals(model)
    movers: list[list[tuple[Fraction, ...]]] = []
    for j in range(1, d + 2):
        ch_j = chern_character(model, model.c1L.scale(-j))
        movers.append([ch_j.components[q] for q in range(d + 1)])

    terms: list[tuple[int, float]] = []
    exact: list[Fraction] = []
    for n in range(1, n_max + 1):
        for state in movers:
            for q in range(d + 1):
                state[q] = action.pullback[q].apply(state[q])
        chi_n = Fraction(0)
        for state in movers:
            moved = GradedClass(tuple(state))
            for dual in duals:
                chi_n += model.integrate(model.cup(dual, moved))
        if chi_n == 0:
            raise ChiVanishedError(
                f"chi_{n} = 0 for {action.label} on {model.name}; "
                "log growth is undefined (check ampleness of the polarization)"
            )
        exact.append(chi_n)
        terms.append((n, log_rational(abs(chi_n))))
    return EntropySequence(
        terms=tuple(terms),
        exact_values=tuple(exact),
        descriptor=f"chi(G, ({action.label})^n G*) on {model.name}",
    )


def extract_limit(sequence) -> tuple[float, float]:
    """Growth rate of a sequence a_n = n h + c log n + O(1), with an error bar.

    Differenced estimates (a_{2n} - a_n)/n cancel the constant and shrink
    the log term to c log2 / n; one Richardson step on dyadic pairs then
    removes that 1/n term as well.  The error bar is the spread of the
    last three accelerated estimates.
    """
    terms: Iterable[tuple[int, float]]
    if isinstance(sequence, EntropySequence):
        terms = sequence.terms
    else:
        terms = tuple(sequence)
    terms = tuple(terms)
    if len(terms) < 8:
        raise ValueError("need at least 8 sequence terms to extract a limit")
    values = {n: a for n, a in terms}
    diffs = {n: (values[2 * n] - values[n]) / n for n in sorted(values) if 2 * n in values}
    if not diffs:
        raise ValueError("no (n, 2n) pairs available in the sequence")
    accel = {n: 2 * diffs[2 * n] - diffs[n] for n in sorted(diffs) if 2 * n in diffs}
    pool = accel if accel else diffs
    ns = sorted(pool)
    tail = [pool[n] for n in ns[-3:]]
    return pool[ns[-1]], max(tail) - min(tail)


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def verify_endo_entropy(
    model: VarietyModel,
    action: EndoAction,
    tol: float = 1e-6,
    n_max: int = 48,
    spectral_tol: Fraction = DEFAULT_TOL,
) -> EntropyReport:
    """Check the equality chain for a surjective endomorphism.

    Computes the pairing growth rate h, the certified spectral radius of
    the lattice action, and both routes to every dynamical degree, then
    records one verdict per adjacent equality at the given tolerance.
    """
    tol = float(tol)
    seq = chi_sequence(model, action, n_max)
    h, bar = extract_limit(seq)
    lattice = endo_K_action(action)
    rho = spectral_radius(lattice.matrix, spectral_tol)
    per_q = tuple(
        PerCodimDegrees(q=q, routes=dynamical_degree(action, q, spectral_tol, n_max))
        for q in range(model.dim + 1)
    )
    log_rho = rho.log_midpoint()
    log_max_rq = max(p.routes.eigen.log_midpoint() for p in per_q)
    log_max_dq = max(math.log(p.routes.seq) for p in per_q)
    verdicts = (
        Verdict("h_vs_log_rho", h, log_rho, tol),
        Verdict("log_rho_vs_log_max_rq", log_rho, log_max_rq, tol),
        Verdict("log_max_rq_vs_log_max_dq_seq", log_max_rq, log_max_dq, tol),
    )
    return EntropyReport(
        model_name=model.name,
        action_label=action.label,
        n_max=n_max,
        h_estimate=h,
        h_error_bar=bar,
        rho_interval=rho,
        per_q=per_q,
        verdicts=verdicts,
    )


def find_anti_ample_level(model: VarietyModel, twist_divisor: GradedClass, limit: int = 1000) -> int:
    """Smallest |l| with twist + l * canonical anti-ample (positive l first)."""
    for magnitude in range(limit + 1):
        for l in ((magnitude, -magnitude) if magnitude else (0,)):
            candidate = twist_divisor + model.canonical.scale(l)
            if model.is_ample(-candidate):
                return l
    raise ValueError(f"no anti-ample twist of the form L' + l K within |l| <= {limit}")


def standard_autoeq_entropy(
    model: VarietyModel,
    f_action: EndoAction,
    twist_divisor: GradedClass,
    shift: int,
    tol: float = 1e-6,
    n_max: int = 240,
    spectral_tol: Fraction = DEFAULT_TOL,
) -> AutoeqReport:
    """Entropy and lattice spectral radius of pullback-then-twist-then-shift.

    Requires the canonical or anticanonical flag: there the standard
    autoequivalences exhaust all of them, entropy is zero and the lattice
    action has spectral radius one.  The pairing sequence replaces the
    functor by its anti-ample reduction: the twist is shifted by a
    multiple of the canonical class until anti-ample, and the divisor
    sum of its iterated pullbacks is accumulated exactly.

    The default window is longer than for endomorphism sequences because
    these pairings grow polynomially and carry slowly decaying 1/n^2
    corrections.
    """
    if not (model.canonical_ample or model.anticanonical_ample):
        raise AmplenessFlagError(
            f"model {model.name} is not flagged canonically or anticanonically ample"
        )
    violations = validate(f_action)
    if violations:
        raise ActionValidationError(violations)
    if f_action.degree != 1:
        raise ActionValidationError(
            [f"autoequivalences need an automorphism; got degree {f_action.degree}"]
        )
    model._check_conforms(twist_divisor)
    if not twist_divisor.concentrated_in(1):
        raise ValueError("twist divisor must be concentrated in codim 1")
    tol = float(tol)

    level = find_anti_ample_level(model, twist_divisor)
    reduced = twist_divisor + model.canonical.scale(level)

    d = model.dim
    duals = _generator_duals(model)
    terms: list[tuple[int, float]] = []
    exact: list[Fraction] = []
    pulled = reduced  # (f*)^j of the reduced twist, advanced each step
    accumulated = model.zero_class()
    for n in range(1, n_max + 1):
        accumulated = accumulated + pulled
        pulled = f_action.apply(pulled)
        chi_n = Fraction(0)
        for j in range(1, d + 2):
            target = chern_character(model, model.c1L.scale(-j) + accumulated)
            for dual in duals:
                chi_n += model.integrate(model.cup(dual, target))
        if chi_n == 0:
            raise ChiVanishedError(
                f"chi_{n} = 0 in the autoequivalence sequence on {model.name}"
            )
        exact.append(chi_n)
        terms.append((n, log_rational(abs(chi_n))))

    h, bar = extract_limit(terms)
    lattice = autoeq_action(model, f_action, twist_divisor, shift)
    rho = spectral_radius(lattice.matrix, spectral_tol)
    verdicts = (
        Verdict("h_zero", h, 0.0, tol),
        Verdict(
            "rho_one",
            float(rho.upper - 1) if rho.contains(1) else math.inf,
            0.0,
            max(tol, float(spectral_tol)),
        ),
    )
    descriptor = (
        f"pullback({f_action.label}) o twist o shift[{shift}] on {model.name}"
    )
    return AutoeqReport(
        model_name=model.name,
        descriptor=descriptor,
        n_max=n_max,
        twist_level=level,
        h_estimate=h,
        h_error_bar=bar,
        rho_interval=rho,
        verdicts=verdicts,
    )


# ---------------------------------------------------------------------------
# entropy as a function of the weight parameter (projective space only)
# ---------------------------------------------------------------------------

FunctorSpec = tuple  # ("shift", m) | ("twist", e) | ("pullback", k)


def entropy_function(
    model: VarietyModel,
    functor: FunctorSpec,
    t_grid: Sequence,
    n_max: int = 48,
) -> list[tuple[float, float]]:
    """Weighted-entropy values h_t on a grid, for shift, twist, or power-map
    pullback functors on projective space.

    The Hom dimensions come from closed-form line-bundle cohomology; only
    the exponential weights are floating point.
    """
    if model.kind != "product" or model.factor_dims is None or len(model.factor_dims) != 1:
        raise UnsupportedFunctorError("weighted entropy needs a single projective space model")
    if not functor or functor[0] not in ("shift", "twist", "pullback"):
        raise UnsupportedFunctorError(f"unsupported functor spec {functor!r}")
    d = model.dim
    kind = functor[0]
    param = int(functor[1])
    if kind == "pullback" and param < 1:
        raise UnsupportedFunctorError("pullback functor needs a power-map exponent >= 1")
    source = [(i, 0, 1) for i in range(1, d + 2)]

    def target(n: int) -> list[tuple[int, int, int]]:
        if kind == "shift":
            return [(-j, n * param, 1) for j in range(1, d + 2)]
        if kind == "twist":
            return [(-j + n * param, 0, 1) for j in range(1, d + 2)]
        return [(-j * param**n, 0, 1) for j in range(1, d + 2)]

    results = []
    for t in t_grid:
        t_float = float(t)
        terms = []
        for n in range(1, n_max + 1):
            log_value = log_weighted_hom_sum(d, source, target(n), t_float)
            terms.append((n, log_value))
        h, _ = extract_limit(terms)
        results.append((t_float, h))
    return results
