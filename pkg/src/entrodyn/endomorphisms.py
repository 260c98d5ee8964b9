"""Surjective endomorphisms as exact pullback actions on a variety model.

An :class:`EndoAction` stores one rational matrix per codimension (the
pullback on the chosen basis of the algebraic (q, q) classes) plus the
topological degree.  Validation checks, exactly, that the data really is
a degree-respecting ring endomorphism with invertible graded pieces.
Dynamical degrees are computed along two independent routes: certified
spectral radii of the pullback matrices, and growth of exact intersection
numbers against powers of the polarization.
"""

from __future__ import annotations

import itertools
import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import RationalMatrix, is_invertible, mat_mul, mat_pow, solve_rectangular
from .rational import as_rational, log_rational
from .roots import DEFAULT_TOL, SpectralInterval, growth_order, spectral_radius
from .varieties import GradedClass, VarietyModel, abelian_surface_rank3, projective_space

SEQ_RESIDUAL_LIMIT = 0.05


class ActionValidationError(ValueError):
    """An action whose matrices violate the endomorphism invariants."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class EndoAction:
    """Pullback matrices per codimension plus the topological degree."""

    model: VarietyModel
    pullback: tuple[RationalMatrix, ...]
    degree: int
    label: str = "action"

    def apply(self, x: GradedClass, power: int = 1) -> GradedClass:
        """(f*)^power applied to a graded class, exactly."""
        self.model._check_conforms(x)
        comps = []
        for q in range(self.model.dim + 1):
            mat = mat_pow(self.pullback[q], power)
            comps.append(mat.apply(x.components[q]))
        return GradedClass(tuple(comps))


def validate(action: EndoAction) -> list[str]:
    """Exact invariant checks; an empty list means the action is valid."""
    model = action.model
    d = model.dim
    violations: list[str] = []
    if len(action.pullback) != d + 1:
        return [f"expected {d + 1} pullback matrices, got {len(action.pullback)}"]
    for q, mat in enumerate(action.pullback):
        if mat.rows != model.ranks[q] or mat.cols != model.ranks[q]:
            violations.append(
                f"pullback[{q}] is {mat.rows}x{mat.cols}, expected square of size {model.ranks[q]}"
            )
    if violations:
        return violations

    if action.pullback[0] != RationalMatrix.identity(model.ranks[0]):
        violations.append("pullback[0] must be the identity on the unit line")
    if action.degree < 1:
        violations.append(f"topological degree must be >= 1, got {action.degree}")
    if action.pullback[d] != RationalMatrix.scalar(model.ranks[d], action.degree):
        violations.append("pullback on the top codimension must be multiplication by the degree")
    for q, mat in enumerate(action.pullback):
        if not is_invertible(mat):
            violations.append(f"pullback[{q}] is singular; the action cannot be surjective")

    # ring-homomorphism compatibility on every basis pair
    for q1 in range(1, d + 1):
        for q2 in range(q1, d + 1 - q1):
            for i in range(model.ranks[q1]):
                ei = model.class_at(q1, [1 if t == i else 0 for t in range(model.ranks[q1])])
                fei = action.apply(ei)
                for j in range(model.ranks[q2]):
                    ej = model.class_at(q2, [1 if t == j else 0 for t in range(model.ranks[q2])])
                    lhs = action.apply(model.cup(ei, ej))
                    rhs = model.cup(fei, action.apply(ej))
                    if lhs != rhs:
                        violations.append(
                            f"pullback is not a ring map on basis pair (q={q1},i={i}) x (q={q2},j={j})"
                        )
    return violations


def validate_or_raise(action: EndoAction) -> EndoAction:
    violations = validate(action)
    if violations:
        raise ActionValidationError(violations)
    return action


def compose(outer: EndoAction, inner: EndoAction) -> EndoAction:
    """Action of outer // inner (apply inner first); pullbacks compose in reverse."""
    if outer.model is not inner.model and outer.model != inner.model:
        raise ValueError("cannot compose actions on different models")
    mats = tuple(
        mat_mul(pi, po) for pi, po in zip(inner.pullback, outer.pullback)
    )
    return EndoAction(
        model=outer.model,
        pullback=mats,
        degree=outer.degree * inner.degree,
        label=f"{outer.label}*{inner.label}",
    )


def identity_action(model: VarietyModel) -> EndoAction:
    mats = tuple(RationalMatrix.identity(r) for r in model.ranks)
    return EndoAction(model=model, pullback=mats, degree=1, label="identity")


def power_map_action(model: VarietyModel, k: int) -> EndoAction:
    """The action with f* = k^q on every codim-q class (degree k^dim).

    On projective spaces and their products this is the coordinate power
    map; the same matrices are a valid formal action on any model, since
    scaling by k^q is automatically a ring map.
    """
    if k < 1:
        raise ValueError("power map exponent must be >= 1")
    mats = tuple(RationalMatrix.scalar(model.ranks[q], k**q) for q in range(model.dim + 1))
    return EndoAction(model=model, pullback=mats, degree=k**model.dim, label=f"power_map k={k}")


def product_powers_action(model: VarietyModel, ks: Sequence[int]) -> EndoAction:
    """Coordinate-wise power map on a product of projective spaces.

    Factor i is raised to the power ks[i]; the pullback is diagonal on the
    monomial basis.
    """
    if model.kind != "product" or model.factor_dims is None:
        raise ValueError("product_powers requires a product-of-projective-spaces model")
    if len(ks) != len(model.factor_dims) or any(k < 1 for k in ks):
        raise ValueError("need one positive exponent per factor")
    from .varieties import _product_basis

    basis = _product_basis(model.factor_dims)
    mats = []
    for q in range(model.dim + 1):
        eigs = []
        for expo in basis[q]:
            value = 1
            for k, e in zip(ks, expo):
                value *= k**e
            eigs.append(value)
        mats.append(RationalMatrix.diagonal(eigs))
    degree = 1
    for k, dk in zip(ks, model.factor_dims):
        degree *= k**dk
    label = "product_powers (" + ",".join(str(k) for k in ks) + ")"
    return EndoAction(model=model, pullback=tuple(mats), degree=degree, label=label)


def abelian_action_from_matrix(model: VarietyModel, matrix: Sequence[Sequence[int]]) -> EndoAction:
    """Action on the rank-3 abelian surface induced by an integer 2x2 matrix.

    The matrix acts on the product of elliptic curves coordinate-wise; its
    pullback on the divisor lattice is derived from the exterior square of
    the induced rank-4 action on degree-1 cohomology, which keeps the
    (F1, F2, delta) span invariant.
    """
    if model.kind != "abelian_rank3":
        raise ValueError("abelian_matrix actions require the ExE-rank3 model")
    rows = [[int(v) for v in row] for row in matrix]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("abelian_matrix expects a 2x2 integer matrix")
    det_m = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if det_m == 0:
        raise ValueError("singular matrix does not define a surjective endomorphism")

    # degree-1 basis (a1, b1, a2, b2): one (a, b) pair of circle classes per factor;
    # the map mixes factors by M^T and leaves the pair type alone.
    a4 = [[Fraction(0)] * 4 for _ in range(4)]
    for fi in range(2):
        for fj in range(2):
            for t in range(2):
                a4[2 * fi + t][2 * fj + t] = Fraction(rows[fj][fi])
    pairs = list(itertools.combinations(range(4), 2))
    pair_index = {p: i for i, p in enumerate(pairs)}
    wedge = [[Fraction(0)] * 6 for _ in range(6)]
    for col, (a, b) in enumerate(pairs):
        for (c, dd) in pairs:
            wedge[pair_index[(c, dd)]][col] = a4[c][a] * a4[dd][b] - a4[dd][a] * a4[c][b]

    # divisor classes in wedge coordinates: F1 = a2^b2, F2 = a1^b1,
    # delta = -(a1^b2) + (b1^a2)
    f1 = [Fraction(0)] * 6
    f1[pair_index[(2, 3)]] = Fraction(1)
    f2 = [Fraction(0)] * 6
    f2[pair_index[(0, 1)]] = Fraction(1)
    delta = [Fraction(0)] * 6
    delta[pair_index[(0, 3)]] = Fraction(-1)
    delta[pair_index[(1, 2)]] = Fraction(1)

    span = RationalMatrix.from_rows(list(zip(f1, f2, delta)))
    wedge_mat = RationalMatrix.from_rows(wedge)
    images = mat_mul(wedge_mat, span)
    ns_action = solve_rectangular(span, images)

    degree = det_m * det_m
    mats = (
        RationalMatrix.identity(1),
        ns_action,
        RationalMatrix.scalar(1, degree),
    )
    label = f"abelian_matrix {rows}"
    return EndoAction(model=model, pullback=mats, degree=degree, label=label)


def action_from_dict(model: VarietyModel, spec) -> EndoAction:
    """Build an action from a parsed config mapping (helpers or raw matrices)."""
    if not isinstance(spec, dict):
        raise ValueError("action spec must be an object")
    helper = spec.get("helper")
    if helper == "identity" or helper == "coordinate_permutation":
        return identity_action(model)
    if helper == "power_map":
        return power_map_action(model, int(spec["k"]))
    if helper == "product_powers":
        return product_powers_action(model, [int(k) for k in spec["ks"]])
    if helper == "abelian_matrix":
        return abelian_action_from_matrix(model, spec["matrix"])
    if helper is not None:
        raise ValueError(f"unknown action helper {helper!r}")

    if "degree" not in spec or "pullback" not in spec:
        raise ValueError("raw action spec needs 'pullback' matrices and 'degree'")
    degree = int(spec["degree"])
    raw = spec["pullback"]
    mats: list[RationalMatrix] = []
    for q in range(model.dim + 1):
        entry = raw.get(str(q))
        if entry is not None:
            mats.append(
                RationalMatrix.from_rows(
                    [[as_rational(v) for v in row] for row in entry]
                )
            )
        elif q == 0:
            mats.append(RationalMatrix.identity(model.ranks[0]))
        elif q == model.dim:
            mats.append(RationalMatrix.scalar(model.ranks[q], degree))
        else:
            raise ValueError(f"missing pullback matrix for codimension {q}")
    return EndoAction(model=model, pullback=tuple(mats), degree=degree, label="config action")


# ---------------------------------------------------------------------------
# dynamical degrees
# ---------------------------------------------------------------------------


def intersection_sequence(action: EndoAction, q: int, n: int) -> Fraction:
    """Exact value of the degree pairing of (f*)^n (c1L^q) against c1L^(d-q)."""
    model = action.model
    if not 0 <= q <= model.dim:
        raise ValueError(f"codimension {q} outside [0, {model.dim}]")
    if n < 0:
        raise ValueError("negative iterate")
    lq = model.power_class(model.c1L, q)
    moved = mat_pow(action.pullback[q], n).apply(lq.components[q])
    moved_class = model.class_at(q, moved)
    rest = model.power_class(model.c1L, model.dim - q)
    return model.integrate(model.cup(moved_class, rest))


@dataclass(frozen=True)
class DegreeRoutes:
    """Eigenvalue-route interval and sequence-route estimate for one d_q."""

    eigen: SpectralInterval
    seq: float
    seq_residual: float
    seq_reliable: bool


def dynamical_degree(
    action: EndoAction,
    q: int,
    tol: Fraction = DEFAULT_TOL,
    n_max: int = 48,
) -> DegreeRoutes:
    """The q-th dynamical degree along both routes.

    The eigen route is the certified spectral radius of the codim-q
    pullback; the sequence route exponentiates the least-squares slope of
    log intersection numbers over the window [n_max/2, n_max].  The two
    agree in the limit; the residual flags windows that are too noisy.
    """
    if n_max < 8:
        raise ValueError("n_max too small for the sequence route")
    eigen = spectral_radius(action.pullback[q], tol)

    model = action.model
    lq = model.power_class(model.c1L, q)
    rest = model.power_class(model.c1L, model.dim - q)
    start = n_max // 2
    xs: list[float] = []
    ys: list[float] = []
    vec = lq.components[q]
    for n in range(1, n_max + 1):
        vec = action.pullback[q].apply(vec)
        if n < start:
            continue
        value = model.integrate(model.cup(model.class_at(q, vec), rest))
        if value <= 0:
            raise ValueError(
                f"nonpositive intersection number at n={n}: the sequence route needs positivity"
            )
        xs.append(float(n))
        ys.append(log_rational(value))
    fit = statistics.linear_regression(xs, ys)
    residual = max(abs(y - (fit.slope * x + fit.intercept)) for x, y in zip(xs, ys))
    return DegreeRoutes(
        eigen=eigen,
        seq=math.exp(fit.slope),
        seq_residual=residual,
        seq_reliable=residual < SEQ_RESIDUAL_LIMIT,
    )


def multiplicity(action: EndoAction, q: int, tol: Fraction = DEFAULT_TOL, n_max: int = 64) -> int:
    """Size of the largest Jordan block at the maximal eigenvalue modulus of pullback[q]."""
    return growth_order(action.pullback[q], tol, n_max).multiplicity


# ---------------------------------------------------------------------------
# catalogue of example actions used across the verification suites
# ---------------------------------------------------------------------------


def builtin_actions() -> list[EndoAction]:
    """Deterministic list of (model, action) examples with known dynamics."""
    cases: list[EndoAction] = []
    for d in (1, 2, 3):
        model = projective_space(d)
        for k in (2, 3):
            cases.append(power_map_action(model, k))
        cases.append(identity_action(model))
    from .varieties import product_projective_model

    p1p1 = product_projective_model([1, 1], name="P1xP1")
    cases.append(product_powers_action(p1p1, [2, 3]))
    cases.append(power_map_action(p1p1, 2))
    cases.append(identity_action(p1p1))
    exe = abelian_surface_rank3()
    cases.append(abelian_action_from_matrix(exe, [[1, 1], [1, 0]]))
    cases.append(identity_action(exe))
    return cases
