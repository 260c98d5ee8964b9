"""Finite presentations of numerical intersection rings.

A :class:`VarietyModel` packages everything the rest of the library needs
about a smooth projective variety at the numerical level: graded bases of
the algebraic (q, q) classes, cup-product structure constants, the degree
functional, a fixed ample divisor class, the canonical class and the Todd
class.  Built-in constructors cover products of projective spaces and a
rank-3 abelian surface; arbitrary models load from exact-rational config
text.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .linalg import RationalMatrix, is_invertible
from .rational import as_rational

CupTensor = tuple[tuple[tuple[Fraction, ...], ...], ...]  # [i][j][k]


class ModelValidationError(ValueError):
    """A model config parsed but violates the ring axioms."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class GradedClass:
    """An element of the total intersection ring: one coordinate vector per codimension."""

    components: tuple[tuple[Fraction, ...], ...]

    @property
    def top_codim(self) -> int:
        return len(self.components) - 1

    def component(self, q: int) -> tuple[Fraction, ...]:
        return self.components[q]

    def __add__(self, other: "GradedClass") -> "GradedClass":
        return GradedClass(
            tuple(
                tuple(a + b for a, b in zip(c1, c2))
                for c1, c2 in zip(self.components, other.components)
            )
        )

    def __sub__(self, other: "GradedClass") -> "GradedClass":
        return self + (-other)

    def __neg__(self) -> "GradedClass":
        return self.scale(-1)

    def scale(self, factor) -> "GradedClass":
        c = as_rational(factor)
        return GradedClass(tuple(tuple(c * a for a in comp) for comp in self.components))

    def is_zero(self) -> bool:
        return all(a == 0 for comp in self.components for a in comp)

    def concentrated_in(self, q: int) -> bool:
        return all(
            a == 0 for p, comp in enumerate(self.components) if p != q for a in comp
        )


@dataclass(frozen=True)
class VarietyModel:
    """Numerical intersection ring of a d-dimensional smooth projective variety."""

    name: str
    kind: str  # "product" | "abelian_rank3" | "custom"
    dim: int
    ranks: tuple[int, ...]
    cup_tensors: Mapping[tuple[int, int], CupTensor]  # keys (q1, q2), q1 <= q2
    integration: tuple[Fraction, ...]  # functional on the codim-d component
    c1L: "GradedClass"
    canonical: "GradedClass"
    todd: "GradedClass"
    canonical_ample: bool
    anticanonical_ample: bool
    factor_dims: Optional[tuple[int, ...]] = None
    ample_test: Optional[Callable[[tuple[Fraction, ...]], bool]] = field(
        default=None, compare=False, repr=False
    )

    # -- class constructors -------------------------------------------------

    def zero_class(self) -> GradedClass:
        return GradedClass(tuple(tuple(Fraction(0) for _ in range(r)) for r in self.ranks))

    def unit_class(self) -> GradedClass:
        comps = [[Fraction(0)] * r for r in self.ranks]
        comps[0][0] = Fraction(1)
        return GradedClass(tuple(tuple(c) for c in comps))

    def class_at(self, q: int, coeffs: Sequence) -> GradedClass:
        if not 0 <= q <= self.dim:
            raise ValueError(f"codimension {q} outside [0, {self.dim}]")
        vec = [as_rational(c) for c in coeffs]
        if len(vec) != self.ranks[q]:
            raise ValueError(
                f"codim-{q} coordinate vector has length {len(vec)}, expected {self.ranks[q]}"
            )
        comps = [[Fraction(0)] * r for r in self.ranks]
        comps[q] = vec
        return GradedClass(tuple(tuple(c) for c in comps))

    def divisor_class(self, coeffs: Sequence) -> GradedClass:
        return self.class_at(1, coeffs)

    def _check_conforms(self, x: GradedClass) -> None:
        if x.top_codim != self.dim or any(
            len(x.components[q]) != self.ranks[q] for q in range(self.dim + 1)
        ):
            raise ValueError("graded class does not conform to the model ranks")

    # -- ring operations -----------------------------------------------------

    def cup(self, x: GradedClass, y: GradedClass) -> GradedClass:
        """Graded product; components beyond the dimension vanish."""
        self._check_conforms(x)
        self._check_conforms(y)
        out = [[Fraction(0)] * r for r in self.ranks]
        for q1 in range(self.dim + 1):
            xc = x.components[q1]
            if all(a == 0 for a in xc):
                continue
            for q2 in range(self.dim + 1 - q1):
                yc = y.components[q2]
                if all(a == 0 for a in yc):
                    continue
                target = out[q1 + q2]
                if q1 == 0:
                    for k, b in enumerate(yc):
                        target[k] += xc[0] * b
                elif q2 == 0:
                    for k, a in enumerate(xc):
                        target[k] += a * yc[0]
                else:
                    qa, qb = (q1, q2) if q1 <= q2 else (q2, q1)
                    ca, cb = (xc, yc) if q1 <= q2 else (yc, xc)
                    tensor = self.cup_tensors[(qa, qb)]
                    for i, a in enumerate(ca):
                        if a == 0:
                            continue
                        for j, b in enumerate(cb):
                            if b == 0:
                                continue
                            row = tensor[i][j]
                            ab = a * b
                            for k, t in enumerate(row):
                                if t:
                                    target[k] += ab * t
        return GradedClass(tuple(tuple(c) for c in out))

    def integrate(self, x: GradedClass) -> Fraction:
        """Degree functional on the codim-d component; lower parts are ignored."""
        self._check_conforms(x)
        return sum(
            (w * a for w, a in zip(self.integration, x.components[self.dim])),
            Fraction(0),
        )

    def power_class(self, x: GradedClass, k: int) -> GradedClass:
        if k < 0:
            raise ValueError("negative cup power")
        result = self.unit_class()
        for _ in range(k):
            result = self.cup(result, x)
        return result

    def pairing_matrix(self, q: int) -> RationalMatrix:
        """Matrix of (x, y) -> integrate(x cup y) between codims q and d - q."""
        comp = self.dim - q
        rows = []
        for i in range(self.ranks[q]):
            ei = self.class_at(q, [1 if t == i else 0 for t in range(self.ranks[q])])
            row = []
            for j in range(self.ranks[comp]):
                ej = self.class_at(comp, [1 if t == j else 0 for t in range(self.ranks[comp])])
                row.append(self.integrate(self.cup(ei, ej)))
            rows.append(row)
        return RationalMatrix.from_rows(rows)

    # -- positivity ----------------------------------------------------------

    def is_ample(self, divisor: GradedClass) -> bool:
        """Ample-cone membership; exact for the built-in kinds, a numerical
        surrogate (positivity against all complementary powers of c1L) for
        custom models."""
        self._check_conforms(divisor)
        if not divisor.concentrated_in(1):
            raise ValueError("ampleness test expects a codim-1 class")
        coeffs = divisor.components[1]
        if self.ample_test is not None:
            return self.ample_test(coeffs)
        for q in range(1, self.dim + 1):
            power = self.power_class(divisor, q)
            rest = self.power_class(self.c1L, self.dim - q)
            if self.integrate(self.cup(power, rest)) <= 0:
                return False
        return True

    # -- validation ----------------------------------------------------------

    def validate(self) -> list[str]:
        """All ring invariants, checked exactly.  Returns violation messages."""
        violations: list[str] = []
        d = self.dim
        if len(self.ranks) != d + 1 or any(r < 1 for r in self.ranks):
            violations.append("ranks must list a positive basis size for each codimension")
            return violations
        if self.ranks[0] != 1:
            violations.append("codim-0 must be the rank-1 unit line")
        for q1 in range(1, d + 1):
            for q2 in range(q1, d + 1 - q1):
                tensor = self.cup_tensors.get((q1, q2))
                if tensor is None:
                    violations.append(f"missing cup tensor for codims ({q1}, {q2})")
                    continue
                shape_ok = len(tensor) == self.ranks[q1] and all(
                    len(row) == self.ranks[q2]
                    and all(len(cell) == self.ranks[q1 + q2] for cell in row)
                    for row in tensor
                )
                if not shape_ok:
                    violations.append(f"cup tensor ({q1}, {q2}) has the wrong shape")
        if violations:
            return violations

        # commutativity within equal grades (mixed grades are symmetric by storage)
        for q1 in range(1, d // 2 + 1):
            q2 = q1
            if q1 + q2 > d:
                continue
            tensor = self.cup_tensors[(q1, q2)]
            for i in range(self.ranks[q1]):
                for j in range(self.ranks[q2]):
                    if tensor[i][j] != tensor[j][i]:
                        violations.append(
                            f"cup not commutative on basis pair (q={q1}, i={i}) x (q={q2}, j={j})"
                        )
        # associativity on all basis triples with total codim <= d
        for q1 in range(1, d + 1):
            for q2 in range(1, d + 1 - q1):
                for q3 in range(1, d + 1 - q1 - q2):
                    for i in range(self.ranks[q1]):
                        ei = self.class_at(q1, _unit_vec(self.ranks[q1], i))
                        for j in range(self.ranks[q2]):
                            ej = self.class_at(q2, _unit_vec(self.ranks[q2], j))
                            left = self.cup(ei, ej)
                            for k in range(self.ranks[q3]):
                                ek = self.class_at(q3, _unit_vec(self.ranks[q3], k))
                                lhs = self.cup(left, ek)
                                rhs = self.cup(ei, self.cup(ej, ek))
                                if lhs != rhs:
                                    violations.append(
                                        "cup not associative on basis triple "
                                        f"(q={q1},i={i}) (q={q2},j={j}) (q={q3},k={k})"
                                    )
        if self.todd.components[0] != (Fraction(1),):
            violations.append("Todd class must start with td_0 = 1")
        if not self.c1L.concentrated_in(1):
            violations.append("c1L must be concentrated in codim 1")
        if not self.canonical.concentrated_in(1) and not self.canonical.is_zero():
            violations.append("canonical class must be concentrated in codim 1")
        for q in range(d + 1):
            if self.ranks[q] != self.ranks[d - q]:
                violations.append(
                    f"rank mismatch {self.ranks[q]} vs {self.ranks[d-q]} between codims {q} and {d-q}"
                )
            elif not is_invertible(self.pairing_matrix(q)):
                violations.append(f"degenerate pairing between codims {q} and {d - q}")
        top = self.integrate(self.power_class(self.c1L, d))
        if top <= 0:
            violations.append(f"c1L is not ample: integral of c1L^{d} is {top}")
        return violations


def _unit_vec(n: int, i: int) -> list[int]:
    return [1 if t == i else 0 for t in range(n)]


# ---------------------------------------------------------------------------
# built-in models
# ---------------------------------------------------------------------------


def _todd_series(order: int) -> list[Fraction]:
    """Coefficients of x / (1 - exp(-x)) up to the given degree."""
    lower = [Fraction((-1) ** k, math.factorial(k + 1)) for k in range(order + 1)]
    series = [Fraction(0)] * (order + 1)
    series[0] = Fraction(1)
    for n in range(1, order + 1):
        series[n] = -sum((lower[k] * series[n - k] for k in range(1, n + 1)), Fraction(0))
    return series


def _product_basis(dims: Sequence[int]) -> dict[int, list[tuple[int, ...]]]:
    total = sum(dims)
    basis: dict[int, list[tuple[int, ...]]] = {q: [] for q in range(total + 1)}
    for expo in itertools.product(*(range(dk + 1) for dk in dims)):
        basis[sum(expo)].append(expo)
    for q in basis:
        basis[q].sort()
    return basis


def product_projective_model(dims: Sequence[int], name: str | None = None) -> VarietyModel:
    """Numerical ring of a product of projective spaces P^{d1} x ... x P^{dm}.

    The codim-q basis is the set of monomials in the hyperplane classes of
    the factors; c1L is their sum (the Segre polarization) and the ample
    cone is the positive orthant.
    """
    dims = tuple(int(dk) for dk in dims)
    if not dims or any(dk < 1 for dk in dims):
        raise ValueError("each factor must have positive dimension")
    d = sum(dims)
    basis = _product_basis(dims)
    index = {q: {expo: i for i, expo in enumerate(basis[q])} for q in basis}
    ranks = tuple(len(basis[q]) for q in range(d + 1))

    tensors: dict[tuple[int, int], CupTensor] = {}
    for q1 in range(1, d + 1):
        for q2 in range(q1, d + 1 - q1):
            tensor = []
            for e1 in basis[q1]:
                row = []
                for e2 in basis[q2]:
                    target = tuple(a + b for a, b in zip(e1, e2))
                    cell = [Fraction(0)] * ranks[q1 + q2]
                    if all(t <= dk for t, dk in zip(target, dims)):
                        cell[index[q1 + q2][target]] = Fraction(1)
                    row.append(tuple(cell))
                tensor.append(tuple(row))
            tensors[(q1, q2)] = tuple(tensor)

    def monomial_dict_to_class(poly: dict[tuple[int, ...], Fraction]) -> GradedClass:
        comps = [[Fraction(0)] * r for r in ranks]
        for expo, coeff in poly.items():
            q = sum(expo)
            comps[q][index[q][expo]] = coeff
        return GradedClass(tuple(tuple(c) for c in comps))

    # td of the product: the factor P^{d_k} contributes (x_k/(1-e^{-x_k}))^(d_k+1)
    todd_poly: dict[tuple[int, ...], Fraction] = {(0,) * len(dims): Fraction(1)}
    for k, dk in enumerate(dims):
        factor_poly = {
            tuple(e if t == k else 0 for t in range(len(dims))): coeff
            for e, coeff in enumerate(_todd_series(dk))
        }
        for _ in range(dk + 1):
            merged: dict[tuple[int, ...], Fraction] = {}
            for e1, c1 in todd_poly.items():
                for e2, c2 in factor_poly.items():
                    target = tuple(a + b for a, b in zip(e1, e2))
                    if all(t <= cap for t, cap in zip(target, dims)):
                        merged[target] = merged.get(target, Fraction(0)) + c1 * c2
            todd_poly = merged

    todd = monomial_dict_to_class(todd_poly)
    unit_exps = [
        tuple(1 if t == k else 0 for t in range(len(dims))) for k in range(len(dims))
    ]
    c1l_coeffs = [Fraction(0)] * ranks[1]
    canonical_coeffs = [Fraction(0)] * ranks[1]
    for k, expo in enumerate(unit_exps):
        c1l_coeffs[index[1][expo]] = Fraction(1)
        canonical_coeffs[index[1][expo]] = Fraction(-(dims[k] + 1))

    integration = tuple(
        Fraction(1) if expo == dims else Fraction(0) for expo in basis[d]
    )

    def ample(coeffs: tuple[Fraction, ...]) -> bool:
        return all(c > 0 for c in coeffs)

    model_name = name or (f"Pd:{dims[0]}" if len(dims) == 1 else "x".join(f"P{dk}" for dk in dims))
    comps0 = [[Fraction(0)] * r for r in ranks]
    comps0[1] = c1l_coeffs
    compsK = [[Fraction(0)] * r for r in ranks]
    compsK[1] = canonical_coeffs
    return VarietyModel(
        name=model_name,
        kind="product",
        dim=d,
        ranks=ranks,
        cup_tensors=tensors,
        integration=integration,
        c1L=GradedClass(tuple(tuple(c) for c in comps0)),
        canonical=GradedClass(tuple(tuple(c) for c in compsK)),
        todd=todd,
        canonical_ample=False,
        anticanonical_ample=True,
        factor_dims=dims,
        ample_test=ample,
    )


def projective_space(d: int) -> VarietyModel:
    return product_projective_model([d])


def abelian_surface_rank3() -> VarietyModel:
    """A product of two elliptic curves with generic Neron-Severi rank 3.

    The divisor basis is (F1, F2, delta): the two fiber classes and the
    diagonal class shifted to pair trivially with them (delta^2 = -2).
    The Todd class is trivial and neither the canonical class nor its
    inverse is ample.
    """
    pt = Fraction(1)
    gram = [
        [Fraction(0), Fraction(1), Fraction(0)],
        [Fraction(1), Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(-2)],
    ]
    tensor = tuple(
        tuple((gram[i][j] * pt,) for j in range(3)) for i in range(3)
    )
    ranks = (1, 3, 1)

    def ample(coeffs: tuple[Fraction, ...]) -> bool:
        a, b, c = coeffs
        return a + b > 0 and a * b - c * c > 0

    zero1 = (Fraction(0),) * 3
    return VarietyModel(
        name="ExE-rank3",
        kind="abelian_rank3",
        dim=2,
        ranks=ranks,
        cup_tensors={(1, 1): tensor},
        integration=(Fraction(1),),
        c1L=GradedClass(((Fraction(0),), (Fraction(1), Fraction(1), Fraction(0)), (Fraction(0),))),
        canonical=GradedClass(((Fraction(0),), zero1, (Fraction(0),))),
        todd=GradedClass(((Fraction(1),), zero1, (Fraction(0),))),
        canonical_ample=False,
        anticanonical_ample=False,
        factor_dims=None,
        ample_test=ample,
    )


def builtin_model(name: str) -> VarietyModel:
    """Resolve a built-in model name: "Pd:<n>", "P1xP1", "PxP:<a>,<b>",
    "P1^<m>" or "ExE-rank3"."""
    text = name.strip()
    if text.startswith("Pd:"):
        d = int(text[3:])
        if d < 1:
            raise ValueError("projective space dimension must be >= 1")
        return product_projective_model([d], name=text)
    if text == "P1xP1":
        return product_projective_model([1, 1], name=text)
    if text.startswith("PxP:"):
        parts = [int(p) for p in text[4:].split(",")]
        if len(parts) != 2:
            raise ValueError("PxP:<a>,<b> expects two factor dimensions")
        return product_projective_model(parts, name=text)
    if text.startswith("P1^"):
        m = int(text[3:])
        if m < 1:
            raise ValueError("P1^<m> expects m >= 1")
        return product_projective_model([1] * m, name=text)
    if text == "ExE-rank3":
        return abelian_surface_rank3()
    raise ValueError(f"unknown built-in model {name!r}")


BUILTIN_MODEL_NAMES = ("Pd:1", "Pd:2", "Pd:3", "P1xP1", "ExE-rank3")


# ---------------------------------------------------------------------------
# config loading
# ---------------------------------------------------------------------------


def _reject_float(text: str):
    raise ValueError(
        f"floating-point literal {text!r} in model config; write exact rationals as \"p/q\""
    )


def strict_json_loads(text: str):
    """JSON with all float forms rejected; rationals must be ints or "p/q" strings."""
    return json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)


def model_from_dict(spec) -> VarietyModel:
    """Build and validate a model from a parsed config value (name or mapping)."""
    if isinstance(spec, str):
        return builtin_model(spec)
    if not isinstance(spec, dict):
        raise ValueError("model spec must be a built-in name or an object")
    if "builtin" in spec:
        return builtin_model(spec["builtin"])

    try:
        dim = int(spec["dim"])
        ranks = tuple(int(r) for r in spec["ranks"])
        raw_cup = spec["cup"]
        integration = tuple(as_rational(v) for v in spec["integrate"])
        c1l_coeffs = [as_rational(v) for v in spec["c1L"]]
        canonical_coeffs = [as_rational(v) for v in spec["canonical"]]
        todd_comps = [[as_rational(v) for v in comp] for comp in spec["todd"]]
    except KeyError as exc:
        raise ValueError(f"model config missing required key {exc.args[0]!r}") from exc

    tensors: dict[tuple[int, int], CupTensor] = {}
    for key, raw in raw_cup.items():
        q1_str, _, q2_str = key.partition(",")
        q1, q2 = int(q1_str), int(q2_str)
        tensors[(q1, q2)] = tuple(
            tuple(tuple(as_rational(v) for v in cell) for cell in row) for row in raw
        )

    def graded(comps: list[list[Fraction]]) -> GradedClass:
        return GradedClass(tuple(tuple(c) for c in comps))

    def codim1(coeffs: list[Fraction]) -> GradedClass:
        comps = [[Fraction(0)] * r for r in ranks]
        comps[1] = coeffs
        return graded(comps)

    model = VarietyModel(
        name=str(spec.get("name", "custom")),
        kind="custom",
        dim=dim,
        ranks=ranks,
        cup_tensors=tensors,
        integration=integration,
        c1L=codim1(c1l_coeffs),
        canonical=codim1(canonical_coeffs),
        todd=graded(todd_comps),
        canonical_ample=bool(spec.get("canonical_ample", False)),
        anticanonical_ample=bool(spec.get("anticanonical_ample", False)),
        factor_dims=None,
        ample_test=None,
    )
    violations = model.validate()
    if violations:
        raise ModelValidationError(violations)
    return model


def load_model(config_text: str) -> VarietyModel:
    """Parse model config text: either a bare built-in name or a JSON object."""
    stripped = config_text.strip()
    if not stripped.startswith("{"):
        return builtin_model(stripped)
    return model_from_dict(strict_json_loads(stripped))
