"""Chern characters, the Euler pairing, and induced actions on the numerical
Grothendieck lattice.

The numerical Grothendieck group is coordinatized by Chern characters: its
basis is the union of the graded bases of the model's intersection ring.
Under that identification a surjective endomorphism acts block-diagonally
by its pullback matrices, and twisting by a line bundle acts by the
unipotent matrix of multiplication by its Chern character.  Euler pairings
are computed by the Riemann-Roch integral, exactly.

For projective space the sheaf-cohomology dimensions of line bundles are
available in closed form, which powers the weighted Hom-dimension sums
used by the entropy-at-parameter computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .endomorphisms import EndoAction
from .linalg import RationalMatrix, mat_mul
from .varieties import GradedClass, VarietyModel


@dataclass(frozen=True)
class KTerm:
    """One summand O(divisor)[shift] with a positive multiplicity."""

    divisor: GradedClass
    shift: int = 0
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicities must be >= 1")


@dataclass(frozen=True)
class KClassSum:
    """A formal direct sum of shifted line bundles."""

    terms: tuple[KTerm, ...]


def line_bundle_sum(model: VarietyModel, entries: Sequence[tuple]) -> KClassSum:
    """Build a KClassSum from (divisor coefficients | GradedClass, shift, mult) triples."""
    terms = []
    for divisor, shift, mult in entries:
        if not isinstance(divisor, GradedClass):
            divisor = model.divisor_class(divisor)
        terms.append(KTerm(divisor=divisor, shift=int(shift), multiplicity=int(mult)))
    return KClassSum(tuple(terms))


def chern_character(model: VarietyModel, divisor: GradedClass) -> GradedClass:
    """exp(divisor) truncated at the dimension: sum of D^q / q!."""
    model._check_conforms(divisor)
    if not divisor.concentrated_in(1):
        raise ValueError("Chern character input must be concentrated in codim 1")
    result = model.unit_class()
    power = model.unit_class()
    for q in range(1, model.dim + 1):
        power = model.cup(power, divisor)
        result = result + power.scale(Fraction(1, math.factorial(q)))
    return result


def euler_form(model: VarietyModel, source: KClassSum, target: KClassSum) -> Fraction:
    """Alternating-sum Hom pairing chi(source, target) via the Riemann-Roch integral.

    A shift difference s contributes the sign (-1)^s; multiplicities
    multiply.
    """
    total = Fraction(0)
    for t_m in source.terms:
        ch_dual = chern_character(model, -t_m.divisor)
        weighted = model.cup(ch_dual, model.todd)
        for t_n in target.terms:
            ch_target = chern_character(model, t_n.divisor)
            sign = -1 if (t_n.shift - t_m.shift) % 2 else 1
            value = model.integrate(model.cup(weighted, ch_target))
            total += sign * t_m.multiplicity * t_n.multiplicity * value
    return total


# ---------------------------------------------------------------------------
# induced actions on the numerical lattice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericalAction:
    """An endomorphism of the numerical Grothendieck lattice in Chern coordinates."""

    matrix: RationalMatrix
    offsets: tuple[int, ...]  # start of each codimension block
    model_name: str


def _offsets(model: VarietyModel) -> tuple[int, ...]:
    offs = []
    total = 0
    for r in model.ranks:
        offs.append(total)
        total += r
    return tuple(offs)


def endo_K_action(action: EndoAction) -> NumericalAction:
    """Block-diagonal matrix of the derived pullback in Chern coordinates."""
    model = action.model
    offs = _offsets(model)
    size = sum(model.ranks)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for q, block in enumerate(action.pullback):
        base = offs[q]
        for i in range(block.rows):
            for j in range(block.cols):
                rows[base + i][base + j] = block[i, j]
    return NumericalAction(
        matrix=RationalMatrix.from_rows(rows), offsets=offs, model_name=model.name
    )


def twist_action(model: VarietyModel, divisor: GradedClass) -> NumericalAction:
    """Matrix of multiplication by ch(O(divisor)): unipotent, lower-triangular by codim."""
    model._check_conforms(divisor)
    ch = chern_character(model, divisor)
    offs = _offsets(model)
    size = sum(model.ranks)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for q in range(model.dim + 1):
        for i in range(model.ranks[q]):
            basis_vec = model.class_at(q, [1 if t == i else 0 for t in range(model.ranks[q])])
            image = model.cup(ch, basis_vec)
            col = offs[q] + i
            for p in range(model.dim + 1):
                for k, value in enumerate(image.components[p]):
                    if value:
                        rows[offs[p] + k][col] = value
    return NumericalAction(
        matrix=RationalMatrix.from_rows(rows), offsets=offs, model_name=model.name
    )


def autoeq_action(
    model: VarietyModel,
    f_action: EndoAction,
    twist_divisor: GradedClass,
    shift: int,
) -> NumericalAction:
    """Lattice action of the standard autoequivalence: pullback after twist,
    with the shift contributing a global sign."""
    if f_action.degree != 1:
        raise ValueError("standard autoequivalences require an automorphism (degree 1)")
    pull = endo_K_action(f_action)
    twist = twist_action(model, twist_divisor)
    matrix = mat_mul(pull.matrix, twist.matrix)
    if shift % 2:
        matrix = matrix.scale(-1)
    return NumericalAction(matrix=matrix, offsets=pull.offsets, model_name=model.name)


# ---------------------------------------------------------------------------
# projective-space cohomology in closed form
# ---------------------------------------------------------------------------


def bott_h_dim(dim: int, a: int, m: int) -> int:
    """dim H^m(P^dim, O(a)): sections for m = 0, Serre duals for m = dim, else 0."""
    if not 0 <= m <= dim:
        raise ValueError(f"cohomological degree {m} outside [0, {dim}]")
    if m == 0 and a >= 0:
        return math.comb(a + dim, dim)
    if m == dim and a <= -dim - 1:
        return math.comb(-a - 1, dim)
    return 0


PdTerm = tuple[int, int, int]  # (H-degree, shift, multiplicity)


def weighted_hom_sum(
    dim: int,
    source: Sequence[PdTerm],
    target: Sequence[PdTerm],
    t: float,
) -> float:
    """Sum of Hom-space dimensions between sums of line bundles on P^dim,
    weighted by exp(-m t) over the cohomological degree m.

    Dimensions are exact integers from the closed-form cohomology of
    O(a); only the exponential weights live in floating point.
    """
    total = 0.0
    for a, s1, m1 in source:
        for b, s2, m2 in target:
            for level in range(dim + 1):
                h = bott_h_dim(dim, b - a, level)
                if h:
                    hom_degree = level - s2 + s1
                    total += m1 * m2 * h * math.exp(-hom_degree * t)
    return total


def log_weighted_hom_sum(
    dim: int,
    source: Sequence[PdTerm],
    target: Sequence[PdTerm],
    t: float,
) -> float:
    """log of :func:`weighted_hom_sum`, stable when dimensions exceed float range."""
    logs: list[float] = []
    for a, s1, m1 in source:
        for b, s2, m2 in target:
            for level in range(dim + 1):
                h = bott_h_dim(dim, b - a, level)
                if h:
                    hom_degree = level - s2 + s1
                    logs.append(math.log(m1 * m2 * h) - hom_degree * t)
    if not logs:
        raise ValueError("all Hom dimensions vanish; the weighted sum has no log")
    peak = max(logs)
    return peak + math.log(sum(math.exp(v - peak) for v in logs))


def pd_degree(model: VarietyModel, divisor: GradedClass) -> int:
    """Integer H-multiple of a divisor on a P^d model; errors otherwise."""
    if model.kind != "product" or model.factor_dims is None or len(model.factor_dims) != 1:
        raise ValueError("integer line-bundle degrees only make sense on a single P^d model")
    coeff = divisor.components[1][0]
    if coeff.denominator != 1:
        raise ValueError(f"divisor {coeff} is not an integer multiple of the hyperplane class")
    return int(coeff)
