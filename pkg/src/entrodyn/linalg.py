"""Exact linear algebra over the rationals.

Matrices are small (lattice ranks of the model varieties, dimension well
under a hundred), so everything here favours exactness and clarity over
asymptotics: classical multiplication, binary powering, Faddeev-LeVerrier
characteristic polynomials and fraction Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import as_rational


@dataclass(frozen=True)
class RationalMatrix:
    """An immutable matrix with exact rational entries, stored by rows."""

    entries: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "RationalMatrix":
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix needs at least one row and one column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged rows")
        return RationalMatrix(data)

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix(
            tuple(
                tuple(Fraction(1 if i == j else 0) for j in range(n))
                for i in range(n)
            )
        )

    @staticmethod
    def zeros(rows: int, cols: int) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def diagonal(values: Sequence) -> "RationalMatrix":
        vals = [as_rational(v) for v in values]
        n = len(vals)
        return RationalMatrix(
            tuple(tuple(vals[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))
        )

    @staticmethod
    def scalar(n: int, value) -> "RationalMatrix":
        return RationalMatrix.diagonal([as_rational(value)] * n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in addition")
        return RationalMatrix(
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def scale(self, factor) -> "RationalMatrix":
        c = as_rational(factor)
        return RationalMatrix(tuple(tuple(c * a for a in row) for row in self.entries))

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            return mat_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries)))

    def trace(self) -> Fraction:
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    def apply(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix-vector product; vectors are coordinate columns."""
        if len(vector) != self.cols:
            raise ValueError("dimension mismatch in matrix-vector product")
        return tuple(
            sum((a * v for a, v in zip(row, vector)), Fraction(0)) for row in self.entries
        )

    def one_norm(self) -> Fraction:
        """Maximum absolute column sum."""
        return max(
            sum((abs(self.entries[i][j]) for i in range(self.rows)), Fraction(0))
            for j in range(self.cols)
        )

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.entries for a in row)


def mat_mul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Exact matrix product."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    bt = b.transpose().entries
    return RationalMatrix(
        tuple(
            tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt)
            for row in a.entries
        )
    )


def mat_pow(m: RationalMatrix, n: int) -> RationalMatrix:
    """m ** n by binary exponentiation, with m ** 0 the identity."""
    if not m.is_square:
        raise ValueError("power of a non-square matrix")
    if n < 0:
        raise ValueError("negative matrix power")
    result = RationalMatrix.identity(m.rows)
    base = m
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


@dataclass(frozen=True)
class CharPoly:
    """A monic polynomial with rational coefficients, ascending by degree."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coefficients) < 2:
            raise ValueError("characteristic polynomial must have degree >= 1")
        if self.coefficients[-1] != 1:
            raise ValueError("characteristic polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x) -> Fraction:
        value = Fraction(0)
        for c in reversed(self.coefficients):
            value = value * as_rational(x) + c
        return value

    def evaluate_matrix(self, m: RationalMatrix) -> RationalMatrix:
        """p(m), used to check the Cayley-Hamilton identity exactly."""
        result = RationalMatrix.zeros(m.rows, m.cols)
        power = RationalMatrix.identity(m.rows)
        for c in self.coefficients:
            result = result + power.scale(c)
            power = mat_mul(power, m)
        return result


def char_poly(m: RationalMatrix) -> CharPoly:
    """Monic characteristic polynomial det(xI - m) by Faddeev-LeVerrier.

    Exact rational traces at every step; fine for the small lattice
    dimensions handled here.
    """
    if not m.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs: list[Fraction] = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    aux = RationalMatrix.zeros(n, n)
    eye = RationalMatrix.identity(n)
    for k in range(1, n + 1):
        aux = mat_mul(m, aux) + eye.scale(coeffs[n - k + 1])
        coeffs[n - k] = -mat_mul(m, aux).trace() / k
    return CharPoly(tuple(coeffs))


def det(m: RationalMatrix) -> Fraction:
    """Exact determinant via the characteristic polynomial constant term."""
    p = char_poly(m)
    value = p.coefficients[0]
    return value if m.rows % 2 == 0 else -value


def solve(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Solve a @ x = b exactly by Gaussian elimination.

    Raises ValueError when ``a`` is singular or the system is inconsistent.
    """
    if not a.is_square:
        raise ValueError("solve expects a square coefficient matrix")
    if a.rows != b.rows:
        raise ValueError("dimension mismatch between system and right-hand side")
    n = a.rows
    width = b.cols
    work = [list(ra) + list(rb) for ra, rb in zip(a.entries, b.entries)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [v * inv for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return RationalMatrix.from_rows([row[n : n + width] for row in work])


def solve_rectangular(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """Exact solution of a tall consistent system a @ x = b with full column rank.

    Used to express vectors in the coordinates of an invariant subspace;
    raises ValueError when the system is inconsistent (subspace not
    preserved) or the columns are dependent.
    """
    n, k = a.rows, a.cols
    width = b.cols
    work = [list(ra) + list(rb) for ra, rb in zip(a.entries, b.entries)]
    pivot_rows: list[int] = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ValueError("columns are linearly dependent")
        work[row], work[pivot] = work[pivot], work[row]
        inv = 1 / work[row][col]
        work[row] = [v * inv for v in work[row]]
        for r in range(n):
            if r != row and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[row])]
        pivot_rows.append(row)
        row += 1
    for r in range(row, n):
        if any(v != 0 for v in work[r][k:]):
            raise ValueError("inconsistent system: vector outside the subspace")
    return RationalMatrix.from_rows([work[r][k : k + width] for r in pivot_rows])


def inverse(m: RationalMatrix) -> RationalMatrix:
    return solve(m, RationalMatrix.identity(m.rows))


def is_invertible(m: RationalMatrix) -> bool:
    if not m.is_square:
        return False
    return det(m) != 0
