"""Certified root-radius intervals and Jordan-growth-order estimation.

The central primitive is :func:`root_radius`: an interval of requested
width, produced entirely in exact rational arithmetic, that provably
contains the maximum modulus of the complex roots of a monic polynomial.
The bracket comes from exact Graeffe root-squaring with elementary
coefficient bounds; it is then refined by bisection against an exact
"all roots strictly inside the disk of radius s" predicate (a
Schur-Cohn reflection-coefficient test run over the integers).
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

from .linalg import CharPoly, RationalMatrix, char_poly, mat_mul
from .rational import as_rational, log_rational, nth_root_lower, nth_root_upper

DEFAULT_TOL = Fraction(1, 10**9)
GRAEFFE_STEPS = 6


class AmbiguousGrowthError(RuntimeError):
    """Raised when the Jordan-growth fit does not round cleanly to an integer."""


class DegenerateGrowthError(ValueError):
    """Raised for nilpotent input, whose norm growth has no exponential part."""


@dataclass(frozen=True)
class SpectralInterval:
    """A certified enclosure [lower, upper] of a spectral radius."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower < 0 or self.upper < self.lower:
            raise ValueError("invalid spectral interval")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        v = as_rational(value)
        return self.lower <= v <= self.upper

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def log_midpoint(self) -> float:
        return log_rational(self.midpoint())


@dataclass(frozen=True)
class GrowthOrder:
    """Spectral radius together with the largest Jordan block size at it."""

    radius: SpectralInterval
    multiplicity: int


# ---------------------------------------------------------------------------
# polynomial helpers (ascending rational coefficient lists)
# ---------------------------------------------------------------------------


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_normalize(a: list[Fraction]) -> list[Fraction]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_monic(a: list[Fraction]) -> list[Fraction]:
    lead = a[-1]
    return [c / lead for c in a]


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    b = _poly_normalize(list(b))
    r = list(a)
    while len(r) >= len(b) and any(c != 0 for c in r):
        r = _poly_normalize(r)
        if len(r) < len(b):
            break
        factor = r[-1] / b[-1]
        shift = len(r) - len(b)
        for i, c in enumerate(b):
            r[shift + i] -= factor * c
        r = r[:-1]
    return _poly_normalize(r) if r else [Fraction(0)]


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _poly_normalize(list(a))
    b = _poly_normalize(list(b))
    while len(b) > 1 or b[0] != 0:
        a, b = b, _poly_rem(a, b)
        b = _poly_normalize(b)
    return _poly_monic(a)


def _squarefree_part(coeffs: list[Fraction]) -> list[Fraction]:
    """Monic polynomial with the same root set but simple roots."""
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    g = _poly_gcd(coeffs, deriv)
    if len(g) == 1:
        return list(coeffs)
    # exact division coeffs / g
    quotient = [Fraction(0)] * (len(coeffs) - len(g) + 1)
    r = list(coeffs)
    for k in range(len(quotient) - 1, -1, -1):
        factor = r[k + len(g) - 1] / g[-1]
        quotient[k] = factor
        for i, c in enumerate(g):
            r[k + i] -= factor * c
    return _poly_monic(quotient)


def _graeffe_step(coeffs: list[Fraction]) -> list[Fraction]:
    """Monic polynomial whose roots are the squares of the input roots."""
    n = len(coeffs) - 1
    even = coeffs[0::2]
    odd = coeffs[1::2]
    sq_even = _poly_mul(even, even)
    sq_odd = _poly_mul(odd, odd) if odd else []
    out = [Fraction(0)] * (n + 1)
    for i, v in enumerate(sq_even):
        if i <= n:
            out[i] += v
    for i, v in enumerate(sq_odd):
        if i + 1 <= n:
            out[i + 1] -= v
    if n % 2 == 1:
        out = [-v for v in out]
    return out


def _to_integer_poly(coeffs: list[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    return ints


def _all_roots_in_open_unit_disk(ints: list[int]) -> bool:
    """Exact Schur-Cohn test on an integer polynomial (ascending, lead != 0).

    Each reflection step compares |constant| against |leading| and reduces
    the degree by one; a non-strict comparison anywhere certifies a root
    of modulus >= 1.
    """
    g = list(ints)
    while len(g) > 1 and g[0] == 0:  # roots at the origin are inside
        g.pop(0)
    n = len(g) - 1
    while n > 0:
        head, lead = g[0], g[n]
        if head * head >= lead * lead:
            return False
        nxt = [lead * g[i] - head * g[n - i] for i in range(1, n + 1)]
        common = 0
        for c in nxt:
            common = math.gcd(common, c)
        if common > 1:
            nxt = [c // common for c in nxt]
        g = nxt
        n -= 1
    return True


def _roots_strictly_inside(coeffs: list[Fraction], s: Fraction) -> bool:
    scaled = [c * s**i for i, c in enumerate(coeffs)]
    return _all_roots_in_open_unit_disk(_to_integer_poly(scaled))


def root_radius(p: CharPoly, tol: Fraction = DEFAULT_TOL) -> SpectralInterval:
    """Certified interval of width <= tol around max |root| of ``p``.

    The returned interval always sits inside [0, 1 + max |coefficient|]
    (the Cauchy bound of the input polynomial).
    """
    tol = as_rational(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    coeffs = _squarefree_part(list(p.coefficients))
    n = len(coeffs) - 1
    max_low = max(abs(c) for c in p.coefficients[:-1])
    if all(c == 0 for c in coeffs[:-1]):
        return SpectralInterval(Fraction(0), Fraction(0))
    cauchy = 1 + max_low

    squared = list(coeffs)
    for _ in range(GRAEFFE_STEPS):
        squared = _graeffe_step(squared)
    unsquare = 1 << GRAEFFE_STEPS

    lo = Fraction(0)
    hi_core = Fraction(0)
    for k in range(1, n + 1):
        a = abs(squared[n - k])
        if a == 0:
            continue
        lo = max(lo, nth_root_lower(a / math.comb(n, k), k * unsquare))
        hi_core = max(hi_core, nth_root_upper(a, k * unsquare))
    hi = min(cauchy, nth_root_upper(Fraction(2), unsquare) * hi_core)
    if hi < lo:  # directed rounding cannot cross, but guard anyway
        hi = cauchy

    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _roots_strictly_inside(coeffs, mid):
            hi = mid
        else:
            lo = mid
    return SpectralInterval(lo, hi)


def spectral_radius(m: RationalMatrix, tol: Fraction = DEFAULT_TOL) -> SpectralInterval:
    """Certified spectral-radius interval of a square rational matrix."""
    return root_radius(char_poly(m), tol)


def growth_order(
    m: RationalMatrix,
    tol: Fraction = DEFAULT_TOL,
    n_max: int = 64,
) -> GrowthOrder:
    """Spectral radius plus the growth exponent of ||m^n|| at that radius.

    Fits log ||m^n||_1 - n log r against log n over n in [n_max/2, n_max];
    the slope estimates (multiplicity - 1) for the largest Jordan block
    among maximal-modulus eigenvalues.  The fit must land within 0.25 of
    an integer, otherwise the growth is reported as ambiguous.
    """
    if not m.is_square:
        raise ValueError("growth order of a non-square matrix")
    if n_max < 4:
        raise ValueError("n_max too small for a growth fit")
    radius = spectral_radius(m, tol)
    if radius.upper == 0:
        raise DegenerateGrowthError("nilpotent matrix: spectral radius is zero")
    log_r = radius.log_midpoint()

    start = max(2, n_max // 2)
    power = None
    xs: list[float] = []
    ys: list[float] = []
    for n in range(1, n_max + 1):
        power = m if power is None else mat_mul(power, m)
        if n < start:
            continue
        norm = power.one_norm()
        if norm == 0:
            raise DegenerateGrowthError("matrix power vanished: degenerate growth")
        xs.append(math.log(n))
        ys.append(log_rational(norm) - n * log_r)
    slope = statistics.linear_regression(xs, ys).slope
    nearest = round(slope)
    if abs(slope - nearest) >= 0.25:
        raise AmbiguousGrowthError(
            f"ambiguous growth: slope {slope:.6f} is not within 0.25 of an integer"
        )
    multiplicity = nearest + 1
    if multiplicity < 1 or multiplicity > m.rows:
        raise AmbiguousGrowthError(
            f"ambiguous growth: implied multiplicity {multiplicity} outside [1, {m.rows}]"
        )
    return GrowthOrder(radius=radius, multiplicity=multiplicity)
