"""Lattice-point counts in ellipses, in exact integer arithmetic.

Counts of integer pairs with a*m^2 + b*n^2 <= lam for rational a, b, lam.
Denominators are cleared up front so every comparison is between integers;
square roots are integer square roots.  The quadrant identity

    A = 4*A_plus + 2*floor(sqrt(lam/a)) + 2*floor(sqrt(lam/b)) + 1

ties the full-lattice count to the positive-quadrant count, which is exactly
the eigenvalue counting function n_upper of the matching rectangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .counting import count_exact
from .errors import PreconditionError
from .exact_spectra import RectSpec, Scale, _frac, enumerate_spectrum, floor_sqrt


def _cleared(a, b, lam) -> tuple[int, int, int]:
    """Integers (A, B, L) with a*m^2+b*n^2 <= lam  iff  A*m^2+B*n^2 <= L."""
    a, b, lam = _frac(a), _frac(b), _frac(lam)
    if a <= 0 or b <= 0:
        raise PreconditionError("ellipse coefficients must be positive")
    if lam < 0:
        raise PreconditionError("lam must be nonnegative")
    d = math.lcm(a.denominator, b.denominator, lam.denominator)
    return (a.numerator * (d // a.denominator),
            b.numerator * (d // b.denominator),
            lam.numerator * (d // lam.denominator))


def _floor_sqrt_ratio(num: int, den: int) -> int:
    """floor(sqrt(num/den)) for nonnegative integers, exactly."""
    return math.isqrt(num * den) // den


def count_full(a, b, lam) -> int:
    """#{(m, n) in Z^2 : a*m^2 + b*n^2 <= lam}, zeros and negatives included."""
    A, B, L = _cleared(a, b, lam)
    m_hi = _floor_sqrt_ratio(L, A)
    total = 0
    for m in range(0, m_hi + 1):
        rem = L - A * m * m
        n_hi = _floor_sqrt_ratio(rem, B)
        row = 2 * n_hi + 1
        total += row if m == 0 else 2 * row
    return total


def count_positive(a, b, lam) -> int:
    """#{(m, n), m, n >= 1 : a*m^2 + b*n^2 <= lam}; equals the rectangle's n_upper."""
    A, B, L = _cleared(a, b, lam)
    if L < A + B:
        return 0
    m_hi = _floor_sqrt_ratio(L - B, A)
    return sum(_floor_sqrt_ratio(L - A * m * m, B) for m in range(1, m_hi + 1))


@dataclass(frozen=True)
class EllipseCount:
    a: Fraction
    b: Fraction
    lam: Fraction
    A: int
    A_plus: int

    def __post_init__(self):
        axis_a = floor_sqrt(self.lam / self.a)
        axis_b = floor_sqrt(self.lam / self.b)
        assert self.A == 4 * self.A_plus + 2 * axis_a + 2 * axis_b + 1


def ellipse_count(a, b, lam) -> EllipseCount:
    a, b, lam = _frac(a), _frac(b), _frac(lam)
    return EllipseCount(a, b, lam, count_full(a, b, lam), count_positive(a, b, lam))


@dataclass(frozen=True)
class DeficitReport:
    """Gap between the half-unit-aspect count and twice the square count.

    deficit = A_plus(1/4, 1, lam) - 2*A_plus(1, 1, lam) grows like sqrt(lam)/2,
    which is why the partition equality cannot persist to high energies.
    """

    lam: Fraction
    A0_plus: int
    A1_plus: int
    deficit: int
    ratio_to_half_sqrt: float

    def to_json(self) -> dict:
        return {"lam": str(self.lam), "A0_plus": self.A0_plus,
                "A1_plus": self.A1_plus, "deficit": self.deficit,
                "ratio_to_half_sqrt": self.ratio_to_half_sqrt}


def deficit(lam) -> DeficitReport:
    lam = _frac(lam)
    if lam < 1:
        raise PreconditionError("deficit is defined for lam >= 1")
    a0 = count_positive(Fraction(1, 4), 1, lam)
    a1 = count_positive(1, 1, lam)
    d = a0 - 2 * a1
    return DeficitReport(lam, a0, a1, d, d / (0.5 * math.sqrt(lam)))


@dataclass(frozen=True)
class SharpnessScan:
    """Energies of the 2:1 rectangle at which the half-split attains equality."""

    lam_max: Fraction
    equalities: tuple[Fraction, ...]
    largest_equality: Fraction | None
    eigenvalues_scanned: int

    def to_json(self) -> dict:
        return {
            "lam_max": str(self.lam_max),
            "equalities": [str(q) for q in self.equalities],
            "largest_equality": (None if self.largest_equality is None
                                 else str(self.largest_equality)),
            "eigenvalues_scanned": self.eigenvalues_scanned,
        }


def sharpness_scan(lam_max) -> SharpnessScan:
    """Exhaustive exact scan of the half-split partition inequality.

    The (0,2pi)x(0,pi) rectangle is split into its two unit-pi squares; for
    every eigenvalue lam <= lam_max of the rectangle the report records
    whether 2*n_upper_square = n_mid_rect + min(diff_rect, diff_square).
    The equality set is finite; its largest member is reported so callers can
    confirm no equalities occur in the scanned range above it.
    """
    lam_max = _frac(lam_max)
    if lam_max < 5:
        raise PreconditionError("lam_max must be at least 5")
    rect = enumerate_spectrum(RectSpec(Fraction(1, 4), Fraction(1), Scale.UNIT), lam_max)
    square = enumerate_spectrum(RectSpec(Fraction(1), Fraction(1), Scale.UNIT), lam_max)
    equalities = []
    for entry in rect.entries:
        t0 = count_exact(rect, entry.q)
        t1 = count_exact(square, entry.q)
        lhs = 2 * t1.n_upper
        rhs = t0.n_mid + min(t0.n_upper - t0.n_mid, t1.n_upper - t1.n_mid)
        if lhs == rhs:
            equalities.append(entry.q)
    return SharpnessScan(
        lam_max=lam_max,
        equalities=tuple(equalities),
        largest_equality=max(equalities) if equalities else None,
        eigenvalues_scanned=len(rect.entries),
    )
