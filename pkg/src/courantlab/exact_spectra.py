"""Closed-form Dirichlet spectra of rectangles in exact rational arithmetic.

A rectangle with commensurable sides has eigenvalues kappa * (p1*m^2 + p2*n^2)
over positive integer mode pairs (m, n).  Everything here is a Fraction; ties
(multiplicities) are therefore detected exactly, which is the whole point.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from .errors import InsufficientCutoffError, InvalidSpecError, PreconditionError

RationalLike = Fraction | int | str


class Scale(enum.Enum):
    """Global eigenvalue prefactor kappa: 1 for pi-multiple sides, pi^2 otherwise."""

    UNIT = "unit"
    PI_SQUARED = "pi2"


def _frac(x: RationalLike) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for nonnegative rational x, exactly."""
    if x < 0:
        raise ValueError("floor_sqrt of a negative rational")
    # sqrt(n/d) = sqrt(n*d)/d and floor(y/d) = floor(floor(y)/d) for integer d>0
    return math.isqrt(x.numerator * x.denominator) // x.denominator


@dataclass(frozen=True)
class RectSpec:
    """Rectangle spectrum parameters: eigenvalues are kappa*(p1*m^2 + p2*n^2)."""

    p1: Fraction
    p2: Fraction
    scale: Scale = Scale.UNIT

    def __post_init__(self):
        object.__setattr__(self, "p1", _frac(self.p1))
        object.__setattr__(self, "p2", _frac(self.p2))
        if self.p1 <= 0 or self.p2 <= 0:
            raise InvalidSpecError(f"p1 and p2 must be positive, got {self.p1}, {self.p2}")

    @classmethod
    def from_side_squares(cls, a_squared: RationalLike, b_squared: RationalLike,
                          scale: Scale = Scale.PI_SQUARED) -> "RectSpec":
        """Rectangle of side lengths a, b given by their (rational) squares."""
        return cls(1 / _frac(a_squared), 1 / _frac(b_squared), scale)


@dataclass(frozen=True)
class ExactEigenvalue:
    """One spectral value q (kappa stripped) with its mode-pair provenance."""

    q: Fraction
    modes: tuple[tuple[int, int], ...]

    @property
    def multiplicity(self) -> int:
        return len(self.modes)


@dataclass(frozen=True)
class ExactSpectrum:
    """All eigenvalues q <= q_max of a RectSpec, ascending, grouped by value."""

    spec: RectSpec
    entries: tuple[ExactEigenvalue, ...]
    q_max: Fraction
    _values: list = field(init=False, repr=False, compare=False)
    _cum: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q_max", _frac(self.q_max))
        values = [e.q for e in self.entries]
        cum = [0]
        for e in self.entries:
            cum.append(cum[-1] + e.multiplicity)
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_cum", cum)

    @property
    def total_modes(self) -> int:
        return self._cum[-1]

    def values_with_multiplicity(self) -> list[Fraction]:
        out = []
        for e in self.entries:
            out.extend([e.q] * e.multiplicity)
        return out

    def to_json(self) -> dict:
        return {
            "p1": str(self.spec.p1),
            "p2": str(self.spec.p2),
            "scale": self.spec.scale.value,
            "q_max": str(self.q_max),
            "entries": [
                {"q": str(e.q), "modes": [[m, n] for m, n in e.modes]}
                for e in self.entries
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExactSpectrum":
        spec = RectSpec(Fraction(data["p1"]), Fraction(data["p2"]), Scale(data["scale"]))
        entries = tuple(
            ExactEigenvalue(Fraction(e["q"]), tuple((int(m), int(n)) for m, n in e["modes"]))
            for e in data["entries"]
        )
        return cls(spec, entries, Fraction(data["q_max"]))

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ExactSpectrum":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def enumerate_spectrum(spec: RectSpec, q_max: RationalLike) -> ExactSpectrum:
    """All (m, n) with p1*m^2 + p2*n^2 <= q_max, grouped by exact value.

    Mode bounds use exact integer square roots, so boundary values are never
    lost to rounding.  A q_max below the smallest eigenvalue yields an empty
    spectrum.
    """
    q_max = _frac(q_max)
    groups: dict[Fraction, list[tuple[int, int]]] = {}
    if q_max >= spec.p1 + spec.p2:
        m_hi = floor_sqrt((q_max - spec.p2) / spec.p1)
        for m in range(1, m_hi + 1):
            rem = q_max - spec.p1 * m * m
            n_hi = floor_sqrt(rem / spec.p2)
            for n in range(1, n_hi + 1):
                q = spec.p1 * m * m + spec.p2 * n * n
                groups.setdefault(q, []).append((m, n))
    entries = tuple(
        ExactEigenvalue(q, tuple(sorted(groups[q]))) for q in sorted(groups)
    )
    return ExactSpectrum(spec, entries, q_max)


def kth_eigenvalue(spectrum: ExactSpectrum, k: int) -> Fraction:
    """The k-th smallest eigenvalue counting multiplicity (k >= 1)."""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    total = spectrum.total_modes
    if k > total:
        spec = spectrum.spec
        density = math.pi / (4 * math.sqrt(spec.p1 * spec.p2))
        suggestion = math.ceil(1.3 * k / density + float(spec.p1 + spec.p2))
        raise InsufficientCutoffError(
            f"k={k} exceeds the {total} modes enumerated up to q_max={spectrum.q_max}; "
            f"re-enumerate with q_max >= {suggestion}"
        )
    lo = 0
    for e in spectrum.entries:
        lo += e.multiplicity
        if lo >= k:
            return e.q
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Section62Report:
    """Third/fourth eigenvalues of Q=(0,a)x(0,1) and the two-thirds subrectangle check."""

    a_squared: Fraction
    lam3: Fraction                       # (1/a^2 + 4), in pi^2 units
    lam4: Fraction                       # (9/a^2 + 1), in pi^2 units
    ordering_ok: bool
    zeroset_abscissas: tuple[float, float]   # x = a/3 and x = 2a/3
    half_spec: RectSpec                  # (0, 2a/3) x (0, 1)
    lam2_half: Fraction
    half_matches_lam4: bool

    def to_json(self) -> dict:
        return {
            "a_squared": str(self.a_squared),
            "lam3": str(self.lam3),
            "lam4": str(self.lam4),
            "ordering_ok": self.ordering_ok,
            "zeroset_abscissas": list(self.zeroset_abscissas),
            "lam2_half": str(self.lam2_half),
            "half_matches_lam4": self.half_matches_lam4,
        }


def section62_scenario(a_squared: RationalLike) -> Section62Report:
    """Fourth eigenfunction of (0,a)x(0,1) with a^2 in (9/4, 8/3).

    In that window lam3 = 1/a^2 + 4 < lam4 = 9/a^2 + 1 (pi^2 units), the
    fourth eigenfunction has vertical zero lines at x = a/3 and 2a/3, and the
    union of its first two nodal slabs, the rectangle (0, 2a/3) x (0, 1),
    has lam4 as its *second* eigenvalue.  All of this is verified exactly.
    """
    a2 = _frac(a_squared)
    lo, hi = Fraction(9, 4), Fraction(8, 3)
    if not (lo < a2 < hi):
        raise PreconditionError(
            f"a_squared must lie in the open interval (9/4, 8/3), got {a2}"
        )
    lam3 = 1 / a2 + 4
    lam4 = 9 / a2 + 1
    # (0, 2a/3) x (0, 1): p1 = 1/(2a/3)^2 = 9/(4 a^2)
    half_spec = RectSpec(Fraction(9, 4) / a2, Fraction(1), Scale.PI_SQUARED)
    half = enumerate_spectrum(half_spec, lam4 + 1)
    lam2_half = kth_eigenvalue(half, 2)
    a = math.sqrt(a2)
    return Section62Report(
        a_squared=a2,
        lam3=lam3,
        lam4=lam4,
        ordering_ok=lam3 < lam4,
        zeroset_abscissas=(a / 3, 2 * a / 3),
        half_spec=half_spec,
        lam2_half=lam2_half,
        half_matches_lam4=lam2_half == lam4,
    )
