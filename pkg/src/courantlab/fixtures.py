"""Named fixtures: the worked rectangle examples as ready-made geometries and spectra.

Every acceptance scenario is reachable through one of these names, so CLI runs
and tests share identical inputs.

- pi-square     unit pi-square (0,pi)^2
- sec61-rect    the 2:1 rectangle (0,2pi)x(0,pi)
- sec61-halves  its two pi-square halves (as a SubdomainFamily)
- sec62         rectangle (0,a)x(0,1) with a^2 = 5/2, commensurated lattice
- l-shape       (0,2pi)^2 minus the closed upper-right pi-square
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .exact_spectra import RectSpec, Scale, enumerate_spectrum
from .grid import Difference, GridGeometry, Rect, SubdomainFamily, full_rectangle, rasterize

FIXTURE_NAMES = ("pi-square", "sec61-rect", "sec61-halves", "sec62", "l-shape")

SEC62_A_SQUARED = Fraction(5, 2)
# 117/74 is a continued-fraction convergent of sqrt(5/2): with 117*r cells across
# the width both side lengths land within 5e-5 of a grid line, keeping the
# staircase-boundary eigenvalue error at the stencil's O(h^2) level.
_SEC62_NX_CELLS, _SEC62_NY_CELLS = 117, 74

PI = math.pi


def fixture_geometry(name: str, divisor: int = 64) -> GridGeometry:
    """Lattice for a named fixture; `divisor` sets h = pi/divisor on the pi-scaled
    fixtures and the refinement factor divisor/64 on sec62."""
    if name == "pi-square":
        return full_rectangle(divisor - 1, divisor - 1, PI / divisor)
    if name in ("sec61-rect", "sec61-halves"):
        return full_rectangle(2 * divisor - 1, divisor - 1, PI / divisor)
    if name == "sec62":
        r = max(1, divisor // 64)
        nx_cells, ny_cells = _SEC62_NX_CELLS * r, _SEC62_NY_CELLS * r
        a = math.sqrt(SEC62_A_SQUARED)
        return full_rectangle(nx_cells - 1, ny_cells - 1, a / nx_cells)
    if name == "l-shape":
        h = PI / divisor
        shape = Difference(Rect(0, 0, 2 * PI, 2 * PI), Rect(PI, PI, 2 * PI, 2 * PI))
        return rasterize(shape, (0, 0, 2 * PI, 2 * PI), h)
    raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")


def sec61_halves_family(divisor: int = 64) -> SubdomainFamily:
    """The two pi-square halves of the 2:1 rectangle, split at x = pi."""
    parent = fixture_geometry("sec61-rect", divisor)
    mid = divisor  # node column at x = pi
    left = parent.interior_mask.copy()
    left[:, mid:] = False
    right = parent.interior_mask.copy()
    right[:, : mid + 1] = False
    return SubdomainFamily(parent, (left, right))


def fixture_rect_spec(name: str) -> RectSpec:
    if name == "sec61-rect":
        return RectSpec(Fraction(1, 4), Fraction(1), Scale.UNIT)
    if name == "pi-square":
        return RectSpec(Fraction(1), Fraction(1), Scale.UNIT)
    if name == "sec62":
        return RectSpec.from_side_squares(SEC62_A_SQUARED, 1)
    if name == "sec62-two-thirds":
        # (0, 2a/3) x (0, 1): p1 = 9/(4 a^2)
        return RectSpec(Fraction(9, 4) / SEC62_A_SQUARED, Fraction(1), Scale.PI_SQUARED)
    if name == "half-pi-square":
        # (0, pi/2) x (0, pi)
        return RectSpec(Fraction(4), Fraction(1), Scale.UNIT)
    raise KeyError(f"no exact spectrum for fixture {name!r}")


def fixture_exact_spectrum(name: str, q_max):
    return enumerate_spectrum(fixture_rect_spec(name), q_max)


def sec62_continuum_values(k: int) -> list[float]:
    """First k continuum eigenvalues of the sec62 rectangle (absolute units)."""
    a2 = float(SEC62_A_SQUARED)
    vals = sorted(PI ** 2 * (m * m / a2 + n * n)
                  for m in range(1, 40) for n in range(1, 40))
    return vals[:k]
