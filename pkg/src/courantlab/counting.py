"""Spectral counting functions.

Three counts at a query energy lam: n_lower = #{j : lam_j < lam},
n_upper = #{j : lam_j <= lam}, and n_mid = n_lower + 1 if lam is an
eigenvalue else n_lower.  Always n_lower <= n_mid <= n_upper, with all three
equal off the spectrum and n_upper - n_lower the multiplicity on it.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import (
    InsufficientCutoffError,
    InsufficientSpectrumError,
    InvalidMergeError,
    MixedConventionError,
)
from .exact_spectra import ExactEigenvalue, ExactSpectrum, _frac


@dataclass(frozen=True)
class CountingTriple:
    n_lower: int
    n_mid: int
    n_upper: int
    is_eigenvalue: bool

    def __post_init__(self):
        assert self.n_lower <= self.n_mid <= self.n_upper

    @property
    def multiplicity(self) -> int:
        return self.n_upper - self.n_lower

    def to_json(self) -> dict:
        return {
            "n_lower": self.n_lower,
            "n_mid": self.n_mid,
            "n_upper": self.n_upper,
            "is_eigenvalue": self.is_eigenvalue,
        }


@dataclass(frozen=True)
class NumericSpectrum:
    """Ascending eigenvalue estimates with one relative clustering tolerance."""

    values: tuple[float, ...]
    cluster_tol: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.cluster_tol <= 0:
            raise ValueError("cluster_tol must be positive")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be ascending")


Spectrum = Union[ExactSpectrum, NumericSpectrum]


def count_exact(spectrum: ExactSpectrum, q) -> CountingTriple:
    """Counting triple at rational q; membership is exact rational equality."""
    q = _frac(q)
    if q > spectrum.q_max:
        raise InsufficientCutoffError(
            f"query q={q} exceeds the enumeration cutoff q_max={spectrum.q_max}"
        )
    lo = spectrum._cum[bisect_left(spectrum._values, q)]
    hi = spectrum._cum[bisect_right(spectrum._values, q)]
    eigen = hi > lo
    return CountingTriple(lo, lo + 1 if eigen else lo, hi, eigen)


def count_numeric(spectrum: NumericSpectrum, lam: float) -> CountingTriple:
    """Counting triple at float lam; values within cluster_tol*max(1,|lam|) count as equal."""
    lam = float(lam)
    width = spectrum.cluster_tol * max(1.0, abs(lam))
    if not spectrum.values or lam > spectrum.values[-1] - width:
        top = spectrum.values[-1] if spectrum.values else None
        raise InsufficientSpectrumError(
            f"query lam={lam} is beyond the computed spectrum "
            f"(last value {top}, cluster width {width}); compute more eigenvalues"
        )
    lo = bisect_left(spectrum.values, lam - width)
    hi = bisect_right(spectrum.values, lam + width)
    eigen = hi > lo
    return CountingTriple(lo, lo + 1 if eigen else lo, hi, eigen)


def count(spectrum: Spectrum, lam) -> CountingTriple:
    """Dispatch on the spectrum kind. Exact spectra take rational lam, numeric float."""
    if isinstance(spectrum, ExactSpectrum):
        return count_exact(spectrum, lam)
    if isinstance(spectrum, NumericSpectrum):
        return count_numeric(spectrum, lam)
    raise TypeError(f"not a spectrum: {type(spectrum).__name__}")


def check_homogeneous(spectra: Sequence[Spectrum]) -> type:
    """All-exact or all-numeric, same scale / cluster_tol; returns the common kind."""
    kinds = {type(s) for s in spectra}
    if kinds == {ExactSpectrum}:
        scales = {s.spec.scale for s in spectra}
        if len(scales) > 1:
            raise MixedConventionError(f"mixed scale tags in one family: {scales}")
        return ExactSpectrum
    if kinds == {NumericSpectrum}:
        tols = {s.cluster_tol for s in spectra}
        if len(tols) > 1:
            raise MixedConventionError(f"mixed cluster tolerances in one family: {tols}")
        return NumericSpectrum
    raise MixedConventionError(
        "a family must be all-exact or all-numeric, got "
        + ", ".join(sorted(k.__name__ for k in kinds))
    )


def merge_disjoint(spectra: Sequence[Spectrum]) -> Spectrum:
    """Multiset union of spectra, modelling a disjoint union of domains.

    Exact inputs must share the scale tag and the cutoff; the merged spectrum
    keeps the first input's RectSpec as a nominal tag (a disjoint union is not
    a rectangle) and concatenates mode provenance per value.
    """
    if not spectra:
        raise InvalidMergeError("cannot merge an empty list of spectra")
    kind = check_homogeneous(spectra)
    if kind is NumericSpectrum:
        values = sorted(v for s in spectra for v in s.values)
        return NumericSpectrum(tuple(values), spectra[0].cluster_tol)
    cutoffs = {s.q_max for s in spectra}
    if len(cutoffs) > 1:
        raise InvalidMergeError(f"exact spectra must share the cutoff, got {cutoffs}")
    groups: dict[Fraction, list[tuple[int, int]]] = {}
    for s in spectra:
        for e in s.entries:
            groups.setdefault(e.q, []).extend(e.modes)
    entries = tuple(ExactEigenvalue(q, tuple(groups[q])) for q in sorted(groups))
    return ExactSpectrum(spectra[0].spec, entries, spectra[0].q_max)
