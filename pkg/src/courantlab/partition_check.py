"""Counting-function inequalities over a family of sub-spectra.

Given the spectrum of a parent domain and spectra of pairwise disjoint open
subdomains, these checks verify, at a query energy, the partition inequality

    sum_l n_upper_l  <=  n_mid_0 + min_l (n_upper_l - n_mid_l)    (l >= 0),

its weak form (sum bounded by n_upper_0), the converse membership statement
when the reversed inequality holds, the subfamily identity on reconstituted
interiors, the classical nodal-domain-count bound, and the subfamily
eigenvalue-index identity.  A violated inequality on true spectra would be a
finding, so it is reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .counting import CountingTriple, Spectrum, check_homogeneous, count
from .errors import PreconditionError
from .exact_spectra import ExactSpectrum, kth_eigenvalue


def _lam_json(lam):
    return str(lam) if isinstance(lam, Fraction) else float(lam)


@dataclass(frozen=True)
class FamilyReport:
    """Outcome of the main partition inequality at one energy."""

    lam: object
    lhs: int
    rhs: int
    holds: bool
    equality: bool
    min_index: Optional[int]            # l achieving the min (0 = parent); ties -> smallest
    per_domain: tuple[CountingTriple, ...]   # index 0 is the parent
    variant: str                        # "main" or "off-spectrum"

    def to_json(self) -> dict:
        return {
            "lam": _lam_json(self.lam),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "equality": self.equality,
            "min_index": self.min_index,
            "variant": self.variant,
            "per_domain": [t.to_json() for t in self.per_domain],
        }


def check_main(spec0: Spectrum, sub_specs: Sequence[Spectrum], lam) -> FamilyReport:
    """Main inequality at lam; falls back to the simple off-spectrum variant
    (lhs <= n_mid_0) when lam is not an eigenvalue of the parent."""
    if not sub_specs:
        raise PreconditionError("sub_specs must be nonempty")
    check_homogeneous([spec0, *sub_specs])
    triples = [count(spec0, lam)] + [count(s, lam) for s in sub_specs]
    t0 = triples[0]
    lhs = sum(t.n_upper for t in triples[1:])
    if t0.is_eigenvalue:
        diffs = [t.n_upper - t.n_mid for t in triples]
        min_diff = min(diffs)
        rhs = t0.n_mid + min_diff
        return FamilyReport(
            lam=lam, lhs=lhs, rhs=rhs, holds=lhs <= rhs, equality=lhs == rhs,
            min_index=diffs.index(min_diff), per_domain=tuple(triples), variant="main",
        )
    rhs = t0.n_mid
    return FamilyReport(
        lam=lam, lhs=lhs, rhs=rhs, holds=lhs <= rhs, equality=lhs == rhs,
        min_index=None, per_domain=tuple(triples), variant="off-spectrum",
    )


@dataclass(frozen=True)
class WeakReport:
    lam: object
    lhs: int
    n_upper_0: int
    holds: bool
    per_domain: tuple[CountingTriple, ...]

    def to_json(self) -> dict:
        return {
            "lam": _lam_json(self.lam),
            "lhs": self.lhs,
            "n_upper_0": self.n_upper_0,
            "holds": self.holds,
            "per_domain": [t.to_json() for t in self.per_domain],
        }


def check_weak(spec0: Spectrum, sub_specs: Sequence[Spectrum], lam) -> WeakReport:
    """Weak form: sum of subdomain n_upper never exceeds the parent's n_upper.
    No connectedness assumption; an empty family holds trivially."""
    check_homogeneous([spec0, *sub_specs])
    triples = [count(spec0, lam)] + [count(s, lam) for s in sub_specs]
    lhs = sum(t.n_upper for t in triples[1:])
    return WeakReport(lam, lhs, triples[0].n_upper, lhs <= triples[0].n_upper,
                      tuple(triples))


@dataclass(frozen=True)
class ConverseReport:
    lam: object
    sum_upper: int
    n_mid_0: int
    hypothesis_holds: bool                      # sum_upper >= n_mid_0
    membership: Optional[tuple[bool, ...]]      # lam in sigma of each subdomain
    falsified: bool                             # hypothesis held but membership failed

    def to_json(self) -> dict:
        return {
            "lam": _lam_json(self.lam),
            "sum_upper": self.sum_upper,
            "n_mid_0": self.n_mid_0,
            "hypothesis_holds": self.hypothesis_holds,
            "membership": list(self.membership) if self.membership is not None else None,
            "falsified": self.falsified,
        }


def check_converse(spec0: Spectrum, sub_specs: Sequence[Spectrum], lam) -> ConverseReport:
    """If sum_l n_upper_l >= n_mid_0 at an eigenvalue of the parent, lam must be
    an eigenvalue of every subdomain; membership is reported per subdomain."""
    check_homogeneous([spec0, *sub_specs])
    t0 = count(spec0, lam)
    if not t0.is_eigenvalue:
        raise PreconditionError(f"lam={lam} is not an eigenvalue of the parent spectrum")
    subs = [count(s, lam) for s in sub_specs]
    sum_upper = sum(t.n_upper for t in subs)
    hypothesis = sum_upper >= t0.n_mid
    if not hypothesis:
        return ConverseReport(lam, sum_upper, t0.n_mid, False, None, False)
    membership = tuple(t.is_eigenvalue for t in subs)
    return ConverseReport(lam, sum_upper, t0.n_mid, True, membership,
                          not all(membership))


@dataclass(frozen=True)
class SubsetReport:
    lam: object
    L: tuple[int, ...]
    sum_upper_L: int
    n_star: int
    upper_star: int
    min_sub_diff: int           # min over l in L of (n_upper_l - n_mid_l)
    star_diff: int              # n_upper_star - n_mid_star
    form: str                   # "equality" or "inequality"
    holds: bool

    def to_json(self) -> dict:
        return {
            "lam": _lam_json(self.lam),
            "L": list(self.L),
            "sum_upper_L": self.sum_upper_L,
            "n_star": self.n_star,
            "upper_star": self.upper_star,
            "min_sub_diff": self.min_sub_diff,
            "star_diff": self.star_diff,
            "form": self.form,
            "holds": self.holds,
        }


def check_subset(spec0: Spectrum, sub_specs: Sequence[Spectrum], L: Sequence[int],
                 spec_star: Spectrum, lam, equality_case: bool) -> SubsetReport:
    """Subfamily check against the reconstituted interior of the members in L.

    The caller supplies spec_star (the spectrum of the reconstituted interior;
    exact for rectangles, numeric from a grid solve otherwise) and states
    whether the main inequality held with equality.  In the equality case the
    identity  sum_{l in L} n_upper_l = n_star + min(min-sub-diff, star-diff)
    is verified; otherwise only the one-sided bound sum >= n_star.  Both
    min branches are always exposed in the report.
    """
    L = tuple(L)
    if not L:
        raise PreconditionError("L must be nonempty")
    check_homogeneous([spec0, *sub_specs, spec_star])
    sub_L = [count(sub_specs[l - 1], lam) for l in L]   # L indexes subdomains from 1
    t_star = count(spec_star, lam)
    sum_upper_L = sum(t.n_upper for t in sub_L)
    min_sub = min(t.n_upper - t.n_mid for t in sub_L)
    star_diff = t_star.n_upper - t_star.n_mid
    if equality_case:
        holds = sum_upper_L == t_star.n_mid + min(min_sub, star_diff)
        form = "equality"
    else:
        holds = sum_upper_L >= t_star.n_mid
        form = "inequality"
    return SubsetReport(lam, L, sum_upper_L, t_star.n_mid, t_star.n_upper,
                        min_sub, star_diff, form, holds)


@dataclass(frozen=True)
class CourantReport:
    lam: object
    mu: int
    bound: int          # n_mid of the parent at lam
    holds: bool
    sharp: bool

    def to_json(self) -> dict:
        return {"lam": _lam_json(self.lam), "mu": self.mu, "bound": self.bound,
                "holds": self.holds, "sharp": self.sharp}


def courant_check(mu: int, spec0: Spectrum, lam) -> CourantReport:
    """Nodal-domain-count bound mu <= n_mid(lam); sharp when equal."""
    t0 = count(spec0, lam)
    if not t0.is_eigenvalue:
        raise PreconditionError(f"lam={lam} is not an eigenvalue of the parent spectrum")
    return CourantReport(lam, mu, t0.n_mid, mu <= t0.n_mid, mu == t0.n_mid)


@dataclass(frozen=True)
class SubmuReport:
    ell: int
    lam_k: object
    lam_ell: object
    equal: bool
    simple: bool        # multiplicity of lam_ell in the subfamily spectrum is 1

    def to_json(self) -> dict:
        return {"ell": self.ell, "lam_k": _lam_json(self.lam_k),
                "lam_ell": _lam_json(self.lam_ell), "equal": self.equal,
                "simple": self.simple}


def check_submu(spec_L: Spectrum, ell: int, lam_k) -> SubmuReport:
    """The ell-th eigenvalue of a reconstituted subfamily must equal lam_k.

    Exact spectra compare exactly; numeric spectra within their cluster width.
    """
    if isinstance(spec_L, ExactSpectrum):
        lam_ell = kth_eigenvalue(spec_L, ell)
        equal = lam_ell == lam_k
    else:
        if ell > len(spec_L.values):
            raise PreconditionError(
                f"numeric spectrum holds only {len(spec_L.values)} values, need {ell}")
        lam_ell = spec_L.values[ell - 1]
        equal = abs(lam_ell - float(lam_k)) <= spec_L.cluster_tol * max(1.0, abs(float(lam_k)))
    simple = count(spec_L, lam_ell).multiplicity == 1
    return SubmuReport(ell, lam_k, lam_ell, equal, simple)
