"""Nodal sets and nodal domains of grid eigenvectors.

A node is nodal when |u| falls below zero_tol * max|u| or when it touches a
4-edge across which the thresholded sign flips.  Nodal domains are the
4-connected sign-constant components of the remaining nodes; their count mu
is the discrete nodal-domain count, bounded by the counting function n_mid at
the eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .counting import count_numeric
from .errors import DegenerateInputError, PreconditionError
from .eigensolver import DiscreteHamiltonian, EigenPair, as_numeric_spectrum, smallest_k
from .grid import GridGeometry, SubdomainFamily, components
from .partition_check import CourantReport, courant_check


@dataclass(frozen=True)
class NodalDecomposition:
    geometry: GridGeometry
    signs: np.ndarray            # int8 lattice: +1/-1 thresholded sign, 0 elsewhere
    component_id: np.ndarray     # int32 lattice: component label or -1
    mu: int
    nodal_nodes: np.ndarray      # bool lattice: the discrete nodal set
    zero_tol: float

    def domain_mask(self, i: int) -> np.ndarray:
        return self.component_id == i


def extract(vector: np.ndarray, geometry: GridGeometry,
            zero_tol: float = 1e-8) -> NodalDecomposition:
    """Sign-threshold the vector and label its nodal domains."""
    mask = geometry.interior_mask
    u = geometry.to_lattice(vector)
    top = np.abs(u[mask]).max() if mask.any() else 0.0
    if top == 0.0:
        raise DegenerateInputError("vector is identically zero on the mask")
    thr = zero_tol * top

    signs = np.zeros(u.shape, dtype=np.int8)
    signs[mask & (u > thr)] = 1
    signs[mask & (u < -thr)] = -1
    nodal = mask & (np.abs(u) <= thr)

    # both endpoints of every sign-changing 4-edge are nodal
    flip_x = (signs[:, :-1] * signs[:, 1:]) < 0
    nodal[:, :-1] |= flip_x
    nodal[:, 1:] |= flip_x
    flip_y = (signs[:-1, :] * signs[1:, :]) < 0
    nodal[:-1, :] |= flip_y
    nodal[1:, :] |= flip_y

    component_id = np.full(u.shape, -1, dtype=np.int32)
    comps = components((signs > 0) & ~nodal) + components((signs < 0) & ~nodal)
    comps.sort(key=lambda c: int(np.flatnonzero(c.ravel())[0]))
    for i, comp in enumerate(comps):
        component_id[comp] = i
    return NodalDecomposition(geometry, signs, component_id, len(comps), nodal, zero_tol)


def nodal_family(decomp: NodalDecomposition) -> SubdomainFamily:
    """One mask per nodal domain; disjoint by construction, nodal nodes excluded."""
    masks = tuple(decomp.domain_mask(i) for i in range(decomp.mu))
    return SubdomainFamily(decomp.geometry, masks)


@dataclass(frozen=True)
class CourantAuditRow:
    k: int
    lam: float
    mu: int
    n_mid: int
    cluster_multiplicity: int
    holds: bool
    sharp: bool

    def to_json(self) -> dict:
        return {"k": self.k, "lam": self.lam, "mu": self.mu, "n_mid": self.n_mid,
                "cluster_multiplicity": self.cluster_multiplicity,
                "holds": self.holds, "sharp": self.sharp}


@dataclass(frozen=True)
class CourantAudit:
    rows: tuple[CourantAuditRow, ...]
    seed: int
    cluster_tol: float
    zero_tol: float
    pairs: tuple[EigenPair, ...]
    decomps: tuple[NodalDecomposition, ...]

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.rows)

    def to_json(self) -> dict:
        return {"seed": self.seed, "cluster_tol": self.cluster_tol,
                "zero_tol": self.zero_tol, "rows": [r.to_json() for r in self.rows]}


def courant_audit(H: DiscreteHamiltonian, k_max: int, tol: float = 1e-9,
                  cluster_tol: float = 1e-6, zero_tol: float = 1e-8,
                  seed: int = 0, pad: int = 6) -> CourantAudit:
    """Check mu(u_k) <= n_mid(lam_k) for k = 1..k_max.

    Solves k_max + pad pairs so the counting query at lam_{k_max} stays inside
    the trusted range of the numeric spectrum.  Within a degenerate cluster mu
    depends on the iteration's basis choice (hence on the seed), so rows carry
    the cluster multiplicity for diagnosis; the bound itself is basis-free.
    """
    pairs = smallest_k(H, min(k_max + pad, H.n), tol=tol, seed=seed)
    spectrum = as_numeric_spectrum(pairs, cluster_tol)
    rows, decomps = [], []
    for k in range(1, k_max + 1):
        lam = pairs[k - 1].value
        decomp = extract(pairs[k - 1].vector, H.geometry, zero_tol)
        triple = count_numeric(spectrum, lam)
        report: CourantReport = courant_check(decomp.mu, spectrum, lam)
        rows.append(CourantAuditRow(k, lam, decomp.mu, report.bound,
                                    triple.multiplicity, report.holds, report.sharp))
        decomps.append(decomp)
    return CourantAudit(tuple(rows), seed, cluster_tol, zero_tol,
                        tuple(pairs), tuple(decomps))


@dataclass(frozen=True)
class HarnackReport:
    radius_nodes: int
    tau: float
    nodal_count: int
    violations: tuple[tuple[int, int], ...]    # (iy, ix) lacking a sign nearby

    def to_json(self) -> dict:
        return {"radius_nodes": self.radius_nodes, "tau": self.tau,
                "nodal_count": self.nodal_count,
                "violations": [list(v) for v in self.violations]}


def harnack_probe(decomp: NodalDecomposition, vector: np.ndarray,
                  radius_nodes: int, tau: float) -> HarnackReport:
    """Every nodal node should see values above tau*max|u| of both signs within
    a Chebyshev ball intersected with the mask.  Violations are reported, not
    raised: the discrete analog may legitimately fail near the outer boundary.
    """
    if radius_nodes < 1:
        raise PreconditionError("radius_nodes must be >= 1")
    mask = decomp.geometry.interior_mask
    u = decomp.geometry.to_lattice(vector)
    thr = tau * np.abs(u[mask]).max()
    ny, nx = mask.shape
    violations = []
    for iy, ix in np.argwhere(decomp.nodal_nodes):
        window = np.s_[max(0, iy - radius_nodes): iy + radius_nodes + 1,
                       max(0, ix - radius_nodes): ix + radius_nodes + 1]
        values = u[window][mask[window]]
        if not ((values > thr).any() and (values < -thr).any()):
            violations.append((int(iy), int(ix)))
    return HarnackReport(radius_nodes, tau, int(decomp.nodal_nodes.sum()),
                         tuple(violations))


def nodal_image(decomp: NodalDecomposition) -> np.ndarray:
    """PGM-ready lattice: background white, nodal nodes black, one gray per domain."""
    img = np.full(decomp.signs.shape, 255, dtype=np.uint8)
    if decomp.mu > 0:
        levels = np.linspace(60, 220, decomp.mu).astype(np.uint8)
        for i in range(decomp.mu):
            img[decomp.component_id == i] = levels[i]
    img[decomp.nodal_nodes] = 0
    return img
