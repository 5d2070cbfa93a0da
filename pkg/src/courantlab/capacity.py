"""Discrete capacity via harmonic-extension energy.

The capacity of a node set A inside an open set U is the Dirichlet energy
sum_edges (s_i - s_j)^2 of the discrete-harmonic potential with s = 1 on A
and s = 0 outside U (2-D edge weights are scale-free, which is what makes the
h -> 0 polar-scaling experiment meaningful).  Capacity-regularity of boundary
points and the nodal-set inclusion check build on this single solve.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pyamg
from scipy import ndimage, sparse
from scipy.sparse.linalg import cg, splu

from .errors import ConvergenceError, PreconditionError
from .grid import GridGeometry, SubdomainFamily, boundary_nodes, components
from .nodal import NodalDecomposition

_DIRECT_CUTOFF = 40_000   # unknowns below this use a sparse direct factorization
EPS_CAP = 1e-12           # documented floor for "strictly positive" verdicts


@dataclass(frozen=True)
class CapacityProblem:
    U: GridGeometry
    A: np.ndarray                # bool lattice, subset of U.interior_mask

    def __post_init__(self):
        A = np.asarray(self.A, dtype=bool)
        if A.shape != self.U.interior_mask.shape:
            raise ValueError("A must live on U's lattice")
        if (A & ~self.U.interior_mask).any():
            raise ValueError("A must be contained in U")
        object.__setattr__(self, "A", A)


def harmonic_potential(problem: CapacityProblem, solve_tol: float = 1e-10) -> np.ndarray:
    """The energy minimizer on the full lattice: 1 on A, 0 outside U,
    discrete-harmonic in between."""
    Umask, A = problem.U.interior_mask, problem.A
    free = Umask & ~A
    s = np.zeros(Umask.shape, dtype=float)
    s[A] = 1.0
    n = int(free.sum())
    if n == 0:
        return s

    ny, nx = free.shape
    idx = -np.ones(free.shape, dtype=np.int64)
    idx[free] = np.arange(n)

    # lattice degree (edges beyond the lattice do not exist)
    degree = np.full(free.shape, 4.0)
    degree[0, :] -= 1
    degree[-1, :] -= 1
    degree[:, 0] -= 1
    degree[:, -1] -= 1

    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [degree[free]]
    rhs = np.zeros(n)
    for dy, dx in ((0, 1), (1, 0)):
        a = np.s_[: ny - dy, : nx - dx]
        b = np.s_[dy:, dx:]
        both_free = free[a] & free[b]
        i, j = idx[a][both_free], idx[b][both_free]
        off = np.full(i.shape, -1.0)
        rows.extend([i, j])
        cols.extend([j, i])
        vals.extend([off, off])
        for sl_f, sl_c in ((a, b), (b, a)):
            fixed = free[sl_f] & A[sl_c]
            rhs_idx = idx[sl_f][fixed]
            np.add.at(rhs, rhs_idx, 1.0)
    L = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )

    if n <= _DIRECT_CUTOFF:
        x = splu(L.tocsc()).solve(rhs)
    else:
        ml = pyamg.ruge_stuben_solver(L)
        x, info = cg(L, rhs, rtol=solve_tol, atol=0.0, M=ml.aspreconditioner(),
                     maxiter=2000)
        if info != 0:
            res = float(np.linalg.norm(L @ x - rhs))
            raise ConvergenceError(
                f"capacity solve did not converge (info={info}, residual={res:.3e})")
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm > 0:
        res = float(np.linalg.norm(L @ x - rhs)) / rhs_norm
        if res > max(solve_tol * 10, 1e-9):
            raise ConvergenceError(f"capacity solve residual {res:.3e} too large")
    s[free] = x
    return s


def dirichlet_energy(s: np.ndarray) -> float:
    return float((np.diff(s, axis=0) ** 2).sum() + (np.diff(s, axis=1) ** 2).sum())


def capacity(problem: CapacityProblem, solve_tol: float = 1e-10) -> float:
    """Energy of the harmonic minimizer; the capacity of an empty A is 0."""
    if not problem.A.any():
        return 0.0
    return dirichlet_energy(harmonic_potential(problem, solve_tol))


def boundary_flux(problem: CapacityProblem, s: np.ndarray) -> float:
    """Sum over edges leaving A of (1 - s_neighbor); equals the energy for the
    harmonic minimizer (discrete Green identity)."""
    A = problem.A
    total = 0.0
    for dy, dx in ((0, 1), (1, 0)):
        a = np.s_[: A.shape[0] - dy, : A.shape[1] - dx]
        b = np.s_[dy:, dx:]
        for src, dst in ((a, b), (b, a)):
            out = A[src] & ~A[dst]
            total += float((1.0 - s[dst][out]).sum())
    return total


# ---------------------------------------------------------------------------
# capacity-regular points


def _ball_mask(shape: tuple[int, int], center: tuple[int, int], radius_nodes: float) -> np.ndarray:
    iy, ix = center
    ys = np.arange(shape[0])[:, None] - iy
    xs = np.arange(shape[1])[None, :] - ix
    return ys * ys + xs * xs < radius_nodes ** 2


@dataclass(frozen=True)
class RegularityReport:
    node: tuple[int, int]
    radii: tuple[float, ...]
    capacities: tuple[float, ...]
    positive: tuple[bool, ...]
    clipped: tuple[bool, ...]
    verdict: bool                    # every radius gave capacity > EPS_CAP

    def to_json(self) -> dict:
        return {"node": list(self.node), "radii": list(self.radii),
                "capacities": list(self.capacities),
                "positive": list(self.positive), "clipped": list(self.clipped),
                "verdict": self.verdict}


def is_capacity_regular(parent: GridGeometry, d_mask: np.ndarray,
                        node: tuple[int, int], radii: Sequence[float],
                        eps_cap: float = EPS_CAP) -> RegularityReport:
    """Test a discrete boundary node of D: for each radius r the capacity of
    (ball(x, r) minus D) inside ball(x, 2r) must exceed the floor.

    Radii are in length units; balls reaching beyond the lattice are clipped
    with a warning.  On a grid every nonempty set has positive capacity, so
    the verdict is meaningful only through the reported magnitudes and their
    behavior under refinement.
    """
    iy, ix = node
    caps, pos, clip = [], [], []
    for r in radii:
        rn = r / parent.h
        clipped = (iy - 2 * rn < 0 or ix - 2 * rn < 0
                   or iy + 2 * rn > parent.ny - 1 or ix + 2 * rn > parent.nx - 1)
        if clipped:
            warnings.warn(f"radius {r} clipped at the lattice edge around {node}")
        outer = _ball_mask(d_mask.shape, node, 2 * rn)
        inner = _ball_mask(d_mask.shape, node, rn)
        a = inner & ~d_mask
        # crop to the outer ball for the solve
        ys, xs = np.nonzero(outer)
        y0, y1 = ys.min(), ys.max() + 1
        x0, x1 = xs.min(), xs.max() + 1
        sub = GridGeometry(x1 - x0, y1 - y0, parent.h,
                           (parent.origin[0] + x0 * parent.h,
                            parent.origin[1] + y0 * parent.h),
                           outer[y0:y1, x0:x1])
        c = capacity(CapacityProblem(sub, (a & outer)[y0:y1, x0:x1]))
        caps.append(c)
        pos.append(c > eps_cap)
        clip.append(clipped)
    return RegularityReport(tuple(node), tuple(radii), tuple(caps), tuple(pos),
                            tuple(clip), all(pos))


# ---------------------------------------------------------------------------
# polar scaling


@dataclass(frozen=True)
class PolarScalingReport:
    rows: tuple[tuple[float, float], ...]    # (h, capacity of the center node)
    fit_c: float                             # least-squares c in cap ~ c/ln(1/h)
    r_squared: float                         # uncentered R^2 (no-intercept model)
    decreasing: bool

    def to_json(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "fit_c": self.fit_c,
                "r_squared": self.r_squared, "decreasing": self.decreasing}


def polar_scaling(h_ladder: Sequence[float], disk_radius: float = 1.0) -> PolarScalingReport:
    """Capacity of the single center node of a disk along a refinement ladder.

    A point is a zero-capacity set in the continuum; on the grid its capacity
    decays like c/ln(1/h), so the ladder must decrease and fit that model.
    """
    if any(a <= b for a, b in zip(h_ladder, h_ladder[1:])):
        raise PreconditionError("h_ladder must be strictly decreasing")
    rows = []
    for h in h_ladder:
        margin = 2 * h
        half = disk_radius + margin
        n_side = int(round(2 * half / h)) + 1
        coords = -half + h * np.arange(n_side)
        X, Y = np.meshgrid(coords, coords)
        mask = X ** 2 + Y ** 2 < disk_radius ** 2
        geom = GridGeometry(n_side, n_side, h, (-half, -half), mask)
        center = int(np.argmin(np.abs(coords)))
        A = np.zeros_like(mask)
        A[center, center] = True
        rows.append((h, capacity(CapacityProblem(geom, A))))
    x = np.array([1.0 / np.log(1.0 / h) for h, _ in rows])
    y = np.array([c for _, c in rows])
    fit_c = float((x @ y) / (x @ x))
    ss_res = float(((y - fit_c * x) ** 2).sum())
    r_squared = 1.0 - ss_res / float((y ** 2).sum())
    decreasing = all(a > b for a, b in zip(y, y[1:]))
    return PolarScalingReport(tuple(rows), fit_c, r_squared, decreasing)


# ---------------------------------------------------------------------------
# nodal-set inclusion for equality families


@dataclass(frozen=True)
class CapregReport:
    radii: tuple[float, ...]
    checked: int
    not_regular: int
    ok: int
    violations: tuple[tuple[int, int], ...]   # regular boundary nodes far from the nodal set
    components_match: bool
    stray_nodes: int                          # sign-carrying nodes outside the family union

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def to_json(self) -> dict:
        return {"radii": list(self.radii), "checked": self.checked,
                "not_regular": self.not_regular, "ok": self.ok,
                "violations": [list(v) for v in self.violations],
                "components_match": self.components_match,
                "stray_nodes": self.stray_nodes}


def verify_capreg(u_decomp: NodalDecomposition, family: SubdomainFamily,
                  radii: Sequence[float], eps_cap: float = EPS_CAP) -> CapregReport:
    """For an equality family, capacity-regular boundary points must lie on the
    nodal set: every boundary node of every family mask inside the parent that
    tests regular must sit within one cell of the nodal nodes.  The companion
    component check verifies that the nodal domains coincide, node for node up
    to the one-cell nodal band, with the per-member nodal domains.
    """
    parent = u_decomp.geometry
    band = ndimage.binary_dilation(u_decomp.nodal_nodes, structure=np.ones((3, 3), bool))
    not_regular = ok = 0
    violations = []
    for mask in family.masks:
        for iy, ix in np.argwhere(boundary_nodes(mask, parent)):
            rep = is_capacity_regular(parent, mask, (int(iy), int(ix)), radii, eps_cap)
            if not rep.verdict:
                not_regular += 1
            elif band[iy, ix]:
                ok += 1
            else:
                violations.append((int(iy), int(ix)))

    support = u_decomp.component_id >= 0
    union = np.zeros_like(support)
    for mask in family.masks:
        union |= mask
    stray = support & ~union & ~band
    per_member = sum(len(components(support & mask)) for mask in family.masks)
    return CapregReport(tuple(radii), not_regular + ok + len(violations),
                        not_regular, ok, tuple(violations),
                        per_member == u_decomp.mu, int(stray.sum()))
