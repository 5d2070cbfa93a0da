"""Rasterized open sets on a uniform lattice.

A GridGeometry is a node lattice (spacing h, node (0,0) at `origin`) with a
boolean interior mask; a node belongs to the mask iff its center lies strictly
inside the continuum open set.  Arrays are indexed [iy, ix]; the flat node
index is iy*nx + ix.  4-connectivity is the single adjacency convention for
components, discrete closure and discrete interior.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage

from .errors import EmptyDomainError, PreconditionError
from .images import read_pbm, write_pbm

PLUS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


# ---------------------------------------------------------------------------
# shape descriptors


class Shape:
    """CSG node; subclasses implement strict and closed membership tests."""

    def contains(self, x, y):
        raise NotImplementedError

    def contains_closure(self, x, y):
        raise NotImplementedError

    def __or__(self, other):
        return Union(self, other)

    def __sub__(self, other):
        return Difference(self, other)


@dataclass(frozen=True)
class Rect(Shape):
    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, x, y):
        return (self.x0 < x) & (x < self.x1) & (self.y0 < y) & (y < self.y1)

    def contains_closure(self, x, y):
        return (self.x0 <= x) & (x <= self.x1) & (self.y0 <= y) & (y <= self.y1)


@dataclass(frozen=True)
class Disk(Shape):
    cx: float
    cy: float
    r: float

    def contains(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 < self.r ** 2

    def contains_closure(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 <= self.r ** 2


class Union(Shape):
    def __init__(self, *shapes: Shape):
        self.shapes = shapes

    def contains(self, x, y):
        out = self.shapes[0].contains(x, y)
        for s in self.shapes[1:]:
            out = out | s.contains(x, y)
        return out

    def contains_closure(self, x, y):
        out = self.shapes[0].contains_closure(x, y)
        for s in self.shapes[1:]:
            out = out | s.contains_closure(x, y)
        return out


class Difference(Shape):
    """Open difference: inside `a` and outside the closure of `b`."""

    def __init__(self, a: Shape, b: Shape):
        self.a, self.b = a, b

    def contains(self, x, y):
        return self.a.contains(x, y) & ~self.b.contains_closure(x, y)

    def contains_closure(self, x, y):
        return self.a.contains_closure(x, y) & ~self.b.contains(x, y)


# ---------------------------------------------------------------------------
# geometry


@dataclass(frozen=True)
class GridGeometry:
    nx: int
    ny: int
    h: float
    origin: tuple[float, float]
    interior_mask: np.ndarray           # bool, shape (ny, nx)

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("spacing h must be positive")
        mask = np.asarray(self.interior_mask, dtype=bool)
        if mask.shape != (self.ny, self.nx):
            raise ValueError(f"mask shape {mask.shape} != (ny={self.ny}, nx={self.nx})")
        object.__setattr__(self, "interior_mask", mask)

    @property
    def n_interior(self) -> int:
        return int(self.interior_mask.sum())

    def node_coords(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) coordinate arrays of shape (ny, nx)."""
        x0, y0 = self.origin
        x = x0 + self.h * np.arange(self.nx)
        y = y0 + self.h * np.arange(self.ny)
        return np.meshgrid(x, y)

    def to_lattice(self, packed: np.ndarray) -> np.ndarray:
        """Scatter a vector over the mask nodes (row-major order) onto the lattice."""
        out = np.zeros((self.ny, self.nx), dtype=float)
        out[self.interior_mask] = packed
        return out


def rasterize(shape: Shape, bbox: tuple[float, float, float, float], h: float) -> GridGeometry:
    """Node-center rasterization over the lattice spanning bbox (inclusive)."""
    if h <= 0:
        raise PreconditionError("spacing h must be positive")
    x0, y0, x1, y1 = bbox
    nx = int(np.floor((x1 - x0) / h * (1 + 1e-12))) + 1
    ny = int(np.floor((y1 - y0) / h * (1 + 1e-12))) + 1
    geom_mask = shape.contains(*np.meshgrid(x0 + h * np.arange(nx), y0 + h * np.arange(ny)))
    if not geom_mask.any():
        raise EmptyDomainError("rasterization produced an empty mask")
    return GridGeometry(nx, ny, h, (x0, y0), geom_mask)


def full_rectangle(nx_nodes: int, ny_nodes: int, h: float,
                   origin: tuple[float, float] = (0.0, 0.0)) -> GridGeometry:
    """Lattice with an explicit all-true interior of nx_nodes x ny_nodes nodes,
    surrounded by a false boundary ring.  Node (0,0) sits at `origin`, so the
    mask represents the open rectangle of size (nx_nodes+1)h x (ny_nodes+1)h."""
    mask = np.zeros((ny_nodes + 2, nx_nodes + 2), dtype=bool)
    mask[1:-1, 1:-1] = True
    return GridGeometry(nx_nodes + 2, ny_nodes + 2, h, origin, mask)


# ---------------------------------------------------------------------------
# families and mask operators


@dataclass(frozen=True)
class SubdomainFamily:
    parent: GridGeometry
    masks: tuple[np.ndarray, ...]

    def __post_init__(self):
        masks = tuple(np.asarray(m, dtype=bool) for m in self.masks)
        for i, m in enumerate(masks):
            if m.shape != self.parent.interior_mask.shape:
                raise ValueError(f"mask {i} shape mismatch with parent lattice")
            if (m & ~self.parent.interior_mask).any():
                raise ValueError(f"mask {i} is not contained in the parent interior")
        object.__setattr__(self, "masks", masks)


def components(mask: np.ndarray, connectivity: int = 4) -> list[np.ndarray]:
    """Maximal connected node sets of a mask, ordered by smallest flat index."""
    if connectivity == 4:
        structure = PLUS
    elif connectivity == 8:
        structure = np.ones((3, 3), dtype=bool)
    else:
        raise ValueError("connectivity must be 4 or 8")
    labels, n = ndimage.label(mask, structure=structure)
    comps = [labels == i for i in range(1, n + 1)]
    comps.sort(key=lambda c: int(np.flatnonzero(c.ravel())[0]))
    return comps


def dilate(mask: np.ndarray) -> np.ndarray:
    """One-step discrete closure: the mask plus every node with a 4-neighbor in it."""
    return ndimage.binary_dilation(mask, structure=PLUS)


def star_interior(family: SubdomainFamily, L: Sequence[int]) -> np.ndarray:
    """Discrete reconstitution: interior of the union of member closures.

    Closure is one 4-dilation per member mask; the interior keeps union nodes
    whose 4-neighbors all lie in the union, where neighbors outside the
    parent's interior count as satisfied (the continuum operator removes the
    outer boundary anyway).  The result is clipped to the parent interior.
    """
    L = tuple(L)
    if not L:
        raise PreconditionError("L must be nonempty")
    union = np.zeros_like(family.parent.interior_mask)
    for l in L:
        union |= dilate(family.masks[l])
    padded = union | ~family.parent.interior_mask
    inner = ndimage.binary_erosion(padded, structure=PLUS, border_value=1)
    return union & inner & family.parent.interior_mask


def check_disjoint(family: SubdomainFamily) -> tuple[bool, Optional[tuple[int, int]]]:
    """Node-wise pairwise disjointness; on failure returns the first collision node."""
    for i in range(len(family.masks)):
        for j in range(i + 1, len(family.masks)):
            overlap = family.masks[i] & family.masks[j]
            if overlap.any():
                flat = int(np.flatnonzero(overlap.ravel())[0])
                ny, nx = overlap.shape
                return False, (flat // nx, flat % nx)
    return True, None


def boundary_nodes(mask: np.ndarray, parent: GridGeometry) -> np.ndarray:
    """Discrete boundary within the parent: outside-the-mask nodes adjacent to it,
    clipped to the parent interior (nodes on the outer boundary are excluded)."""
    return dilate(mask) & ~mask & parent.interior_mask


# ---------------------------------------------------------------------------
# mask I/O: PBM raster plus a JSON sidecar with the lattice metadata


def save_mask(geometry: GridGeometry, path_stem: str) -> None:
    write_pbm(geometry.interior_mask, f"{path_stem}.pbm")
    header = {"nx": geometry.nx, "ny": geometry.ny, "h": geometry.h,
              "origin": list(geometry.origin)}
    with open(f"{path_stem}.json", "w") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_mask(path_stem: str) -> GridGeometry:
    with open(f"{path_stem}.json") as fh:
        header = json.load(fh)
    mask = read_pbm(f"{path_stem}.pbm")
    return GridGeometry(header["nx"], header["ny"], header["h"],
                        tuple(header["origin"]), mask)
