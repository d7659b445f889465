"""Finite oriented cell complexes with signed incidence.

A complex is a set of cells, each carrying an ordered list of ``(face, sign)``
boundary entries.  Repeated faces are allowed (a loop edge lists its vertex
twice), and the boundary matrix sums them.  Within each dimension cells are
ordered lexicographically by id, and that order fixes every matrix index
downstream.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import AdmissibilityError, DegreeError, StructureError


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    boundary: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.dim < 0:
            raise StructureError(f"cell {self.id!r} has negative dimension")
        if self.dim == 0 and self.boundary:
            raise StructureError(f"vertex {self.id!r} cannot have a boundary")
        for face, sign in self.boundary:
            if not isinstance(sign, int) or sign == 0:
                raise StructureError(f"cell {self.id!r}: coefficient on {face!r} must be a nonzero integer")


@dataclass
class ValidationReport:
    """Problems found by :func:`validate_complex`; empty means code-admissible."""

    nonzero_products: list[tuple[int, int]] = field(default_factory=list)
    non_unit: list[tuple[str, str, int]] = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return not self.nonzero_products and not self.non_unit

    def messages(self) -> list[str]:
        out = [f"boundary_{k} . boundary_{k + 1} != 0" for k, _ in self.nonzero_products]
        out += [f"cell {c!r}: incidence with {f!r} is {v}, not +-1" for c, f, v in self.non_unit]
        return out

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "nonzero_products": [list(p) for p in self.nonzero_products],
            "non_unit": [{"cell": c, "face": f, "coefficient": v} for c, f, v in self.non_unit],
        }


class CellComplex:
    """Immutable finite cell complex.

    Construct from an iterable of :class:`Cell`.  Structural problems (dangling
    faces, faces of the wrong dimension, duplicate ids) raise
    :class:`StructureError`; algebraic problems are left to
    :func:`validate_complex`.
    """

    def __init__(self, cells: Iterable[Cell], label: str = "", dimension: int | None = None):
        table: dict[str, Cell] = {}
        for cell in cells:
            if cell.id in table:
                raise StructureError(f"duplicate cell id {cell.id!r}")
            table[cell.id] = cell
        for cell in table.values():
            for face, _ in cell.boundary:
                if face not in table:
                    raise StructureError(f"cell {cell.id!r} references missing face {face!r}")
                if table[face].dim != cell.dim - 1:
                    raise StructureError(
                        f"cell {cell.id!r} (dim {cell.dim}) references {face!r} of dim {table[face].dim}"
                    )
        top = max((c.dim for c in table.values()), default=0)
        if dimension is None:
            dimension = top
        elif dimension < top:
            raise StructureError(f"declared dimension {dimension} below top cell dimension {top}")
        self._cells = MappingProxyType(table)
        self.label = label
        self.dimension = dimension
        self._ids = tuple(
            tuple(sorted(cid for cid, c in table.items() if c.dim == k)) for k in range(dimension + 1)
        )
        self._index = tuple(MappingProxyType({cid: i for i, cid in enumerate(ids)}) for ids in self._ids)
        self._bd_cache: dict[int, np.ndarray] = {}

    # -- basic access -------------------------------------------------------

    @property
    def cells(self) -> Mapping[str, Cell]:
        return self._cells

    def ids(self, k: int) -> tuple[str, ...]:
        if 0 <= k <= self.dimension:
            return self._ids[k]
        return ()

    def index(self, k: int) -> Mapping[str, int]:
        if 0 <= k <= self.dimension:
            return self._index[k]
        return MappingProxyType({})

    def count(self, k: int) -> int:
        return len(self.ids(k))

    def counts(self) -> tuple[int, ...]:
        return tuple(len(ids) for ids in self._ids)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def __repr__(self) -> str:
        return f"CellComplex({self.label!r}, counts={self.counts()})"

    def _boundary(self, k: int) -> np.ndarray:
        """Boundary matrix for any integer k; degrees outside [0, n] give empty shapes."""
        if k not in self._bd_cache:
            rows, cols = self.count(k - 1), self.count(k)
            m = np.zeros((rows, cols), dtype=np.int64)
            if rows and cols:
                row_of = self.index(k - 1)
                for j, cid in enumerate(self.ids(k)):
                    for face, sign in self._cells[cid].boundary:
                        m[row_of[face], j] += sign
            m.setflags(write=False)
            self._bd_cache[k] = m
        return self._bd_cache[k]

    def coboundary_cells(self, cid: str) -> dict[str, int]:
        """Cells having ``cid`` in their boundary, with the summed incidence."""
        k = self._cells[cid].dim
        col = self._boundary(k + 1)[self.index(k)[cid]]
        return {self.ids(k + 1)[j]: int(v) for j, v in enumerate(col) if v}

    def boundary_cells(self, cid: str) -> dict[str, int]:
        k = self._cells[cid].dim
        col = self._boundary(k)[:, self.index(k)[cid]]
        return {self.ids(k - 1)[i]: int(v) for i, v in enumerate(col) if v}

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        cells = []
        for k in range(self.dimension + 1):
            for cid in self.ids(k):
                c = self._cells[cid]
                cells.append(
                    {"id": cid, "dim": c.dim, "boundary": [{"cell": f, "sign": s} for f, s in c.boundary]}
                )
        return {"label": self.label, "dimension": self.dimension, "cells": cells}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "CellComplex":
        try:
            cells = [
                Cell(
                    str(c["id"]),
                    int(c["dim"]),
                    tuple((str(b["cell"]), int(b["sign"])) for b in c.get("boundary", [])),
                )
                for c in doc["cells"]
            ]
            return cls(cells, label=str(doc.get("label", "")), dimension=doc.get("dimension"))
        except (KeyError, TypeError) as exc:
            raise StructureError(f"malformed complex document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "CellComplex":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StructureError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)


def _check_degree(c: CellComplex, k: int) -> None:
    if not 0 <= k <= c.dimension:
        raise DegreeError(f"degree {k} outside [0, {c.dimension}] for {c.label or 'complex'}")


def boundary_matrix(c: CellComplex, k: int) -> np.ndarray:
    """Rows are (k-1)-cells, columns k-cells; k = 0 gives a matrix with no rows."""
    _check_degree(c, k)
    return c._boundary(k)


def coboundary_matrix(c: CellComplex, k: int) -> np.ndarray:
    """Transpose of ``boundary_matrix(c, k + 1)``; rows (k+1)-cells, columns k-cells."""
    _check_degree(c, k)
    return c._boundary(k + 1).T


def validate_complex(c: CellComplex) -> ValidationReport:
    report = ValidationReport()
    for k in range(1, c.dimension + 1):
        m = c._boundary(k)
        for i, j in zip(*np.nonzero(m)):
            if abs(m[i, j]) != 1:
                report.non_unit.append((c.ids(k)[j], c.ids(k - 1)[i], int(m[i, j])))
    for k in range(1, c.dimension):
        if np.any(c._boundary(k) @ c._boundary(k + 1)):
            report.nonzero_products.append((k, k + 1))
    return report


def require_admissible(c: CellComplex) -> None:
    report = validate_complex(c)
    if not report.admissible:
        raise AdmissibilityError("; ".join(report.messages()))


# -- duals --------------------------------------------------------------------


def manifold_boundary(c: CellComplex) -> set[str]:
    """Cells of the boundary subcomplex: top-minus-one cells with a single coface, and their faces."""
    n = c.dimension
    if n == 0:
        return set()
    bd = c._boundary(n)
    seeds = [c.ids(n - 1)[i] for i in range(bd.shape[0]) if np.count_nonzero(bd[i]) == 1]
    out: set[str] = set()
    stack = list(seeds)
    while stack:
        cid = stack.pop()
        if cid in out:
            continue
        out.add(cid)
        stack.extend(f for f, _ in c.cells[cid].boundary)
    return out


def dual_complex(c: CellComplex, closed: bool = True) -> CellComplex:
    """Dual cell structure of a manifold cellulation.

    Each (n-k)-cell ``X`` becomes a k-cell ``"^X"`` whose boundary is
    ``sum O(i, X) ^i`` over the cofaces ``i`` of ``X``.  The caller vouches that
    ``c`` is a manifold.  With ``closed=True`` every boundary cell ``X`` of ``c``
    also contributes a cell ``"~X"`` of dimension n-1-dim(X), glued to the
    boundary of ``^X``; the result is then a genuine CW complex.  The open dual
    (``closed=False``) is only a formal chain complex when ``c`` has boundary.
    """
    require_admissible(c)
    n = c.dimension
    cells: list[Cell] = []
    bdry = manifold_boundary(c) if closed else set()

    # sign with which the boundary-dual cell enters ^X; chosen so dual edges
    # ending on the boundary are oriented like ordinary edges
    eps: dict[str, int] = {}
    for cid in bdry:
        if c.cells[cid].dim == n - 1:
            (coface, sign), = c.coboundary_cells(cid).items()
            eps[cid] = -sign
        else:
            eps[cid] = 1

    for k in range(n + 1):
        for cid in c.ids(n - k):
            entries = [("^" + i, s) for i, s in sorted(c.coboundary_cells(cid).items())]
            if cid in bdry:
                entries.append(("~" + cid, eps[cid]))
            cells.append(Cell("^" + cid, k, tuple(entries)))
    for cid in sorted(bdry):
        dim = n - 1 - c.cells[cid].dim
        entries = []
        for i, s in sorted(c.coboundary_cells(cid).items()):
            if i in bdry:
                entries.append(("~" + i, -s * eps[i] * eps[cid]))
        cells.append(Cell("~" + cid, dim, tuple(entries)))
    suffix = "closed dual" if closed and bdry else "dual"
    return CellComplex(cells, label=f"{suffix}({c.label})", dimension=n)


# -- builders -------------------------------------------------------------------


def _require_positive(**sizes: int) -> None:
    for name, v in sizes.items():
        if v < 1:
            raise DegreeError(f"{name} must be >= 1, got {v}")


def from_simplices(top: Iterable[Sequence[int]], label: str = "") -> CellComplex:
    """Simplicial complex generated by the given simplices, oriented by sorted vertex order."""
    prefix = {0: "v", 1: "e", 2: "f", 3: "c"}
    simplices: set[tuple[int, ...]] = set()
    for s in top:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            simplices.update(itertools.combinations(s, r))

    def name(s: tuple[int, ...]) -> str:
        return prefix.get(len(s) - 1, f"s{len(s) - 1}_") + "_".join(map(str, s))

    cells = []
    for s in simplices:
        bd = ()
        if len(s) > 1:
            bd = tuple((name(s[:i] + s[i + 1 :]), (-1) ** i) for i in range(len(s)))
        cells.append(Cell(name(s), len(s) - 1, bd))
    return CellComplex(cells, label=label)


def point() -> CellComplex:
    return CellComplex([Cell("v0", 0)], label="point")


def circle(m: int) -> CellComplex:
    """m vertices ``v{i}`` and edges ``e{i}: v{i} -> v{i+1 mod m}``."""
    _require_positive(m=m)
    cells = [Cell(f"v{i}", 0) for i in range(m)]
    cells += [Cell(f"e{i}", 1, ((f"v{i}", -1), (f"v{(i + 1) % m}", 1))) for i in range(m)]
    return CellComplex(cells, label=f"circle({m})")


def interval(m: int) -> CellComplex:
    """Path with m edges ``e{i}: v{i} -> v{i+1}``."""
    _require_positive(m=m)
    cells = [Cell(f"v{i}", 0) for i in range(m + 1)]
    cells += [Cell(f"e{i}", 1, ((f"v{i}", -1), (f"v{i + 1}", 1))) for i in range(m)]
    return CellComplex(cells, label=f"interval({m})")


def torus_grid(p: int, q: int) -> CellComplex:
    """Periodic p x q square grid.

    Vertex ``v{i}_{j}``; horizontal edge ``h{i}_{j}`` runs to ``v{i+1}_{j}``,
    vertical edge ``w{i}_{j}`` to ``v{i}_{j+1}``; face ``f{i}_{j}`` has boundary
    ``h{i}_{j} + w{i+1}_{j} - h{i}_{j+1} - w{i}_{j}`` (indices mod p, q).
    """
    _require_positive(p=p, q=q)
    cells = []
    for i in range(p):
        for j in range(q):
            i1, j1 = (i + 1) % p, (j + 1) % q
            cells.append(Cell(f"v{i}_{j}", 0))
            cells.append(Cell(f"h{i}_{j}", 1, ((f"v{i}_{j}", -1), (f"v{i1}_{j}", 1))))
            cells.append(Cell(f"w{i}_{j}", 1, ((f"v{i}_{j}", -1), (f"v{i}_{j1}", 1))))
            cells.append(
                Cell(
                    f"f{i}_{j}",
                    2,
                    ((f"h{i}_{j}", 1), (f"w{i1}_{j}", 1), (f"h{i}_{j1}", -1), (f"w{i}_{j}", -1)),
                )
            )
    return CellComplex(cells, label=f"torus_grid({p},{q})")


def square_grid(p: int, q: int) -> CellComplex:
    """Planar p x q patch of squares (a disk), same naming as :func:`torus_grid`."""
    _require_positive(p=p, q=q)
    cells = [Cell(f"v{i}_{j}", 0) for i in range(p + 1) for j in range(q + 1)]
    for i in range(p + 1):
        for j in range(q + 1):
            if i < p:
                cells.append(Cell(f"h{i}_{j}", 1, ((f"v{i}_{j}", -1), (f"v{i + 1}_{j}", 1))))
            if j < q:
                cells.append(Cell(f"w{i}_{j}", 1, ((f"v{i}_{j}", -1), (f"v{i}_{j + 1}", 1))))
    for i in range(p):
        for j in range(q):
            cells.append(
                Cell(
                    f"f{i}_{j}",
                    2,
                    ((f"h{i}_{j}", 1), (f"w{i + 1}_{j}", 1), (f"h{i}_{j + 1}", -1), (f"w{i}_{j}", -1)),
                )
            )
    return CellComplex(cells, label=f"square_grid({p},{q})")


# Faces of the unit cube named as the sides of a box: x=0 left, x=1 right,
# y=0 front, y=1 back, z=0 bottom, z=1 top.  Each face lists its corners
# counterclockwise as seen from outside, so the induced orientation is the
# outward one.
CUBE_FACES: dict[str, tuple[str, str, str, str]] = {
    "F": ("000", "100", "101", "001"),
    "Ba": ("010", "011", "111", "110"),
    "L": ("000", "001", "011", "010"),
    "R": ("100", "110", "111", "101"),
    "Bo": ("000", "010", "110", "100"),
    "T": ("001", "101", "111", "011"),
}


def cube_edge_id(a: str, b: str) -> str:
    a, b = sorted((a, b))
    return f"e{a}_{b}"


def sphere_cube() -> CellComplex:
    """Surface of the unit cube: 8 vertices ``v{xyz}``, 12 edges ``e{a}_{b}`` (a < b), 6 faces."""
    verts = ["".join(t) for t in itertools.product("01", repeat=3)]
    cells = [Cell(f"v{v}", 0) for v in verts]
    for a, b in itertools.combinations(verts, 2):
        if sum(x != y for x, y in zip(a, b)) == 1:
            cells.append(Cell(cube_edge_id(a, b), 1, ((f"v{a}", -1), (f"v{b}", 1))))
    for name, corners in CUBE_FACES.items():
        bd = []
        for a, b in zip(corners, corners[1:] + corners[:1]):
            bd.append((cube_edge_id(a, b), 1 if a < b else -1))
        cells.append(Cell(name, 2, tuple(bd)))
    return CellComplex(cells, label="sphere_cube")


# Six-vertex, ten-triangle triangulation of the real projective plane.
RP2_TRIANGLES = (
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
)


def projective_plane_min() -> CellComplex:
    return from_simplices(RP2_TRIANGLES, label="projective_plane_min")


def sphere_simplex(n: int) -> CellComplex:
    """Boundary of the (n+1)-simplex, a triangulated n-sphere."""
    _require_positive(n=n)
    return from_simplices(itertools.combinations(range(n + 2), n + 1), label=f"sphere_simplex({n})")


BUILDERS = {
    "point": point,
    "circle": circle,
    "interval": interval,
    "torus_grid": torus_grid,
    "square_grid": square_grid,
    "sphere_cube": sphere_cube,
    "projective_plane_min": projective_plane_min,
    "sphere_simplex": sphere_simplex,
}
