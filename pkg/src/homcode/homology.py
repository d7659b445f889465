"""Exact (co)homology over Z, Z_d and finite direct sums of them.

Integer groups come from Smith normal forms of the boundary maps; Z_d
coefficients go through the universal coefficient theorem.  Cycle and
boundary tests, particular solutions and class representatives all reuse the
same unimodular transforms.
"""

from __future__ import annotations

import math
import re
import weakref
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .complex_core import CellComplex
from .exceptions import DegreeError
from .snf import SnfResult, invariant_factors, smith_normal_form


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank x Z_t1 x Z_t2 x ...`` with ``t1 | t2 | ...`` and every ``ti >= 2``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        t = tuple(int(x) for x in self.torsion)
        if any(x < 2 for x in t):
            raise ValueError(f"invariant factors must be >= 2, got {t}")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain, got {t}")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FgAbelianGroup":
        """Canonical form of a direct sum of cyclic groups; order 0 means Z, 1 is dropped."""
        orders = [abs(int(x)) for x in orders]
        free = orders.count(0)
        finite = [x for x in orders if x > 1]
        diag = [[x if i == j else 0 for j in range(len(finite))] for i, x in enumerate(finite)]
        torsion = tuple(x for x in invariant_factors(diag) if x > 1) if finite else ()
        return cls(free, torsion)

    @classmethod
    def parse(cls, text: str) -> "FgAbelianGroup":
        """Inverse of ``str``: ``"0"``, ``"Z"``, ``"Z^2 x Z_3"``; also accepts ``+`` as separator."""
        text = text.strip()
        if text in ("0", ""):
            return cls()
        orders: list[int] = []
        for part in re.split(r"\s*(?:x|\+|\(\+\))\s*", text):
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                orders += [0] * int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z_\{?(\d+)\}?(?:\^(\d+))?", part)
            if m:
                orders += [int(m.group(1))] * int(m.group(2) or 1)
                continue
            raise ValueError(f"cannot parse group component {part!r}")
        return cls.from_orders(orders)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z_{t}" for t in self.torsion]
        return " x ".join(parts) or "0"

    def components(self) -> tuple[int, ...]:
        """Cyclic orders in canonical order, 0 standing for Z."""
        return (0,) * self.free_rank + self.torsion

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        return math.prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return not self.free_rank and not self.torsion

    @property
    def is_finite(self) -> bool:
        return not self.free_rank

    def __add__(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.from_orders(self.components() + other.components())

    def tensor_cyclic(self, m: int) -> "FgAbelianGroup":
        """``self (x) Z_m``."""
        return FgAbelianGroup.from_orders([m if x == 0 else math.gcd(x, m) for x in self.components()])

    def tor_cyclic(self, m: int) -> "FgAbelianGroup":
        """``Tor_1(self, Z_m)``."""
        return FgAbelianGroup.from_orders([math.gcd(x, m) for x in self.torsion])

    def to_dict(self) -> dict:
        return {"free": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "FgAbelianGroup":
        return cls.from_orders([0] * int(doc.get("free", 0)) + [int(x) for x in doc.get("torsion", [])])


ZERO = FgAbelianGroup()
Z = FgAbelianGroup(1)


def cyclic(d: int) -> FgAbelianGroup:
    """``Z_d`` (``cyclic(0)`` is Z)."""
    return FgAbelianGroup.from_orders([d])


class ChainVector:
    """Sparse k-chain (or k-cochain) with integer coefficients keyed by cell id."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping[str, int] | None = None):
        self.degree = degree
        items = sorted((str(k), int(v)) for k, v in (coeffs or {}).items() if int(v))
        self.coeffs = MappingProxyType(dict(items))

    def __repr__(self) -> str:
        return f"ChainVector({self.degree}, {dict(self.coeffs)})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChainVector) and self.degree == other.degree and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.degree, tuple(self.coeffs.items())))

    def __add__(self, other: "ChainVector") -> "ChainVector":
        if other.degree != self.degree:
            raise DegreeError(f"cannot add chains of degree {self.degree} and {other.degree}")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return ChainVector(self.degree, out)

    def __neg__(self) -> "ChainVector":
        return self.scaled(-1)

    def __sub__(self, other: "ChainVector") -> "ChainVector":
        return self + (-other)

    def scaled(self, m: int) -> "ChainVector":
        return ChainVector(self.degree, {k: m * v for k, v in self.coeffs.items()})

    def reduced(self, d: int | None) -> "ChainVector":
        """Coefficients reduced into ``0..d-1``; unchanged for ``d=None``."""
        if d is None:
            return self
        return ChainVector(self.degree, {k: v % d for k, v in self.coeffs.items()})

    @property
    def weight(self) -> int:
        return len(self.coeffs)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(self.coeffs)

    def check_in(self, c: CellComplex) -> None:
        ids = c.index(self.degree)
        for k in self.coeffs:
            if k not in ids:
                raise DegreeError(f"cell {k!r} is not a {self.degree}-cell of {c.label or 'complex'}")

    def to_array(self, c: CellComplex, d: int | None = None) -> np.ndarray:
        self.check_in(c)
        idx = c.index(self.degree)
        v = np.zeros(c.count(self.degree), dtype=np.int64)
        for k, x in self.coeffs.items():
            v[idx[k]] = x
        return v % d if d else v

    @classmethod
    def from_array(cls, c: CellComplex, k: int, arr, d: int | None = None) -> "ChainVector":
        ids = c.ids(k)
        arr = [int(x) for x in np.asarray(arr, dtype=object).ravel()]
        if len(arr) != len(ids):
            raise DegreeError(f"expected {len(ids)} coefficients for degree {k}, got {len(arr)}")
        if d:
            arr = [x % d for x in arr]
        return cls(k, dict(zip(ids, arr)))

    @classmethod
    def zero(cls, k: int) -> "ChainVector":
        return cls(k, {})

    def to_dict(self) -> dict:
        return {"degree": self.degree, "coeffs": dict(self.coeffs)}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ChainVector":
        return cls(int(doc["degree"]), {str(k): int(v) for k, v in doc.get("coeffs", {}).items()})


# -- SNF cache ------------------------------------------------------------------

_SNF_CACHE: "weakref.WeakKeyDictionary[CellComplex, dict]" = weakref.WeakKeyDictionary()


def differential(c: CellComplex, k: int, cohomology: bool = False) -> np.ndarray:
    """The map leaving degree k: ``∂_k`` for chains, ``δ_k = ∂_{k+1}^T`` for cochains."""
    return c._boundary(k + 1).T if cohomology else c._boundary(k)


def incoming(c: CellComplex, k: int, cohomology: bool = False) -> np.ndarray:
    """The map landing in degree k: ``∂_{k+1}`` for chains, ``δ_{k-1} = ∂_k^T`` for cochains."""
    return c._boundary(k).T if cohomology else c._boundary(k + 1)


def _snf(c: CellComplex, key: tuple, m: np.ndarray) -> SnfResult:
    cache = _SNF_CACHE.setdefault(c, {})
    if key not in cache:
        cache[key] = smith_normal_form(m)
    return cache[key]


def differential_snf(c: CellComplex, k: int, cohomology: bool = False) -> SnfResult:
    return _snf(c, ("out", k, cohomology), differential(c, k, cohomology))


def incoming_snf(c: CellComplex, k: int, cohomology: bool = False) -> SnfResult:
    return _snf(c, ("in", k, cohomology), incoming(c, k, cohomology))


# -- groups -----------------------------------------------------------------------


def _coeff_group(coeff) -> FgAbelianGroup:
    if coeff is None:
        return Z
    if isinstance(coeff, FgAbelianGroup):
        return coeff
    if isinstance(coeff, int):
        return cyclic(coeff)
    return FgAbelianGroup.parse(str(coeff))


def _integer_group(c: CellComplex, k: int, cohomology: bool) -> FgAbelianGroup:
    n_k = c.count(k)
    rank_out = differential_snf(c, k, cohomology).rank
    inc = incoming_snf(c, k, cohomology)
    torsion = [x for x in inc.diagonal if x > 1]
    return FgAbelianGroup.from_orders([0] * (n_k - rank_out - inc.rank) + torsion)


def _graded_group(c: CellComplex, k: int, coeff, cohomology: bool) -> FgAbelianGroup:
    if k < 0:
        raise DegreeError(f"degree must be non-negative, got {k}")
    G = _coeff_group(coeff)
    here = _integer_group(c, k, cohomology)
    # the differential out of degree k lands in k-1 (chains) or k+1 (cochains)
    there_k = k + 1 if cohomology else k - 1
    there = _integer_group(c, there_k, cohomology) if there_k >= 0 else ZERO
    orders: list[int] = []
    for g in G.components():
        if g == 0:
            orders += here.components()
        else:
            orders += here.tensor_cyclic(g).components() + there.tor_cyclic(g).components()
    return FgAbelianGroup.from_orders(orders)


def homology(c: CellComplex, k: int, coeff=None) -> FgAbelianGroup:
    """``H_k(c; coeff)`` where coeff is Z (``None``), an int d for Z_d, or a group."""
    return _graded_group(c, k, coeff, cohomology=False)


def cohomology(c: CellComplex, k: int, coeff=None) -> FgAbelianGroup:
    """``H^k(c; coeff)``, the homology of the transposed complex."""
    return _graded_group(c, k, coeff, cohomology=True)


def betti_numbers(c: CellComplex) -> tuple[int, ...]:
    return tuple(homology(c, k).free_rank for k in range(c.dimension + 1))


# -- linear solves ----------------------------------------------------------------


def solve_with_snf(res: SnfResult, b, d: int | None = None) -> list[int] | None:
    """A particular solution ``x`` of ``M x = b`` (mod d), or ``None``.

    ``res`` is the SNF of ``M``.  Over Z_d the ``i``-th diagonal equation
    ``a_i z_i = y_i`` is solvable iff ``gcd(a_i, d) | y_i``.
    """
    rows, cols = res.shape
    b = [int(x) for x in np.asarray(b, dtype=object).ravel()]
    if len(b) != rows:
        raise DegreeError(f"right-hand side has length {len(b)}, expected {rows}")
    y = [sum(u * x for u, x in zip(row, b)) for row in res.U]
    z = [0] * cols
    for i, yi in enumerate(y):
        if i < res.rank:
            a = res.diagonal[i]
            if d is None:
                if yi % a:
                    return None
                z[i] = yi // a
            else:
                g = math.gcd(a, d)
                if yi % g:
                    return None
                dg = d // g
                z[i] = (yi // g) * pow(a // g, -1, dg) % dg if dg > 1 else 0
        elif (yi % d if d else yi) != 0:
            return None
    x = [sum(v * zz for v, zz in zip(row, z)) for row in res.V]
    return [xi % d for xi in x] if d else x


def _check_vector(v: ChainVector, c: CellComplex) -> None:
    if v.degree < 0 or v.degree > c.dimension:
        raise DegreeError(f"degree {v.degree} outside [0, {c.dimension}]")
    v.check_in(c)


def is_cycle(v: ChainVector, c: CellComplex, d: int | None = None, cohomology: bool = False) -> bool:
    """``∂v ≡ 0`` (or ``δv ≡ 0`` when ``cohomology``) modulo d."""
    _check_vector(v, c)
    out = differential(c, v.degree, cohomology) @ v.to_array(c)
    return not np.any(out % d if d else out)


def is_boundary(v: ChainVector, c: CellComplex, d: int | None = None, cohomology: bool = False) -> bool:
    """Whether ``v = ∂w`` (or ``δw``) for some w, modulo d."""
    return boundary_preimage(v, c, d, cohomology) is not None


def boundary_preimage(
    v: ChainVector, c: CellComplex, d: int | None = None, cohomology: bool = False
) -> ChainVector | None:
    _check_vector(v, c)
    k = v.degree
    res = incoming_snf(c, k, cohomology)
    sol = solve_with_snf(res, v.to_array(c), d)
    if sol is None:
        return None
    src = k - 1 if cohomology else k + 1
    if not c.count(src):
        return ChainVector.zero(src)
    return ChainVector.from_array(c, src, sol, d)


# -- representatives ----------------------------------------------------------------


def _quotient_generators(
    out_snf: SnfResult, inc: np.ndarray, n: int, d: int | None
) -> list[tuple[list[int], int]]:
    """Generators of ``ker(out) / im(inc)`` on ``n`` coordinates, as (vector, order) pairs.

    Order 0 means infinite.  Kernel generators come from the columns of the
    SNF column transform; the image is rewritten in those coordinates and the
    resulting presentation is diagonalized once more.
    """
    r = out_snf.rank
    kernel: list[tuple[int, int, int]] = []  # (column, scale, order)
    for i in range(n):
        if i < r:
            if d is None:
                continue
            g = math.gcd(out_snf.diagonal[i], d)
            if g > 1:
                kernel.append((i, d // g, g))
        else:
            kernel.append((i, 1, d or 0))
    if not kernel:
        return []
    V, V_inv = out_snf.V, out_snf.V_inv
    inc_cols = np.asarray(inc, dtype=object).T.tolist() if np.asarray(inc).size else []
    relations: list[list[int]] = []
    for b in inc_cols:
        y = [sum(a * x for a, x in zip(row, b)) for row in V_inv]
        # exact integer boundaries have no component along the first r columns
        relations.append([y[i] // scale for i, scale, _ in kernel])
    for t, (_, _, order) in enumerate(kernel):
        if order:
            relations.append([order if s == t else 0 for s in range(len(kernel))])
    N = len(kernel)
    R = [[rel[t] for rel in relations] for t in range(N)] if relations else [[] for _ in range(N)]
    res = smith_normal_form(np.array(R, dtype=object).reshape(N, len(relations)))
    gens = []
    for j in range(N):
        order = res.diagonal[j] if j < res.rank else 0
        if order == 1:
            continue
        coeffs = [res.U_inv[t][j] for t in range(N)]
        vec = [0] * n
        for (col, scale, _), a in zip(kernel, coeffs):
            if a:
                for row in range(n):
                    vec[row] += a * scale * V[row][col]
        if d:
            vec = [x % d for x in vec]
            order = order if order else d
        gens.append((vec, order))
    return gens


def _reduce_weight(vec: list[int], inc: np.ndarray, d: int | None) -> list[int]:
    """Greedily add multiples of boundary columns while the weight drops."""
    cols = [np.asarray(col, dtype=np.int64) for col in np.asarray(inc).T] if np.asarray(inc).size else []
    mults = range(1, d) if d else (1, -1)
    v = np.asarray(vec, dtype=np.int64)

    def wt(x):
        return int(np.count_nonzero(x % d if d else x))

    while True:
        best = None
        w0 = wt(v)
        for j, col in enumerate(cols):
            for m in mults:
                cand = v + m * col
                if d:
                    cand %= d
                w = wt(cand)
                if w < w0 and (best is None or (w, tuple(cand)) < best[0]):
                    best = ((w, tuple(cand)), cand)
        if best is None:
            return [int(x) for x in v]
        v = best[1]


def homology_generators(
    c: CellComplex, k: int, d: int | None, cohomology: bool = False, reduce: bool = True
) -> list[tuple[ChainVector, int]]:
    """(representative, order) pairs generating ``H_k`` (or ``H^k``) with Z_d coefficients.

    The product of the orders is the group order.  ``d=None`` works over Z, with
    order 0 for free generators.
    """
    if not 0 <= k <= c.dimension:
        return []
    out = differential_snf(c, k, cohomology)
    inc = incoming(c, k, cohomology)
    gens = _quotient_generators(out, inc, c.count(k), d)
    result = []
    for vec, order in gens:
        if reduce:
            vec = _reduce_weight(vec, inc, d)
        result.append((ChainVector.from_array(c, k, vec, d), order))
    return result


def class_representatives(c: CellComplex, k: int, d: int, cohomology: bool = False) -> list[ChainVector]:
    """One low-weight cycle (cocycle) per generator of ``H_k(c; Z_d)`` (``H^k``)."""
    if d is None or d < 2:
        raise DegreeError("class_representatives needs a finite modulus d >= 2")
    return [v for v, _ in homology_generators(c, k, d, cohomology)]
