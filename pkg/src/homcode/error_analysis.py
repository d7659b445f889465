"""Syndromes, error components, distance, decoding and energy barriers.

An error is a pair of chains over Z_d: ``x_part`` holds X_d exponents and
``z_part`` holds Z_d exponents, both on the code's k-cells.  Which checks see
which part depends on the code's mode.  In homology mode the V checks read
``∂ x_part`` and the P checks read ``δ z_part``; cohomology mode swaps the
two parts.  Everything in this module works with those two incidence
matrices, called the V side (``∂_k``) and the P side (``∂_{k+1}^T``).
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .exceptions import CapacityError, DegreeError, InfeasibleSyndromeError
from .homology import ChainVector, differential, differential_snf, is_boundary, solve_with_snf
from .stabilizer import HOMOLOGY, HomologicalCode, QuditPauliOperator, symplectic_phase

V_SIDE = "V"
P_SIDE = "P"
BARRIER_MAX_CELLS = 20


# -- data types -------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorConfig:
    d: int
    x_part: ChainVector
    z_part: ChainVector

    @classmethod
    def make(cls, d: int, k: int, x: Mapping[str, int] | None = None,
             z: Mapping[str, int] | None = None) -> "ErrorConfig":
        return cls(d, ChainVector(k, x or {}).reduced(d), ChainVector(k, z or {}).reduced(d))

    def __post_init__(self):
        if self.x_part.degree != self.z_part.degree:
            raise DegreeError("x_part and z_part must have the same degree")

    @property
    def degree(self) -> int:
        return self.x_part.degree

    def __add__(self, other: "ErrorConfig") -> "ErrorConfig":
        if self.d != other.d:
            raise DegreeError(f"modulus mismatch: {self.d} vs {other.d}")
        return ErrorConfig(self.d, (self.x_part + other.x_part).reduced(self.d),
                           (self.z_part + other.z_part).reduced(self.d))

    def operator(self) -> QuditPauliOperator:
        return QuditPauliOperator(self.d, self.x_part.coeffs, self.z_part.coeffs)

    @property
    def weight(self) -> int:
        return len(set(self.x_part.support) | set(self.z_part.support))

    def to_dict(self) -> dict:
        return {"d": self.d, "degree": self.degree, "x": dict(self.x_part.coeffs),
                "z": dict(self.z_part.coeffs)}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ErrorConfig":
        return cls.make(int(doc["d"]), int(doc["degree"]), doc.get("x", {}), doc.get("z", {}))


@dataclass(frozen=True)
class Syndrome:
    """Nonzero check values: V checks on (k-1)-cells and P checks on (k+1)-cells."""

    d: int
    v_violations: Mapping[str, int] = field(default_factory=dict)
    p_violations: Mapping[str, int] = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return not self.v_violations and not self.p_violations

    @property
    def weight(self) -> int:
        return len(self.v_violations) + len(self.p_violations)

    def values(self) -> list[int]:
        return list(self.v_violations.values()) + list(self.p_violations.values())

    def __add__(self, other: "Syndrome") -> "Syndrome":
        def merge(a, b):
            out = dict(a)
            for key, val in b.items():
                out[key] = (out.get(key, 0) + val) % self.d
            return {key: val for key, val in sorted(out.items()) if val}

        return Syndrome(self.d, merge(self.v_violations, other.v_violations),
                        merge(self.p_violations, other.p_violations))

    def to_dict(self) -> dict:
        return {"d": self.d, "v": dict(self.v_violations), "p": dict(self.p_violations)}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Syndrome":
        d = int(doc["d"])
        clean = lambda m: {str(k): int(v) % d for k, v in sorted(m.items()) if int(v) % d}  # noqa: E731
        return cls(d, clean(doc.get("v", {})), clean(doc.get("p", {})))


@dataclass(frozen=True)
class ErbComponent:
    """One connected degree-1 piece of an error and the checks it violates.

    ``chain`` has coefficients ``±1`` (mod d) and ``boundary`` is its
    contribution to the syndrome, keyed by check cell.
    """

    kind: str
    chain: ChainVector
    boundary: Mapping[str, int]

    @property
    def cells(self) -> tuple[str, ...]:
        return tuple(self.boundary)

    def to_dict(self) -> dict:
        return {"type": self.kind, "chain": self.chain.to_dict(), "boundary": dict(self.boundary)}


# -- sides ------------------------------------------------------------------------------


def _side_part(code: HomologicalCode, side: str) -> str:
    """Which error part ("x" or "z") the checks of ``side`` detect."""
    if side not in (V_SIDE, P_SIDE):
        raise ValueError(f"side must be {V_SIDE!r} or {P_SIDE!r}")
    homology_mode = code.mode == HOMOLOGY
    return "x" if (side == V_SIDE) == homology_mode else "z"


def side_matrix(code: HomologicalCode, side: str) -> np.ndarray:
    """Incidence matrix from k-cells to the checks of ``side``."""
    return differential(code.complex, code.k, cohomology=(side == P_SIDE))


def _check_ids(code: HomologicalCode, side: str) -> tuple[str, ...]:
    return code.complex.ids(code.k - 1 if side == V_SIDE else code.k + 1)


def _part(e: ErrorConfig, which: str) -> ChainVector:
    return e.x_part if which == "x" else e.z_part


def _require_finite(code: HomologicalCode) -> int:
    if code.d is None:
        raise DegreeError("this analysis needs a finite modulus")
    return code.d


def _check_error(code: HomologicalCode, e: ErrorConfig) -> None:
    if e.d != code.d:
        raise DegreeError(f"error modulus {e.d} does not match code modulus {code.d}")
    if e.degree != code.k:
        raise DegreeError(f"error degree {e.degree} does not match code degree {code.k}")
    e.x_part.check_in(code.complex)
    e.z_part.check_in(code.complex)


def _side_values(code: HomologicalCode, side: str, chain: ChainVector) -> dict[str, int]:
    M = side_matrix(code, side)
    ids = _check_ids(code, side)
    if not ids:
        return {}
    vals = (M @ chain.to_array(code.complex)) % code.d
    return {cid: int(v) for cid, v in zip(ids, vals) if v}


# -- syndrome ---------------------------------------------------------------------------


def syndrome(code: HomologicalCode, e: ErrorConfig) -> Syndrome:
    """Check values of an error: ``∂`` of one part on V checks, ``δ`` of the other on P checks."""
    _require_finite(code)
    _check_error(code, e)
    v = _side_values(code, V_SIDE, _part(e, _side_part(code, V_SIDE)))
    p = _side_values(code, P_SIDE, _part(e, _side_part(code, P_SIDE)))
    return Syndrome(code.d, v, p)


def check_value(check: QuditPauliOperator, error: QuditPauliOperator) -> int:
    """Violation value of one check: its commutation exponent with the error.

    Z-type checks use ``phase(check, error)`` and X-type checks
    ``phase(error, check)``, which makes the values read ``∂x`` and ``δz``
    with the incidence signs of the complex.
    """
    return symplectic_phase(check, error) if check.z else symplectic_phase(error, check)


def syndrome_by_phases(code: HomologicalCode, e: ErrorConfig) -> Syndrome:
    """The same syndrome computed check by check from symplectic phases."""
    err = e.operator()
    v, p = {}, {}
    for kind, cell, op in code.stabilizers():
        s = check_value(op, err)
        if s:
            (v if kind == "V" else p)[cell] = s
    return Syndrome(code.d, v, p)


# -- decomposition into components -------------------------------------------------------


def _decompose_side(code: HomologicalCode, side: str, chain: ChainVector) -> list[ErbComponent]:
    d = code.d
    c = code.complex
    sites = code.sites
    checks = _check_ids(code, side)
    M = side_matrix(code, side)
    col = {s: {checks[r]: int(M[r, j]) for r in np.nonzero(M[:, j])[0]} for j, s in enumerate(sites)}
    by_check: dict[str, list[str]] = {}
    for s in sites:
        for a in col[s]:
            by_check.setdefault(a, []).append(s)

    # pool: cell -> [copies, sign]; a residue r is r stacked copies of +1
    pool = {s: [v % d, 1] for s, v in chain.coeffs.items() if v % d}
    flipped: set[str] = set()
    comps = []
    order = {s: i for i, s in enumerate(sites)}

    while pool:
        seed = min(pool, key=order.__getitem__)
        members = {seed: pool[seed][1]}
        bnd: dict[str, int] = dict((a, o * members[seed]) for a, o in col[seed].items())
        _take(pool, seed)
        grown = True
        while grown:
            grown = False
            for a in sorted((a for a, v in bnd.items() if abs(v) == 1), key=checks.index):
                for b in by_check.get(a, ()):
                    if abs(bnd[a]) != 1:
                        break
                    if b in members or b not in pool:
                        continue
                    need = -bnd[a] * col[b][a]  # sign that cancels the open face a
                    if pool[b][1] != need:
                        if d == 2:
                            pool[b][1] = need  # -1 and +1 coincide
                        elif b not in flipped:
                            # r copies of +s are d - r copies of -s
                            flipped.add(b)
                            pool[b] = [d - pool[b][0], need]
                        else:
                            continue
                    trial = dict(bnd)
                    for f, o in col[b].items():
                        trial[f] = trial.get(f, 0) + o * need
                    if any(abs(v) > 1 for v in trial.values()):
                        continue
                    members[b] = need
                    bnd = trial
                    _take(pool, b)
                    grown = True
                if grown:
                    break
        comp_chain = ChainVector(code.k, {s: sgn % d for s, sgn in members.items()})
        boundary = {a: v % d for a, v in sorted(bnd.items(), key=lambda kv: checks.index(kv[0])) if v % d}
        comps.append(ErbComponent(side, comp_chain, boundary))
    return comps


def _take(pool: dict, cell: str) -> None:
    pool[cell][0] -= 1
    if pool[cell][0] == 0:
        del pool[cell]


def decompose_error(code: HomologicalCode, e: ErrorConfig) -> list[ErbComponent]:
    """Split an error into maximal connected components of degree 1.

    Each residue ``r`` on a cell starts as ``r`` stacked copies with orientation
    +1.  Components grow from the first remaining cell in cell order by pasting
    neighbours across a shared open check so that their contributions there
    cancel.  A neighbour whose orientation disagrees is rewritten once as
    ``d - r`` copies of the opposite orientation before pasting.  The V side
    is connected through (k-1)-cells and the P side through (k+1)-cells.
    The components of each side sum to that part of the error and their
    boundaries sum to its syndrome.
    """
    _require_finite(code)
    _check_error(code, e)
    out = []
    for side in (V_SIDE, P_SIDE):
        out.extend(_decompose_side(code, side, _part(e, _side_part(code, side))))
    return out


def recombine(code: HomologicalCode, comps: list[ErbComponent]) -> tuple[ErrorConfig, Syndrome]:
    """Sum components back into an error and a syndrome (the decomposition's inverse)."""
    d = code.d
    parts = {"x": ChainVector.zero(code.k), "z": ChainVector.zero(code.k)}
    bnd = {V_SIDE: {}, P_SIDE: {}}
    for comp in comps:
        which = _side_part(code, comp.kind)
        parts[which] = (parts[which] + comp.chain).reduced(d)
        for a, v in comp.boundary.items():
            bnd[comp.kind][a] = (bnd[comp.kind].get(a, 0) + v) % d
    clean = lambda m: {a: v for a, v in m.items() if v}  # noqa: E731
    return (ErrorConfig(d, parts["x"], parts["z"]),
            Syndrome(d, clean(bnd[V_SIDE]), clean(bnd[P_SIDE])))


# -- exhaustive low-weight enumeration ----------------------------------------------------


def _weighted_candidates(n: int, d: int, w: int, chunk: int = 4096) -> Iterator[np.ndarray]:
    """All length-n vectors of weight exactly w over Z_d, in lexicographic support order.

    Yields dense integer arrays of shape ``(batch, n)``.
    """
    coeffs = np.array(list(itertools.product(range(1, d), repeat=w)), dtype=np.int64).reshape(-1, w)
    supports = itertools.combinations(range(n), w)
    while True:
        block = list(itertools.islice(supports, chunk))
        if not block:
            return
        sup = np.array(block, dtype=np.int64).reshape(len(block), w)
        out = np.zeros((len(block), len(coeffs), n), dtype=np.int64)
        rows = np.arange(len(block))[:, None, None]
        cidx = np.arange(len(coeffs))[None, :, None]
        out[rows, cidx, sup[:, None, :]] = coeffs[None, :, :]
        yield out.reshape(-1, n)


def _search(M: np.ndarray, target: np.ndarray, d: int, cap: int, accept=None) -> Iterator[np.ndarray]:
    """Vectors ``x`` with ``M x ≡ target`` in order of weight, then support, then coefficients."""
    n = M.shape[1]
    for w in range(0, min(cap, n) + 1):
        if w == 0:
            batches = [np.zeros((1, n), dtype=np.int64)]
        else:
            batches = _weighted_candidates(n, d, w)
        for cand in batches:
            if M.shape[0]:
                hit = np.all((cand @ M.T - target) % d == 0, axis=1)
            else:
                hit = np.ones(len(cand), dtype=bool)
            for x in cand[hit]:
                if accept is None or accept(x):
                    yield x


@dataclass
class DistanceResult:
    x_distance: int | None
    z_distance: int | None
    x_witness: ChainVector | None
    z_witness: ChainVector | None
    cap: int
    has_logicals: bool

    @property
    def distance(self) -> int | None:
        vals = [v for v in (self.x_distance, self.z_distance) if v is not None]
        return min(vals) if vals else None

    @property
    def exhausted(self) -> bool:
        return self.has_logicals and self.distance is None

    def describe(self) -> str:
        if not self.has_logicals:
            return "no logicals"
        if self.distance is None:
            return f">= {self.cap + 1}"
        return str(self.distance)

    def to_dict(self) -> dict:
        w = lambda v: v.to_dict() if v is not None else None  # noqa: E731
        return {
            "distance": self.describe(),
            "x_distance": self.x_distance,
            "z_distance": self.z_distance,
            "x_witness": w(self.x_witness),
            "z_witness": w(self.z_witness),
            "cap": self.cap,
        }


def _side_systole(code: HomologicalCode, cohomology: bool, cap: int) -> ChainVector | None:
    """Lowest-weight (co)cycle that is not a (co)boundary, or None within the cap."""
    c, k, d = code.complex, code.k, code.d
    M = differential(c, k, cohomology)

    def nontrivial(x):
        return not is_boundary(ChainVector.from_array(c, k, x, d), c, d, cohomology)

    for x in _search(M, np.zeros(M.shape[0], dtype=np.int64), d, cap, nontrivial):
        if np.any(x):
            return ChainVector.from_array(c, k, x, d)
    return None


def code_distance(code: HomologicalCode, cap: int | None = None) -> DistanceResult:
    """Minimum weight of a nontrivial logical, found by exhaustive search.

    ``x_distance`` is the systole on the shifting side (cycles in homology
    mode) and ``z_distance`` the one on the phase side; ``distance`` is the
    smaller of the two.  Searches stop at weight ``cap`` (default: all sites).
    """
    d = _require_finite(code)
    cap = code.n_qudits if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be >= 1")
    dim = _code_dimension(code)
    if dim == 1:
        return DistanceResult(None, None, None, None, cap, False)
    shift_coh = code.mode != HOMOLOGY
    xw = _side_systole(code, shift_coh, cap)
    zw = _side_systole(code, not shift_coh, cap)
    return DistanceResult(xw.weight if xw else None, zw.weight if zw else None, xw, zw, cap, True)


def _code_dimension(code: HomologicalCode) -> int:
    from .stabilizer import code_dimension

    return code_dimension(code)


# -- decoding ---------------------------------------------------------------------------


@dataclass
class DecodeResult:
    correction: ErrorConfig | None
    found: bool
    success: bool | None = None

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "success": self.success,
            "correction": self.correction.to_dict() if self.correction else None,
        }


def _feasible(code: HomologicalCode, side: str, target: list[int]) -> bool:
    if not target:
        return True
    res = differential_snf(code.complex, code.k, cohomology=(side == P_SIDE))
    return solve_with_snf(res, target, code.d) is not None


def decode_min_weight(code: HomologicalCode, s: Syndrome, cap: int | None = None,
                      injected: ErrorConfig | None = None) -> DecodeResult:
    """Minimum-weight correction reproducing ``s`` on each side, ties lexicographic.

    Raises :class:`InfeasibleSyndromeError` when a side's syndrome is not a
    (co)boundary.  With ``injected`` the result records whether the residual
    error is trivial (a boundary on the shifting side, a coboundary on the
    phase side).
    """
    d = _require_finite(code)
    if s.d != d:
        raise DegreeError(f"syndrome modulus {s.d} does not match code modulus {d}")
    cap = code.n_qudits if cap is None else cap
    c, k = code.complex, code.k
    parts = {}
    for side, vals in ((V_SIDE, s.v_violations), (P_SIDE, s.p_violations)):
        ids = _check_ids(code, side)
        unknown = set(vals) - set(ids)
        if unknown:
            raise DegreeError(f"syndrome names cells that are not {side} checks: {sorted(unknown)}")
        target = [vals.get(a, 0) % d for a in ids]
        if not _feasible(code, side, target):
            raise InfeasibleSyndromeError(f"{side} syndrome is not in the image of the check matrix")
        M = side_matrix(code, side)
        sol = next(_search(M, np.array(target, dtype=np.int64), d, cap), None)
        if sol is None:
            return DecodeResult(None, False)
        parts[_side_part(code, side)] = ChainVector.from_array(c, k, sol, d)
    corr = ErrorConfig(d, parts["x"], parts["z"])
    success = None
    if injected is not None:
        success = logical_residual_trivial(code, injected, corr)
    return DecodeResult(corr, True, success)


def logical_residual_trivial(code: HomologicalCode, e: ErrorConfig, corr: ErrorConfig) -> bool:
    """Whether ``e - corr`` acts trivially on the code space."""
    d = code.d
    shift_coh = code.mode != HOMOLOGY
    rx = (e.x_part - corr.x_part).reduced(d)
    rz = (e.z_part - corr.z_part).reduced(d)
    return (is_boundary(rx, code.complex, d, shift_coh)
            and is_boundary(rz, code.complex, d, not shift_coh))


# -- energy barrier ---------------------------------------------------------------------


@dataclass
class BarrierResult:
    barrier: int | None
    path: list[str]
    endpoint: ChainVector | None

    def to_dict(self) -> dict:
        return {
            "barrier": self.barrier if self.barrier is not None else "none",
            "path": list(self.path),
            "endpoint": self.endpoint.to_dict() if self.endpoint is not None else None,
        }


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a) if hasattr(np, "bitwise_count") else np.array(
        [bin(int(v)).count("1") for v in a], dtype=np.int64)


def energy_barrier(code: HomologicalCode, side: str = V_SIDE,
                   max_cells: int = BARRIER_MAX_CELLS) -> BarrierResult:
    """Minimax syndrome weight over single-cell flip paths from 0 to a nontrivial logical.

    Works on the error part that ``side``'s checks detect (X errors against V
    checks by default).  The state space is all 2^n chains over Z_2; the
    search is a bottleneck Dijkstra whose path cost is the largest number of
    violated checks seen along the way.
    """
    if code.d != 2:
        raise DegreeError("energy_barrier is defined for d = 2")
    n = code.n_qudits
    if n > max_cells:
        raise CapacityError(f"{n} cells exceeds the barrier guard of {max_cells} (2^{n} states)")
    c, k = code.complex, code.k
    M = side_matrix(code, side) % 2
    m = M.shape[0]
    if m > 63:
        raise CapacityError(f"{m} checks exceeds the 63-bit syndrome word")
    # bit j of a state is site j; bit r of a syndrome word is check r
    colword = np.array([sum(1 << r for r in range(m) if M[r, j]) for j in range(n)], dtype=np.uint64)
    N = 1 << n
    syn = np.zeros(N, dtype=np.uint64)
    for j in range(n):
        syn[1 << j: 1 << (j + 1)] = syn[: 1 << j] ^ colword[j]
    weight = _popcount(syn).astype(np.int64)

    # trivial endpoints: the span of the other side's check columns, i.e. boundaries
    if side == V_SIDE:
        src = differential(c, k + 1) if c.count(k + 1) else None
    else:
        src = differential(c, k - 1, cohomology=True) if k >= 1 and c.count(k - 1) else None
    cols = [] if src is None else np.asarray(src, dtype=np.int64).T
    gens = [int(sum(1 << j for j in range(n) if col[j] % 2)) for col in cols]
    trivial = np.zeros(N, dtype=bool)
    trivial[0] = True
    span = np.array([0], dtype=np.int64)
    for g in gens:
        if g and not trivial[g]:
            span = np.concatenate([span, span ^ g])
            trivial[span] = True
    goal = (syn == 0) & ~trivial
    if not goal.any():
        return BarrierResult(None, [], None)

    best = np.full(N, np.iinfo(np.int64).max, dtype=np.int64)
    prev = np.full(N, -1, dtype=np.int64)
    best[0] = 0
    heap = [(0, 0)]
    while heap:
        cost, u = heapq.heappop(heap)
        if cost > best[u]:
            continue
        if goal[u]:
            path = []
            v = u
            while v:
                p = int(prev[v])
                path.append(code.sites[(v ^ p).bit_length() - 1])
                v = p
            vec = [(u >> j) & 1 for j in range(n)]
            return BarrierResult(int(cost), path[::-1], ChainVector.from_array(c, k, vec, 2))
        for j in range(n):
            v = u ^ (1 << j)
            nc = max(cost, int(weight[v]))
            if nc < best[v]:
                best[v] = nc
                prev[v] = u
                heapq.heappush(heap, (nc, v))
    return BarrierResult(None, [], None)


def error_energy(s: Syndrome) -> float:
    """``sum_checks 2 - 2 cos(2 pi s / d)``."""
    return float(sum(2.0 - 2.0 * math.cos(2 * math.pi * v / s.d) for v in s.values()))
