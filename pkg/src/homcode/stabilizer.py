"""Generalized Pauli operators over Z_d and the V/P stabilizer codes of a complex.

Operators are kept symplectically: exponent maps for X_d and Z_d plus a global
power of zeta_d, normal ordered as (all X) . (all Z).  With
``Z_d X_d = zeta_d X_d Z_d`` the group commutator
``[a, b] = a^-1 b^-1 a b`` equals ``zeta_d ** symplectic_phase(a, b)``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .complex_core import CellComplex, require_admissible
from .exceptions import DegreeError
from .homology import ChainVector, cohomology as cohomology_group, homology, homology_generators
from .snf import inverse_mod

HOMOLOGY = "homology"
COHOMOLOGY = "cohomology"


def _clean(exps: Mapping[str, int] | None, d: int | None) -> Mapping[str, int]:
    out = {}
    for k, v in sorted((exps or {}).items()):
        v = int(v) % d if d else int(v)
        if v:
            out[str(k)] = v
    return MappingProxyType(out)


class QuditPauliOperator:
    """``zeta_d**phase * prod X_i**x[i] * prod Z_i**z[i]``; ``d=None`` keeps integer exponents."""

    __slots__ = ("d", "x", "z", "phase")

    def __init__(self, d: int | None, x: Mapping[str, int] | None = None,
                 z: Mapping[str, int] | None = None, phase: int = 0):
        if d is not None and d < 2:
            raise DegreeError(f"modulus must be >= 2, got {d}")
        self.d = d
        self.x = _clean(x, d)
        self.z = _clean(z, d)
        self.phase = int(phase) % d if d else 0

    @classmethod
    def identity(cls, d: int | None) -> "QuditPauliOperator":
        return cls(d)

    @classmethod
    def X(cls, d: int | None, cell: str, power: int = 1) -> "QuditPauliOperator":
        return cls(d, x={cell: power})

    @classmethod
    def Z(cls, d: int | None, cell: str, power: int = 1) -> "QuditPauliOperator":
        return cls(d, z={cell: power})

    @classmethod
    def from_chain(cls, d: int | None, chain: ChainVector, kind: str) -> "QuditPauliOperator":
        if kind == "x":
            return cls(d, x=chain.coeffs)
        if kind == "z":
            return cls(d, z=chain.coeffs)
        raise ValueError(f"kind must be 'x' or 'z', got {kind!r}")

    def __repr__(self) -> str:
        return f"QuditPauliOperator(d={self.d}, x={dict(self.x)}, z={dict(self.z)}, phase={self.phase})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuditPauliOperator) and self.d == other.d and self.x == other.x
                and self.z == other.z and self.phase == other.phase)

    def __hash__(self) -> int:
        return hash((self.d, tuple(self.x.items()), tuple(self.z.items()), self.phase))

    def _same_modulus(self, other: "QuditPauliOperator") -> None:
        if self.d != other.d:
            raise DegreeError(f"modulus mismatch: {self.d} vs {other.d}")

    def __mul__(self, other: "QuditPauliOperator") -> "QuditPauliOperator":
        # X^a Z^b X^c Z^e = zeta^(b.c) X^(a+c) Z^(b+e)
        self._same_modulus(other)
        x = dict(self.x)
        for k, v in other.x.items():
            x[k] = x.get(k, 0) + v
        z = dict(self.z)
        for k, v in other.z.items():
            z[k] = z.get(k, 0) + v
        reorder = sum(v * other.x.get(k, 0) for k, v in self.z.items())
        return QuditPauliOperator(self.d, x, z, self.phase + other.phase + reorder)

    def __pow__(self, m: int) -> "QuditPauliOperator":
        if m < 0:
            return self.inverse() ** (-m)
        out = QuditPauliOperator.identity(self.d)
        base = self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def inverse(self) -> "QuditPauliOperator":
        # (X^a Z^b)^-1 = Z^-b X^-a = zeta^(a.b) X^-a Z^-b
        cross = sum(v * self.x.get(k, 0) for k, v in self.z.items())
        return QuditPauliOperator(
            self.d, {k: -v for k, v in self.x.items()}, {k: -v for k, v in self.z.items()},
            -self.phase + cross,
        )

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.x) | set(self.z)))

    @property
    def weight(self) -> int:
        return len(self.support)

    def x_chain(self, degree: int) -> ChainVector:
        return ChainVector(degree, self.x)

    def z_chain(self, degree: int) -> ChainVector:
        return ChainVector(degree, self.z)

    def to_dict(self) -> dict:
        return {"d": self.d, "x": dict(self.x), "z": dict(self.z), "phase": self.phase}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "QuditPauliOperator":
        return cls(doc.get("d"), doc.get("x", {}), doc.get("z", {}), doc.get("phase", 0))


def symplectic_phase(a: QuditPauliOperator, b: QuditPauliOperator) -> int:
    """Exponent e with ``a^-1 b^-1 a b = zeta_d**e``: ``sum_i a.z_i b.x_i - a.x_i b.z_i``.

    Single-site ``[Z_d, X_d]`` gives +1.  Over Z (``d=None``) the plain integer
    is returned.
    """
    a._same_modulus(b)
    e = sum(v * b.x.get(k, 0) for k, v in a.z.items()) - sum(v * b.z.get(k, 0) for k, v in a.x.items())
    return e % a.d if a.d else e


def commutes(a: QuditPauliOperator, b: QuditPauliOperator) -> bool:
    return symplectic_phase(a, b) == 0


@dataclass
class HomologicalCode:
    """Stabilizer code of degree k on a complex.

    ``v_stabilizers`` are indexed by (k-1)-cells, ``p_stabilizers`` by
    (k+1)-cells.  In homology mode V is Z-type on the coboundary of its cell and
    P is X-type on the boundary; cohomology mode swaps the Pauli types.
    ``pairing`` holds ``symplectic_phase(z_logicals[j], x_logicals[i])`` at
    ``[i][j]``; it is the identity whenever ``pairing_ok``.
    """

    complex: CellComplex
    k: int
    d: int | None
    mode: str
    v_stabilizers: Mapping[str, QuditPauliOperator]
    p_stabilizers: Mapping[str, QuditPauliOperator]
    x_logicals: list[QuditPauliOperator] = field(default_factory=list)
    z_logicals: list[QuditPauliOperator] = field(default_factory=list)
    logical_orders: list[int] = field(default_factory=list)
    pairing: list[list[int]] = field(default_factory=list)
    pairing_ok: bool = True

    @property
    def sites(self) -> tuple[str, ...]:
        return self.complex.ids(self.k)

    @property
    def n_qudits(self) -> int:
        return len(self.sites)

    def stabilizers(self) -> list[tuple[str, str, QuditPauliOperator]]:
        """``(kind, cell, operator)`` for every check, V first, each in cell order."""
        out = [("V", c, op) for c, op in self.v_stabilizers.items()]
        return out + [("P", c, op) for c, op in self.p_stabilizers.items()]

    def summary(self, distance: int | None = None) -> str:
        dist = "" if distance is None else f", {distance}"
        d = "Z" if self.d is None else str(self.d)
        return f"[[{self.n_qudits}, {len(self.x_logicals)}{dist}]]_{d}"

    def to_dict(self) -> dict:
        return {
            "complex": self.complex.label,
            "k": self.k,
            "d": self.d,
            "mode": self.mode,
            "n_qudits": self.n_qudits,
            "v_stabilizers": {c: op.to_dict() for c, op in self.v_stabilizers.items()},
            "p_stabilizers": {c: op.to_dict() for c, op in self.p_stabilizers.items()},
            "x_logicals": [op.to_dict() for op in self.x_logicals],
            "z_logicals": [op.to_dict() for op in self.z_logicals],
            "logical_orders": list(self.logical_orders),
            "pairing": self.pairing,
            "pairing_ok": self.pairing_ok,
        }


def _pairing_matrix(xs: list[QuditPauliOperator], zs: list[QuditPauliOperator]) -> list[list[int]]:
    return [[symplectic_phase(zj, xi) for zj in zs] for xi in xs]


def build_code(c: CellComplex, k: int, d: int | None, mode: str = HOMOLOGY) -> HomologicalCode:
    """Build the V/P stabilizers and a paired logical basis.

    Logical X operators shift by (co)cycle representatives, logical Z
    operators are the dual (co)cycles, rebased over Z_d so that the pairing
    matrix is the identity.  If the pairing is not invertible over Z_d (torsion
    classes with composite d) the raw basis is kept and ``pairing_ok`` is False.
    """
    if mode not in (HOMOLOGY, COHOMOLOGY):
        raise ValueError(f"mode must be {HOMOLOGY!r} or {COHOMOLOGY!r}")
    if not 0 <= k <= c.dimension:
        raise DegreeError(f"degree {k} outside [0, {c.dimension}]")
    if d is not None and d < 2:
        raise DegreeError(f"modulus must be >= 2, got {d}")
    require_admissible(c)

    shift, phase = ("x", "z") if mode == HOMOLOGY else ("z", "x")
    v_stabs = {}
    for alpha in c.ids(k - 1) if k >= 1 else ():
        exps = c.coboundary_cells(alpha)  # O(i, alpha) over i in the coboundary
        v_stabs[alpha] = QuditPauliOperator(d, **{phase: exps})
    p_stabs = {}
    for gamma in c.ids(k + 1):
        exps = c.boundary_cells(gamma)  # O(gamma, i) over i in the boundary
        p_stabs[gamma] = QuditPauliOperator(d, **{shift: exps})

    code = HomologicalCode(c, k, d, mode, MappingProxyType(v_stabs), MappingProxyType(p_stabs))
    if d is None:
        return code

    # homology mode: X logicals shift along cycles, Z logicals read cocycles
    cyc = homology_generators(c, k, d, cohomology=False)
    cocyc = homology_generators(c, k, d, cohomology=True)
    x_gens, z_gens = (cyc, cocyc) if mode == HOMOLOGY else (cocyc, cyc)
    xs = [QuditPauliOperator(d, x=v.coeffs) for v, _ in x_gens]
    zs = [QuditPauliOperator(d, z=v.coeffs) for v, _ in z_gens]
    pairing = _pairing_matrix(xs, zs)
    ok = len(xs) == len(zs)
    if ok and xs:
        try:
            inv = inverse_mod(pairing, d)
        except ValueError:
            ok = False
        else:
            # z'_j = sum_l z_l inv[l][j] makes pairing @ inv the identity
            new_zs = []
            for j in range(len(zs)):
                op = QuditPauliOperator.identity(d)
                for l, z in enumerate(zs):
                    if inv[l][j]:
                        op = op * z ** inv[l][j]
                new_zs.append(op)
            zs = new_zs
            pairing = _pairing_matrix(xs, zs)
    code.x_logicals = xs
    code.z_logicals = zs
    code.logical_orders = [o for _, o in x_gens]
    code.pairing = pairing
    code.pairing_ok = ok
    return code


def code_dimension(code: HomologicalCode) -> int:
    """Dimension of the code space: ``|H_k(T; Z_d)|`` or ``|H^k(T; Z_d)|``."""
    if code.d is None:
        raise DegreeError("code space over Z is infinite-dimensional")
    if code.mode == HOMOLOGY:
        return homology(code.complex, code.k, code.d).order
    return cohomology_group(code.complex, code.k, code.d).order


def check_commutation(code: HomologicalCode) -> list[tuple[str, str, int]]:
    """All stabilizer pairs with nonzero phase, as ``(label_a, label_b, phase)``; empty when valid."""
    bad = []
    stabs = code.stabilizers()
    for (ka, ca, a), (kb, cb, b) in itertools.combinations(stabs, 2):
        e = symplectic_phase(a, b)
        if e:
            bad.append((f"{ka}:{ca}", f"{kb}:{cb}", e))
    return bad


def check_logicals(code: HomologicalCode) -> list[str]:
    """Problems with the logical operators: non-commuting with a check or bad pairing."""
    problems = []
    for name, ops in (("X", code.x_logicals), ("Z", code.z_logicals)):
        for i, op in enumerate(ops):
            for kind, cell, s in code.stabilizers():
                if symplectic_phase(op, s):
                    problems.append(f"{name}{i} does not commute with {kind}:{cell}")
    n = len(code.x_logicals)
    if code.pairing_ok and code.pairing != [[int(i == j) for j in range(n)] for i in range(n)]:
        problems.append("pairing matrix is not the identity")
    return problems


def apply_stabilizer_product(ops: Iterable[QuditPauliOperator], chain: ChainVector) -> ChainVector:
    """Basis-state image of a product of operators, ignoring phases.

    The X part of each operator shifts the chain; Z parts act diagonally and
    leave it alone.  So ``P_gamma**m`` sends ``c`` to ``c + m ∂gamma``.
    """
    out = dict(chain.coeffs)
    d = None
    for op in ops:
        d = op.d
        for cell, v in op.x.items():
            out[cell] = out.get(cell, 0) + v
    return ChainVector(chain.degree, out).reduced(d)


def operator_json(op: QuditPauliOperator) -> str:
    return json.dumps(op.to_dict(), sort_keys=False)
