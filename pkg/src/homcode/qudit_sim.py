"""Dense state-vector simulation of small codes.

The basis index of ``(C^d)^{⊗n}`` is read as the chain whose coefficient on
site ``i`` is the i-th base-d digit, most significant first, with sites in
the code's cell order.  Everything here is an oracle for the exact algebra in
:mod:`homcode.homology` and :mod:`homcode.stabilizer`, so it is deliberately
direct rather than clever.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import CapacityError, DegreeError
from .homology import ChainVector
from .stabilizer import HomologicalCode, QuditPauliOperator

MAX_DIM = 2**20
RANK_TOL = 1e-9


def _check_size(d: int | None, n: int, limit: int = MAX_DIM) -> int:
    if d is None:
        raise CapacityError("integer (infinite-dimensional) qudits cannot be simulated")
    dim = d**n
    if dim > limit:
        raise CapacityError(f"state space {d}^{n} = {dim} exceeds the limit {limit}")
    return dim


@dataclass
class DenseState:
    d: int
    sites: tuple[str, ...]
    amplitudes: np.ndarray

    @classmethod
    def basis(cls, d: int, sites: Sequence[str], chain: ChainVector | None = None) -> "DenseState":
        sites = tuple(sites)
        dim = _check_size(d, len(sites))
        amp = np.zeros(dim, dtype=complex)
        amp[chain_index(d, sites, chain)] = 1.0
        return cls(d, sites, amp)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "DenseState":
        return DenseState(self.d, self.sites, self.amplitudes / self.norm)


def chain_index(d: int, sites: Sequence[str], chain: ChainVector | None) -> int:
    idx = 0
    coeffs = chain.coeffs if chain is not None else {}
    for s in sites:
        idx = idx * d + coeffs.get(s, 0) % d
    return idx


def index_chain(d: int, sites: Sequence[str], index: int, degree: int) -> ChainVector:
    digits = []
    for _ in sites:
        digits.append(index % d)
        index //= d
    return ChainVector(degree, dict(zip(sites, reversed(digits))))


def _apply_array(op: QuditPauliOperator, arr: np.ndarray, sites: Sequence[str]) -> np.ndarray:
    """Apply ``op`` to every column of ``arr`` (shape ``(d**n,)`` or ``(d**n, m)``)."""
    d = op.d
    n = len(sites)
    pos = {s: i for i, s in enumerate(sites)}
    for s in list(op.x) + list(op.z):
        if s not in pos:
            raise DegreeError(f"operator acts on {s!r}, which is not a site")
    extra = arr.shape[1:]
    t = arr.reshape((d,) * n + extra).astype(complex, copy=True)
    zeta = np.exp(2j * np.pi / d)
    # Z part first: Z^z multiplies |j> by zeta^(z j)
    for s, e in op.z.items():
        shape = [1] * t.ndim
        shape[pos[s]] = d
        t *= (zeta ** (e * np.arange(d) % d)).reshape(shape)
    # then X part: X^x sends |j> to |j + x>
    for s, e in op.x.items():
        t = np.roll(t, e, axis=pos[s])
    if op.phase:
        t *= zeta**op.phase
    return t.reshape(arr.shape)


def apply_pauli(state: DenseState, op: QuditPauliOperator) -> DenseState:
    if op.d != state.d:
        raise DegreeError(f"modulus mismatch: state {state.d}, operator {op.d}")
    _check_size(state.d, len(state.sites))
    return DenseState(state.d, state.sites, _apply_array(op, state.amplitudes, state.sites))


def pauli_matrix(op: QuditPauliOperator, sites: Sequence[str], limit: int = 4096) -> np.ndarray:
    dim = _check_size(op.d, len(sites), limit)
    return _apply_array(op, np.eye(dim, dtype=complex), sites)


def _code_sites(code: HomologicalCode, limit: int = MAX_DIM) -> tuple[int, tuple[str, ...]]:
    dim = _check_size(code.d, code.n_qudits, limit)
    return dim, code.sites


def _average_power(op: QuditPauliOperator, arr: np.ndarray, sites, d: int) -> np.ndarray:
    """``(1/d) sum_m op^m`` applied to ``arr``: the projector onto op's +1 eigenspace."""
    acc = arr.astype(complex, copy=True)
    cur = arr
    for _ in range(d - 1):
        cur = _apply_array(op, cur, sites)
        acc = acc + cur
    return acc / d


def code_projector_apply(code: HomologicalCode, arr: np.ndarray) -> np.ndarray:
    """Product of the stabilizer eigenprojectors applied to ``arr``."""
    for _, _, op in code.stabilizers():
        arr = _average_power(op, arr, code.sites, code.d)
    return arr


def _orthonormal_range(m: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, s > tol]


def ground_space_basis(code: HomologicalCode, limit: int = 4096) -> np.ndarray:
    """Orthonormal basis (as columns) of the joint +1 eigenspace of all stabilizers."""
    dim, sites = _code_sites(code, limit)
    proj = code_projector_apply(code, np.eye(dim, dtype=complex))
    return _orthonormal_range(proj)


def ground_space_dimension(code: HomologicalCode, limit: int = MAX_DIM, svd_limit: int = 4096,
                           batch: int = 256) -> int:
    """Dimension of the joint fixed space of all stabilizers.

    Small spaces take the SVD rank of the projector product (singular values
    above 1e-9).  Larger ones sum its diagonal in column batches, since the
    trace of a projector is its rank; the trace must then sit within 1e-6 of
    an integer.
    """
    dim, sites = _code_sites(code, limit)
    if dim <= svd_limit:
        return ground_space_basis(code, svd_limit).shape[1]
    total = 0.0
    for start in range(0, dim, batch):
        stop = min(dim, start + batch)
        cols = np.zeros((dim, stop - start), dtype=complex)
        cols[np.arange(start, stop), np.arange(stop - start)] = 1.0
        out = code_projector_apply(code, cols)
        total += float(np.real(out[np.arange(start, stop), np.arange(stop - start)].sum()))
    rank = int(round(total))
    if abs(total - rank) > 1e-6:
        raise ArithmeticError(f"projector trace {total} is not an integer")
    return rank


def hamiltonian_apply(code: HomologicalCode, arr: np.ndarray) -> np.ndarray:
    """``sum_S (2 - S - S^dagger)`` over all V and P checks, applied to ``arr``."""
    out = np.zeros_like(arr, dtype=complex)
    for _, _, op in code.stabilizers():
        out += 2 * arr - _apply_array(op, arr, code.sites) - _apply_array(op.inverse(), arr, code.sites)
    return out


def energy(code: HomologicalCode, state: DenseState) -> float:
    psi = state.amplitudes
    return float(np.real(np.vdot(psi, hamiltonian_apply(code, psi))) / np.real(np.vdot(psi, psi)))


def check_energy(s: int, d: int) -> float:
    """Energy of one check with violation value s: ``|1 - zeta^s|^2``."""
    return 2.0 - 2.0 * np.cos(2 * np.pi * s / d)


def ground_state(code: HomologicalCode, chain: ChainVector | None = None) -> DenseState:
    """Normalized uniform superposition over the class of ``chain`` (default the zero chain).

    Built by enumerating all chains homologous to ``chain`` directly, so it is
    independent of the projector route.
    """
    dim, sites = _code_sites(code)
    d = code.d
    start = chain if chain is not None else ChainVector.zero(code.k)
    gens = [op.x for op in code.p_stabilizers.values()] if code.mode == "homology" else [
        op.x for op in code.v_stabilizers.values()]
    seen = {chain_index(d, sites, start)}
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            for g in gens:
                moved = dict(c.coeffs)
                for s, v in g.items():
                    moved[s] = (moved.get(s, 0) + v) % d
                cv = ChainVector(code.k, moved)
                i = chain_index(d, sites, cv)
                if i not in seen:
                    seen.add(i)
                    nxt.append(cv)
        frontier = nxt
    amp = np.zeros(dim, dtype=complex)
    amp[list(seen)] = 1.0
    return DenseState(d, sites, amp / np.linalg.norm(amp))


@dataclass
class SpectrumReport:
    min_expectation: float
    min_eigenvalue: float | None
    ground_energy: float
    syndrome_energy_error: float
    trials: int

    @property
    def ok(self) -> bool:
        return (self.min_expectation >= -RANK_TOL and self.ground_energy < RANK_TOL
                and self.syndrome_energy_error < RANK_TOL
                and (self.min_eigenvalue is None or self.min_eigenvalue >= -RANK_TOL))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "min_expectation": self.min_expectation,
            "min_eigenvalue": self.min_eigenvalue,
            "ground_energy": self.ground_energy,
            "syndrome_energy_error": self.syndrome_energy_error,
            "trials": self.trials,
        }


def hamiltonian_spectrum_check(code: HomologicalCode, trials: int = 20, seed: int = 0,
                               full_spectrum_limit: int = 1024) -> SpectrumReport:
    """Non-negativity of H plus the per-check energy law on random error states.

    Random states give ``<psi|H|psi> >= 0``.  For random Pauli errors E on a
    ground state, the energy must equal ``sum_S |1 - zeta^s_S|^2`` where s_S is
    the commutation exponent of E with check S.
    """
    from .stabilizer import symplectic_phase

    dim, sites = _code_sites(code)
    rng = np.random.default_rng(seed)
    min_exp = np.inf
    for _ in range(trials):
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        min_exp = min(min_exp, energy(code, DenseState(code.d, sites, psi)))
    min_eig = None
    if dim <= full_spectrum_limit:
        H = hamiltonian_apply(code, np.eye(dim, dtype=complex))
        min_eig = float(np.linalg.eigvalsh((H + H.conj().T) / 2).min())
    g = ground_state(code)
    e0 = energy(code, g)
    worst = 0.0
    for _ in range(trials):
        x = {s: int(v) for s, v in zip(sites, rng.integers(0, code.d, len(sites))) if rng.random() < 0.3}
        z = {s: int(v) for s, v in zip(sites, rng.integers(0, code.d, len(sites))) if rng.random() < 0.3}
        err = QuditPauliOperator(code.d, x, z)
        expected = sum(check_energy(symplectic_phase(err, op), code.d) for _, _, op in code.stabilizers())
        got = energy(code, apply_pauli(g, err))
        worst = max(worst, abs(got - expected))
    return SpectrumReport(float(min_exp), min_eig, e0, worst, trials)


# -- projector variant --------------------------------------------------------------


@dataclass
class ProjectorStabilizer:
    """A check realized as a projector that is not a product of single-qudit terms.

    ``kind == "diagonal"``: keep basis chains v with ``sum_i coeffs[i] v_i ≡ 0``.
    ``kind == "orbit"``: project onto the span of ``sum_m |v + m g>`` for the
    shift ``g = coeffs``.
    """

    label: str
    kind: str
    coeffs: dict[str, int]
    d: int
    sites: tuple[str, ...]

    def apply(self, arr: np.ndarray) -> np.ndarray:
        n = len(self.sites)
        d = self.d
        extra = arr.shape[1:]
        t = arr.reshape((d,) * n + extra)
        if self.kind == "diagonal":
            total = np.zeros((d,) * n, dtype=np.int64)
            for i, s in enumerate(self.sites):
                c = self.coeffs.get(s, 0)
                if c:
                    shape = [1] * n
                    shape[i] = d
                    total = total + (c * np.arange(d)).reshape(shape)
            mask = (total % d == 0).reshape((d,) * n + (1,) * len(extra))
            return (t * mask).reshape(arr.shape)
        # orbit average over the cyclic group generated by the shift
        acc = np.zeros_like(t, dtype=complex)
        cur = t
        for _ in range(d):
            acc = acc + cur
            for i, s in enumerate(self.sites):
                c = self.coeffs.get(s, 0)
                if c:
                    cur = np.roll(cur, c, axis=i)
        return (acc / d).reshape(arr.shape)

    def matrix(self) -> np.ndarray:
        dim = self.d ** len(self.sites)
        return self.apply(np.eye(dim, dtype=complex))


@dataclass
class ProjectorReport:
    projectors: list[ProjectorStabilizer]
    fixed_dimension: int
    pauli_dimension: int
    subspace_distance: float
    max_commutator: float
    max_idempotence_error: float

    def to_dict(self) -> dict:
        return {
            "n_projectors": len(self.projectors),
            "fixed_dimension": self.fixed_dimension,
            "pauli_dimension": self.pauli_dimension,
            "subspace_distance": self.subspace_distance,
            "max_commutator": self.max_commutator,
            "max_idempotence_error": self.max_idempotence_error,
        }


def build_projector_stabilizers(code: HomologicalCode, limit: int = 4096) -> ProjectorReport:
    """Projector checks and a comparison of their joint fixed space with the Pauli code's."""
    dim, sites = _code_sites(code, limit)
    projs = []
    for kind, cell, op in code.stabilizers():
        if op.x and op.z:
            raise DegreeError(f"{kind}:{cell} mixes X and Z; no projector form")
        if op.z:
            projs.append(ProjectorStabilizer(f"{kind}:{cell}", "diagonal", dict(op.z), code.d, sites))
        else:
            projs.append(ProjectorStabilizer(f"{kind}:{cell}", "orbit", dict(op.x), code.d, sites))
    mats = [p.matrix() for p in projs]
    idem = max((float(np.abs(m @ m - m).max()) for m in mats), default=0.0)
    comm = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = max(comm, float(np.abs(mats[i] @ mats[j] - mats[j] @ mats[i]).max()))
    arr = np.eye(dim, dtype=complex)
    for p in projs:
        arr = p.apply(arr)
    fixed = _orthonormal_range(arr)
    pauli = ground_space_basis(code, limit)
    dist = subspace_distance(fixed, pauli)
    return ProjectorReport(projs, fixed.shape[1], pauli.shape[1], dist, comm, idem)


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral norm of the difference of the orthogonal projectors onto two column spans."""
    pa = a @ a.conj().T
    pb = b @ b.conj().T
    if pa.size == 0:
        return 0.0
    return float(np.linalg.norm(pa - pb, 2))
