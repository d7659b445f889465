"""Obstruction-class codes built from a cellulated base and bundle transition data.

Every k-cell of the base carries a value in ``G = pi_k(F)``, written as an
integer tuple with one entry per cyclic component of ``G`` (free components
first).  For a (k+1)-cell ``gamma`` the adjusted check reads

    s_gamma = sum_{beta in ∂gamma} O(gamma, beta) * t_{gamma,beta}(a_beta) + f_gamma

where ``t(a) = aut @ a + offset`` is the trivialization change from the
frame the data on ``beta`` is recorded in to ``gamma``'s frame, and
``f_gamma`` is an extra constant.  A section cochain ``a`` extends over
``gamma`` exactly when ``s_gamma = 0``.  The values of the checks at ``a = 0``
form the reference obstruction cochain.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from . import complex_core
from .complex_core import CellComplex, cube_edge_id, sphere_cube
from .exceptions import BundleSpecError, CapacityError
from .homology import FgAbelianGroup, cohomology, solve_with_snf
from .snf import smith_normal_form

Element = tuple[int, ...]

DEFAULT_IRRATIONAL = (math.sqrt(5) - 1) / 2
DEFAULT_MAX_CONFIGS = 5**12


# -- group element arithmetic -------------------------------------------------------------


def reduce_element(G: FgAbelianGroup, g: Sequence[int]) -> Element:
    comps = G.components()
    if len(g) != len(comps):
        raise BundleSpecError(f"element {tuple(g)} has {len(g)} entries, {G} needs {len(comps)}")
    return tuple(int(x) % m if m else int(x) for x, m in zip(g, comps))


def element_degree(G: FgAbelianGroup, g: Sequence[int]) -> int:
    """Size of an element: sum of |x| over components, torsion entries taken centred."""
    total = 0
    for x, m in zip(g, G.components()):
        if m:
            x %= m
            x = min(x, m - x)
        total += abs(int(x))
    return total


def _zero(G: FgAbelianGroup) -> Element:
    return (0,) * len(G.components())


# -- bundle data ----------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionMap:
    """``a -> aut @ a + offset`` on the component tuple of G."""

    aut: tuple[tuple[int, ...], ...]
    offset: Element

    @classmethod
    def identity(cls, G: FgAbelianGroup, offset: Sequence[int] | None = None) -> "TransitionMap":
        r = len(G.components())
        aut = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        return cls(aut, tuple(offset) if offset is not None else (0,) * r)

    def check(self, G: FgAbelianGroup) -> None:
        comps = G.components()
        r = len(comps)
        if len(self.aut) != r or any(len(row) != r for row in self.aut) or len(self.offset) != r:
            raise BundleSpecError(f"transition shape does not match {G}")
        if not r:
            return
        free = G.free_rank
        # no torsion element may map to a free one
        if any(self.aut[i][j] for i in range(free) for j in range(free, r)):
            raise BundleSpecError("automorphism maps torsion into the free part")
        if free:
            det = round(np.linalg.det(np.array([row[:free] for row in self.aut[:free]], dtype=float)))
            if abs(det) != 1:
                raise BundleSpecError("automorphism is not unimodular on the free part")
        for t in G.torsion:
            # reduce to the block acting on components of order divisible by t
            idx = [i for i, m in enumerate(comps) if m and m % t == 0]
            sub = [[self.aut[i][j] for j in idx] for i in idx]
            d = round(np.linalg.det(np.array(sub, dtype=float))) if sub else 1
            if math.gcd(int(d), t) != 1:
                raise BundleSpecError(f"automorphism is not invertible mod {t}")

    def apply(self, G: FgAbelianGroup, a: Sequence[int]) -> Element:
        out = [sum(x * y for x, y in zip(row, a)) + o for row, o in zip(self.aut, self.offset)]
        return reduce_element(G, out)


@dataclass(frozen=True)
class BundleSpec:
    base: CellComplex
    k: int
    G: FgAbelianGroup
    transitions: Mapping[tuple[str, str], TransitionMap]
    f: Mapping[str, Element] = field(default_factory=dict)
    metadata: Mapping[str, object] = field(default_factory=dict)
    base_ref: Mapping[str, object] | None = None

    def __post_init__(self):
        if not 0 <= self.k < self.base.dimension + 1:
            raise BundleSpecError(f"degree {self.k} outside the base complex")
        for (g, b), t in self.transitions.items():
            if g not in self.base.ids(self.k + 1) or b not in self.base.boundary_cells(g):
                raise BundleSpecError(f"transition ({g}, {b}) is not an incidence of the base")
            t.check(self.G)
        for g in self.checks:
            for b in self.base.boundary_cells(g):
                if (g, b) not in self.transitions:
                    raise BundleSpecError(f"missing transition for cell {g} and face {b}")
        for g, val in self.f.items():
            if g not in self.base.ids(self.k + 1):
                raise BundleSpecError(f"f names {g!r}, which is not a {self.k + 1}-cell")
            reduce_element(self.G, val)

    @property
    def sites(self) -> tuple[str, ...]:
        return self.base.ids(self.k)

    @property
    def checks(self) -> tuple[str, ...]:
        return self.base.ids(self.k + 1)

    def zero_section(self) -> dict[str, Element]:
        return {b: _zero(self.G) for b in self.sites}

    @property
    def reference_obstruction(self) -> dict[str, Element]:
        """Check values on the zero section."""
        return {g: adjusted_check(self, g, {}) for g in self.checks}

    def linear_form(self) -> tuple[np.ndarray, np.ndarray]:
        """``(A, c)`` with flattened checks ``s = A a + c`` before reduction mod torsion."""
        r = len(self.G.components())
        sites = {b: i for i, b in enumerate(self.sites)}
        A = np.zeros((len(self.checks) * r, len(sites) * r), dtype=np.int64)
        c = np.zeros(len(self.checks) * r, dtype=np.int64)
        for gi, g in enumerate(self.checks):
            for b, o in self.base.boundary_cells(g).items():
                t = self.transitions[(g, b)]
                bi = sites[b]
                A[gi * r:(gi + 1) * r, bi * r:(bi + 1) * r] += o * np.array(t.aut, dtype=np.int64).reshape(r, r)
                c[gi * r:(gi + 1) * r] += o * np.array(t.offset, dtype=np.int64)
            c[gi * r:(gi + 1) * r] += np.array(self.f.get(g, _zero(self.G)), dtype=np.int64)
        return A, c

    def to_dict(self) -> dict:
        base = dict(self.base_ref) if self.base_ref else self.base.to_dict()
        return {
            "base": base,
            "k": self.k,
            "group": self.G.to_dict(),
            "transitions": [
                {"cell": g, "face": b, "aut": [list(r) for r in t.aut], "offset": list(t.offset)}
                for (g, b), t in sorted(self.transitions.items())
            ],
            "f": {g: list(v) for g, v in sorted(self.f.items())},
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "BundleSpec":
        try:
            base_doc = doc["base"]
            if "builder" in base_doc:
                name = base_doc["builder"]
                if name not in complex_core.BUILDERS:
                    raise BundleSpecError(f"unknown builder {name!r}")
                base = complex_core.BUILDERS[name](*base_doc.get("args", []))
                ref = dict(base_doc)
            else:
                base = CellComplex.from_dict(base_doc)
                ref = None
            G = FgAbelianGroup.from_dict(doc["group"])
            trans = {}
            for t in doc["transitions"]:
                key = (str(t["cell"]), str(t["face"]))
                if key in trans:
                    raise BundleSpecError(f"duplicate transition {key}")
                trans[key] = TransitionMap(tuple(tuple(int(x) for x in row) for row in t["aut"]),
                                           tuple(int(x) for x in t["offset"]))
            f = {str(g): tuple(int(x) for x in v) for g, v in doc.get("f", {}).items()}
            return cls(base, int(doc["k"]), G, trans, f, base_ref=ref)
        except (KeyError, TypeError) as exc:
            raise BundleSpecError(f"malformed bundle document: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "BundleSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BundleSpecError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)


def trivial_bundle(base: CellComplex, k: int, G: FgAbelianGroup,
                   f: Mapping[str, Sequence[int]] | None = None) -> BundleSpec:
    """Identity transitions with zero offsets; checks then read ``δa + f``."""
    trans = {(g, b): TransitionMap.identity(G) for g in base.ids(k + 1) for b in base.boundary_cells(g)}
    return BundleSpec(base, k, G, trans, {g: tuple(v) for g, v in (f or {}).items()})


# -- the tangent circle bundle of the cube --------------------------------------------------

# Rotation of the fibre between face frames, in units of pi/2.  The four side
# faces and the pairs (F, T), (F, Bo) agree; the rest follow from unfolding.
CUBE_THETA: dict[tuple[str, str], int] = {
    ("F", "L"): 0, ("L", "Ba"): 0, ("Ba", "R"): 0, ("R", "F"): 0,
    ("F", "T"): 0, ("F", "Bo"): 0,
    ("L", "T"): 1, ("Ba", "T"): 2, ("R", "T"): 3,
    ("L", "Bo"): 3, ("Ba", "Bo"): 2, ("R", "Bo"): 1,
}

# Crossing data for the regular value c = pi/4 on each face-to-face change of
# frame: (number of boundary 0-cells whose path passes c, orientation sign).
# Only the changes between F and T or F and Bo move an endpoint across c.
CUBE_CROSSINGS: dict[tuple[str, str], tuple[int, int]] = {}
for (_i, _j) in CUBE_THETA:
    for _a, _b in ((_i, _j), (_j, _i)):
        CUBE_CROSSINGS[(_a, _b)] = (0, 1)
for _p in (("F", "T"), ("F", "Bo")):
    CUBE_CROSSINGS[_p] = (1, -1)
    CUBE_CROSSINGS[_p[::-1]] = (1, 1)


def sk_bundle_tau(crossings: Mapping[object, tuple[int | Sequence, int]]) -> dict[object, int]:
    """Offsets from crossing parity: ``O(beta, F)`` when the crossing count is odd, else 0.

    Each value is ``(crossings, orientation)`` where ``crossings`` is either a
    count or the collection of (k-1)-cells meeting the preimage of the
    regular value.
    """
    out = {}
    for key, (cross, orient) in crossings.items():
        n = cross if isinstance(cross, int) else len(set(cross))
        if orient not in (1, -1):
            raise BundleSpecError(f"orientation for {key} must be +1 or -1, got {orient}")
        out[key] = orient if n % 2 else 0
    return out


def cube_tau() -> dict[tuple[str, str], int]:
    """``tau[(i, j)]``: shift applied when data recorded in frame i is read in frame j."""
    return sk_bundle_tau(CUBE_CROSSINGS)


def _cube_faces_of_edges(c: CellComplex) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for g in c.ids(2):
        for b in c.boundary_cells(g):
            out.setdefault(b, []).append(g)
    return out


def cube_edge_home(edge: str, faces: Sequence[str]) -> str:
    """Frame each edge's data is recorded in: F when F borders it, else the first face in cell order."""
    return "F" if "F" in faces else sorted(faces)[0]


def build_cube_tangent_bundle() -> BundleSpec:
    """Unit tangent bundle of the cube surface with fibre S^1, so G = Z and k = 1.

    Edge data lives in a home face frame; the other face reading the edge
    applies ``tau``.  The integer counts clockwise turns while face boundaries
    run counterclockwise, so the shift enters each reading face's sum as
    ``-tau`` whatever the edge's own orientation.  The transition offset is
    therefore ``-tau * O(face, edge)``.
    """
    c = sphere_cube()
    G = FgAbelianGroup(1)
    tau = cube_tau()
    faces_of = _cube_faces_of_edges(c)
    trans = {}
    for g in c.ids(2):
        for b, o in c.boundary_cells(g).items():
            home = cube_edge_home(b, faces_of[b])
            t = 0 if home == g else tau.get((home, g), 0)
            trans[(g, b)] = TransitionMap.identity(G, (-t * o,))
    names = {0: "0", 1: "pi/2", 2: "pi", 3: "3pi/2"}
    theta = {f"{i},{j}": names[v] for (i, j), v in CUBE_THETA.items()}
    meta = {
        "theta": theta,
        "tau": {f"{i},{j}": v for (i, j), v in sorted(tau.items()) if v},
        "regular_value": "pi/4",
        "edge_home": {b: cube_edge_home(b, fs) for b, fs in sorted(faces_of.items())},
    }
    return BundleSpec(c, 1, G, trans, {}, meta, base_ref={"builder": "sphere_cube"})


def cube_theta(i: str, j: str) -> float:
    """``theta_{i,j}`` in radians (``theta_{j,i} = -theta_{i,j}`` mod 2 pi)."""
    if (i, j) in CUBE_THETA:
        q = CUBE_THETA[(i, j)]
    elif (j, i) in CUBE_THETA:
        q = -CUBE_THETA[(j, i)]
    else:
        raise KeyError(f"faces {i} and {j} are not adjacent")
    return (q % 4) * math.pi / 2


# -- checks -------------------------------------------------------------------------------


def adjusted_check(spec: BundleSpec, gamma: str, a: Mapping[str, Sequence[int]]) -> Element:
    """``s_gamma`` for the section cochain ``a`` (missing cells read as 0)."""
    G = spec.G
    zero = _zero(G)
    total = list(spec.f.get(gamma, zero))
    for b, o in spec.base.boundary_cells(gamma).items():
        t = spec.transitions.get((gamma, b))
        if t is None:
            raise BundleSpecError(f"missing transition for cell {gamma} and face {b}")
        v = t.apply(G, a.get(b, zero))
        total = [x + o * y for x, y in zip(total, v)]
    return reduce_element(G, total)


def all_checks(spec: BundleSpec, a: Mapping[str, Sequence[int]]) -> dict[str, Element]:
    return {g: adjusted_check(spec, g, a) for g in spec.checks}


def violations(spec: BundleSpec, a: Mapping[str, Sequence[int]]) -> dict[str, Element]:
    zero = _zero(spec.G)
    return {g: s for g, s in all_checks(spec, a).items() if s != zero}


def check_sum(spec: BundleSpec, a: Mapping[str, Sequence[int]]) -> Element:
    """``sum_gamma s_gamma``, the pairing with the fundamental cycle on a closed oriented surface."""
    tot = [0] * len(spec.G.components())
    for s in all_checks(spec, a).values():
        tot = [x + y for x, y in zip(tot, s)]
    return reduce_element(spec.G, tot)


@dataclass
class CocycleReport:
    ok: bool
    witness: str | None
    value: Element | None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "witness": self.witness, "value": list(self.value) if self.value else None}


def obstruction_is_cocycle(spec: BundleSpec) -> CocycleReport:
    """``δ`` of the reference obstruction vanishes on every (k+2)-cell."""
    ref = spec.reference_obstruction
    G = spec.G
    zero = _zero(G)
    for eta in spec.base.ids(spec.k + 2):
        tot = list(zero)
        for g, o in spec.base.boundary_cells(eta).items():
            tot = [x + o * y for x, y in zip(tot, ref[g])]
        val = reduce_element(G, tot)
        if val != zero:
            return CocycleReport(False, eta, val)
    return CocycleReport(True, None, None)


def v_obstr_action(spec: BundleSpec, alpha: str, g: Sequence[int],
                   a: Mapping[str, Sequence[int]]) -> dict[str, Element]:
    """Re-section by ``g`` at the (k-1)-cell ``alpha``: add ``δ(g [alpha])`` to ``a``."""
    G = spec.G
    if alpha not in spec.base.ids(spec.k - 1):
        raise BundleSpecError(f"{alpha!r} is not a {spec.k - 1}-cell")
    g = reduce_element(G, g)
    out = {b: reduce_element(G, v) for b, v in a.items()}
    for b, o in spec.base.coboundary_cells(alpha).items():
        cur = out.get(b, _zero(G))
        out[b] = reduce_element(G, [x + o * y for x, y in zip(cur, g)])
    return out


def solve_section(spec: BundleSpec) -> dict[str, Element] | None:
    """A section cochain with every check satisfied, or None when the class is nonzero.

    Solved exactly through the Smith form of the check matrix; torsion
    components become extra unknowns absorbing multiples of their order.
    """
    A, c = spec.linear_form()
    comps = spec.G.components()
    r = len(comps)
    if not A.size:
        return {} if not np.any(c) else None
    slack = []
    for gi in range(len(spec.checks)):
        for t, m in enumerate(comps):
            if m:
                col = np.zeros(A.shape[0], dtype=np.int64)
                col[gi * r + t] = m
                slack.append(col)
    M = np.hstack([A] + [s[:, None] for s in slack]) if slack else A
    sol = solve_with_snf(smith_normal_form(M), [-int(x) for x in c])
    if sol is None:
        return None
    vals = sol[: A.shape[1]]
    return {b: reduce_element(spec.G, vals[i * r:(i + 1) * r]) for i, b in enumerate(spec.sites)}


# -- minimal violation search ----------------------------------------------------------------


@dataclass
class SearchResult:
    section: dict[str, Element]
    obstruction: dict[str, Element]
    violated: int
    total_degree: int
    configurations: int
    complete: bool
    value_range: tuple[int, int] | None

    @property
    def violated_cells(self) -> list[str]:
        return [g for g, s in self.obstruction.items() if any(s)]

    def to_dict(self) -> dict:
        return {
            "violated": self.violated,
            "total_degree": self.total_degree,
            "violated_cells": self.violated_cells,
            "obstruction": {g: list(v) for g, v in self.obstruction.items() if any(v)},
            "section": {b: list(v) for b, v in self.section.items() if any(v)},
            "configurations": self.configurations,
            "complete": self.complete,
            "value_range": list(self.value_range) if self.value_range else None,
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HOMCODE_THREADS", "1")))
    except ValueError:
        return 1


def default_value_cap(spec: BundleSpec) -> int:
    ref = spec.reference_obstruction
    biggest = max((abs(x) for v in ref.values() for x, m in zip(v, spec.G.components()) if m == 0),
                  default=0)
    return max(1, 2 * biggest)


def minimal_violation_search(spec: BundleSpec, value_cap: int | None = None,
                             max_configs: int = DEFAULT_MAX_CONFIGS,
                             threads: int | None = None) -> SearchResult:
    """Exhaustive search for the section with the fewest violated checks.

    Sections are ordered by (number of violated checks, total violation
    degree, section tuple in lexicographic order).  Free components range
    over ``[-value_cap, value_cap]`` (default twice the largest reference
    value), torsion components over all residues.  If the box holds more than
    ``max_configs`` sections only the first ``max_configs`` in lexicographic
    order are examined and ``complete`` is False.
    """
    comps = spec.G.components()
    r = len(comps)
    cap = default_value_cap(spec) if value_cap is None else int(value_cap)
    if cap < 0:
        raise ValueError("value_cap must be non-negative")
    ranges = []
    for _ in spec.sites:
        for m in comps:
            ranges.append(np.arange(-cap, cap + 1) if m == 0 else np.arange(m))
    A, c = spec.linear_form()
    nvar = len(ranges)
    nchk = len(spec.checks)
    mods = np.array([m for _ in spec.checks for m in comps], dtype=np.int64)

    def evaluate(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        S = S.copy()
        tors = mods > 0
        if tors.any():
            S[:, tors] %= mods[tors]
            S[:, tors] = np.minimum(S[:, tors], mods[tors] - S[:, tors])
        S = np.abs(S).reshape(len(S), nchk, r)
        return (S.sum(axis=2) > 0).sum(axis=1), S.sum(axis=(1, 2))

    sizes = [len(x) for x in ranges]
    total = math.prod(sizes) if sizes else 1
    budget = min(total, max_configs)
    # split variables: the suffix is a precomputed table, the prefix is looped
    split = nvar
    suffix_size = 1
    while split > 0 and suffix_size * sizes[split - 1] <= 400_000:
        split -= 1
        suffix_size *= sizes[split]
    suffix_vals = (np.array(list(itertools.product(*ranges[split:])), dtype=np.int64).reshape(suffix_size, nvar - split)
                   if nvar else np.zeros((1, 0), dtype=np.int64))
    suffix_S = suffix_vals @ A[:, split:].T if nvar else np.zeros((1, A.shape[0]), dtype=np.int64)
    prefixes = itertools.product(*ranges[:split])
    n_prefix = math.ceil(budget / suffix_size)

    def run(block: list[tuple[int, tuple]]) -> tuple | None:
        best = None
        for pi, pre in block:
            start = pi * suffix_size
            limit = min(suffix_size, budget - start)
            if limit <= 0:
                break
            base = c + (np.array(pre, dtype=np.int64) @ A[:, :split].T if split else 0)
            cnt, deg = evaluate(base[None, :] + suffix_S[:limit])
            key = cnt * (deg.max() + 1 if len(deg) else 1) + deg
            j = int(np.argmin(key))
            cand = (int(cnt[j]), int(deg[j]), start + j, pre, j)
            if best is None or cand[:3] < best[:3]:
                best = cand
        return best

    work = [(i, p) for i, p in zip(range(n_prefix), prefixes)]
    nthreads = _threads() if threads is None else max(1, threads)
    if nthreads > 1 and len(work) > 1:
        chunks = [work[i::nthreads] for i in range(nthreads)]
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = [res for res in pool.map(run, chunks) if res is not None]
    else:
        results = [res for res in [run(work)] if res is not None]
    if not results:
        raise CapacityError("search budget admits no configuration")
    cnt, deg, _, pre, j = min(results, key=lambda x: x[:3])
    flat = list(pre) + [int(x) for x in suffix_vals[j]]
    section = {b: reduce_element(spec.G, flat[i * r:(i + 1) * r]) for i, b in enumerate(spec.sites)}
    obstruction = all_checks(spec, section)
    return SearchResult(section, obstruction, cnt, deg, budget, budget == total,
                        (-cap, cap) if spec.G.free_rank else None)


def check_sums_over_box(spec: BundleSpec, value_cap: int = 2, threads: int | None = None) -> set[Element]:
    """Every value taken by ``sum_gamma s_gamma`` as the section ranges over the box."""
    comps = spec.G.components()
    r = len(comps)
    ranges = [np.arange(-value_cap, value_cap + 1) if m == 0 else np.arange(m)
              for _ in spec.sites for m in comps]
    A, c = spec.linear_form()
    # summing checks component-wise is a linear functional per component
    nchk = len(spec.checks)
    L = A.reshape(nchk, r, -1).sum(axis=0)  # (r, nvar)
    c0 = c.reshape(nchk, r).sum(axis=0)
    nvar = len(ranges)
    split = nvar
    size = 1
    while split > 0 and size * len(ranges[split - 1]) <= 400_000:
        split -= 1
        size *= len(ranges[split])
    suffix = np.array(list(itertools.product(*ranges[split:])), dtype=np.int64).reshape(size, nvar - split)
    # only the set of sums matters, so the suffix table can be deduplicated once
    suffix_L = np.unique(suffix @ L[:, split:].T, axis=0)
    seen: set[Element] = set()

    def run(pres):
        local = set()
        for pre in pres:
            base = c0 + (np.array(pre, dtype=np.int64) @ L[:, :split].T if split else 0)
            vals = np.unique(base[None, :] + suffix_L, axis=0)
            for v in vals:
                local.add(reduce_element(spec.G, v))
        return local

    pres = list(itertools.product(*ranges[:split]))
    nthreads = _threads() if threads is None else max(1, threads)
    if nthreads > 1 and len(pres) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            for part in pool.map(run, [pres[i::nthreads] for i in range(nthreads)]):
                seen |= part
    else:
        seen = run(pres)
    return seen


# -- quotient and energy ------------------------------------------------------------------------


@dataclass
class QuotientReport:
    tensor: FgAbelianGroup
    tor: FgAbelianGroup
    m: int
    next_torsion: tuple[int, ...]
    coprime: bool
    coprime_examples: list[int]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "tensor": str(self.tensor),
            "tor": str(self.tor),
            "torsion_of_next": list(self.next_torsion),
            "m_coprime_to_torsion": self.coprime,
            "coprime_m_examples": self.coprime_examples,
        }


def quotient_code_space(B: CellComplex, k: int, G: FgAbelianGroup, m: int) -> QuotientReport:
    """``H^k(B; G) (x) Z_m`` and ``Tor(H^{k+1}(B; G), Z_m)`` with a coprimality advisory."""
    if m < 2:
        raise BundleSpecError(f"quotient modulus must be >= 2, got {m}")
    here = cohomology(B, k, G)
    nxt = cohomology(B, k + 1, G)
    tors = nxt.torsion
    coprime = all(math.gcd(m, t) == 1 for t in tors)
    examples = [x for x in range(2, 13) if all(math.gcd(x, t) == 1 for t in tors)]
    return QuotientReport(here.tensor_cyclic(m), nxt.tor_cyclic(m), m, tors, coprime, examples)


def obstruction_energy(spec: BundleSpec, a: Mapping[str, Sequence[int]],
                       r: float = DEFAULT_IRRATIONAL) -> float:
    """``sum 2 - 2 cos(2 pi s / d)`` over torsion components, ``2 - 2 cos(2 pi r s)`` over free ones."""
    total = 0.0
    comps = spec.G.components()
    for s in all_checks(spec, a).values():
        for x, mod in zip(s, comps):
            phase = x / mod if mod else r * x
            total += 2.0 - 2.0 * math.cos(2 * math.pi * phase)
    return total


def with_transition(spec: BundleSpec, cell: str, face: str, t: TransitionMap) -> BundleSpec:
    """Copy of ``spec`` with one transition replaced."""
    trans = dict(spec.transitions)
    if (cell, face) not in trans:
        raise BundleSpecError(f"no transition for cell {cell} and face {face}")
    trans[(cell, face)] = t
    return replace(spec, transitions=trans)


__all__ = [
    "BundleSpec",
    "CUBE_CROSSINGS",
    "CUBE_THETA",
    "TransitionMap",
    "adjusted_check",
    "build_cube_tangent_bundle",
    "check_sum",
    "check_sums_over_box",
    "all_checks",
    "cube_edge_id",
    "cube_tau",
    "cube_theta",
    "minimal_violation_search",
    "obstruction_energy",
    "obstruction_is_cocycle",
    "quotient_code_space",
    "sk_bundle_tau",
    "solve_section",
    "trivial_bundle",
    "v_obstr_action",
    "violations",
    "with_transition",
]
