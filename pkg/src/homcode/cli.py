"""Command-line entry point: ``homcode <command> [<action>] [options]``.

Every command writes one JSON report to standard output.  Exit status is 0
on success, 1 for usage errors and 2 for domain errors (the message of the
originating module is included in the report and echoed to stderr).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from . import complex_core, error_analysis, obstruction, qudit_sim, stabilizer
from .complex_core import CellComplex
from .exceptions import HomcodeError, StructureError
from .homology import FgAbelianGroup, betti_numbers, cohomology, homology, homology_generators


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


# -- shared option groups -----------------------------------------------------------------


def _add_complex_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="cell complex JSON file")
    p.add_argument("--builder", choices=sorted(complex_core.BUILDERS), help="built-in complex")
    p.add_argument("--m", type=int, help="size for circle / interval")
    p.add_argument("--p", type=int, help="first size for torus_grid / square_grid")
    p.add_argument("--q", type=int, help="second size for torus_grid / square_grid")
    p.add_argument("--n", type=int, help="dimension for sphere_simplex")


def _add_code_opts(p: argparse.ArgumentParser, need_d: bool = True) -> None:
    _add_complex_source(p)
    p.add_argument("--k", type=int, required=True, help="code degree")
    p.add_argument("--d", type=int, required=need_d, help="qudit dimension")
    p.add_argument("--mode", choices=[stabilizer.HOMOLOGY, stabilizer.COHOMOLOGY], default=stabilizer.HOMOLOGY)


_BUILDER_ARGS = {
    "point": (),
    "circle": ("m",),
    "interval": ("m",),
    "torus_grid": ("p", "q"),
    "square_grid": ("p", "q"),
    "sphere_cube": (),
    "projective_plane_min": (),
    "sphere_simplex": ("n",),
}


def load_complex(args) -> CellComplex:
    if args.builder and args.file:
        raise UsageError("give either a complex file or --builder, not both")
    if args.builder:
        names = _BUILDER_ARGS[args.builder]
        vals = [getattr(args, n) for n in names]
        missing = [f"--{n}" for n, v in zip(names, vals) if v is None]
        if missing:
            raise UsageError(f"builder {args.builder} needs {' '.join(missing)}")
        return complex_core.BUILDERS[args.builder](*vals)
    if not args.file:
        raise UsageError("a complex file or --builder is required")
    return CellComplex.from_json(_read(args.file))


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise StructureError(f"cannot read {path}: {exc.strerror}") from None


def _json_arg(text: str | None, what: str):
    """A JSON value given inline or as ``@file``."""
    if text is None:
        return None
    if text.startswith("@"):
        text = _read(text[1:])
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON for {what}: {exc}") from None


def _build(args) -> stabilizer.HomologicalCode:
    return stabilizer.build_code(load_complex(args), args.k, args.d, args.mode)


def _error_from_args(args, code) -> error_analysis.ErrorConfig:
    doc = _json_arg(args.error, "--error")
    if doc is not None:
        doc = dict(doc)
        doc.setdefault("d", code.d)
        doc.setdefault("degree", code.k)
        return error_analysis.ErrorConfig.from_dict(doc)
    x = _json_arg(args.x, "--x") or {}
    z = _json_arg(args.z, "--z") or {}
    return error_analysis.ErrorConfig.make(code.d, code.k, x, z)


# -- commands ---------------------------------------------------------------------------------


def cmd_complex(args) -> dict:
    c = load_complex(args)
    if args.action == "validate":
        report = complex_core.validate_complex(c)
        out = report.to_dict()
        out["messages"] = report.messages()
        if not report.admissible:
            raise _ReportedFailure(out, "; ".join(report.messages()))
        return out
    if args.action == "info":
        return {
            "label": c.label,
            "dimension": c.dimension,
            "counts": list(c.counts()),
            "euler_characteristic": c.euler_characteristic(),
            "admissible": complex_core.validate_complex(c).admissible,
            "betti_numbers": list(betti_numbers(c)),
        }
    dual = complex_core.dual_complex(c, closed=not args.open)
    return {"counts": list(dual.counts()), "complex": dual.to_dict()}


def cmd_homology(args) -> dict:
    c = load_complex(args)
    coeff = None if args.coeff in (None, "Z") else FgAbelianGroup.parse(args.coeff)
    fn = cohomology if args.cohomology else homology
    g = fn(c, args.k, coeff)
    out = {"group": str(g), **g.to_dict(), "order": g.order}
    if args.representatives:
        d = None
        if coeff is not None:
            comps = coeff.components()
            if len(comps) != 1 or comps[0] == 0:
                raise UsageError("--representatives needs Z or a single cyclic coefficient group")
            d = comps[0]
        gens = homology_generators(c, args.k, d, cohomology=args.cohomology)
        out["representatives"] = [{"chain": v.to_dict(), "order": o} for v, o in gens]
    return out


def cmd_code(args) -> dict:
    code = _build(args)
    if args.action == "build":
        out = code.to_dict()
        out["summary"] = code.summary()
        return out
    if args.action == "check":
        bad = stabilizer.check_commutation(code)
        problems = stabilizer.check_logicals(code)
        return {
            "summary": code.summary(),
            "stabilizers": len(code.stabilizers()),
            "noncommuting_pairs": [list(b) for b in bad],
            "logical_problems": problems,
            "pairing_ok": code.pairing_ok,
            "ok": not bad and not problems,
        }
    return {"dimension": stabilizer.code_dimension(code), "summary": code.summary()}


def cmd_sim(args) -> dict:
    code = _build(args)
    if args.action == "ground":
        dim = qudit_sim.ground_space_dimension(code, limit=args.limit)
        expected = stabilizer.code_dimension(code)
        return {"ground_space_dimension": dim, "code_dimension": expected, "agree": dim == expected}
    if args.action == "projector":
        return qudit_sim.build_projector_stabilizers(code, limit=args.limit).to_dict()
    return qudit_sim.hamiltonian_spectrum_check(code, trials=args.trials, seed=args.seed).to_dict()


def cmd_error(args) -> dict:
    code = _build(args)
    if args.action == "syndrome":
        e = _error_from_args(args, code)
        s = error_analysis.syndrome(code, e)
        return {"error": e.to_dict(), "syndrome": s.to_dict(), "energy": error_analysis.error_energy(s)}
    if args.action == "decompose":
        e = _error_from_args(args, code)
        comps = error_analysis.decompose_error(code, e)
        return {"error": e.to_dict(), "components": [cp.to_dict() for cp in comps]}
    if args.action == "distance":
        res = error_analysis.code_distance(code, cap=args.cap)
        out = res.to_dict()
        out["summary"] = code.summary(res.distance)
        return out
    if args.action == "decode":
        injected = None
        sdoc = _json_arg(args.syndrome, "--syndrome")
        if sdoc is not None:
            sdoc = dict(sdoc)
            sdoc.setdefault("d", code.d)
            s = error_analysis.Syndrome.from_dict(sdoc)
        else:
            injected = _error_from_args(args, code)
            s = error_analysis.syndrome(code, injected)
        res = error_analysis.decode_min_weight(code, s, cap=args.cap, injected=injected)
        return {"syndrome": s.to_dict(), **res.to_dict()}
    return error_analysis.energy_barrier(code, side=args.side, max_cells=args.max_cells).to_dict()


def cmd_obstruction(args) -> dict:
    if args.action == "quotient":
        c = load_complex(args)
        G = FgAbelianGroup.parse(args.group)
        return obstruction.quotient_code_space(c, args.k, G, args.quotient_m).to_dict()
    if args.action == "cube":
        spec = obstruction.build_cube_tangent_bundle()
    else:
        if not args.file:
            raise UsageError("obstruction run needs a bundle JSON file")
        spec = obstruction.BundleSpec.from_json(_read(args.file))
    ref = spec.reference_obstruction
    G = spec.G
    out = {
        "base": spec.base.label,
        "k": spec.k,
        "group": str(G),
        "cocycle": obstruction.obstruction_is_cocycle(spec).to_dict(),
        "reference": {
            "obstruction": {g: list(v) for g, v in ref.items() if any(v)},
            "violated_cells": [g for g, v in ref.items() if any(v)],
            "violated": sum(1 for v in ref.values() if any(v)),
            "total_degree": sum(obstruction.element_degree(G, v) for v in ref.values()),
        },
        "check_sum": list(obstruction.check_sum(spec, {})),
    }
    if args.action == "cube":
        out["tau"] = spec.metadata["tau"]
        out["theta"] = spec.metadata["theta"]
        out["total_degree"] = out["reference"]["total_degree"]
        out["witness"] = out["reference"]["violated_cells"]
    if not args.no_search:
        res = obstruction.minimal_violation_search(spec, value_cap=args.value_cap, max_configs=args.max_configs)
        out["minimal"] = res.to_dict()
    return out


# -- parser and dispatch -------------------------------------------------------------------------


class _ReportedFailure(HomcodeError):
    def __init__(self, payload: dict, message: str):
        super().__init__(message)
        self.payload = payload


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    common.add_argument("--table", action="store_true", help="render the result as a plain table")
    parser = _Parser(prog="homcode", description="Homological stabilizer codes on cell complexes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("complex", parents=[common], help="validate, describe or dualize a complex")
    p.add_argument("action", choices=["validate", "info", "dual"])
    _add_complex_source(p)
    p.add_argument("--open", action="store_true", help="open dual instead of the closed dual")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("homology", parents=[common], help="homology or cohomology group")
    _add_complex_source(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--coeff", default="Z", help='coefficient group, e.g. "Z", "Z_3", "Z x Z_2"')
    p.add_argument("--cohomology", action="store_true")
    p.add_argument("--representatives", action="store_true", help="also list generating cycles")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("code", parents=[common], help="build a stabilizer code and check it")
    p.add_argument("action", choices=["build", "check", "dim"])
    _add_code_opts(p, need_d=False)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("sim", parents=[common], help="dense simulation checks")
    p.add_argument("action", choices=["ground", "spectrum", "projector"])
    _add_code_opts(p)
    p.add_argument("--limit", type=int, default=qudit_sim.MAX_DIM, help="state-space size guard")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("error", parents=[common], help="syndromes, decomposition, distance, decoding, barrier")
    p.add_argument("action", choices=["syndrome", "decompose", "distance", "decode", "barrier"])
    _add_code_opts(p)
    p.add_argument("--error", help="error JSON (or @file): {d, degree, x, z}")
    p.add_argument("--x", help="X exponents as JSON {cell: int}")
    p.add_argument("--z", help="Z exponents as JSON {cell: int}")
    p.add_argument("--syndrome", help="syndrome JSON (or @file): {d, v, p}")
    p.add_argument("--cap", type=int, help="weight cap for exhaustive searches")
    p.add_argument("--side", choices=[error_analysis.V_SIDE, error_analysis.P_SIDE], default=error_analysis.V_SIDE)
    p.add_argument("--max-cells", dest="max_cells", type=int, default=error_analysis.BARRIER_MAX_CELLS,
                   help="barrier guard on the number of cells (2^n states)")
    p.set_defaults(func=cmd_error)

    p = sub.add_parser("obstruction", parents=[common], help="obstruction-class codes")
    p.add_argument("action", choices=["cube", "run", "quotient"])
    _add_complex_source(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--group", default="Z", help="coefficient group for quotient")
    p.add_argument("--quotient-m", dest="quotient_m", type=int, default=2, help="modulus for quotient")
    p.add_argument("--value-cap", type=int, help="per-cell range for free components")
    p.add_argument("--max-configs", type=int, default=obstruction.DEFAULT_MAX_CONFIGS)
    p.add_argument("--no-search", action="store_true", help="skip the minimal violation search")
    p.set_defaults(func=cmd_obstruction)
    return parser


def _digest(argv: Sequence[str], args) -> str:
    h = hashlib.sha256("\0".join(argv).encode())
    path = getattr(args, "file", None)
    if path:
        try:
            h.update(Path(path).read_bytes())
        except OSError:
            pass
    return h.hexdigest()[:16]


def _table(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            lines += _table(v, f"{prefix}{k}." if isinstance(v, dict) else f"{prefix}{k}")
        return lines
    return [f"{prefix.rstrip('.'):<40} {json.dumps(obj)}"]


def _emit(report: dict, table: bool) -> None:
    if table:
        print("\n".join(_table(report)))
    else:
        print(json.dumps(report, indent=2))


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    command = " ".join([args.command] + ([args.action] if hasattr(args, "action") else []))
    report = {"command": command, "inputs_digest": _digest(argv, args)}
    start = time.perf_counter()
    try:
        report["result"] = args.func(args)
        status = 0
    except UsageError as exc:
        print(f"homcode: {exc}", file=sys.stderr)
        return 1
    except _ReportedFailure as exc:
        report["result"] = exc.payload
        report["error"] = {"type": "AdmissibilityError", "message": str(exc)}
        print(f"homcode: {exc}", file=sys.stderr)
        status = 2
    except HomcodeError as exc:
        report["error"] = {"type": type(exc).__name__, "module": type(exc).__module__, "message": str(exc)}
        print(f"homcode: {type(exc).__name__}: {exc}", file=sys.stderr)
        status = 2
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - start, 6)
    _emit(report, args.table)
    return status


if __name__ == "__main__":
    sys.exit(main())
