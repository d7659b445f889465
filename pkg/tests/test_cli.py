import json

import pytest

from homcode.cli import main
from homcode.complex_core import Cell, CellComplex, torus_grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_torus_homology(capsys):
    code, rep = report(capsys, "homology", "--builder", "torus_grid", "--p", "2", "--q", "2",
                       "--k", "1", "--coeff", "Z")
    assert code == 0
    assert rep["command"] == "homology"
    assert rep["result"]["group"] == "Z^2"
    assert "timing_s" not in rep


def test_homology_representatives(capsys):
    code, rep = report(capsys, "homology", "--builder", "circle", "--m", "3", "--k", "1",
                       "--coeff", "Z_3", "--representatives")
    assert code == 0
    assert rep["result"]["group"] == "Z_3"
    assert rep["result"]["representatives"][0]["order"] == 3


def test_cube_obstruction_report(capsys):
    code, rep = report(capsys, "obstruction", "cube", "--no-search")
    assert code == 0
    res = rep["result"]
    assert res["total_degree"] == 2
    assert sorted(res["witness"]) == ["Bo", "T"]
    assert res["tau"] == {"Bo,F": 1, "F,Bo": -1, "F,T": -1, "T,F": 1}
    assert res["check_sum"] == [2]
    assert res["cocycle"]["ok"]


def test_bundle_file_roundtrip(capsys, tmp_path):
    from homcode.obstruction import build_cube_tangent_bundle

    path = tmp_path / "cube.json"
    path.write_text(build_cube_tangent_bundle().to_json())
    code, rep = report(capsys, "obstruction", "run", str(path), "--value-cap", "0")
    assert code == 0
    assert rep["result"]["minimal"]["violated"] == 2


def test_broken_complex_exit_2(capsys, tmp_path):
    cells = [Cell("a", 0), Cell("b", 0), Cell("e", 1, (("a", -1), ("b", 1))), Cell("f", 2, (("e", 1),))]
    path = tmp_path / "bad.json"
    path.write_text(CellComplex(cells).to_json())
    code, out, err = run(capsys, "complex", "validate", str(path))
    assert code == 2
    assert "boundary_1 . boundary_2 != 0" in json.loads(out)["error"]["message"]
    assert "boundary_1 . boundary_2 != 0" in err


def test_malformed_json_exit_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{oops")
    code, out, _ = run(capsys, "complex", "info", str(path))
    assert code == 2
    assert json.loads(out)["error"]["type"] == "StructureError"


def test_malformed_error_json_exit_2(capsys):
    code, out, _ = run(capsys, "error", "syndrome", "--builder", "circle", "--m", "3", "--k", "1",
                       "--d", "2", "--x", "{nope")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["homology", "--builder", "circle", "--m", "3", "--k", "1", "--bogus"],
        ["homology", "--builder", "circle", "--k", "1"],
        ["nonsense"],
        ["code", "dim", "--builder", "circle", "--m", "3"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert err


def test_capacity_guard_is_a_domain_error(capsys):
    code, out, _ = run(capsys, "sim", "ground", "--builder", "torus_grid", "--p", "3", "--q", "3",
                       "--k", "1", "--d", "2", "--limit", "1024")
    assert code == 2
    assert json.loads(out)["error"]["type"] == "CapacityError"
    code, out, _ = run(capsys, "error", "barrier", "--builder", "circle", "--m", "6", "--k", "1",
                       "--d", "2", "--max-cells", "4")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["complex", "info", "--builder", "projective_plane_min"],
        ["complex", "dual", "--builder", "square_grid", "--p", "2", "--q", "1"],
        ["code", "check", "--builder", "torus_grid", "--p", "2", "--q", "2", "--k", "1", "--d", "3"],
        ["code", "build", "--builder", "circle", "--m", "3", "--k", "1", "--d", "2", "--mode", "cohomology"],
        ["sim", "spectrum", "--builder", "circle", "--m", "3", "--k", "1", "--d", "3", "--trials", "3"],
        ["sim", "projector", "--builder", "circle", "--m", "3", "--k", "1", "--d", "3"],
        ["error", "decompose", "--builder", "circle", "--m", "5", "--k", "1", "--d", "3",
         "--x", '{"e0": 1, "e1": 2}'],
        ["error", "distance", "--builder", "torus_grid", "--p", "3", "--q", "3", "--k", "1", "--d", "2"],
        ["error", "decode", "--builder", "torus_grid", "--p", "3", "--q", "3", "--k", "1", "--d", "2",
         "--x", '{"h0_0": 1}'],
        ["error", "barrier", "--builder", "circle", "--m", "5", "--k", "1", "--d", "2"],
        ["obstruction", "quotient", "--builder", "projective_plane_min", "--k", "1", "--quotient-m", "2"],
    ],
)
def test_reports_are_byte_identical(capsys, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    json.loads(out1)


def test_decode_from_syndrome(capsys):
    code, rep = report(capsys, "error", "decode", "--builder", "circle", "--m", "4", "--k", "1", "--d", "3",
                       "--syndrome", '{"v": {"v0": 2, "v1": 1}}')
    assert code == 0
    assert rep["result"]["correction"]["x"] == {"e0": 1}


def test_infeasible_decode_exit_2(capsys):
    code, out, _ = run(capsys, "error", "decode", "--builder", "circle", "--m", "4", "--k", "1", "--d", "3",
                       "--syndrome", '{"v": {"v0": 1}}')
    assert code == 2
    assert json.loads(out)["error"]["type"] == "InfeasibleSyndromeError"


def test_timing_and_table_flags(capsys):
    code, rep = report(capsys, "code", "dim", "--builder", "projective_plane_min", "--k", "1", "--d", "2",
                       "--timing")
    assert code == 0 and rep["result"]["dimension"] == 2 and "timing_s" in rep
    code, out, _ = run(capsys, "code", "dim", "--builder", "projective_plane_min", "--k", "1", "--d", "3",
                       "--table")
    assert code == 0
    assert any(line.startswith("result.dimension") and line.endswith("1") for line in out.splitlines())


def test_file_input_digest_tracks_contents(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(torus_grid(2, 2).to_json())
    _, rep1 = report(capsys, "complex", "info", str(path))
    path.write_text(torus_grid(2, 3).to_json())
    _, rep2 = report(capsys, "complex", "info", str(path))
    assert rep1["inputs_digest"] != rep2["inputs_digest"]
    assert rep1["result"]["betti_numbers"] == [1, 2, 1]


def test_module_entry_point_is_deterministic_across_processes():
    import subprocess
    import sys

    argv = [sys.executable, "-m", "homcode", "obstruction", "cube", "--no-search"]
    first = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    assert first == second
    assert json.loads(first)["result"]["total_degree"] == 2
