"""
Tests for the run_checks.py command-line interface.
"""

import json

import pytest
from numpy.testing import assert_allclose

from run_checks import parse_vector, run
from totalpos.errors import InputError
from totalpos.matrix_io import format_matrix, read_matrix


def run_json(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def rotation_file(tmp_path, rotation_pi4):
    path = tmp_path / "rotation.txt"
    path.write_text(format_matrix(rotation_pi4))
    return str(path)


class TestMatrixCommands:

    def test_classify(self, capsys, matrix_file):
        code, report = run_json(capsys, "classify", matrix_file)
        assert code == 0
        assert report["command"] == "classify"
        assert report["verdict"] == "stp"
        assert report["classification"]["stp"] is True
        assert len(report["input_digest"]) == 64
        assert {"tol", "seed"} <= set(report)

    def test_classify_truncated(self, capsys, matrix_file):
        code, report = run_json(capsys, "classify", matrix_file, "--k", "2")
        assert code == 0
        assert report["classification"]["k_checked"] == 2
        assert [o["j"] for o in report["orders"]] == [1, 2]

    def test_compound(self, capsys, matrix_file):
        code, report = run_json(capsys, "compound", matrix_file, "--j", "2")
        assert code == 0
        assert report["index"] == [[1, 2], [1, 3], [2, 3]]
        assert_allclose(report["compound"], [[1, 3, 2], [2, 8, 6], [1, 5, 6]], atol=1e-12)

    def test_spectrum(self, capsys, rotation_file):
        code, report = run_json(capsys, "spectrum", rotation_file, "--j", "2")
        assert code == 0
        assert report["spectral_radius"] == pytest.approx(1.0)
        assert report["kronecker_distance"] < 1e-9
        assert len(report["eigenvalues"]) == 3

    def test_verify_gk(self, capsys, matrix_file):
        code, report = run_json(capsys, "verify-gk", matrix_file, "--samples", "30", "--seed", "5")
        assert code == 0
        assert report["verdict"] == "pass"
        assert report["seed"] == 5

    def test_verify_vdp(self, capsys, matrix_file):
        code, report = run_json(capsys, "verify-vdp", matrix_file, "--trials", "500")
        assert code == 0
        assert report["route"] == "ssr"
        assert report["violations"] == 0

    def test_verify_all(self, capsys, matrix_file):
        code, report = run_json(capsys, "verify-all", matrix_file, "--filter", "compound")
        assert code == 0
        assert report["verdict"] == "pass"
        assert report["status_counts"]["pass"] > 0

    @pytest.mark.parametrize("command", ["verify-gk", "verify-vdp"])
    def test_outside_class_exits_2(self, capsys, rotation_file, command):
        assert run([command, rotation_file, "--trials", "10"]) == 2
        assert "ERROR" in capsys.readouterr().err


class TestConeCommand:

    def test_exact_membership(self, capsys):
        cone = json.dumps({"type": "exterior_basic", "n": 3, "j": 2, "signs": [1, 1, 1]})
        code, report = run_json(capsys, "cone", cone, "--vector", "1,-1,-1")
        assert code == 0
        assert report["verdict"] == "interior"
        assert report["t_membership"]["exact"] is True
        assert report["max_angle"]["exact"] is True

    def test_cone_file_without_vector(self, capsys, tmp_path):
        path = tmp_path / "cone.json"
        path.write_text(json.dumps({"type": "spanned", "generators": [[1, 0], [1, 1]]}))
        code, report = run_json(capsys, "cone", str(path))
        assert code == 0
        assert report["verdict"] == "ok"
        assert report["adjoint"]["type"] == "spanned"

    def test_chain(self, capsys):
        chain = json.dumps({"chain": [
            {"type": "basic", "signs": [1, 1, 1]},
            {"type": "exterior_basic", "n": 3, "j": 2, "signs": [1, -1, 1]},
        ]})
        code, report = run_json(capsys, "cone", chain, "--vector", "1 1 0", "--budget", "2000", "--seed", "1")
        assert code == 0
        assert report["verdict"] == "closure"

    def test_chain_needs_vector(self, capsys):
        chain = json.dumps({"chain": [{"type": "basic", "signs": [1, 1]}]})
        assert run(["cone", chain]) == 2

    def test_bad_json(self, capsys):
        assert run(["cone", "{not json"]) == 2

    @pytest.mark.parametrize("spec", [
        {"chain": 5},
        {"chain": []},
        {"chain": "basic"},
        {"chain": [5]},
        {"chain": [{"type": "icecream", "n": "three", "axis": 1}]},
    ])
    def test_malformed_chain_exits_2(self, capsys, spec):
        assert run(["cone", json.dumps(spec), "--vector", "1 1 0"]) == 2
        assert "ERROR" in capsys.readouterr().err


class TestGenerateCommand:

    def test_generate_and_write(self, capsys, tmp_path):
        out = tmp_path / "A.txt"
        spec = '{"kind": "vandermonde", "nodes": [1, 2, 3]}'
        code, report = run_json(capsys, "generate", spec, "--output", str(out))
        assert code == 0
        assert report["classification"]["stp"] is True
        assert_allclose(read_matrix(out), report["matrix"])

    def test_unknown_kind(self, capsys):
        assert run(["generate", '{"kind": "nope"}']) == 2


class TestSurface:

    def test_missing_file(self, capsys, tmp_path):
        assert run(["classify", str(tmp_path / "none.txt")]) == 2

    def test_bad_command(self, capsys, matrix_file):
        assert run(["invert", matrix_file]) == 2

    def test_help(self, capsys):
        assert run(["--help"]) == 0
        assert "verify-gk" in capsys.readouterr().out

    def test_table_format(self, capsys, matrix_file):
        assert run(["classify", matrix_file, "--format", "table"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[-1].startswith("verdict")

    def test_verbose_logs_to_stderr(self, capsys, matrix_file):
        assert run(["classify", matrix_file, "--verbose"]) == 0
        assert "classified 3x3 matrix" in capsys.readouterr().err

    def test_reports_are_deterministic(self, capsys, matrix_file):
        first = run_json(capsys, "verify-vdp", matrix_file, "--trials", "200", "--seed", "4")
        second = run_json(capsys, "verify-vdp", matrix_file, "--trials", "200", "--seed", "4")
        assert first == second

    def test_parse_vector(self):
        assert_allclose(parse_vector("1, -2 3"), [1, -2, 3])
        with pytest.raises(InputError):
            parse_vector("")
        with pytest.raises(InputError):
            parse_vector("1,a")
