"""
Tests for settings, errors and matrix files.
"""

import os

import numpy as np
import pytest
from numpy.testing import assert_allclose

from totalpos.config import Settings, load_settings, resolve
from totalpos.errors import ClassificationError, ConfigError, InputError, TotalPosError
from totalpos.generators import random_stp
from totalpos.matrix_io import digest, format_matrix, parse_matrix, read_matrix


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """Run with no TOTALPOS_* variables and no .env in the working directory."""
    for key in list(os.environ):
        if key.startswith("TOTALPOS_"):
            monkeypatch.delenv(key)
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestSettings:

    def test_defaults(self, clean_env):
        settings = load_settings(str(clean_env / "missing.env"))
        assert settings == Settings()
        assert settings.tol == 1e-9
        assert settings.seed == 1729

    def test_environment_override(self, clean_env, monkeypatch):
        monkeypatch.setenv("TOTALPOS_TOL", "1e-6")
        monkeypatch.setenv("TOTALPOS_MC_BUDGET", "5e3")
        settings = load_settings(str(clean_env / "missing.env"))
        assert settings.tol == 1e-6
        assert settings.mc_budget == 5000
        assert isinstance(settings.mc_budget, int)

    def test_angle_samples_override(self, clean_env, monkeypatch):
        monkeypatch.setenv("TOTALPOS_ANGLE_SAMPLES", "50")
        settings = load_settings(str(clean_env / "missing.env"))
        assert settings.angle_samples == 50
        assert settings.combo_samples == Settings().combo_samples

    def test_dotenv_file(self, clean_env, monkeypatch):
        env_file = clean_env / "custom.env"
        env_file.write_text("TOTALPOS_SEED=42\nTOTALPOS_VDP_TRIALS=300\n")
        try:
            settings = load_settings(str(env_file))
        finally:
            # load_dotenv writes straight into os.environ
            os.environ.pop("TOTALPOS_SEED", None)
            os.environ.pop("TOTALPOS_VDP_TRIALS", None)
        assert settings.seed == 42
        assert settings.vdp_trials == 300

    @pytest.mark.parametrize("value", ["abc", "-1", "0"])
    def test_invalid_values(self, clean_env, monkeypatch, value):
        monkeypatch.setenv("TOTALPOS_TOL", value)
        with pytest.raises(ConfigError):
            load_settings(str(clean_env / "missing.env"))

    def test_resolve(self):
        assert resolve(0.5, "tol") == 0.5
        assert resolve(None, "combo_samples") > 0


class TestErrors:

    def test_hierarchy(self):
        assert issubclass(InputError, TotalPosError)
        assert issubclass(InputError, ValueError)
        assert issubclass(ConfigError, TotalPosError)

    def test_classification_order(self):
        error = ClassificationError("not STP", order=2)
        assert error.order == 2
        assert str(error) == "not STP"


class TestMatrixFiles:

    def test_parse_with_comments(self):
        A = parse_matrix("# header\n1 2  # first row\n\n3 4\n")
        assert_allclose(A, [[1, 2], [3, 4]])

    @pytest.mark.parametrize("text", ["", "# only a comment\n", "1 2\n3\n", "1 x\n"])
    def test_parse_errors(self, text):
        with pytest.raises(InputError):
            parse_matrix(text)

    def test_format_round_trip(self, vandermonde_123, rotation_pi4):
        assert_allclose(parse_matrix(format_matrix(vandermonde_123)), vandermonde_123)
        # repr floats come back bit for bit
        A = random_stp(5, seed=3)
        assert np.array_equal(parse_matrix(format_matrix(A)), A)
        assert np.array_equal(parse_matrix(format_matrix(rotation_pi4)), rotation_pi4)

    def test_format_precision(self):
        assert format_matrix([[1 / 3, 2.0]], precision=3) == "0.333 2\n"

    def test_read_matrix(self, matrix_file, vandermonde_123, tmp_path):
        assert_allclose(read_matrix(matrix_file), vandermonde_123)
        with pytest.raises(InputError):
            read_matrix(tmp_path / "missing.txt")

    def test_digest(self):
        assert digest("abc") == digest(b"abc")
        assert digest("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
