"""
Contract tests for the verification plugins in checks/.

These tests validate that every checker follows the contract the orchestrator relies on:
1. File naming: checker_*.py
2. Function naming: check_*
3. Function signature: takes `matrix` as first argument, accepts **kwargs
4. Return type: list of dicts
5. Required keys in each dict
6. Valid check_status values
"""

import importlib.util
import inspect
import sys
from pathlib import Path

import numpy as np
import pytest

from checks import RESULT_KEYS, VALID_STATUS_VALUES, make_result, relative_residual


FAST = {"trials": 300, "combo_samples": 30}


# =============================================================================
# DISCOVERY HELPERS
# =============================================================================

def discover_checker_modules():
    """Find all checker_*.py files in the checks/ directory."""
    checks_dir = Path(__file__).parent.parent / "checks"
    if not checks_dir.exists():
        return []
    return sorted(checks_dir.glob("checker_*.py"))


def load_module_from_path(path: Path):
    """Dynamically load a Python module from a file path."""
    module_name = f"_contract_{path.stem}"
    spec = importlib.util.spec_from_file_location(module_name, path)
    if spec is None or spec.loader is None:
        raise ImportError(f"Cannot load module from {path}")
    module = importlib.util.module_from_spec(spec)
    sys.modules[module_name] = module
    spec.loader.exec_module(module)
    return module


def find_check_functions(module):
    """Find all check_* functions defined in a module."""
    return [
        (name, obj) for name, obj in inspect.getmembers(module, inspect.isfunction)
        if name.startswith("check_") and obj.__module__ == module.__name__
    ]


def all_check_functions():
    functions = []
    for checker_file in discover_checker_modules():
        module = load_module_from_path(checker_file)
        functions.extend((f"{checker_file.name}::{name}", func) for name, func in find_check_functions(module))
    return functions


CHECK_FUNCTIONS = all_check_functions()
CHECK_IDS = [name for name, _ in CHECK_FUNCTIONS]


# =============================================================================
# TEST: MODULE DISCOVERY
# =============================================================================

class TestModuleDiscovery:
    """Tests for proper file naming and structure."""

    def test_checker_file_exists(self):
        assert len(discover_checker_modules()) > 0, "No checker_*.py file found in checks/"

    def test_checker_file_naming(self):
        """Python files in checks/ must be checker_*.py (plus the package __init__)."""
        checks_dir = Path(__file__).parent.parent / "checks"
        non_checker_files = [
            f.name for f in checks_dir.glob("*.py")
            if not f.name.startswith("checker_") and f.name != "__init__.py"
        ]
        assert non_checker_files == [], f"Found Python files not following naming convention: {non_checker_files}"


# =============================================================================
# TEST: FUNCTION SIGNATURE
# =============================================================================

@pytest.mark.parametrize("name,func", CHECK_FUNCTIONS, ids=CHECK_IDS)
class TestFunctionContract:
    """Signature and result structure of every check_* function."""

    def test_first_parameter_is_matrix(self, name, func):
        params = list(inspect.signature(func).parameters.values())
        assert params[0].name == "matrix", f"{name}: first parameter must be 'matrix', got '{params[0].name}'"

    def test_accepts_kwargs(self, name, func):
        kinds = {p.kind for p in inspect.signature(func).parameters.values()}
        assert inspect.Parameter.VAR_KEYWORD in kinds, f"{name} must accept **kwargs"

    @pytest.mark.parametrize("fixture_name", ["vandermonde_123", "rotation_pi4", "stjs_matrix"])
    def test_results_follow_contract(self, name, func, fixture_name, request):
        matrix = request.getfixturevalue(fixture_name)
        result = func(matrix, **FAST)

        assert isinstance(result, list), f"{name} must return a list"
        assert len(result) > 0, f"{name} returned no results"
        for i, item in enumerate(result):
            assert isinstance(item, dict)
            missing_keys = set(RESULT_KEYS) - set(item)
            assert not missing_keys, f"{name} result[{i}] missing keys: {missing_keys}"
            assert item["check_status"] in VALID_STATUS_VALUES
            for key in ("check_id", "check_name", "clause", "actual_value", "required_value"):
                assert isinstance(item[key], str), f"{name} result[{i}] {key} must be str"
            for key in ("comment", "log"):
                assert item[key] is None or isinstance(item[key], str)


# =============================================================================
# TEST: HELPERS
# =============================================================================

class TestHelpers:
    """make_result and relative_residual."""

    def test_make_result_stringifies_values(self):
        result = make_result("x.y", "Name", "clause", "pass", 1.5, 2)

        assert set(result) == set(RESULT_KEYS)
        assert result["actual_value"] == "1.5"
        assert result["required_value"] == "2"
        assert result["comment"] is None

    def test_relative_residual_scales(self):
        assert relative_residual([1.0, 2.0], [1.0, 2.0]) == 0.0
        assert relative_residual([101.0], [100.0]) == pytest.approx(0.01)
        assert relative_residual([0.5], [0.0]) == pytest.approx(0.5)
        assert relative_residual([11.0], [10.0], scale=1000.0) == pytest.approx(1e-3)

    def test_relative_residual_empty(self):
        assert relative_residual(np.zeros(0), np.zeros(0)) == 0.0
