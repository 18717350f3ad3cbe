"""
totalpos Verification Orchestrator

Finds every check_* function in checks/checker_*.py, runs it on one square
matrix and aggregates the result dicts, tagged with the plugin that produced
them. A plugin that raises or returns malformed results is recorded as a
failed checker; the others still run.
"""

import importlib.util
import inspect
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List

import numpy as np

from checks import RESULT_KEYS, VALID_STATUS_VALUES
from totalpos.errors import InputError
from totalpos.numeric import as_matrix


RULE = "=" * 70


class OrchestratorError(Exception):
    """Plugin discovery failed or the run cannot start."""
    pass


def validate_results(results: Any) -> List[Dict]:
    """
    Check the plugin contract: a list of dicts with every RESULT_KEYS key
    and a known check_status.

    Raises:
        ValueError: On the first violation
    """
    if not isinstance(results, list):
        raise ValueError(f"check_* function must return a list, got {type(results).__name__}")
    for i, result in enumerate(results):
        if not isinstance(result, dict):
            raise ValueError(f"result {i} is a {type(result).__name__}, not a dict")
        missing = [key for key in RESULT_KEYS if key not in result]
        if missing:
            raise ValueError(f"result {i} is missing {', '.join(missing)}")
        if result["check_status"] not in VALID_STATUS_VALUES:
            raise ValueError(f"result {i} has unknown check_status {result['check_status']!r}")
    return results


class VerificationOrchestrator:
    """
    Registry of verification plugins.

    checkers maps each plugin file name to its check_* functions, in name
    order; loaded_modules keeps the imported modules.
    """

    def __init__(self, checks_dir: Path = None):
        self.checks_dir = Path(checks_dir) if checks_dir else Path(__file__).parent / "checks"
        self.checkers: Dict[str, Dict[str, Callable]] = {}
        self.loaded_modules: Dict[str, Any] = {}
        self.execution_log: List[str] = []

    def _log(self, line: str):
        self.execution_log.append(line)

    def discover(self) -> Dict[str, List[str]]:
        """
        Import every checks_dir/checker_*.py and register its check_* functions.

        Only functions defined in the plugin count; a check_* helper the
        plugin imports from totalpos is not a check.

        Returns:
            {file name: [function names]}

        Raises:
            OrchestratorError: If the directory is missing or a plugin fails to import
        """
        if not self.checks_dir.is_dir():
            raise OrchestratorError(f"Checks directory not found: {self.checks_dir}")

        paths = sorted(self.checks_dir.glob("checker_*.py"))
        self._log(f"Scanning {self.checks_dir}: {len(paths)} checker file(s)")

        for path in paths:
            try:
                module = self._import(path)
            except Exception as e:
                self._log(f"  ✗ {path.name}: {e}")
                raise OrchestratorError(f"Failed to load {path.name}: {e}")
            self.loaded_modules[path.name] = module

            functions = {
                name: obj for name, obj in inspect.getmembers(module, inspect.isfunction)
                if name.startswith("check_") and obj.__module__ == module.__name__
            }
            if not functions:
                self._log(f"  ⚠️  {path.name}: no check_* functions")
                continue
            self.checkers[path.name] = functions
            self._log(f"  ✓ {path.name}: {', '.join(functions)}")

        return {name: list(functions) for name, functions in self.checkers.items()}

    @staticmethod
    def _import(path: Path):
        # unique name per directory so plugins with equal stems do not collide
        module_name = f"_totalpos_check_{path.stem}_{abs(hash(str(path.resolve())))}"
        spec = importlib.util.spec_from_file_location(module_name, path)
        if spec is None or spec.loader is None:
            raise ImportError(f"Cannot load module from {path}")
        module = importlib.util.module_from_spec(spec)
        sys.modules[module_name] = module
        spec.loader.exec_module(module)
        return module

    def run(self, matrix, checker_filter: str = None, **kwargs) -> Dict[str, Any]:
        """
        Run every registered check on the matrix.

        Args:
            matrix: Square finite matrix (array-like)
            checker_filter: Only plugin files whose name contains this, case-insensitive
            **kwargs: Passed to every check (tol, seed, trials, combo_samples, ...)

        Returns:
            {"results": [...], "summary": {...}, "log": str}

        Raises:
            OrchestratorError: If nothing was discovered or the matrix is invalid
        """
        if not self.checkers:
            raise OrchestratorError("No checkers discovered. Call discover() first.")
        try:
            matrix = as_matrix(matrix, square=True)
        except InputError as e:
            raise OrchestratorError(f"matrix must be a finite square array: {e}")

        self._log(RULE)
        self._log(f"RUN on {matrix.shape[0]}x{matrix.shape[0]} matrix"
                  + (f" (filter: {checker_filter})" if checker_filter else ""))

        selected = [
            (filename, func_name, func)
            for filename, functions in self.checkers.items()
            if not checker_filter or checker_filter.lower() in filename.lower()
            for func_name, func in functions.items()
        ]

        results: List[Dict] = []
        details: List[Dict] = []
        for filename, func_name, func in selected:
            full_name = f"{filename}::{func_name}"
            try:
                # a fresh copy per check, so no check sees another's edits
                produced = validate_results(func(np.array(matrix), **kwargs))
            except Exception as e:
                self._log(f"  ✗ {full_name}: {e}")
                details.append({"checker": full_name, "status": "failed", "error": str(e)})
                continue
            for result in produced:
                result["_checker_file"] = filename
                result["_checker_function"] = func_name
            results.extend(produced)
            self._log(f"  ✓ {full_name}: {len(produced)} result(s)" if produced
                      else f"  ⚠️  {full_name}: no results")
            details.append({"checker": full_name, "status": "success", "result_count": len(produced)})

        failed = sum(1 for d in details if d["status"] == "failed")
        self._log(f"DONE: {len(details) - failed}/{len(details)} checkers, {len(results)} result(s)")
        self._log(RULE)

        return {
            "results": results,
            "summary": {
                "total_checkers": len(details),
                "successful_checkers": len(details) - failed,
                "failed_checkers": failed,
                "total_results": len(results),
                "checker_details": details,
            },
            "log": "\n".join(self.execution_log),
        }

    @staticmethod
    def get_summary_by_status(results: List[Dict]) -> Dict[str, int]:
        """{check_status: count}"""
        counts: Dict[str, int] = {}
        for result in results:
            status = result.get("check_status", "unknown")
            counts[status] = counts.get(status, 0) + 1
        return counts

    @staticmethod
    def filter_results(results: List[Dict], status: str = None, check_id: str = None) -> List[Dict]:
        """Results matching every given criterion (check_status, check_id)."""
        return [
            r for r in results
            if (not status or r.get("check_status") == status)
            and (not check_id or r.get("check_id") == check_id)
        ]

    def print_summary(self, execution_result: Dict[str, Any], file=None):
        """Human-readable summary of a run() result, to stdout by default."""
        summary = execution_result["summary"]
        lines = [
            "",
            RULE,
            "TOTALPOS VERIFICATION - EXECUTION SUMMARY",
            RULE,
            f"Checkers run: {summary['total_checkers']} "
            f"({summary['successful_checkers']} ok, {summary['failed_checkers']} failed)",
            f"Total results: {summary['total_results']}",
            "",
            "Results by status:",
        ]
        counts = self.get_summary_by_status(execution_result["results"])
        lines += [f"  {status}: {count}" for status, count in sorted(counts.items())]
        lines += ["", "Checkers:"]
        for detail in summary["checker_details"]:
            if detail["status"] == "success":
                lines.append(f"  ✓ {detail['checker']}: {detail['result_count']} result(s)")
            else:
                lines.append(f"  ✗ {detail['checker']}: {detail['error']}")
        lines += [RULE, ""]
        print("\n".join(lines), file=file)


def get_orchestrator(checks_dir: Path = None) -> VerificationOrchestrator:
    """An orchestrator with discovery already done."""
    orchestrator = VerificationOrchestrator(checks_dir)
    orchestrator.discover()
    return orchestrator


def run_all_checks(matrix, checks_dir: Path = None, **kwargs) -> Dict[str, Any]:
    """Discover and run in one call; kwargs go to run()."""
    return get_orchestrator(checks_dir).run(matrix, **kwargs)
