#!/usr/bin/env python3
"""
totalpos command-line interface

Reads matrices (plain text, one row per line) and cone / generator specs
(JSON file or inline JSON), runs classification and verification, and
prints a structured report.

Exit codes: 0 on success, 1 when a verification finds violations, 2 on
bad input or when the matrix is outside the class a verification needs.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np

from orchestrator import OrchestratorError, get_orchestrator
from totalpos.classify import classify
from totalpos.config import get_settings
from totalpos.cones import (
    ExteriorBasicCone,
    adjoint,
    cone_from_json,
    cone_to_json,
    contains,
    max_angle,
    t_chain_membership,
    t_membership,
)
from totalpos.errors import InputError, TotalPosError
from totalpos.exterior import compound, kronecker_eigs, match_spectra, subsets
from totalpos.generators import GeneratorSpec, build
from totalpos.matrix_io import digest, format_matrix, parse_matrix
from totalpos.spectral import eigen, gk_verify, spectral_radius, vdp_check


COMMANDS = ("classify", "compound", "spectrum", "verify-gk", "verify-vdp", "cone", "generate", "verify-all")


def load_matrix(path: str) -> Tuple[np.ndarray, str]:
    """
    Read a matrix file.

    Returns:
        (matrix, sha256 of the file text)

    Raises:
        InputError: If the file is missing or malformed
    """
    matrix_path = Path(path)
    if not matrix_path.exists():
        raise InputError(f"matrix file not found: {path}")
    text = matrix_path.read_text()
    return parse_matrix(text, source=path), digest(text)


def load_json_arg(value: str) -> Tuple[Any, str]:
    """A JSON argument given either as a file path or inline; returns (object, digest)."""
    try:
        is_file = Path(value).is_file()
    except OSError:
        # inline JSON longer than the platform's file name limit
        is_file = False
    text = Path(value).read_text() if is_file else value
    try:
        return json.loads(text), digest(text)
    except json.JSONDecodeError as e:
        raise InputError(f"not a JSON file or inline JSON: {value!r} ({e})")


def parse_vector(text: str) -> np.ndarray:
    """Parse '1,-1,0' or '1 -1 0'."""
    try:
        values = [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError as e:
        raise InputError(f"cannot parse vector {text!r}: {e}")
    if not values:
        raise InputError("vector is empty")
    return np.array(values)


def _complex_list(values) -> List[List[float]]:
    return [[float(np.real(v)), float(np.imag(v))] for v in np.atleast_1d(values)]


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_classify(args, log: List[str]) -> Tuple[Dict, int]:
    A, tag = load_matrix(args.input)
    cls = classify(A, k=args.k, tol=args.tol)
    log.append(f"classified {A.shape[0]}x{A.shape[0]} matrix up to order {cls.k_checked}")
    orders = [
        {
            "j": rep.j,
            "sign": rep.sign,
            "strict": rep.strict,
            "js": rep.js.to_list() if rep.js else None,
            "sjs": rep.sjs.to_list() if rep.sjs else None,
        }
        for rep in cls.orders
    ]
    labels = [name for name in ("stp", "tp", "ssr", "sr", "stjs", "tjs") if getattr(cls, name)]
    report = {"input_digest": tag, "classification": cls.to_dict(), "orders": orders,
              "verdict": labels[0] if labels else "none"}
    return report, 0


def cmd_compound(args, log: List[str]) -> Tuple[Dict, int]:
    A, tag = load_matrix(args.input)
    n = A.shape[0]
    j = args.j if args.j is not None else min(2, n)
    C = compound(A, j)
    log.append(f"compound of order {j}: {C.size}x{C.size}")
    report = {
        "input_digest": tag,
        "j": j,
        "index": [list(s) for s in subsets(n, j)],
        "compound": C.body.tolist(),
        "verdict": "ok",
    }
    return report, 0


def cmd_spectrum(args, log: List[str]) -> Tuple[Dict, int]:
    A, tag = load_matrix(args.input)
    eig = eigen(A, tol=args.tol)
    report = {
        "input_digest": tag,
        "eigenvalues": _complex_list(eig.eigenvalues),
        "spectral_radius": spectral_radius(A),
        "verdict": "ok",
    }
    if args.j is not None:
        distance = match_spectra(np.linalg.eigvals(compound(A, args.j).body), kronecker_eigs(eig.eigenvalues, args.j))
        report["j"] = args.j
        report["kronecker_distance"] = distance
        log.append(f"order {args.j} spectrum matched to eigenvalue products, distance {distance:.3e}")
    return report, 0


def cmd_verify_gk(args, log: List[str]) -> Tuple[Dict, int]:
    A, tag = load_matrix(args.input)
    report = gk_verify(A, tol=args.tol, seed=args.seed, combo_samples=args.samples)
    log.append(f"route {report.route}; failed clause: {report.failed_clause}")
    out = {"input_digest": tag, **report.to_dict()}
    return out, 0 if report.verdict == "pass" else 1


def cmd_verify_vdp(args, log: List[str]) -> Tuple[Dict, int]:
    A, tag = load_matrix(args.input)
    report = vdp_check(A, trials=args.trials, seed=args.seed, tol=args.tol)
    log.append(f"route {report.route}; {report.violations}/{report.total} violations")
    out = {"input_digest": tag, **report.to_dict(), "verdict": "pass" if report.passed else "fail"}
    return out, 0 if report.passed else 1


def cmd_cone(args, log: List[str]) -> Tuple[Dict, int]:
    spec, tag = load_json_arg(args.input)
    x = parse_vector(args.vector) if args.vector else None
    report: Dict[str, Any] = {"input_digest": tag}

    if isinstance(spec, dict) and "chain" in spec:
        if not isinstance(spec["chain"], list) or not spec["chain"]:
            raise InputError(f"\"chain\" must be a non-empty list of cones, got {spec['chain']!r}")
        chain = [cone_from_json(c) for c in spec["chain"]]
        if x is None:
            raise InputError("a cone chain needs --vector")
        result = t_chain_membership(x, chain, budget=args.budget, seed=args.seed, tol=args.tol)
        log.append(f"chain of {len(chain)} cones: {result.verdict} after {result.trials} trials")
        report.update({"chain": [cone_to_json(K) for K in chain], "t_chain_membership": result.to_dict(),
                       "verdict": str(result.verdict)})
        return report, 0

    K = cone_from_json(spec)
    radians, exact = max_angle(K, seed=args.seed)
    report.update({
        "cone": cone_to_json(K),
        "adjoint": cone_to_json(adjoint(K)),
        "max_angle": {"radians": radians, "exact": exact},
        "verdict": "ok",
    })
    if x is not None:
        if x.size == K.dim:
            report["contains"] = str(contains(K, x, tol=args.tol))
        if args.grade is not None or isinstance(K, ExteriorBasicCone):
            result = t_membership(x, K, grade=args.grade, budget=args.budget, seed=args.seed, tol=args.tol)
            log.append(f"T-membership: {result.verdict} (exact={result.exact})")
            report["t_membership"] = result.to_dict()
            report["verdict"] = str(result.verdict)
        elif "contains" in report:
            report["verdict"] = report["contains"]
    return report, 0


def cmd_generate(args, log: List[str]) -> Tuple[Dict, int]:
    spec_obj, tag = load_json_arg(args.input)
    spec = GeneratorSpec.from_json(spec_obj)
    A = build(spec)
    log.append(f"generated {spec.kind} matrix of size {A.shape[0]}")
    if args.output:
        Path(args.output).write_text(format_matrix(A))
        log.append(f"wrote {args.output}")
    report = {
        "input_digest": tag,
        "spec": spec.to_json(),
        "matrix": A.tolist(),
        "classification": classify(A, tol=args.tol).to_dict(),
        "verdict": "ok",
    }
    return report, 0


def cmd_verify_all(args, log: List[str]) -> Tuple[Dict, int]:
    A, tag = load_matrix(args.input)
    orchestrator = get_orchestrator()
    kwargs = {k: v for k, v in {"tol": args.tol, "seed": args.seed, "trials": args.trials,
                                "combo_samples": args.samples}.items() if v is not None}
    result = orchestrator.run(A, checker_filter=args.filter, **kwargs)
    log.append(result["log"])
    status_counts = orchestrator.get_summary_by_status(result["results"])
    failed = status_counts.get("fail", 0) > 0 or result["summary"]["failed_checkers"] > 0
    report = {
        "input_digest": tag,
        "summary": result["summary"],
        "status_counts": status_counts,
        "results": result["results"],
        "verdict": "fail" if failed else "pass",
    }
    if args.format == "table":
        orchestrator.print_summary(result)
    return report, 1 if failed else 0


HANDLERS = {
    "classify": cmd_classify,
    "compound": cmd_compound,
    "spectrum": cmd_spectrum,
    "verify-gk": cmd_verify_gk,
    "verify-vdp": cmd_verify_vdp,
    "cone": cmd_cone,
    "generate": cmd_generate,
    "verify-all": cmd_verify_all,
}


# =============================================================================
# OUTPUT
# =============================================================================

def render_table(report: Dict) -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if key == "results" and isinstance(value, list):
            continue
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key:<20} {value}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run_checks.py",
        description="totalpos - compound matrices, total positivity and sign-variation checks"
    )
    parser.add_argument(
        "command",
        choices=COMMANDS,
        help="What to run"
    )
    parser.add_argument(
        "input",
        help="Matrix file (cone / generate: JSON file or inline JSON)"
    )
    parser.add_argument("--j", type=int, default=None, help="Compound order (compound, spectrum)")
    parser.add_argument("--k", type=int, default=None, help="Highest compound order to classify (default: n)")
    parser.add_argument("--tol", type=float, default=None, help="Relative zero threshold (default: TOTALPOS_TOL)")
    parser.add_argument("--trials", type=int, default=None, help="Random vectors for verify-vdp")
    parser.add_argument("--samples", type=int, default=None, help="Random combinations for verify-gk")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default: TOTALPOS_SEED)")
    parser.add_argument("--budget", type=int, default=None, help="Random completions for cone T-membership")
    parser.add_argument("--vector", default=None, help="Vector for the cone command, e.g. '1,-1,0'")
    parser.add_argument("--grade", type=int, default=None, help="Exterior grade of the cone for T-membership")
    parser.add_argument("--output", default=None, help="generate: also write the matrix to this file")
    parser.add_argument("-f", "--filter", default=None, help="verify-all: only run checkers matching this name")
    parser.add_argument(
        "--format",
        choices=["json", "table"],
        default="json",
        help="Output format (default: json)"
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Print the execution log to stderr"
    )
    return parser


def run(argv: List[str] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    log: List[str] = []
    try:
        settings = get_settings()
        report, code = HANDLERS[args.command](args, log)
    except (TotalPosError, OrchestratorError) as e:
        print(f"ERROR: {str(e)}", file=sys.stderr)
        return 2

    report["command"] = args.command
    report["tol"] = args.tol if args.tol is not None else settings.tol
    report["seed"] = args.seed if args.seed is not None else settings.seed

    if args.verbose:
        print("\n".join(log), file=sys.stderr)

    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        print(render_table(report))
    return code


def main():
    """Command-line entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
