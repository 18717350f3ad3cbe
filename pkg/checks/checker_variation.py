"""
Variation Diminishing Checker

Runs seeded random vectors through the matrix and counts violations of
- S+(Ax) <= S-(x) for strictly sign regular (or STJS) matrices
- S-(Ax) <= S-(x) for nonsingular sign regular matrices
together with the matching M(j) invariance (x in M(j) => Ax in int M(j), or
in M(j) for the non-strict route).
"""

from checks import make_result
from totalpos.errors import ClassificationError
from totalpos.spectral import vdp_check


def check_variation_diminishing(matrix, trials: int = None, seed: int = None, tol: float = None, **kwargs) -> list[dict]:
    """
    Count variation-diminishing violations.

    Args:
        matrix: Square matrix
        trials: Number of random vectors (default: settings.vdp_trials)
        seed: RNG seed
        tol: Relative zero threshold

    Returns:
        A sign-count result and an M(j) invariance result, or a single
        blocked result when the matrix fits no route
    """
    try:
        report = vdp_check(matrix, trials=trials, seed=seed, tol=tol)
    except ClassificationError as e:
        return [make_result(
            "vdp.variation", "Variation diminishing", "precondition", "blocked",
            "not SSR, STJS or nonsingular SR", "SSR, STJS or nonsingular SR", comment=str(e),
        )]

    bound = "S+(Ax) <= S-(x)" if report.route != "sr" else "S-(Ax) <= S-(x)"
    target = "int M(j)" if report.route != "sr" else "M(j)"
    worst = f"worst margin {report.worst_margin}" + (f" at x={report.worst_case}" if report.worst_case else "")
    return [
        make_result(
            "vdp.variation", "Variation diminishing", bound,
            "pass" if report.violations == 0 else "fail",
            f"{report.violations}/{report.total} violations", "0 violations",
            log=f"route {report.route}; {worst}",
        ),
        make_result(
            "vdp.variation", "Variation diminishing", f"x in M(j) => Ax in {target}",
            "pass" if report.m_violations == 0 else "fail",
            f"{report.m_violations} vectors leaving their M(j)", "0",
            log=f"route {report.route}",
        ),
    ]
