# Verification plugins for totalpos, discovered by orchestrator.py.
#
# Every checker_*.py module exposes check_*(matrix, **kwargs) -> list[dict];
# each dict carries the keys in RESULT_KEYS and a check_status from
# VALID_STATUS_VALUES ("blocked" means the matrix is outside the class the
# check needs).

import numpy as np

RESULT_KEYS = (
    "check_id",
    "check_name",
    "clause",
    "check_status",
    "actual_value",
    "required_value",
    "comment",
    "log",
)

VALID_STATUS_VALUES = {"pass", "fail", "warning", "blocked", "log"}


def make_result(check_id, check_name, clause, status, actual, required, comment=None, log=None) -> dict:
    return {
        "check_id": check_id,
        "check_name": check_name,
        "clause": clause,
        "check_status": status,
        "actual_value": str(actual),
        "required_value": str(required),
        "comment": comment,
        "log": log,
    }


def relative_residual(actual, expected, scale=None) -> float:
    """
    max |actual - expected| divided by max(1, scale).

    scale defaults to max |expected|; identity checks pass the entrywise
    product of absolute factors so rounding in the factors is accounted for.
    """
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    if expected.size == 0:
        return 0.0
    if scale is None:
        scale = float(np.max(np.abs(expected)))
    return float(np.max(np.abs(actual - expected))) / max(1.0, float(scale))
