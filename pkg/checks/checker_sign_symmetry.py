"""
Sign-Symmetry Closure Checker

For strictly J-sign-symmetric totally (STJS) matrices, verifies that the
class is closed under
- transposition
- taking principal submatrices
- permutation similarity P A P^-1
and that every principal minor is positive.
"""

from itertools import combinations

import numpy as np

from checks import make_result
from totalpos.classify import classify, principal_minors, principal_submatrix
from totalpos.config import resolve
from totalpos.generators import permutation_similar
from totalpos.numeric import as_matrix


FULL_ENUMERATION_MAX_N = 6
SUBMATRIX_SAMPLES = 64
PERMUTATION_SAMPLES = 3
MINOR_FLOOR = 1e-10


def _require_stjs(matrix, check_id: str, name: str, tol: float):
    A = as_matrix(matrix, square=True)
    cls = classify(A, tol=tol)
    if cls.stjs:
        return A, None
    order = cls.first_failure(strict=True)
    return A, [make_result(
        check_id, name, "precondition", "blocked",
        f"not STJS (compound order {order})", "STJS",
        comment="closure properties are only asserted for STJS matrices",
    )]


def check_transpose_closure(matrix, tol: float = None, **kwargs) -> list[dict]:
    """A^T of an STJS matrix is STJS."""
    A, blocked = _require_stjs(matrix, "sjs.transpose", "Transpose closure", tol)
    if blocked:
        return blocked
    ok = classify(A.T, tol=tol).stjs
    return [make_result("sjs.transpose", "Transpose closure", "A^T", "pass" if ok else "fail",
                        f"stjs={ok}", "stjs=True")]


def check_principal_submatrices(matrix, tol: float = None, seed: int = None, **kwargs) -> list[dict]:
    """
    Every principal submatrix of an STJS matrix is STJS.

    All proper index sets are tried up to n = 6; larger matrices use a seeded
    sample of index sets.
    """
    A, blocked = _require_stjs(matrix, "sjs.principal", "Principal submatrix closure", tol)
    if blocked:
        return blocked
    n = A.shape[0]
    index_sets = [s for size in range(1, n) for s in combinations(range(1, n + 1), size)]
    sampled = n > FULL_ENUMERATION_MAX_N
    if sampled:
        rng = np.random.default_rng(resolve(seed, "seed"))
        picks = rng.choice(len(index_sets), size=min(SUBMATRIX_SAMPLES, len(index_sets)), replace=False)
        index_sets = [index_sets[i] for i in sorted(picks)]

    failures = [s for s in index_sets if not classify(principal_submatrix(A, s), tol=tol).stjs]
    return [make_result(
        "sjs.principal", "Principal submatrix closure", "principal submatrices",
        "pass" if not failures else "fail",
        f"{len(index_sets) - len(failures)}/{len(index_sets)} STJS", "all STJS",
        comment=f"first failure at index set {failures[0]}" if failures else None,
        log="sampled index sets" if sampled else "all proper index sets",
    )]


def check_permutation_similarity(matrix, tol: float = None, seed: int = None, **kwargs) -> list[dict]:
    """P A P^-1 stays STJS for the reversal and a few seeded permutations."""
    A, blocked = _require_stjs(matrix, "sjs.permutation", "Permutation similarity closure", tol)
    if blocked:
        return blocked
    n = A.shape[0]
    rng = np.random.default_rng(resolve(seed, "seed"))
    permutations = [tuple(range(n, 0, -1))]
    permutations += [tuple(int(v) + 1 for v in rng.permutation(n)) for _ in range(PERMUTATION_SAMPLES)]

    results = []
    for perm in permutations:
        ok = classify(permutation_similar(A, perm), tol=tol).stjs
        results.append(make_result(
            "sjs.permutation", "Permutation similarity closure", f"permutation {list(perm)}",
            "pass" if ok else "fail", f"stjs={ok}", "stjs=True",
        ))
    return results


def check_principal_minors(matrix, tol: float = None, **kwargs) -> list[dict]:
    """All principal minors of an STJS matrix are positive."""
    A, blocked = _require_stjs(matrix, "sjs.minors", "Principal minors", tol)
    if blocked:
        return blocked
    minors = principal_minors(A)
    values = np.array(list(minors.values()))
    scale = max(1.0, float(np.max(np.abs(values))))
    worst = min(minors, key=minors.get)
    ok = bool(np.min(values) > MINOR_FLOOR * scale)
    return [make_result(
        "sjs.minors", "Principal minors", "all principal minors", "pass" if ok else "fail",
        f"min {minors[worst]:.6g} at {list(worst)}", f"> {MINOR_FLOOR:g} * {scale:.6g}",
        log=f"{len(minors)} minors",
    )]
