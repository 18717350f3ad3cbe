"""
Compound Matrix Identity Checker

Verifies the algebraic identities of the exterior power on a matrix A,
order by order:
- Cauchy-Binet: (AB)^(j) = A^(j) B^(j) against a seeded random B
- Transpose: (A^T)^(j) = (A^(j))^T
- Inverse: A^(j) (A^-1)^(j) = I for nonsingular A
- Power: (A^p)^(j) = (A^(j))^p
- Rank collapse: A^(j) = 0 for j > rank(A)
- Kronecker: the spectrum of A^(j) is the set of j-fold eigenvalue products
"""

import numpy as np

from checks import make_result, relative_residual
from totalpos.errors import ResourceError
from totalpos.exterior import compound, kronecker_eigs, match_spectra
from totalpos.generators import random_matrix
from totalpos.numeric import as_matrix, inf_norm


IDENTITY_TOL = 1e-8
KRONECKER_TOL = 1e-6


def _summary(check_id: str, name: str, results: list) -> dict:
    failed = [r for r in results if r["check_status"] == "fail"]
    blocked = [r for r in results if r["check_status"] == "blocked"]
    status = "fail" if failed else ("warning" if blocked else "pass")
    return make_result(
        check_id,
        name,
        "summary",
        status,
        f"{len(results) - len(failed) - len(blocked)}/{len(results)} orders pass",
        "all orders pass",
        comment=f"{len(blocked)} order(s) skipped by the compound size cap" if blocked else None,
    )


def _per_order(matrix, check_id: str, name: str, required: str, residual_of) -> list[dict]:
    A = as_matrix(matrix, square=True)
    results = []
    for j in range(1, A.shape[0] + 1):
        try:
            residual = residual_of(A, j)
        except ResourceError as e:
            results.append(make_result(check_id, name, f"order {j}", "blocked", "n/a", required, comment=str(e)))
            continue
        status = "pass" if residual <= IDENTITY_TOL else "fail"
        results.append(make_result(
            check_id, name, f"order {j}", status, f"{residual:.3e}", required,
            log=f"relative residual {residual:.3e}",
        ))
    results.append(_summary(check_id, name, results))
    return results


def check_cauchy_binet(matrix, seed: int = None, **kwargs) -> list[dict]:
    """
    Check (AB)^(j) = A^(j) B^(j) against a seeded random B of the same size.

    Args:
        matrix: Square matrix A
        seed: Seed for B (default: settings.seed)
        **kwargs: Ignored

    Returns:
        One result per order plus a summary
    """
    n = as_matrix(matrix, square=True).shape[0]
    B = random_matrix(n, seed=seed)

    def residual(A, j):
        CA, CB = compound(A, j).body, compound(B, j).body
        return relative_residual(compound(A @ B, j).body, CA @ CB, scale=np.max(np.abs(CA) @ np.abs(CB)))

    return _per_order(matrix, "compound.cauchy_binet", "Cauchy-Binet", f"<= {IDENTITY_TOL:g}", residual)


def check_transpose(matrix, **kwargs) -> list[dict]:
    """Check (A^T)^(j) = (A^(j))^T for every order."""

    def residual(A, j):
        return relative_residual(compound(A.T, j).body, compound(A, j).body.T)

    return _per_order(matrix, "compound.transpose", "Transpose", f"<= {IDENTITY_TOL:g}", residual)


def check_inverse(matrix, **kwargs) -> list[dict]:
    """Check A^(j) (A^-1)^(j) = I; blocked for singular A."""
    A = as_matrix(matrix, square=True)
    n = A.shape[0]
    if np.linalg.matrix_rank(A) < n:
        return [make_result(
            "compound.inverse", "Inverse", "precondition", "blocked",
            f"rank {np.linalg.matrix_rank(A)}", f"rank {n}", comment="matrix is singular",
        )]
    A_inv = np.linalg.inv(A)

    def residual(A, j):
        C, C_inv = compound(A, j).body, compound(A_inv, j).body
        return relative_residual(C @ C_inv, np.eye(C.shape[0]), scale=np.max(np.abs(C) @ np.abs(C_inv)))

    return _per_order(A, "compound.inverse", "Inverse", f"<= {IDENTITY_TOL:g}", residual)


def check_power(matrix, power: int = 3, **kwargs) -> list[dict]:
    """
    Check (A^p)^(j) = (A^(j))^p.

    Args:
        matrix: Square matrix A
        power: Exponent p >= 1 (default 3)
    """

    def residual(A, j):
        C = compound(A, j).body
        expected = np.linalg.matrix_power(C, power)
        scale = np.max(np.linalg.matrix_power(np.abs(C), power))
        return relative_residual(compound(np.linalg.matrix_power(A, power), j).body, expected, scale=scale)

    return _per_order(matrix, "compound.power", f"Power p={power}", f"<= {IDENTITY_TOL:g}", residual)


def check_rank_collapse(matrix, **kwargs) -> list[dict]:
    """Check that A^(j) vanishes exactly for the orders j above rank(A)."""
    A = as_matrix(matrix, square=True)
    n = A.shape[0]
    rank = int(np.linalg.matrix_rank(A))
    if rank == n:
        return [make_result(
            "compound.rank_collapse", "Rank collapse", "summary", "log",
            f"rank {rank}", "rank < n", comment="full rank; no order collapses",
        )]

    results = []
    for j in range(rank + 1, n + 1):
        try:
            body = compound(A, j).body
        except ResourceError as e:
            results.append(make_result(
                "compound.rank_collapse", "Rank collapse", f"order {j}", "blocked", "n/a", "0", comment=str(e),
            ))
            continue
        size = inf_norm(body) / max(1.0, inf_norm(A)) ** j
        results.append(make_result(
            "compound.rank_collapse", "Rank collapse", f"order {j}",
            "pass" if size <= IDENTITY_TOL else "fail", f"{size:.3e}", f"<= {IDENTITY_TOL:g}",
            log=f"rank {rank}",
        ))
    results.append(_summary("compound.rank_collapse", "Rank collapse", results))
    return results


def check_kronecker(matrix, **kwargs) -> list[dict]:
    """Check eig(A^(j)) against the j-fold products of eig(A) under optimal matching."""
    A = as_matrix(matrix, square=True)
    eigs = np.linalg.eigvals(A)
    results = []
    for j in range(1, A.shape[0] + 1):
        try:
            body = compound(A, j).body
        except ResourceError as e:
            results.append(make_result("compound.kronecker", "Kronecker", f"order {j}", "blocked", "n/a",
                                       f"<= {KRONECKER_TOL:g}", comment=str(e)))
            continue
        distance = match_spectra(np.linalg.eigvals(body), kronecker_eigs(eigs, j))
        results.append(make_result(
            "compound.kronecker", "Kronecker", f"order {j}",
            "pass" if distance <= KRONECKER_TOL else "fail", f"{distance:.3e}", f"<= {KRONECKER_TOL:g}",
            log=f"{body.shape[0]} eigenvalues matched",
        ))
    results.append(_summary("compound.kronecker", "Kronecker", results))
    return results
