"""
Oscillation Spectrum Checker

For strictly totally positive and strictly J-sign-symmetric matrices:
- eigenvalues positive, simple and strictly decreasing
- lambda_j = rho(A^(j)) / rho(A^(j-1))
- the j-th eigenvector changes sign exactly j - 1 times
- combinations of eigenvectors q..p change sign between q - 1 and p - 1 times
- eigenvector bands: x_j lies in int M(j) and outside M(j - 1)
- the inverse has the reciprocal positive simple spectrum
- Perron root of entrywise positive matrices
"""

import numpy as np

from checks import make_result
from totalpos.classify import classify
from totalpos.config import resolve
from totalpos.errors import ClassificationError
from totalpos.generators import signature_conjugate
from totalpos.numeric import as_matrix
from totalpos.signs import Membership, m_membership
from totalpos.spectral import eigen, gk_verify, perron_root


CLAUSE_REQUIREMENTS = {
    "positive_simple": "real, positive, pairwise distinct",
    "strict_decrease": "lambda_1 > ... > lambda_n > 0",
    "ratio_formula": "max residual <= eig_tol",
    "eigvec_variation": "S-(x_j) = S+(x_j) = j-1",
    "combination_bounds": "q-1 <= S-(y) <= S+(y) <= p-1",
}


def _blocked(check_id: str, name: str, error: Exception) -> list[dict]:
    order = getattr(error, "order", None)
    return [make_result(
        check_id, name, "precondition", "blocked",
        f"fails at compound order {order}" if order else "not in class",
        "STP or STJS", comment=str(error),
    )]


def check_gk_spectrum(matrix, tol: float = None, seed: int = None, combo_samples: int = None, **kwargs) -> list[dict]:
    """
    Run the oscillation-spectrum suite and report one result per clause.

    Args:
        matrix: Square matrix
        tol: Relative zero threshold
        seed: Seed for combination sampling
        combo_samples: Number of random combinations

    Returns:
        Results per clause; a single blocked result when the matrix is
        neither STP nor STJS
    """
    try:
        report = gk_verify(matrix, tol=tol, combo_samples=combo_samples, seed=seed)
    except ClassificationError as e:
        return _blocked("gk.spectrum", "Oscillation spectrum", e)

    actual = {
        "positive_simple": f"real_positive={report.all_real_positive}, simple={report.all_simple}",
        "strict_decrease": str(report.strictly_decreasing),
        "ratio_formula": f"{max(report.ratio_residuals):.3e}",
        "eigvec_variation": str(report.eigvec_variations),
        "combination_bounds": f"{report.combo_passed}/{report.combo_total}",
    }
    results = []
    for clause, required in CLAUSE_REQUIREMENTS.items():
        if clause in report.skipped:
            status, comment = "log", "skipped: signature-conjugated form is not STP"
        else:
            status, comment = ("pass" if report.clauses[clause] else "fail"), None
        results.append(make_result(
            "gk.spectrum", "Oscillation spectrum", clause, status, actual[clause], required,
            comment=comment, log=f"route {report.route}",
        ))
    return results


def _oscillation_basis(matrix, tol):
    """The matrix itself (STP) or its first-order signature conjugate (STJS)."""
    A = as_matrix(matrix, square=True)
    cls = classify(A, tol=tol)
    if cls.stp:
        return A
    if cls.stjs:
        B = signature_conjugate(A, cls.orders[0].sjs.signature)
        if classify(B, tol=tol).stp:
            return B
    raise ClassificationError(
        "matrix is neither STP nor STP after signature conjugation", order=cls.first_failure(strict=True)
    )


def check_eigenvector_bands(matrix, tol: float = None, **kwargs) -> list[dict]:
    """Check x_j in int M(j) and, for j >= 2, x_j outside M(j-1)."""
    try:
        B = _oscillation_basis(matrix, tol)
    except ClassificationError as e:
        return _blocked("gk.bands", "Eigenvector bands", e)

    X = np.real(eigen(B, tol=tol).right)
    results = []
    for j in range(1, B.shape[0] + 1):
        x = X[:, j - 1]
        inner = m_membership(x, j)
        outer = m_membership(x, j - 1) if j >= 2 else Membership.OUTSIDE
        ok = inner is Membership.INTERIOR and outer is Membership.OUTSIDE
        results.append(make_result(
            "gk.bands", "Eigenvector bands", f"x_{j}", "pass" if ok else "fail",
            f"M({j}): {inner}" + (f", M({j - 1}): {outer}" if j >= 2 else ""),
            f"M({j}): interior" + (f", M({j - 1}): outside" if j >= 2 else ""),
        ))
    return results


def check_inverse_spectrum(matrix, tol: float = None, eig_tol: float = None, **kwargs) -> list[dict]:
    """Check that A^-1 has eigenvalues 1/lambda_j, still real, positive and simple."""
    try:
        B = _oscillation_basis(matrix, tol)
    except ClassificationError as e:
        return _blocked("gk.inverse", "Inverse spectrum", e)
    eig_tol = resolve(eig_tol, "eig_tol")

    values = np.asarray(eigen(B, tol=tol).eigenvalues)
    inverse_values = np.asarray(eigen(np.linalg.inv(B), tol=tol).eigenvalues)
    real = np.all(np.abs(np.imag(inverse_values)) <= eig_tol * np.max(np.abs(inverse_values)))
    expected = np.sort(1.0 / np.real(values))
    got = np.sort(np.real(inverse_values))
    mismatch = float(np.max(np.abs(got - expected) / expected))
    simple = bool(np.all(np.diff(got) > eig_tol * np.maximum(1.0, got[1:])))
    ok = bool(real and np.all(got > 0) and simple and mismatch <= eig_tol)
    return [make_result(
        "gk.inverse", "Inverse spectrum", "reciprocal spectrum", "pass" if ok else "fail",
        f"max relative mismatch {mismatch:.3e}, simple={simple}",
        "1/lambda_j, real, positive, simple",
    )]


def check_perron(matrix, **kwargs) -> list[dict]:
    """For an entrywise positive matrix: power-iteration root equals the dominant eigenvalue, with positive eigenvectors."""
    A = as_matrix(matrix, square=True)
    try:
        root = perron_root(A)
    except ClassificationError as e:
        return [make_result("gk.perron", "Perron root", "precondition", "blocked",
                            "has non-positive entries", "entrywise positive", comment=str(e))]

    values = np.linalg.eigvals(A)
    dominant = float(np.max(np.abs(values)))
    gap = float(np.sort(np.abs(values))[-2] / dominant) if values.size > 1 else 0.0
    mismatch = abs(root.rho - dominant) / dominant
    positive = bool(np.all(root.right > 0) and np.all(root.left > 0))
    ok = mismatch <= 1e-8 and positive and gap < 1
    return [make_result(
        "gk.perron", "Perron root", "dominant eigenvalue", "pass" if ok else "fail",
        f"rho={root.rho:.12g}, mismatch {mismatch:.3e}, |lambda_2|/rho={gap:.3f}",
        "simple, strictly dominant, positive eigenvectors",
        log=f"{root.iterations} iterations",
    )]
