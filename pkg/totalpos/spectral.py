"""
Spectral plumbing and verification suites.

- eigen / perron_root / spectral_radius: decompositions with canonical
  ordering and phase
- gk_verify: positive simple spectrum of (strictly) totally positive and
  strictly J-sign-symmetric matrices, with eigenvector oscillation
- vdp_check: variation diminishing on random vectors, for strictly sign
  regular input (S^+(Ax) <= S^-(x)) and nonsingular sign regular input
  (S^-(Ax) <= S^-(x))
"""

from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from totalpos.classify import classify
from totalpos.config import resolve
from totalpos.errors import ClassificationError, InputError, NumericError
from totalpos.exterior import compound
from totalpos.generators import signature_conjugate
from totalpos.numeric import as_matrix, as_vector
from totalpos.signs import Membership, m_membership, s_minus, s_minus_batch, s_plus, s_plus_batch


# share of entries set to zero in random trial vectors
ZERO_RATE = 0.2
COMBO_MIN_LEAD = 0.1


class Eigen(NamedTuple):
    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray


class PerronRoot(NamedTuple):
    rho: float
    right: np.ndarray
    left: np.ndarray
    iterations: int


MODULUS_DIGITS = 10


def _order(values: np.ndarray) -> np.ndarray:
    # descending modulus, then real part, then imaginary part; moduli equal to
    # MODULUS_DIGITS relative digits tie
    modulus = np.abs(values)
    scale = max(1.0, float(np.max(modulus))) if values.size else 1.0
    return np.lexsort((-values.imag, -values.real, -np.round(modulus / scale, MODULUS_DIGITS)))


def _canonical_columns(V: np.ndarray, tol: float) -> np.ndarray:
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    for k in range(V.shape[1]):
        col = V[:, k]
        lead = np.flatnonzero(np.abs(col) > tol)
        if lead.size:
            pivot = col[lead[0]]
            V[:, k] = col * (np.conj(pivot) / abs(pivot))
    if np.all(np.abs(V.imag) <= tol):
        V = V.real
    return V


def eigen(A, tol: float = None) -> Eigen:
    """
    Full eigen-decomposition with deterministic ordering and phase.

    Eigenvalues are sorted by descending modulus. Each eigenvector has unit
    Euclidean norm and its first non-negligible component real positive.
    Left eigenvectors (eigenvectors of A^T) are matched to the eigenvalues of
    A by optimal assignment.

    Raises:
        InputError: If A is not square and finite
        NumericError: If the eigen-solver does not converge
    """
    A = as_matrix(A, square=True)
    tol = resolve(tol, "tol")
    try:
        w, V = np.linalg.eig(A)
        wl, U = np.linalg.eig(A.T)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"eigen-decomposition failed for {A.shape[0]}x{A.shape[0]} matrix: {e}")

    order = _order(w)
    w, V = w[order], V[:, order]
    rows, cols = linear_sum_assignment(np.abs(w[:, None] - wl[None, :]))
    U = U[:, cols[np.argsort(rows)]]

    if np.all(np.abs(w.imag) <= tol * max(1.0, float(np.max(np.abs(w))))):
        w = w.real
    return Eigen(w, _canonical_columns(V.astype(complex), tol), _canonical_columns(U.astype(complex), tol))


def perron_root(M, max_iter: int = None, tol: float = None) -> PerronRoot:
    """
    Dominant eigenvalue and eigenvectors of an entrywise positive matrix by
    power iteration from the all-ones vector.

    Raises:
        ClassificationError: If some entry of M is not positive
        NumericError: If the iteration does not settle within max_iter steps
    """
    M = as_matrix(M, square=True)
    if np.any(M <= 0):
        raise ClassificationError("perron_root needs an entrywise positive matrix")
    max_iter = int(resolve(max_iter, "power_max_iter"))
    tol = resolve(tol, "power_tol")

    def power(B: np.ndarray) -> Tuple[float, np.ndarray, int]:
        v = np.full(B.shape[0], 1.0 / np.sqrt(B.shape[0]))
        for it in range(1, max_iter + 1):
            w = B @ v
            rho = float(np.linalg.norm(w))
            w /= rho
            if np.max(np.abs(w - v)) <= tol:
                return rho, w, it
            v = w
        raise NumericError(f"power iteration did not converge in {max_iter} steps")

    rho, right, it_right = power(M)
    _, left, it_left = power(M.T)
    return PerronRoot(rho, right, left, max(it_right, it_left))


def spectral_radius(A) -> float:
    """Largest eigenvalue modulus."""
    A = as_matrix(A, square=True)
    try:
        return float(np.max(np.abs(np.linalg.eigvals(A))))
    except np.linalg.LinAlgError as e:
        raise NumericError(f"eigenvalue computation failed: {e}")


# =============================================================================
# GANTMACHER-KREIN SUITE
# =============================================================================

CLAUSES = ("positive_simple", "strict_decrease", "ratio_formula", "eigvec_variation", "combination_bounds")


@dataclass
class SpectralReport:
    """Outcome of gk_verify; verdict is 'pass' only when every asserted clause holds."""

    route: str
    eigenvalues: np.ndarray
    all_real_positive: bool
    all_simple: bool
    strictly_decreasing: bool
    ratio_residuals: List[float]
    eigvec_variations: Optional[List[Tuple[int, int]]]
    combo_passed: int
    combo_total: int
    verdict: str
    failed_clause: Optional[str] = None
    skipped: List[str] = field(default_factory=list)
    clauses: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            "route": self.route,
            "eigenvalues": [[float(np.real(v)), float(np.imag(v))] for v in self.eigenvalues],
            "all_real_positive": self.all_real_positive,
            "all_simple": self.all_simple,
            "strictly_decreasing": self.strictly_decreasing,
            "ratio_residuals": [float(r) for r in self.ratio_residuals],
            "eigvec_variations": [list(v) for v in self.eigvec_variations] if self.eigvec_variations is not None else None,
            "combo_checks": {"passed": self.combo_passed, "total": self.combo_total},
            "verdict": self.verdict,
            "failed_clause": self.failed_clause,
            "skipped": list(self.skipped),
            "clauses": dict(self.clauses),
        }


def _distinct(a: complex, b: complex, eig_tol: float) -> bool:
    return abs(a - b) > eig_tol * max(1.0, abs(a), abs(b))


def _compound_radii(A: np.ndarray, cls, tol: float) -> List[float]:
    """rho(A^(j)) for j = 1..n through the Perron root of the sign-conjugated compound."""
    radii = []
    for rep in cls.orders:
        body = compound(A, rep.j).body
        signs = rep.sjs.signature if rep.sjs is not None else (1,) * body.shape[0]
        positive = signature_conjugate(body, signs)
        if positive.shape[0] == 1:
            radii.append(float(abs(positive[0, 0])))
        else:
            radii.append(perron_root(positive).rho)
    return radii


def _combination_checks(X: np.ndarray, samples: int, rng: np.random.Generator) -> int:
    n = X.shape[1]
    passed = 0
    for _ in range(samples):
        q, p = sorted(int(v) for v in rng.integers(1, n + 1, size=2))
        c = rng.standard_normal(p - q + 1)
        while abs(c[-1]) <= COMBO_MIN_LEAD:
            c[-1] = rng.standard_normal()
        y = X[:, q - 1:p] @ c
        if q - 1 <= s_minus(y) and s_plus(y) <= p - 1:
            passed += 1
    return passed


def gk_verify(A, tol: float = None, combo_samples: int = None, seed: int = None, eig_tol: float = None) -> SpectralReport:
    """
    Verify the oscillation spectrum of an STP or STJS matrix.

    Clauses, in order:
        positive_simple: eigenvalues real, positive and pairwise distinct
        strict_decrease: lambda_1 > .. > lambda_n > 0
        ratio_formula: lambda_j rho(A^(j-1)) = rho(A^(j)) with rho(A^(0)) = 1
        eigvec_variation: the j-th eigenvector has S^- = S^+ = j - 1
        combination_bounds: q-1 <= S^-(sum c_i x_i) <= S^+(..) <= p-1 over i = q..p

    For STJS input the last two clauses run on D A D (D the signature of
    the first-order partition) and are skipped when D A D is not STP.

    Args:
        A: Square matrix
        tol: Relative zero threshold for classification and residuals
        combo_samples: Random (q, p, c) draws (default: settings.combo_samples)
        seed: RNG seed (default: settings.seed)
        eig_tol: Eigenvalue distinctness and ratio tolerance (default: settings.eig_tol)

    Raises:
        ClassificationError: If A is neither STP nor STJS; `order` names the
            first compound that is neither positive nor strictly JS
    """
    A = as_matrix(A, square=True)
    tol = resolve(tol, "tol")
    eig_tol = resolve(eig_tol, "eig_tol")
    combo_samples = int(resolve(combo_samples, "combo_samples"))
    rng = np.random.default_rng(resolve(seed, "seed"))
    n = A.shape[0]

    cls = classify(A, tol=tol)
    if cls.stp:
        route, B, basis_ok = "stp", A, True
    elif cls.stjs:
        route = "stjs"
        B = signature_conjugate(A, cls.orders[0].sjs.signature)
        basis_ok = classify(B, tol=tol).stp
    else:
        order = cls.first_failure(strict=True)
        raise ClassificationError(f"matrix is neither STP nor STJS (compound order {order} fails)", order=order)

    eig = eigen(B, tol=tol)
    values = np.asarray(eig.eigenvalues)
    scale = max(1.0, float(np.max(np.abs(values))))
    real = np.all(np.abs(np.imag(values)) <= eig_tol * scale)
    re = np.real(values)
    all_real_positive = bool(real and np.all(re > 0))
    all_simple = all(_distinct(values[i], values[i + 1], eig_tol) for i in range(n - 1))
    strictly_decreasing = bool(all_real_positive and all(re[i] > re[i + 1] for i in range(n - 1)))

    radii = _compound_radii(A, cls, tol)
    previous = [1.0] + radii[:-1]
    ratio_residuals = [abs(re[j] * previous[j] - radii[j]) / radii[j] for j in range(n)]

    skipped = []
    variations = None
    combo_passed = combo_total = 0
    if basis_ok and all_real_positive:
        X = np.real(eig.right)
        variations = [(s_minus(X[:, j]), s_plus(X[:, j])) for j in range(n)]
        combo_total = combo_samples
        combo_passed = _combination_checks(X, combo_samples, rng)
    else:
        skipped = ["eigvec_variation", "combination_bounds"]

    results = {
        "positive_simple": all_real_positive and all_simple,
        "strict_decrease": strictly_decreasing,
        "ratio_formula": max(ratio_residuals) <= eig_tol,
        "eigvec_variation": variations is None or all(v == (j, j) for j, v in enumerate(variations)),
        "combination_bounds": combo_passed == combo_total,
    }
    failed = next((c for c in CLAUSES if c not in skipped and not results[c]), None)

    return SpectralReport(
        route=route,
        eigenvalues=values,
        all_real_positive=all_real_positive,
        all_simple=all_simple,
        strictly_decreasing=strictly_decreasing,
        ratio_residuals=ratio_residuals,
        eigvec_variations=variations,
        combo_passed=combo_passed,
        combo_total=combo_total,
        verdict="pass" if failed is None else "fail",
        failed_clause=failed,
        skipped=skipped,
        clauses={c: bool(results[c]) for c in CLAUSES if c not in skipped},
    )


# =============================================================================
# VARIATION DIMINISHING
# =============================================================================

@dataclass
class VdpReport:
    """Counts of variation-diminishing violations over random trials."""

    route: str
    violations: int
    total: int
    m_violations: int
    worst_margin: int
    worst_case: Optional[List[float]]

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.m_violations == 0

    def to_dict(self) -> Dict:
        return {
            "route": self.route,
            "violations": self.violations,
            "total": self.total,
            "m_violations": self.m_violations,
            "worst_margin": self.worst_margin,
            "worst_case": self.worst_case,
        }


def variation_margin(A, x, zero_tol: float = 0.0) -> int:
    """S^-(x) - S^+(Ax); nonnegative whenever A diminishes variation at x."""
    A = as_matrix(A, square=True)
    x = as_vector(x, n=A.shape[0])
    return s_minus(x, zero_tol) - s_plus(A @ x, zero_tol)


def _image_tol(Y: np.ndarray, tol: float) -> np.ndarray:
    """Per-row zero threshold for images Ax: n * tol * max(1, ||Ax||_inf)."""
    return tol * np.maximum(1.0, np.max(np.abs(Y), axis=1)) * Y.shape[1]


def m_invariance_violations(A, X, strict: bool = True, tol: float = None) -> int:
    """
    Rows x of X whose image leaves the smallest M(j) containing x.

    With strict=True the image must land in int M(j), otherwise in M(j).
    Image entries below n * tol * max(1, ||Ax||_inf) count as zero. Zero rows
    are skipped.

    Raises:
        InputError: If the rows of X do not match A
    """
    A = as_matrix(A, square=True)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    tol = resolve(tol, "tol")
    if X.ndim != 2 or X.shape[1] != A.shape[0]:
        raise InputError(f"vectors must have length {A.shape[0]}, got shape {X.shape}")
    Y = X @ A.T
    thresholds = _image_tol(Y, tol)
    # M(S^-(x) + 1) is the smallest M(j) holding x
    levels = s_minus_batch(X) + 1
    count = 0
    for x, y, thr, j in zip(X, Y, thresholds, levels):
        if not np.any(x):
            continue
        image = m_membership(y, int(j), zero_tol=thr)
        count += not (image is Membership.INTERIOR if strict else image.inside)
    return count


def _trial_vectors(n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.standard_normal((trials, n))
    X[rng.random((trials, n)) < ZERO_RATE] = 0.0
    empty = ~np.any(X != 0, axis=1)
    X[empty, rng.integers(n, size=int(empty.sum()))] = 1.0
    return X


def vdp_check(A, trials: int = None, seed: int = None, tol: float = None) -> VdpReport:
    """
    Count variation-diminishing violations over seeded random vectors.

    Routes:
        ssr: S^+(Ax) <= S^-(x), and x in M(j) implies Ax in int M(j)
        stjs: the same on D A D when that matrix is SSR
        sr: for nonsingular sign regular A, S^-(Ax) <= S^-(x), and x in
            M(j) implies Ax in M(j)

    Trial vectors are standard normal with about a fifth of the entries set
    to zero, so boundary points of M(j) are exercised.

    Raises:
        ClassificationError: If A fits none of the routes
    """
    A = as_matrix(A, square=True)
    tol = resolve(tol, "tol")
    trials = int(resolve(trials, "vdp_trials"))
    rng = np.random.default_rng(resolve(seed, "seed"))
    n = A.shape[0]

    cls = classify(A, tol=tol)
    conjugated = signature_conjugate(A, cls.orders[0].sjs.signature) if cls.stjs else None
    if cls.ssr:
        route, B, strict = "ssr", A, True
    elif conjugated is not None and classify(conjugated, tol=tol).ssr:
        route, B, strict = "stjs", conjugated, True
    elif cls.sr and np.linalg.matrix_rank(A) == n:
        route, B, strict = "sr", A, False
    else:
        order = cls.first_failure(strict=False)
        raise ClassificationError(
            "variation diminishing needs an SSR, STJS or nonsingular SR matrix", order=order
        )

    X = _trial_vectors(n, trials, rng)
    Y = X @ B.T
    before = s_minus_batch(X)
    thresholds = _image_tol(Y, tol)
    after = s_plus_batch(Y, zero_tol=thresholds) if strict else s_minus_batch(Y, zero_tol=thresholds)

    margins = before - after
    violations = int(np.sum(margins < 0))
    m_violations = m_invariance_violations(B, X, strict=strict, tol=tol)

    worst = int(np.argmin(margins))
    return VdpReport(
        route=route,
        violations=violations,
        total=trials,
        m_violations=m_violations,
        worst_margin=int(margins[worst]),
        worst_case=X[worst].tolist() if margins[worst] < 0 else None,
    )
