"""
Sign variations of vectors and the sets M(j).

S^-(x) counts sign changes with zero entries discarded; S^+(x) is the largest
count obtainable by assigning a sign to every zero entry. M(j) collects the
vectors with S^- <= j-1; its interior is where S^+ <= j-1. M(j) coincides with
the vectors that can be completed to a wedge strictly inside (plus or minus)
the cone of nonnegative j-vectors, which makes it the exact T-set test for
the exterior power of the nonnegative orthant.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from totalpos.errors import InputError
from totalpos.numeric import as_vector, sign_codes


class Membership(str, Enum):
    """Position of a point relative to a closed set."""

    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"

    def __str__(self) -> str:
        return self.value

    @property
    def inside(self) -> bool:
        """True for boundary and interior."""
        return self is not Membership.OUTSIDE


@dataclass(frozen=True)
class SignVariation:
    """The pair (S^-, S^+) of a vector."""

    s_minus: int
    s_plus: int

    def as_tuple(self) -> tuple:
        return (self.s_minus, self.s_plus)


def _signs(x: np.ndarray, zero_tol: float) -> list:
    return sign_codes(x, zero_tol).tolist()


def s_minus(x, zero_tol: float = 0.0) -> int:
    """Sign changes of x after deleting its zero entries."""
    signs = [s for s in _signs(as_vector(x), zero_tol) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def s_plus(x, zero_tol: float = 0.0) -> int:
    """
    Maximum sign changes of x over all +-1 assignments to its zero entries.

    Linear scan keeping, for each possible sign of the last entry, the best
    count of the prefix. An all-zero vector of length n gives n - 1.
    """
    signs = _signs(as_vector(x), zero_tol)
    NEG_INF = -1
    best = {1: NEG_INF, -1: NEG_INF}
    for i, s in enumerate(signs):
        allowed = (1, -1) if s == 0 else (s,)
        new = {1: NEG_INF, -1: NEG_INF}
        for t in allowed:
            if i == 0:
                new[t] = 0
                continue
            stay = best[t]
            flip = best[-t] + 1 if best[-t] != NEG_INF else NEG_INF
            new[t] = max(stay, flip)
        best = new
    return max(best.values())


def sign_variation(x, zero_tol: float = 0.0) -> SignVariation:
    """
    Both variation counts of x.

    Args:
        x: Non-empty real vector
        zero_tol: Entries with |x_i| <= zero_tol count as zero

    Returns:
        SignVariation(s_minus, s_plus)
    """
    x = as_vector(x)
    return SignVariation(s_minus(x, zero_tol), s_plus(x, zero_tol))


def membership_from_variation(sv: SignVariation, n: int, j: int, is_zero: bool = False) -> Membership:
    """Classify against M(j) from precomputed variation counts."""
    if not 1 <= j <= n:
        raise InputError(f"need 1 <= j <= {n}, got {j}")
    if is_zero:
        return Membership.BOUNDARY
    if sv.s_minus > j - 1:
        return Membership.OUTSIDE
    if sv.s_plus <= j - 1:
        return Membership.INTERIOR
    return Membership.BOUNDARY


def m_membership(x, j: int, zero_tol: float = 0.0) -> Membership:
    """
    Position of x relative to M(j) = {x : S^-(x) <= j-1}.

    Interior iff S^+(x) <= j-1, outside iff S^-(x) > j-1, boundary otherwise.
    The zero vector is reported as boundary for every j.

    Raises:
        InputError: If j is outside [1, len(x)]
    """
    x = as_vector(x)
    is_zero = bool(np.all(np.abs(x) <= zero_tol))
    return membership_from_variation(sign_variation(x, zero_tol), x.size, j, is_zero=is_zero)


# =============================================================================
# BATCHED COUNTS
# =============================================================================

def _sign_rows(X, zero_tol) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] == 0:
        raise InputError(f"expected a non-empty 2-D batch of vectors, got shape {X.shape}")
    thr = np.asarray(zero_tol, dtype=float)
    return sign_codes(X, thr[:, None] if thr.ndim == 1 else thr)


def s_minus_batch(X, zero_tol=0.0) -> np.ndarray:
    """S^- of every row of X; zero_tol may be a scalar or one threshold per row."""
    S = _sign_rows(X, zero_tol)
    last = np.zeros(S.shape[0], dtype=int)
    count = np.zeros(S.shape[0], dtype=int)
    for col in S.T:
        nonzero = col != 0
        count += nonzero & (last != 0) & (col != last)
        last = np.where(nonzero, col, last)
    return count


def s_plus_batch(X, zero_tol=0.0) -> np.ndarray:
    """S^+ of every row of X, the same scan as s_plus run column by column."""
    S = _sign_rows(X, zero_tol)
    unreachable = -1
    best_pos = np.where(S[:, 0] >= 0, 0, unreachable)
    best_neg = np.where(S[:, 0] <= 0, 0, unreachable)
    for col in S.T[1:]:
        from_neg = np.where(best_neg != unreachable, best_neg + 1, unreachable)
        from_pos = np.where(best_pos != unreachable, best_pos + 1, unreachable)
        new_pos = np.where(col >= 0, np.maximum(best_pos, from_neg), unreachable)
        new_neg = np.where(col <= 0, np.maximum(best_neg, from_pos), unreachable)
        best_pos, best_neg = new_pos, new_neg
    return np.maximum(best_pos, best_neg)
