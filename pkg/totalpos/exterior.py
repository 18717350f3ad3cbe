"""
Exterior powers of real matrices.

Wedge bases are indexed by j-subsets of [1, n] in lexicographic order.
Indices are 1-based at the API surface and ranks are 0-based. Multivector
coordinates are plain j x j minors (Plucker convention), so the compound
matrix acts on them exactly: compound(A, j) @ wedge(x_1..x_j) equals
wedge(A x_1, .., A x_j).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, prod
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from totalpos.config import resolve
from totalpos.errors import InputError, ResourceError
from totalpos.numeric import as_matrix, as_vector, inf_norm


# =============================================================================
# SUBSET INDEXING
# =============================================================================

@lru_cache(maxsize=256)
def subsets(n: int, j: int) -> Tuple[Tuple[int, ...], ...]:
    """All j-subsets of [1, n] (1-based) in lexicographic order."""
    if n < 1 or not 0 <= j <= n:
        raise InputError(f"need 0 <= j <= n and n >= 1, got n={n}, j={j}")
    return tuple(combinations(range(1, n + 1), j))


@lru_cache(maxsize=256)
def _subset_array(n: int, j: int) -> np.ndarray:
    """subsets(n, j) as a 0-based (C(n,j), j) integer array."""
    arr = np.array(subsets(n, j), dtype=int).reshape(-1, j) - 1
    arr.setflags(write=False)
    return arr


def _check_elements(n: int, elements: Sequence[int]) -> Tuple[int, ...]:
    elements = tuple(int(e) for e in elements)
    if n < 1:
        raise InputError(f"ambient dimension must be positive, got {n}")
    if not elements or len(elements) > n:
        raise InputError(f"need 1..{n} elements, got {len(elements)}")
    if any(e < 1 or e > n for e in elements):
        raise InputError(f"elements {elements} must lie in [1, {n}]")
    if any(a >= b for a, b in zip(elements, elements[1:])):
        raise InputError(f"elements {elements} must be strictly increasing")
    return elements


def subset_rank(n: int, elements: Sequence[int]) -> int:
    """
    Lexicographic rank of a strictly increasing 1-based subset of [1, n].

    Args:
        n: Ambient dimension
        elements: Strictly increasing indices in [1, n]

    Returns:
        Rank in [0, C(n, len(elements)))

    Raises:
        InputError: If elements are out of range or not strictly increasing
    """
    elements = _check_elements(n, elements)
    j = len(elements)
    rank = 0
    prev = 0
    for pos, e in enumerate(elements):
        # subsets that agree so far but put a smaller value at this position
        for v in range(prev + 1, e):
            rank += comb(n - v, j - pos - 1)
        prev = e
    return rank


def subset_unrank(n: int, j: int, rank: int) -> Tuple[int, ...]:
    """
    Inverse of subset_rank.

    Raises:
        InputError: If j or rank is out of range
    """
    if n < 1 or not 1 <= j <= n:
        raise InputError(f"need 1 <= j <= n, got n={n}, j={j}")
    if not 0 <= rank < comb(n, j):
        raise InputError(f"rank {rank} outside [0, {comb(n, j)})")
    result = []
    v = 1
    for pos in range(j):
        while True:
            block = comb(n - v, j - pos - 1)
            if rank < block:
                break
            rank -= block
            v += 1
        result.append(v)
        v += 1
    return tuple(result)


@dataclass(frozen=True)
class SubsetIndex:
    """A strictly increasing j-subset of [1, n] together with its rank."""

    n: int
    elements: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", _check_elements(self.n, self.elements))

    @property
    def j(self) -> int:
        return len(self.elements)

    @property
    def rank(self) -> int:
        return subset_rank(self.n, self.elements)

    @classmethod
    def from_rank(cls, n: int, j: int, rank: int) -> "SubsetIndex":
        return cls(n, subset_unrank(n, j, rank))


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True, eq=False)
class MultiVector:
    """Element of the j-th exterior power of R^n in wedge-basis coordinates."""

    n: int
    j: int
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.j <= self.n:
            raise InputError(f"need 1 <= j <= n, got n={self.n}, j={self.j}")
        coords = as_vector(self.coords, n=comb(self.n, self.j), name="multivector coords")
        coords = coords.copy()
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def basis(cls, n: int, elements: Sequence[int]) -> "MultiVector":
        """The basis multivector e_{i1} ^ ... ^ e_{ij}."""
        elements = _check_elements(n, elements)
        coords = np.zeros(comb(n, len(elements)))
        coords[subset_rank(n, elements)] = 1.0
        return cls(n, len(elements), coords)

    def is_zero(self, tol: float = None) -> bool:
        return inf_norm(self.coords) <= resolve(tol, "tol")

    def __repr__(self) -> str:
        return f"MultiVector(n={self.n}, j={self.j}, coords={np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True, eq=False)
class CompoundMatrix:
    """The j-th compound A^(j) of an n x n matrix, the matrix of the j-th exterior power."""

    n: int
    j: int
    body: np.ndarray = field(repr=False)

    def __post_init__(self):
        body = as_matrix(self.body, square=True, name="compound body")
        if body.shape[0] != comb(self.n, self.j):
            raise InputError(
                f"compound of order {self.j} over n={self.n} must have side {comb(self.n, self.j)}, "
                f"got {body.shape[0]}"
            )
        body = body.copy()
        body.setflags(write=False)
        object.__setattr__(self, "body", body)

    @property
    def size(self) -> int:
        return self.body.shape[0]


# =============================================================================
# MINORS AND COMPOUNDS
# =============================================================================

def _column_subset_dets(M: np.ndarray, j: int) -> np.ndarray:
    """
    Determinants of every j-column submatrix of a stack of j x n matrices.

    Args:
        M: Array of shape (..., j, n)
        j: Number of rows (and selected columns)

    Returns:
        Array of shape (..., C(n, j)) in lexicographic column-subset order
    """
    n = M.shape[-1]
    idx = _subset_array(n, j)
    sub = M[..., :, idx]                 # (..., j, C, j)
    sub = np.moveaxis(sub, -2, -3)       # (..., C, j, j)
    return np.linalg.det(sub)


def minor(A, rows: Sequence[int], cols: Sequence[int]) -> float:
    """
    Determinant of the submatrix A[rows, cols] (1-based index tuples).

    Raises:
        InputError: If the tuples differ in length, are not strictly
            increasing or fall outside the matrix
    """
    A = as_matrix(A)
    if len(rows) != len(cols):
        raise InputError(f"row and column tuples differ in length: {len(rows)} vs {len(cols)}")
    rows = _check_elements(A.shape[0], rows)
    cols = _check_elements(A.shape[1], cols)
    sub = A[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]
    return float(np.linalg.det(sub))


def check_compound_size(n: int, j: int, cap: int = None) -> None:
    """
    Refuse compounds with more than `cap` entries.

    Raises:
        ResourceError: If C(n, j)^2 exceeds the cap
    """
    cap = resolve(cap, "compound_cap")
    entries = comb(n, j) ** 2
    if entries > cap:
        raise ResourceError(f"compound of order {j} for n={n} has {entries} entries, cap is {cap}")


def compound(A, j: int, cap: int = None) -> CompoundMatrix:
    """
    The j-th compound matrix of a square matrix.

    Entry (rank(rows), rank(cols)) is minor(A, rows, cols).

    Args:
        A: Square n x n matrix
        j: Compound order, 1 <= j <= n
        cap: Maximum number of compound entries (default: settings.compound_cap)

    Returns:
        CompoundMatrix of side C(n, j)

    Raises:
        InputError: If A is not square or j is out of range
        ResourceError: If the compound exceeds the size cap
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    if not 1 <= j <= n:
        raise InputError(f"compound order must satisfy 1 <= j <= {n}, got {j}")
    check_compound_size(n, j, cap)

    if j == 1:
        return CompoundMatrix(n, 1, A)
    if j == n:
        return CompoundMatrix(n, n, np.array([[np.linalg.det(A)]]))

    idx = _subset_array(n, j)
    size = idx.shape[0]
    body = np.empty((size, size))
    # chunk row subsets so the (rows, C, j, j) stack stays small
    chunk = max(1, (1 << 20) // (size * j * j))
    for start in range(0, size, chunk):
        block = A[idx[start:start + chunk]]          # (b, j, n)
        body[start:start + chunk] = _column_subset_dets(block, j)
    return CompoundMatrix(n, j, body)


# =============================================================================
# WEDGE PRODUCTS
# =============================================================================

def wedge(xs: Sequence) -> MultiVector:
    """
    Exterior product x_1 ^ ... ^ x_j of j vectors in R^n.

    Coordinate at rank(i_1 < .. < i_j) is the minor of the j x n matrix with
    rows xs taken on columns (i_1, .., i_j).

    Raises:
        InputError: If no vectors are given, lengths differ or j > n
    """
    if len(xs) == 0:
        raise InputError("wedge needs at least one vector")
    first = as_vector(xs[0], name="wedge factor 1")
    n = first.size
    rows = [first] + [as_vector(x, n=n, name=f"wedge factor {i + 2}") for i, x in enumerate(xs[1:])]
    j = len(rows)
    if j > n:
        raise InputError(f"cannot wedge {j} vectors of length {n}")
    M = np.vstack(rows)
    if j == 1:
        return MultiVector(n, 1, M[0])
    return MultiVector(n, j, _column_subset_dets(M, j))


def wedge_batch(frames) -> np.ndarray:
    """
    Wedge coordinates for a stack of frames.

    Args:
        frames: Array of shape (batch, j, n); frame b holds j row vectors

    Returns:
        Array of shape (batch, C(n, j))
    """
    frames = np.asarray(frames, dtype=float)
    if frames.ndim != 3 or frames.shape[1] > frames.shape[2]:
        raise InputError(f"frames must have shape (batch, j, n) with j <= n, got {frames.shape}")
    j = frames.shape[1]
    if j == 1:
        return frames[:, 0, :].copy()
    return _column_subset_dets(frames, j)


def grassmann_line(xs: Sequence, tol: float = None) -> MultiVector:
    """
    Normalised representative of the line of j-vectors attached to Lin(xs).

    The wedge of a basis is scaled to unit Euclidean norm and signed so that
    its first non-negligible coordinate is positive; any other basis of the
    same subspace gives the same result.

    Raises:
        InputError: If the vectors are linearly dependent
    """
    tol = resolve(tol, "tol")
    w = wedge(xs)
    scale = prod(max(1.0, float(np.linalg.norm(x))) for x in xs)
    norm = float(np.linalg.norm(w.coords))
    if norm <= tol * scale:
        raise InputError("vectors are linearly dependent; they span no j-dimensional subspace")
    coords = w.coords / norm
    lead = np.flatnonzero(np.abs(coords) > tol)[0]
    if coords[lead] < 0:
        coords = -coords
    return MultiVector(w.n, w.j, coords)


def hodge(phi: MultiVector) -> np.ndarray:
    """
    The map from the (n-1)-th exterior power onto R^n.

    Sends e_{i_1} ^ .. ^ e_{i_{n-1}} (k the missing index) to (-1)^(k+1) e_k;
    the image of a wedge of n-1 vectors is orthogonal to each of them.

    Raises:
        InputError: If phi is not of grade n-1
    """
    if phi.n < 2 or phi.j != phi.n - 1:
        raise InputError(f"hodge needs grade n-1, got n={phi.n}, j={phi.j}")
    n = phi.n
    out = np.zeros(n)
    full = set(range(1, n + 1))
    for rank, s in enumerate(subsets(n, n - 1)):
        (k,) = full.difference(s)
        out[k - 1] += (-1) ** (k + 1) * phi.coords[rank]
    return out


def apply_compound(C: CompoundMatrix, phi: MultiVector) -> MultiVector:
    """
    Apply the exterior power represented by C to phi.

    Raises:
        InputError: If C and phi disagree on n or j
    """
    if C.n != phi.n or C.j != phi.j:
        raise InputError(f"compound (n={C.n}, j={C.j}) cannot act on multivector (n={phi.n}, j={phi.j})")
    return MultiVector(phi.n, phi.j, C.body @ phi.coords)


# =============================================================================
# SPECTRA
# =============================================================================

def kronecker_eigs(eigs: Iterable[complex], j: int) -> np.ndarray:
    """
    Eigenvalues of the j-th exterior power from those of the operator.

    Args:
        eigs: The n eigenvalues (with multiplicity)
        j: Order, 1 <= j <= n

    Returns:
        Complex array of the C(n, j) products over strictly increasing index tuples

    Raises:
        InputError: If j is out of range
    """
    eigs = [complex(e) for e in eigs]
    n = len(eigs)
    if not 1 <= j <= n:
        raise InputError(f"need 1 <= j <= {n}, got {j}")
    return np.array([prod(c) for c in combinations(eigs, j)], dtype=complex)


def match_spectra(a, b) -> float:
    """
    Largest relative distance between two eigenvalue multisets under an
    optimal one-to-one matching.

    Raises:
        InputError: If the multisets differ in size
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        raise InputError(f"spectra differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols])) / scale
