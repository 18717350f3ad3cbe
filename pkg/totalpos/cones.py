"""
Proper cones and membership oracles for the sets T(K_j) and T(K_1, .., K_j).

Four concrete cones are supported:

- BasicCone(signs): vectors whose entries carry the signs eps_i (or are zero)
- ExteriorBasicCone(n, j, signs): the same over the wedge basis of the j-th
  exterior power of R^n
- SpannedCone(generators): simplicial cone of n independent generators
- IceCreamCone(n, axis): ||x without x_axis||_2 <= x_axis

T(K_j) is the closure of the vectors x for which some completion
x_2, .., x_j puts x ^ x_2 ^ .. ^ x_j into int(K_j) or int(-K_j). For the
exterior power of the nonnegative orthant it coincides with M(j) and is
decided exactly; every other cone goes through a seeded random search.
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from math import comb, pi
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from totalpos.config import resolve
from totalpos.errors import InputError
from totalpos.exterior import wedge_batch
from totalpos.numeric import as_matrix, as_vector
from totalpos.signs import Membership, m_membership


OUTSIDE, BOUNDARY, INTERIOR = 0, 1, 2
_CODE_TO_MEMBERSHIP = {OUTSIDE: Membership.OUTSIDE, BOUNDARY: Membership.BOUNDARY, INTERIOR: Membership.INTERIOR}

# share of generator coefficients forced to zero when sampling faces
FACE_RATE = 0.3
POOL_SIZE = 32
POOL_ATTEMPTS = 256


def _row_thresholds(points: np.ndarray, tol: float) -> np.ndarray:
    scale = np.max(np.abs(points), axis=1) if points.shape[1] else np.zeros(points.shape[0])
    return tol * np.maximum(1.0, scale)


def _sign_cone_codes(points: np.ndarray, signs: np.ndarray, tol: float) -> np.ndarray:
    thr = _row_thresholds(points, tol)[:, None]
    v = points * signs[None, :]
    codes = np.full(points.shape[0], BOUNDARY)
    codes[np.all(v > thr, axis=1)] = INTERIOR
    codes[np.any(v < -thr, axis=1)] = OUTSIDE
    return codes


def _check_signs(signs, length: int = None) -> Tuple[int, ...]:
    try:
        out = tuple(int(s) for s in signs)
    except (TypeError, ValueError):
        raise InputError(f"cone signs must be a sequence of +1/-1, got {signs!r}")
    if not out or any(s not in (1, -1) for s in out):
        raise InputError(f"cone signs must be +1 or -1, got {list(out)}")
    if length is not None and len(out) != length:
        raise InputError(f"expected {length} signs, got {len(out)}")
    return out


# =============================================================================
# CONE TYPES
# =============================================================================

@dataclass(frozen=True)
class BasicCone:
    """Cone spanned by eps_1 e_1, .., eps_n e_n."""

    signs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", _check_signs(self.signs))

    @property
    def dim(self) -> int:
        return len(self.signs)

    def codes(self, points: np.ndarray, tol: float) -> np.ndarray:
        return _sign_cone_codes(points, np.array(self.signs, dtype=float), tol)

    def to_json(self) -> Dict:
        return {"type": "basic", "signs": list(self.signs)}


@dataclass(frozen=True)
class ExteriorBasicCone:
    """Basic cone over the lexicographic wedge basis of the j-th exterior power of R^n."""

    n: int
    j: int
    signs: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.j <= self.n:
            raise InputError(f"need 1 <= j <= n, got n={self.n}, j={self.j}")
        object.__setattr__(self, "signs", _check_signs(self.signs, comb(self.n, self.j)))

    @classmethod
    def positive(cls, n: int, j: int) -> "ExteriorBasicCone":
        """The j-th exterior power of the nonnegative orthant."""
        return cls(n, j, (1,) * comb(n, j))

    @property
    def dim(self) -> int:
        return len(self.signs)

    @property
    def uniform(self) -> bool:
        return len(set(self.signs)) == 1

    def codes(self, points: np.ndarray, tol: float) -> np.ndarray:
        return _sign_cone_codes(points, np.array(self.signs, dtype=float), tol)

    def to_json(self) -> Dict:
        return {"type": "exterior_basic", "n": self.n, "j": self.j, "signs": list(self.signs)}


@dataclass(frozen=True)
class SpannedCone:
    """Simplicial cone spanned by n linearly independent generators of R^n."""

    generators: Tuple[Tuple[float, ...], ...]
    _inverse: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        G = as_matrix(self.generators, square=True, name="generators")
        if np.linalg.matrix_rank(G) < G.shape[0]:
            raise InputError("spanned cone generators are linearly dependent")
        object.__setattr__(self, "generators", tuple(tuple(float(v) for v in row) for row in G))
        object.__setattr__(self, "_inverse", np.linalg.inv(G))

    @property
    def matrix(self) -> np.ndarray:
        """Generators as rows."""
        return np.array(self.generators)

    @property
    def dim(self) -> int:
        return len(self.generators)

    def coefficients(self, points: np.ndarray) -> np.ndarray:
        """c with points = c @ generators."""
        return points @ self._inverse

    def codes(self, points: np.ndarray, tol: float) -> np.ndarray:
        coeffs = self.coefficients(points)
        thr = _row_thresholds(points, tol)[:, None]
        codes = np.full(points.shape[0], BOUNDARY)
        codes[np.all(coeffs > thr, axis=1)] = INTERIOR
        codes[np.any(coeffs < -thr, axis=1)] = OUTSIDE
        return codes

    def to_json(self) -> Dict:
        return {"type": "spanned", "generators": [list(g) for g in self.generators]}


@dataclass(frozen=True)
class IceCreamCone:
    """Lorentz cone of R^n around coordinate axis (1-based)."""

    n: int
    axis: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.axis <= self.n:
            raise InputError(f"ice-cream axis must lie in [1, {self.n}], got {self.axis}")

    @property
    def dim(self) -> int:
        return self.n

    def codes(self, points: np.ndarray, tol: float) -> np.ndarray:
        a = points[:, self.axis - 1]
        rest = np.delete(points, self.axis - 1, axis=1)
        gap = a - np.linalg.norm(rest, axis=1)
        thr = _row_thresholds(points, tol)
        codes = np.full(points.shape[0], BOUNDARY)
        codes[gap > thr] = INTERIOR
        codes[gap < -thr] = OUTSIDE
        return codes

    def to_json(self) -> Dict:
        return {"type": "icecream", "n": self.n, "axis": self.axis}


Cone = Union[BasicCone, ExteriorBasicCone, SpannedCone, IceCreamCone]


# =============================================================================
# SERIALIZATION
# =============================================================================

def cone_from_json(spec: Union[str, Dict]) -> Cone:
    """
    Build a cone from its JSON description.

    Accepted shapes:
        {"type": "basic", "signs": [1, 1, -1]}
        {"type": "exterior_basic", "n": 3, "j": 2, "signs": [1, -1, 1]}
        {"type": "spanned", "generators": [[1, 0], [1, 1]]}
        {"type": "icecream", "n": 3, "axis": 3}

    Raises:
        InputError: On malformed JSON, unknown type or missing fields
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as e:
            raise InputError(f"cone spec is not valid JSON: {e}")
    if not isinstance(spec, dict):
        raise InputError(f"cone spec must be a JSON object, got {type(spec).__name__}")

    kind = spec.get("type")
    try:
        if kind == "basic":
            return BasicCone(tuple(spec["signs"]))
        if kind == "exterior_basic":
            return ExteriorBasicCone(int(spec["n"]), int(spec["j"]), tuple(spec["signs"]))
        if kind == "spanned":
            return SpannedCone(tuple(tuple(g) for g in spec["generators"]))
        if kind == "icecream":
            return IceCreamCone(int(spec["n"]), int(spec["axis"]))
    except InputError:
        raise
    except KeyError as e:
        raise InputError(f"cone spec of type {kind!r} is missing field {e}")
    except (TypeError, ValueError) as e:
        raise InputError(f"cone spec of type {kind!r} is malformed: {e}")
    raise InputError(f"unknown cone type {kind!r}")


def cone_to_json(K: Cone) -> Dict:
    return K.to_json()


# =============================================================================
# MEMBERSHIP, ADJOINT, ANGLE
# =============================================================================

def classify_points(K: Cone, points, tol: float = None) -> np.ndarray:
    """
    Vectorised membership codes (0 outside, 1 boundary, 2 interior).

    Args:
        K: Cone
        points: Array of shape (m, K.dim)
        tol: Relative zero threshold (default: settings.tol)
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != K.dim:
        raise InputError(f"points must have shape (m, {K.dim}), got {points.shape}")
    return K.codes(points, resolve(tol, "tol"))


def contains(K: Cone, x, tol: float = None) -> Membership:
    """
    Position of x relative to K.

    Raises:
        InputError: If len(x) differs from the cone dimension
    """
    x = as_vector(x, n=K.dim, name="point")
    return _CODE_TO_MEMBERSHIP[int(classify_points(K, x[None, :], tol)[0])]


def adjoint(K: Cone) -> Cone:
    """
    The dual cone {y : <x, y> >= 0 for all x in K}.

    Basic, exterior basic and ice-cream cones are self-dual. The dual of a
    simplicial cone with generator rows G is spanned by the columns of G^-1,
    scaled to unit length.
    """
    if isinstance(K, SpannedCone):
        dual = K._inverse.T
        dual = dual / np.linalg.norm(dual, axis=1, keepdims=True)
        return SpannedCone(tuple(map(tuple, dual)))
    return K


def _unit_rows(M: np.ndarray) -> np.ndarray:
    return M / np.linalg.norm(M, axis=1, keepdims=True)


def same_cone(K: Cone, L: Cone, tol: float = 1e-8) -> bool:
    """Structural equality, with spanned generators compared up to positive scaling and order."""
    if type(K) is not type(L):
        return False
    if not isinstance(K, SpannedCone):
        return K == L
    if K.dim != L.dim:
        return False
    a, b = _unit_rows(K.matrix), _unit_rows(L.matrix)
    cost = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(cost)
    return bool(np.max(cost[rows, cols]) <= tol)


def max_angle(K: Cone, samples: int = None, seed: int = None) -> Tuple[float, bool]:
    """
    Largest angle between two vectors of K.

    Returns:
        (radians, exact). Basic, exterior basic and ice-cream cones give pi/2
        exactly (0 in dimension 1). Spanned cones give the largest angle seen
        among generators and seeded interior samples, a lower bound.
    """
    if not isinstance(K, SpannedCone):
        return (pi / 2 if K.dim >= 2 else 0.0), True

    rng = np.random.default_rng(resolve(seed, "seed"))
    points = np.vstack([K.matrix, sample_cone(K, resolve(samples, "angle_samples"), rng)])
    unit = _unit_rows(points)
    cosines = np.clip(unit @ unit.T, -1.0, 1.0)
    return float(np.arccos(np.min(cosines))), False


def sample_cone(K: Cone, count: int, rng: Union[np.random.Generator, int, None] = None) -> np.ndarray:
    """
    Seeded nonzero points of K, including points on faces and extreme rays.

    Returns:
        Array of shape (count, K.dim)
    """
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(resolve(rng, "seed"))
    if count < 1:
        raise InputError(f"sample count must be positive, got {count}")

    def masked_magnitudes(width: int) -> np.ndarray:
        mags = np.abs(rng.standard_normal((count, width)))
        mags[rng.random((count, width)) < FACE_RATE] = 0.0
        empty = ~np.any(mags > 0, axis=1)
        mags[empty, rng.integers(width, size=int(empty.sum()))] = 1.0
        return mags

    if isinstance(K, (BasicCone, ExteriorBasicCone)):
        return masked_magnitudes(K.dim) * np.array(K.signs, dtype=float)[None, :]
    if isinstance(K, SpannedCone):
        return masked_magnitudes(K.dim) @ K.matrix

    # ice-cream: any point of the base ball lifted to or above the boundary
    points = np.zeros((count, K.n))
    if K.n > 1:
        rest = rng.standard_normal((count, K.n - 1))
        rest[rng.random((count, K.n - 1)) < FACE_RATE] = 0.0
        radius = np.linalg.norm(rest, axis=1)
        lift = np.where(rng.random(count) < FACE_RATE, 0.0, np.abs(rng.standard_normal(count)))
        height = np.where(radius > 0, radius * (1.0 + lift), 1.0)
        points[:, np.arange(K.n) != K.axis - 1] = rest
    else:
        height = 1.0 + np.abs(rng.standard_normal(count))
    points[:, K.axis - 1] = height
    return points


# =============================================================================
# T-SET ORACLES
# =============================================================================

class TVerdict(str, Enum):
    """Outcome of a T-set membership query."""

    INTERIOR = "interior"
    CLOSURE = "closure"
    NOT_FOUND = "not_found"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class TMembershipResult:
    """
    Verdict of a T-set query.

    `witness` lists completion vectors x_2, .., x_j when the search found
    them. NOT_FOUND with exact=False is inconclusive; with exact=True it
    means x is outside the set.
    """

    verdict: TVerdict
    witness: Optional[Tuple[Tuple[float, ...], ...]]
    exact: bool
    trials: int = 0

    def to_dict(self) -> Dict:
        return {
            "verdict": str(self.verdict),
            "witness": [list(w) for w in self.witness] if self.witness is not None else None,
            "exact": self.exact,
            "trials": self.trials,
        }


def _grade_of(K: Cone, n: int, grade: Optional[int]) -> int:
    if isinstance(K, ExteriorBasicCone):
        if K.n != n:
            raise InputError(f"cone lives over R^{K.n}, vector has length {n}")
        if grade is not None and grade != K.j:
            raise InputError(f"grade {grade} does not match exterior cone of grade {K.j}")
        return K.j
    if grade is not None:
        if not 1 <= grade <= n or comb(n, grade) != K.dim:
            raise InputError(f"cone of dimension {K.dim} is not of grade {grade} over R^{n}")
        return grade
    matches = [j for j in range(1, n + 1) if comb(n, j) == K.dim]
    if not matches:
        raise InputError(f"cone of dimension {K.dim} matches no exterior power of R^{n}")
    return matches[0]


def _is_uniform_orthant(K: Cone) -> bool:
    if isinstance(K, ExteriorBasicCone):
        return K.uniform
    return isinstance(K, BasicCone) and len(set(K.signs)) == 1


def _exact_from_m(x: np.ndarray, j: int, tol: float) -> TMembershipResult:
    m = m_membership(x, j, zero_tol=tol * max(1.0, float(np.max(np.abs(x)))))
    verdict = {
        Membership.INTERIOR: TVerdict.INTERIOR,
        Membership.BOUNDARY: TVerdict.CLOSURE,
        Membership.OUTSIDE: TVerdict.NOT_FOUND,
    }[m]
    return TMembershipResult(verdict, None, True)


def _grade_one(x: np.ndarray, K: Cone, tol: float) -> TMembershipResult:
    codes = classify_points(K, np.vstack([x, -x]), tol)
    best = int(np.max(codes))
    verdict = {INTERIOR: TVerdict.INTERIOR, BOUNDARY: TVerdict.CLOSURE, OUTSIDE: TVerdict.NOT_FOUND}[best]
    return TMembershipResult(verdict, None, True)


def _wedge_codes(K: Cone, wedges: np.ndarray, scale: np.ndarray, tol: float) -> np.ndarray:
    """Best code of w and -w per row; wedges of negligible size never count."""
    codes = np.maximum(K.codes(wedges, tol), K.codes(-wedges, tol))
    codes[np.max(np.abs(wedges), axis=1) <= tol * scale] = OUTSIDE
    return codes


def _search(x: np.ndarray, K: Cone, completions: np.ndarray, tol: float) -> Tuple[int, Optional[int]]:
    """
    First trial (by index) whose wedge lands in int(K) u int(-K), else the
    first one landing on the boundary.

    Args:
        completions: Array (trials, j-1, n)
    """
    trials = completions.shape[0]
    j = completions.shape[1] + 1
    n = x.size
    block = max(1, min(1024, 2**22 // max(1, comb(n, j) * j * j)))
    first_boundary = None
    for start in range(0, trials, block):
        comp = completions[start:start + block]
        frames = np.concatenate([np.broadcast_to(x, (comp.shape[0], 1, n)), comp], axis=1)
        wedges = wedge_batch(frames)
        scale = np.maximum(1.0, np.prod(np.linalg.norm(comp, axis=2), axis=1))
        codes = _wedge_codes(K, wedges, scale, tol)
        hits = np.flatnonzero(codes == INTERIOR)
        if hits.size:
            return INTERIOR, start + int(hits[0])
        if first_boundary is None:
            edge = np.flatnonzero(codes == BOUNDARY)
            if edge.size:
                first_boundary = start + int(edge[0])
    if first_boundary is not None:
        return BOUNDARY, first_boundary
    return OUTSIDE, None


def _orthonormal_completions(x: np.ndarray, j: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Random orthonormal frames of x-perp of size j-1, shape (trials, j-1, n)."""
    n = x.size
    raw = rng.standard_normal((trials, n, j))
    raw[:, :, 0] = x
    q, _ = np.linalg.qr(raw)
    return np.swapaxes(q[:, :, 1:], 1, 2)


def _result(code: int, index: Optional[int], completions: np.ndarray, trials: int) -> TMembershipResult:
    if code == OUTSIDE:
        return TMembershipResult(TVerdict.NOT_FOUND, None, False, trials)
    verdict = TVerdict.INTERIOR if code == INTERIOR else TVerdict.CLOSURE
    witness = tuple(tuple(float(v) for v in row) for row in completions[index])
    return TMembershipResult(verdict, witness, False, trials)


def _normalise(x) -> Tuple[np.ndarray, bool]:
    x = as_vector(x, name="x")
    norm = float(np.linalg.norm(x))
    return (x / norm if norm > 0 else x), norm == 0


def t_membership(
    x,
    K: Cone,
    grade: int = None,
    budget: int = None,
    seed: int = None,
    tol: float = None,
    force_search: bool = False,
) -> TMembershipResult:
    """
    Decide (or search for) x in T(K), K a cone in the grade-th exterior power of R^n.

    Grade 1 is decided exactly as K u (-K). A uniformly signed exterior
    basic cone is decided exactly through M(j). Other cones are searched:
    random orthonormal completions of x are wedged with it and tested
    against int(K) u int(-K).

    Args:
        x: Vector of R^n
        K: Cone of dimension C(n, grade)
        grade: Exterior power the cone lives in (default: inferred, smallest fit)
        budget: Number of random completions (default: settings.mc_budget)
        seed: RNG seed (default: settings.seed)
        tol: Relative zero threshold (default: settings.tol)
        force_search: Use the random search even when an exact path exists

    Raises:
        InputError: If K does not fit any exterior power of R^len(x)
    """
    x, zero = _normalise(x)
    n = x.size
    j = _grade_of(K, n, grade)
    tol = resolve(tol, "tol")
    if zero:
        return TMembershipResult(TVerdict.CLOSURE, None, True)
    if j == 1:
        return _grade_one(x, K, tol)
    if _is_uniform_orthant(K) and not force_search:
        return _exact_from_m(x, j, tol)

    budget = int(resolve(budget, "mc_budget"))
    rng = np.random.default_rng(resolve(seed, "seed"))
    completions = _orthonormal_completions(x, j, budget, rng)
    code, index = _search(x, K, completions, tol)
    return _result(code, index, completions, budget)


def _draw_members(prefix: Sequence[Cone], n: int, count: int, rng: np.random.Generator, tol: float) -> np.ndarray:
    """
    `count` unit vectors of T(prefix[0], .., prefix[-1]), drawn with replacement.

    Level one samples +-K_1 directly; deeper levels keep a pool of random
    candidates certified by a smaller chain search.
    """
    if len(prefix) == 1:
        points = sample_cone(prefix[0], count, rng)
        points *= np.where(rng.random(count) < 0.5, -1.0, 1.0)[:, None]
        return _unit_rows(points)

    inner_budget = max(64, count // 16)
    pool = []
    for _ in range(POOL_ATTEMPTS):
        candidate = rng.standard_normal(n)
        candidate[rng.random(n) < FACE_RATE] = 0.0
        if not np.any(candidate):
            continue
        candidate /= np.linalg.norm(candidate)
        code, _, _ = _chain_search(candidate, prefix, inner_budget, rng, tol)
        if code != OUTSIDE:
            pool.append(candidate)
            if len(pool) >= POOL_SIZE:
                break
    if not pool:
        return np.empty((0, n))
    pool = np.array(pool)
    return pool[rng.integers(len(pool), size=count)]


def _chain_search(x: np.ndarray, Ks: Sequence[Cone], budget: int, rng: np.random.Generator, tol: float):
    if len(Ks) == 1:
        best = int(np.max(classify_points(Ks[0], np.vstack([x, -x]), tol)))
        return best, None, None
    n = x.size
    levels = [_draw_members(Ks[:i], n, budget, rng, tol) for i in range(1, len(Ks))]
    if any(level.shape[0] == 0 for level in levels):
        return OUTSIDE, None, None
    completions = np.stack(levels, axis=1)
    code, index = _search(x, Ks[-1], completions, tol)
    return code, index, completions


def t_chain_membership(x, Ks: Sequence[Cone], budget: int = None, seed: int = None, tol: float = None) -> TMembershipResult:
    """
    Search for x in T(K_1, .., K_j).

    The completion x_i is drawn from T(K_1, .., K_{i-1}): x_2 from +-K_1
    (faces and extreme rays included), deeper ones from pools certified by
    the same search. A chain of uniformly signed orthant powers is decided
    exactly through M(j).

    Args:
        x: Vector of R^n
        Ks: Cones K_1, .., K_j with K_i in the i-th exterior power of R^n

    Raises:
        InputError: If the chain is empty or a cone has the wrong grade
    """
    if not Ks:
        raise InputError("cone chain is empty")
    x, zero = _normalise(x)
    n = x.size
    for i, K in enumerate(Ks, start=1):
        _grade_of(K, n, i)
    tol = resolve(tol, "tol")
    j = len(Ks)
    if zero:
        return TMembershipResult(TVerdict.CLOSURE, None, True)
    if j == 1:
        return _grade_one(x, Ks[0], tol)
    if all(_is_uniform_orthant(K) for K in Ks):
        return _exact_from_m(x, j, tol)

    budget = int(resolve(budget, "mc_budget"))
    rng = np.random.default_rng(resolve(seed, "seed"))
    code, index, completions = _chain_search(x, Ks, budget, rng, tol)
    if completions is None:
        return TMembershipResult(TVerdict.NOT_FOUND, None, False, budget)
    return _result(code, index, completions, budget)
