"""
Test-matrix constructors with known position on the positivity hierarchy.

STP families are validated with classify after construction rather than
trusted, so a generator never hands out a matrix that fails the class it
promises at the working tolerance.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Union

import numpy as np
from scipy.special import gammaln

from totalpos.classify import classify
from totalpos.config import resolve
from totalpos.errors import InputError, NumericError
from totalpos.numeric import as_matrix, as_vector


RANDOM_STP_RETRIES = 8
ROW_JITTER = 0.3
COLUMN_JITTER = 0.1


def vandermonde(nodes: Sequence[float], tol: float = None) -> np.ndarray:
    """
    Vandermonde matrix with entry (i, k) = t_i^(k-1).

    Args:
        nodes: Strictly increasing positive nodes t_1 < .. < t_n
        tol: Relative zero threshold used for validation

    Raises:
        InputError: If nodes are not strictly increasing and positive
        NumericError: If the result does not classify as STP at tol
    """
    t = as_vector(nodes, name="nodes")
    if np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise InputError(f"vandermonde nodes must be positive and strictly increasing, got {t.tolist()}")
    A = t[:, None] ** np.arange(t.size)[None, :]
    if not classify(A, tol=tol).stp:
        raise NumericError(f"vandermonde matrix on {t.size} nodes is not STP at tolerance {resolve(tol, 'tol')}")
    return A


def _moment_kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gamma(x_i + y_k + 1) / (Gamma(x_i + 1) Gamma(y_k + 1))."""
    return np.exp(gammaln(x[:, None] + y[None, :] + 1) - gammaln(x + 1)[:, None] - gammaln(y + 1)[None, :])


def random_stp(n: int, seed: int = None, tol: float = None) -> np.ndarray:
    """
    Seeded strictly totally positive n x n matrix.

    Entries are the moments int t^(x_i + y_k) e^(-t) dt of the kernel t^x,
    scaled by Gamma(x_i + 1) Gamma(y_k + 1), with row nodes x_i = i + U(-0.3, 0.3)
    and column nodes y_k = x_k + U(-0.1, 0.1). At integer nodes this is the
    symmetric Pascal matrix.

    Raises:
        InputError: If n < 2
        NumericError: If no draw validates as STP within the retry budget
    """
    if n < 2:
        raise InputError(f"random_stp needs n >= 2, got {n}")
    rng = np.random.default_rng(resolve(seed, "seed"))
    base = np.arange(n, dtype=float)
    for _ in range(RANDOM_STP_RETRIES):
        x = base + rng.uniform(-ROW_JITTER, ROW_JITTER, n)
        y = x + rng.uniform(-COLUMN_JITTER, COLUMN_JITTER, n)
        A = _moment_kernel(x, y)
        if classify(A, tol=tol).stp:
            return A
    raise NumericError(f"random_stp could not produce a validated STP {n}x{n} matrix in {RANDOM_STP_RETRIES} draws")


def signature_conjugate(A, signs: Sequence[int]) -> np.ndarray:
    """
    D A D^-1 with D = diag(signs).

    Raises:
        InputError: If signs are not +-1 or their count differs from n
    """
    A = as_matrix(A, square=True)
    d = np.array([int(s) for s in signs], dtype=float)
    if d.size != A.shape[0] or np.any(np.abs(d) != 1):
        raise InputError(f"signature must be {A.shape[0]} entries of +-1, got {list(signs)}")
    return d[:, None] * A * d[None, :]


def rotation3(theta: float) -> np.ndarray:
    """Rotation of R^3 by theta about e_3."""
    theta = float(theta)
    if not np.isfinite(theta):
        raise InputError(f"rotation angle must be finite, got {theta}")
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def permutation_similar(A, permutation: Sequence[int]) -> np.ndarray:
    """
    P A P^-1 for the permutation matrix P sending row i to permutation[i] (1-based).

    Raises:
        InputError: If permutation is not a rearrangement of 1..n
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    p = [int(v) for v in permutation]
    if sorted(p) != list(range(1, n + 1)):
        raise InputError(f"{p} is not a permutation of 1..{n}")
    idx = [v - 1 for v in p]
    return A[np.ix_(idx, idx)]


def random_matrix(n: int, seed: int = None) -> np.ndarray:
    """Seeded standard-normal n x n matrix."""
    if n < 1:
        raise InputError(f"matrix size must be positive, got {n}")
    return np.random.default_rng(resolve(seed, "seed")).standard_normal((n, n))


# =============================================================================
# JSON SPECS
# =============================================================================

KINDS = ("vandermonde", "random_stp", "signature_conjugate", "rotation3", "permutation_similar", "random_matrix")


@dataclass(frozen=True)
class GeneratorSpec:
    """
    A reproducible recipe for a test matrix.

    Example:
        {"kind": "signature_conjugate", "signs": [1, -1, 1],
         "base": {"kind": "vandermonde", "nodes": [1, 2, 3]}}
    """

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown generator kind {self.kind!r}; expected one of {', '.join(KINDS)}")

    @classmethod
    def from_json(cls, spec: Union[str, Dict]) -> "GeneratorSpec":
        if isinstance(spec, str):
            try:
                spec = json.loads(spec)
            except json.JSONDecodeError as e:
                raise InputError(f"generator spec is not valid JSON: {e}")
        if not isinstance(spec, dict) or "kind" not in spec:
            raise InputError("generator spec must be a JSON object with a 'kind' field")
        params = {k: v for k, v in spec.items() if k != "kind"}
        return cls(spec["kind"], params)

    def to_json(self) -> Dict:
        return {"kind": self.kind, **self.params}


def _param(spec: GeneratorSpec, name: str):
    if name not in spec.params:
        raise InputError(f"generator {spec.kind!r} needs parameter {name!r}")
    return spec.params[name]


def _base_matrix(spec: GeneratorSpec) -> np.ndarray:
    if "base" in spec.params:
        return build(GeneratorSpec.from_json(spec.params["base"]))
    return as_matrix(_param(spec, "matrix"), square=True)


def build(spec: Union[GeneratorSpec, str, Dict]) -> np.ndarray:
    """
    Construct the matrix a GeneratorSpec describes.

    Raises:
        InputError: On unknown kinds or missing parameters
        NumericError: If an STP family fails validation
    """
    if not isinstance(spec, GeneratorSpec):
        spec = GeneratorSpec.from_json(spec)

    try:
        if spec.kind == "vandermonde":
            return vandermonde(_param(spec, "nodes"))
        if spec.kind == "random_stp":
            return random_stp(int(_param(spec, "n")), seed=spec.params.get("seed"))
        if spec.kind == "signature_conjugate":
            return signature_conjugate(_base_matrix(spec), _param(spec, "signs"))
        if spec.kind == "rotation3":
            return rotation3(_param(spec, "theta"))
        if spec.kind == "permutation_similar":
            return permutation_similar(_base_matrix(spec), _param(spec, "permutation"))
        return random_matrix(int(_param(spec, "n")), seed=spec.params.get("seed"))
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"bad parameters for generator {spec.kind!r}: {e}")
