"""
Positivity classes of square matrices.

A matrix is classified from the sign patterns of its compounds A^(1..k):
TP / STP (all compounds nonnegative / positive), SR / SSR (each compound
one-signed, with signature eps_j), and TJS / STJS (each compound
J-sign-symmetric for some partition J of its index set). k < n gives the
truncated (k-structure) variants.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Optional, Tuple

import networkx as nx
import numpy as np

from totalpos.config import resolve
from totalpos.errors import InputError
from totalpos.exterior import compound
from totalpos.numeric import as_matrix, scaled_tol, sign_codes


@dataclass(frozen=True)
class JPartition:
    """
    A subset J of [n] describing a J-sign-symmetric pattern.

    J and its complement describe the same pattern; the canonical form keeps
    the side containing index 1.
    """

    n: int
    members: FrozenSet[int]

    def __post_init__(self):
        members = frozenset(int(m) for m in self.members)
        if any(m < 1 or m > self.n for m in members):
            raise InputError(f"partition members {sorted(members)} must lie in [1, {self.n}]")
        if 1 not in members:
            members = frozenset(range(1, self.n + 1)) - members
        object.__setattr__(self, "members", members)

    @property
    def complement(self) -> FrozenSet[int]:
        return frozenset(range(1, self.n + 1)) - self.members

    @property
    def signature(self) -> Tuple[int, ...]:
        """Diagonal signs d with d_i = +1 on J; D A D is nonnegative for JS A."""
        return tuple(1 if i in self.members else -1 for i in range(1, self.n + 1))

    def to_list(self) -> list:
        return sorted(self.members)


def detect_js(A, strict: bool = False, tol: float = None) -> Optional[JPartition]:
    """
    Find a partition J for which A is (strictly) J-sign-symmetric.

    Entries above the zero threshold force their two indices onto the same
    side, entries below minus the threshold force opposite sides. Each
    connected component of this constraint graph is 2-coloured from its
    smallest index, which is placed in J.

    Args:
        A: Square matrix
        strict: Require every entry to be nonzero (strictly JS)
        tol: Relative zero threshold (default: settings.tol)

    Returns:
        Canonical JPartition, or None if no partition fits
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    codes = sign_codes(A, scaled_tol(resolve(tol, "tol"), A))

    if strict and np.any(codes == 0):
        return None
    if np.any(np.diag(codes) < 0):
        return None

    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for i in range(n):
        for k in range(i + 1, n):
            parities = {0 if c > 0 else 1 for c in (codes[i, k], codes[k, i]) if c != 0}
            if len(parities) > 1:
                return None
            if parities:
                graph.add_edge(i, k, parity=parities.pop())

    side = {}
    for component in sorted(nx.connected_components(graph), key=min):
        root = min(component)
        side[root] = 0
        for u, v in nx.bfs_edges(graph, root):
            side[v] = side[u] ^ graph.edges[u, v]["parity"]

    for u, v, parity in graph.edges(data="parity"):
        if side[u] ^ side[v] != parity:
            return None

    return JPartition(n, frozenset(i + 1 for i in range(n) if side[i] == 0))


@dataclass(frozen=True)
class OrderReport:
    """Sign structure of a single compound A^(j)."""

    j: int
    nonnegative: bool
    positive: bool
    sign: Optional[int]
    strict: bool
    js: Optional[JPartition]
    sjs: Optional[JPartition]


@dataclass(frozen=True)
class PositivityClass:
    """Where a matrix sits on the positivity hierarchy, up to order k_checked."""

    n: int
    k_checked: int
    nonnegative: bool
    positive: bool
    sr_signature: Optional[Tuple[int, ...]]
    sr_strict: Optional[Tuple[bool, ...]]
    js_partition: Optional[JPartition]
    tp: bool
    stp: bool
    tjs: bool
    stjs: bool
    orders: Tuple[OrderReport, ...] = field(repr=False)

    @property
    def sr(self) -> bool:
        return self.sr_signature is not None

    @property
    def ssr(self) -> bool:
        return self.sr_signature is not None and all(self.sr_strict)

    def first_failure(self, strict: bool = True) -> Optional[int]:
        """
        First compound order that is neither (strictly) positive nor
        (strictly) J-sign-symmetric; None if there is none.
        """
        for rep in self.orders:
            ok = (rep.positive or rep.sjs is not None) if strict else (rep.nonnegative or rep.js is not None)
            if not ok:
                return rep.j
        return None

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "k_checked": self.k_checked,
            "nonnegative": self.nonnegative,
            "positive": self.positive,
            "sr": self.sr,
            "ssr": self.ssr,
            "sr_signature": list(self.sr_signature) if self.sr_signature else None,
            "sr_strict": list(self.sr_strict) if self.sr_strict else None,
            "js_partition": self.js_partition.to_list() if self.js_partition else None,
            "tp": self.tp,
            "stp": self.stp,
            "tjs": self.tjs,
            "stjs": self.stjs,
        }


def _order_report(body: np.ndarray, j: int, tol: float) -> OrderReport:
    codes = sign_codes(body, scaled_tol(tol, body))
    nonnegative = bool(np.all(codes >= 0))
    positive = bool(np.all(codes > 0))
    if nonnegative:
        sign, strict = 1, positive
    elif np.all(codes <= 0):
        sign, strict = -1, bool(np.all(codes < 0))
    else:
        sign, strict = None, False
    return OrderReport(
        j=j,
        nonnegative=nonnegative,
        positive=positive,
        sign=sign,
        strict=strict,
        js=detect_js(body, strict=False, tol=tol),
        sjs=detect_js(body, strict=True, tol=tol),
    )


def classify(A, k: int = None, tol: float = None) -> PositivityClass:
    """
    Classify a square matrix from the sign patterns of its first k compounds.

    Args:
        A: Square n x n matrix
        k: Highest compound order examined, 1 <= k <= n (default: n)
        tol: Relative zero threshold (default: settings.tol)

    Returns:
        PositivityClass

    Raises:
        InputError: If A is not square or k is out of range
        ResourceError: If a compound exceeds the size cap
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    k = n if k is None else int(k)
    if not 1 <= k <= n:
        raise InputError(f"k must satisfy 1 <= k <= {n}, got {k}")
    tol = resolve(tol, "tol")

    orders = tuple(_order_report(compound(A, j).body, j, tol) for j in range(1, k + 1))

    signature = None
    strictness = None
    if all(rep.sign is not None for rep in orders):
        signature = tuple(rep.sign for rep in orders)
        strictness = tuple(rep.strict for rep in orders)

    first = orders[0]
    return PositivityClass(
        n=n,
        k_checked=k,
        nonnegative=first.nonnegative,
        positive=first.positive,
        sr_signature=signature,
        sr_strict=strictness,
        js_partition=first.sjs or first.js,
        tp=all(rep.nonnegative for rep in orders),
        stp=all(rep.positive for rep in orders),
        tjs=all(rep.js is not None for rep in orders),
        stjs=all(rep.sjs is not None for rep in orders),
        orders=orders,
    )


def principal_submatrix(A, members) -> np.ndarray:
    """
    Rows and columns of A indexed by `members` (1-based, any order).

    Raises:
        InputError: If members is empty, repeats or leaves [1, n]
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    idx = sorted(int(m) for m in members)
    if not idx or len(set(idx)) != len(idx) or idx[0] < 1 or idx[-1] > n:
        raise InputError(f"invalid principal index set {members} for n={n}")
    zero_based = [i - 1 for i in idx]
    return A[np.ix_(zero_based, zero_based)]


def principal_minors(A) -> Dict[Tuple[int, ...], float]:
    """All principal minors of A, keyed by their 1-based index tuple."""
    A = as_matrix(A, square=True)
    n = A.shape[0]
    out = {}
    for size in range(1, n + 1):
        for members in combinations(range(1, n + 1), size):
            out[members] = float(np.linalg.det(principal_submatrix(A, members)))
    return out

