"""
Plain-text matrix files.

One row per line, entries separated by whitespace; blank lines and text
after '#' are ignored.
"""

import hashlib
from pathlib import Path
from typing import Union

import numpy as np

from totalpos.errors import InputError
from totalpos.numeric import as_matrix


def parse_matrix(text: str, source: str = "<text>") -> np.ndarray:
    """
    Parse matrix text.

    Raises:
        InputError: On ragged rows, non-numeric tokens or an empty matrix
    """
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            rows.append([float(tok) for tok in body.split()])
        except ValueError as e:
            raise InputError(f"{source}:{lineno}: {e}")
        if len(rows[-1]) != len(rows[0]):
            raise InputError(f"{source}:{lineno}: expected {len(rows[0])} entries, got {len(rows[-1])}")
    if not rows:
        raise InputError(f"{source}: no matrix rows found")
    return as_matrix(rows, name=source)


def read_matrix(path: Union[str, Path]) -> np.ndarray:
    """Read a matrix file; a missing file is an InputError."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"cannot read matrix file {path}: {e}")
    return parse_matrix(text, source=str(path))


def format_matrix(A, precision: int = None) -> str:
    """
    Inverse of parse_matrix.

    Floats are written with repr, so parse_matrix(format_matrix(A)) == A
    exactly; pass precision for shorter %g output.
    """
    A = as_matrix(A)
    fmt = repr if precision is None else (lambda v: f"{v:.{precision}g}")
    return "\n".join(" ".join(fmt(float(v)) for v in row) for row in A) + "\n"


def digest(data: Union[str, bytes]) -> str:
    """sha256 hex digest used to tag reports with their input."""
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()
