"""
Pytest fixtures for totalpos tests.
Provides matrices with a known position on the positivity hierarchy.
"""

import numpy as np
import pytest

from totalpos.generators import random_matrix, random_stp, rotation3, signature_conjugate, vandermonde


@pytest.fixture
def vandermonde_123():
    """
    Vandermonde matrix on nodes 1, 2, 3:

        1 1 1
        1 2 4
        1 3 9

    STP; second compound [[1, 3, 2], [2, 8, 6], [1, 5, 6]], determinant 2.
    """
    return vandermonde([1.0, 2.0, 3.0])


@pytest.fixture
def rotation_pi4():
    """Rotation of R^3 by pi/4 about e_3: orthogonal, not sign regular."""
    return rotation3(np.pi / 4)


@pytest.fixture
def stjs_matrix(vandermonde_123):
    """Checkerboard conjugate of vandermonde_123: STJS with J = {1, 3}, not TP."""
    return signature_conjugate(vandermonde_123, (1, -1, 1))


@pytest.fixture
def stp_corpus():
    """Seeded STP matrices of sizes 2..5 plus two Vandermonde matrices."""
    corpus = [random_stp(n, seed=100 + n) for n in range(2, 6)]
    corpus.append(vandermonde([0.5, 1.0, 1.5, 2.0]))
    corpus.append(vandermonde([1.0, 2.0, 3.0, 4.0, 5.0]))
    return corpus


@pytest.fixture
def random_matrices():
    """Seeded standard-normal matrices of sizes 2..6."""
    return [random_matrix(n, seed=7 * n) for n in range(2, 7)]


@pytest.fixture
def matrix_file(tmp_path, vandermonde_123):
    """vandermonde_123 written to a temporary matrix file; returns the path as str."""
    path = tmp_path / "vandermonde.txt"
    path.write_text("# nodes 1, 2, 3\n1 1 1\n1 2 4\n1 3 9\n")
    return str(path)
