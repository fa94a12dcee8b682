"""Reference problems with independently known answers, shared by the
selftest command and the test suite."""

from __future__ import annotations

import numpy as np

from . import linalg


class MatrixPolynomial:
    """M(z) = z^2 I + z C1 + C0 as a holomorphic matrix family."""

    def __init__(self, c1: np.ndarray, c0: np.ndarray):
        self.c1 = c1
        self.c0 = c0
        self.dim = c1.shape[0]

    def __call__(self, z: complex) -> np.ndarray:
        return z * z * np.eye(self.dim) + z * self.c1 + self.c0


def quadratic_matrix_poly():
    """A 3x3 quadratic matrix polynomial built from chosen eigenpairs.

    The eigenvalues {1 +/- 0.3i, 2} lie inside the disk |z - 1.5| < 1.2 with
    linearly independent eigenvectors; {4.5, 5 +/- 1i} lie outside.  Returns
    (polynomial, companion_eigenvalues) where the second entry is the
    spectrum recomputed independently from the companion linearization
    [[0, I], [-C0, -C1]].
    """
    lams = np.array([1 + 0.3j, 1 - 0.3j, 2.0, 4.5, 5 + 1j, 5 - 1j])
    rng = np.random.Generator(np.random.Philox(2024))
    while True:
        V = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
        G = np.vstack([V, V * lams[None, :]])  # 6x6
        if np.linalg.cond(G) < 1e3:
            break
    rhs = -V * lams[None, :] ** 2
    # [C0 C1] [V; V Lam] = -V Lam^2
    c0c1 = linalg.lu_apply(linalg.lu_factor(G.T), rhs.T).T
    c0, c1 = c0c1[:, :3], c0c1[:, 3:]
    poly = MatrixPolynomial(c1, c0)
    companion = np.block(
        [[np.zeros((3, 3)), np.eye(3)], [-c0, -c1]]
    )
    return poly, np.linalg.eigvals(companion)
