"""Shared numerical linear algebra helpers.

The rank/nullity convention used across the package: a singular value is
treated as zero iff it is below ``max(ABS_FLOOR, REL_TOL * sigma_max)``.
This single rule decides ranks, kernel dimensions and mode multiplicities,
so it lives here rather than being re-tuned per call site.
"""

from __future__ import annotations

import numpy as np

ABS_FLOOR = 1e-12
REL_TOL = 1e-9


def singular_values(matrix: np.ndarray) -> np.ndarray:
    return np.linalg.svd(np.atleast_2d(matrix), compute_uv=False)


def rank_tolerance(sigma: np.ndarray) -> float:
    smax = float(sigma[0]) if sigma.size else 0.0
    return max(ABS_FLOOR, REL_TOL * smax)


def numerical_rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    sigma = singular_values(matrix)
    return int(np.sum(sigma > rank_tolerance(sigma)))


def nullspace(matrix: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the (right) kernel, one column per basis vector."""
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return np.eye(matrix.shape[1])
    _, sigma, vh = np.linalg.svd(matrix)
    tol = rank_tolerance(sigma)
    rank = int(np.sum(sigma > tol))
    return vh[rank:].conj().T


def rank_and_smin(matrix: np.ndarray) -> tuple[int, float]:
    """Numerical rank together with the smallest singular value."""
    sigma = singular_values(matrix)
    if sigma.size == 0:
        return 0, 0.0
    rank = int(np.sum(sigma > rank_tolerance(sigma)))
    return rank, float(sigma[-1])
