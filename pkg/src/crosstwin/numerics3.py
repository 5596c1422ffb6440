"""Small exact-contract kernel for 3x3 real matrices.

Everything here works on ``(3, 3)`` numpy arrays and returns fresh arrays.
The symmetric eigensolver is a cyclic Jacobi iteration, which is plenty for
the handful of 3x3 decompositions the rest of the package needs and gives
eigenvectors that are orthonormal to rounding.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import NotSymmetric, Singular

SINGULAR_TOL = 1e-14
SYMMETRY_TOL = 1e-10
_JACOBI_OFFDIAG_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 50


def as_mat3(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def det3(A) -> float:
    """Determinant by cofactor expansion along the first row."""
    a = as_mat3(A)
    return float(
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )


def cof3(A) -> np.ndarray:
    """Cofactor matrix (signed 2x2 minors, not transposed).

    Satisfies ``A @ cof3(A).T == det3(A) * I``.
    """
    a = as_mat3(A)
    c = np.empty((3, 3))
    c[0, 0] = a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    c[0, 1] = a[1, 2] * a[2, 0] - a[1, 0] * a[2, 2]
    c[0, 2] = a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]
    c[1, 0] = a[0, 2] * a[2, 1] - a[0, 1] * a[2, 2]
    c[1, 1] = a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
    c[1, 2] = a[0, 1] * a[2, 0] - a[0, 0] * a[2, 1]
    c[2, 0] = a[0, 1] * a[1, 2] - a[0, 2] * a[1, 1]
    c[2, 1] = a[0, 2] * a[1, 0] - a[0, 0] * a[1, 2]
    c[2, 2] = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    return c


def inv3(A) -> np.ndarray:
    d = det3(A)
    if abs(d) <= SINGULAR_TOL:
        raise Singular(f"|det| = {abs(d):.3e} is below {SINGULAR_TOL:g}")
    return cof3(A).T / d


def frob_inner(A, B) -> float:
    """Sum of elementwise products, ``A : B``."""
    return float(np.sum(as_mat3(A) * as_mat3(B)))


def outer(u, v) -> np.ndarray:
    return np.outer(np.asarray(u, dtype=float), np.asarray(v, dtype=float))


def rank_one_update(A, u, v, scale: float = 1.0) -> np.ndarray:
    """Return ``A + scale * u (x) v``."""
    return as_mat3(A) + scale * outer(u, v)


class SymEig3(NamedTuple):
    """Ascending eigenvalues and a right-handed orthonormal eigenframe.

    ``vectors[:, k]`` is the eigenvector for ``values[k]``.
    """

    values: np.ndarray
    vectors: np.ndarray


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    # first component of largest magnitude made positive
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def sym_eig3(S) -> SymEig3:
    S = as_mat3(S)
    asym = float(np.max(np.abs(S - S.T)))
    if asym > SYMMETRY_TOL:
        raise NotSymmetric(f"max |S - S^T| = {asym:.3e} exceeds {SYMMETRY_TOL:g}")
    a = (0.5 * (S + S.T)).tolist()
    V = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    scale = max(max(abs(x) for row in a for x in row), 1e-300)

    for _ in range(_JACOBI_MAX_SWEEPS):
        off = abs(a[0][1]) + abs(a[0][2]) + abs(a[1][2])
        if off <= _JACOBI_OFFDIAG_TOL * scale:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = a[p][q]
            if apq == 0.0:
                continue
            theta = (a[q][q] - a[p][p]) / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            # a <- J^T a J with J the (p, q) plane rotation
            for k in range(3):
                akp, akq = a[k][p], a[k][q]
                a[k][p] = c * akp - s * akq
                a[k][q] = s * akp + c * akq
            for k in range(3):
                apk, aqk = a[p][k], a[q][k]
                a[p][k] = c * apk - s * aqk
                a[q][k] = s * apk + c * aqk
            a[p][q] = a[q][p] = 0.0
            for k in range(3):
                vkp, vkq = V[k][p], V[k][q]
                V[k][p] = c * vkp - s * vkq
                V[k][q] = s * vkp + c * vkq

    a = np.array(a)
    V = np.array(V)
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    V = V[:, order]
    e1 = _canonical_sign(V[:, 0])
    e2 = _canonical_sign(V[:, 1])
    e3 = np.cross(e1, e2)
    return SymEig3(values, np.column_stack([e1, e2, e3]))
