"""Habit planes: rank-one connections between the austenite well and ``SO(3)F``.

``1 + b (x) m`` lies in ``SO(3)F`` iff the middle eigenvalue of ``F^T F`` is 1,
and then ``m`` is a multiple of ``sqrt(1 - l1) e1 +- sqrt(l3 - 1) e3``.
Normals returned here are unit vectors whose largest-magnitude component is
positive; ``b`` carries the sign needed to keep ``b (x) m`` fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IsRotation, NoClassical, NotInvertible
from .numerics3 import as_mat3, cof3, det3, sym_eig3
from .twinning import TwinSolution, connect_wells

TOL_MID = 1e-8
ROTATION_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9


@dataclass(frozen=True)
class InterfaceSolution:
    b: np.ndarray
    m: np.ndarray
    eigs: np.ndarray
    sign: int

    def stretch(self) -> np.ndarray:
        """``1 + b (x) m``."""
        return np.eye(3) + np.outer(self.b, self.m)


@dataclass(frozen=True)
class ClassicalInterface:
    lambda_star: float
    a0: float
    a1: float
    solutions: tuple  # ((lambda, InterfaceSolution), ...) for lambda*, then 1 - lambda*

    def normals(self) -> list[np.ndarray]:
        return [s.m for _, s in self.solutions]


def _positive_largest(b: np.ndarray, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = int(np.argmax(np.abs(m)))
    if m[k] < 0:
        return -b, -m
    return b, m


def rank_one_to_identity(F, tol_mid: float = TOL_MID) -> list[InterfaceSolution]:
    """Both habit-plane solutions for F, or ``[]`` if the middle eigenvalue is not 1."""
    F = as_mat3(F)
    if det3(F) <= 0:
        raise NotInvertible("det F must be positive")
    C = F.T @ F
    C = 0.5 * (C + C.T)
    if np.max(np.abs(C - np.eye(3))) <= ROTATION_TOL:
        raise IsRotation("F is a rotation; every plane is trivially compatible")
    eig = sym_eig3(C)
    if abs(eig.values[1] - 1.0) > tol_mid:
        return []

    out = []
    for sign in (1, -1):
        _, b, m, _ = connect_wells(np.eye(3), F, sign, C=C)
        b, m = _positive_largest(b, m)
        S = np.eye(3) + np.outer(b, m)
        resid = float(np.max(np.abs(S.T @ S - C)))
        if resid > RECONSTRUCTION_TOL:
            raise ArithmeticError(f"habit-plane reconstruction residual {resid:.3e}")
        out.append(InterfaceSolution(b, m, eig.values.copy(), sign))
    return out


def classical_coefficients(U_A, twin: TwinSolution) -> tuple[float, float]:
    """``(a0, a1)`` with ``det(M^T M - 1) = a0 + a1 (lambda^2 - lambda)`` along the laminate."""
    U_A = as_mat3(U_A)
    A0 = U_A @ U_A - np.eye(3)
    a0 = det3(A0)
    a1 = -2.0 * float(twin.b @ (U_A @ cof3(A0) @ twin.n))
    return a0, a1


def laminate_gradient(U_A, twin: TwinSolution, lam: float) -> np.ndarray:
    """``U_A + lam b (x) n``, the average of ``U_A`` and ``R U_B`` at fraction lam."""
    return as_mat3(U_A) + lam * np.outer(twin.b, twin.n)


def classical_interface(U_A, twin: TwinSolution, tol_mid: float = TOL_MID) -> ClassicalInterface:
    a0, a1 = classical_coefficients(U_A, twin)
    if a1 == 0.0:
        raise NoClassical("a1 vanishes")
    ratio = a0 / a1
    disc = 1.0 - 4.0 * ratio
    if disc < 0:
        raise NoClassical(f"discriminant 1 - 4 a0/a1 = {disc:.6g} is negative")
    lam = 0.5 * (1.0 - np.sqrt(disc))
    if not 0.0 < lam <= 0.5:
        raise NoClassical(f"root lambda* = {lam!r} is not in (0, 1/2]")

    sols = []
    for lv in (lam, 1.0 - lam):
        found = rank_one_to_identity(laminate_gradient(U_A, twin, lv), tol_mid)
        if not found:
            raise NoClassical(f"middle eigenvalue is not 1 at lambda = {lv!r}")
        sols.extend((lv, s) for s in found)
    return ClassicalInterface(float(lam), a0, a1, tuple(sols))
