"""Numerical invariants of a crossing-twins system, each with a pinned tolerance.

Every check evaluates an identity by a route that does not go through the
quantity it verifies (e.g. the polynomial form of g against a direct
determinant of ``M^T M - 1``) and reports the worst residual it saw.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .crossing import (
    ParallelogramSystem, b_star, g_direct, g_eval, inverse_transpose, laminate_M,
    macroscopic_M, two_scale_M,
)
from .errors import CrossTwinError
from .interface import classical_interface
from .numerics3 import det3, inv3
from .twinning import TwinSolution

SEED = 20100415
N_RANDOM = 100
GRID_33 = np.linspace(0.0, 1.0, 33)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tol)


def _random_points(n=N_RANDOM, seed=SEED):
    return np.random.default_rng(seed).random((n, 2))


def _grid_points():
    return [(lam, Lam) for lam in GRID_33 for Lam in GRID_33]


def _twins(sys: ParallelogramSystem):
    return [
        (sys.sol_ab, sys.U_A, sys.U_B),
        (sys.sol_apbp, sys.U_Ap, sys.U_Bp),
        (sys.sol_aap, sys.U_A, sys.U_Ap),
        (sys.sol_bbp, sys.U_B, sys.U_Bp),
    ]


def volume_identity(sys):
    return max(abs(float((inv3(Ui) @ s.b) @ s.n)) for s, Ui, _ in _twins(sys))


def twin_residual(sys):
    return max(s.residual(Ui, Uj) for s, Ui, Uj in _twins(sys))


def twin_rotations(sys):
    return max(float(np.max(np.abs(s.R.T @ s.R - np.eye(3)))) for s, _, _ in _twins(sys))


def compatibility(sys):
    return float(np.linalg.norm(sys.sol_ab.R @ sys.sol_bbp.R - sys.sol_aap.R @ sys.sol_apbp.R))


def eta_relation(sys):
    rhs = sys.sol_aap.b - sys.sol_ab.R @ sys.sol_bbp.b
    return float(np.max(np.abs(sys.eta * sys.sol_ab.b - rhs)))


def shared_normal(sys):
    return float(np.max(np.abs(sys.sol_aap.n - sys.sol_bbp.n)))


def coplanarity(sys):
    return float(np.linalg.svd(sys.normals(), compute_uv=False)[2])


def compound_orthogonality(sys):
    return abs(float((inv3(sys.U_A) @ sys.sol_aap.n) @ sys.sol_ab.b))


def laminate_orthogonality(sys):
    worst = 0.0
    for lam in GRID_33:
        M_ab, _ = laminate_M(sys, lam)
        worst = max(worst, abs(float((inv3(M_ab) @ b_star(sys, lam)) @ sys.sol_aap.n)))
    return worst


def laminate_rank_one(sys):
    worst = 0.0
    for lam in GRID_33:
        M_ab, M_apbp = laminate_M(sys, lam)
        diff = sys.sol_aap.R @ M_apbp - M_ab - np.outer(b_star(sys, lam), sys.sol_aap.n)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def two_scale_form(sys):
    return max(
        float(np.max(np.abs(macroscopic_M(sys, l, L) - two_scale_M(sys, l, L))))
        for l, L in _random_points()
    )


def volume_invariance(sys):
    dA = det3(sys.U_A)
    return max(abs(det3(macroscopic_M(sys, l, L)) - dA) for l, L in _grid_points())


def oracle_equivalence(sys):
    c = sys.coeffs
    return max(abs(g_eval(c, l, L) - g_direct(sys, l, L)) for l, L in _grid_points())


def coefficient_fit(sys):
    """Fit the four-term form to direct determinants on a 5x5 grid.

    Returns the larger of the fit residual and the coefficient mismatch.
    """
    pts = [(l, L) for l in np.linspace(0, 1, 5) for L in np.linspace(0, 1, 5)]
    X = np.array([[1.0, l * l - l, L * L - L, (l * l - l) * (L * L - L)] for l, L in pts])
    y = np.array([g_direct(sys, l, L) for l, L in pts])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    fit = float(np.max(np.abs(X @ coef - y)))
    return max(fit, float(np.max(np.abs(coef - np.array(sys.coeffs.as_tuple())))))


def inverse_transpose_form(sys):
    return max(
        float(np.max(np.abs(inverse_transpose(sys, l, L) - inv3(macroscopic_M(sys, l, L)).T)))
        for l, L in _random_points()
    )


def g_symmetry(sys):
    worst = 0.0
    for l, L in _random_points():
        g = g_direct(sys, l, L)
        worst = max(worst, abs(g - g_direct(sys, 1 - l, L)), abs(g - g_direct(sys, l, 1 - L)))
    return worst


def bisect(f: Callable[[float], float], lo: float, hi: float, iters: int = 200) -> float:
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= 1e-17:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classical_root(sys):
    lam_star = classical_interface(sys.U_A, sys.sol_ab).lambda_star
    root = bisect(lambda l: g_direct(sys, l, 0.0), 0.0, 0.5)
    return abs(lam_star - root)


CHECKS: list[tuple[str, Callable, float]] = [
    ("volume_identity_Uinv_b_dot_n", volume_identity, 1e-11),
    ("twin_equation_residual", twin_residual, 1e-12),
    ("twin_rotations_orthogonal", twin_rotations, 1e-13),
    ("shared_compound_normal", shared_normal, 1e-12),
    ("rotation_compatibility", compatibility, 1e-10),
    ("eta_shear_relation", eta_relation, 1e-11),
    ("twin_normals_coplanar", coplanarity, 1e-10),
    ("compound_normal_orthogonality", compound_orthogonality, 1e-11),
    ("laminate_orthogonality", laminate_orthogonality, 1e-11),
    ("laminate_rank_one_connection", laminate_rank_one, 1e-11),
    ("two_scale_gradient_form", two_scale_form, 1e-11),
    ("det_M_equals_det_UA", volume_invariance, 1e-12),
    ("g_polynomial_vs_direct_det", oracle_equivalence, 1e-10),
    ("g_coefficient_interpolation", coefficient_fit, 1e-9),
    ("closed_form_inverse_transpose", inverse_transpose_form, 1e-10),
    ("g_reflection_symmetry", g_symmetry, 1e-12),
    ("classical_root_vs_bisection", classical_root, 1e-10),
]


def inject_fault(sys: ParallelogramSystem, size: float = 1e-6) -> ParallelogramSystem:
    """A copy of ``sys`` with b_AB perturbed; used to exercise failure reporting."""
    s = sys.sol_ab
    b = s.b + size * np.array([1.0, 0.0, 0.0])
    bad = TwinSolution(s.i, s.j, s.R.copy(), b, s.n.copy(), s.twin_type, s.sign)
    return dataclasses.replace(sys, sol_ab=bad)


def run_invariants(sys: ParallelogramSystem) -> list[CheckResult]:
    out = []
    for name, fn, tol in CHECKS:
        try:
            residual = float(fn(sys))
        except (CrossTwinError, ArithmeticError):
            residual = float("inf")
        out.append(CheckResult(name, residual, tol))
    return out
