"""Crossing Type-II / compound twins and their interfaces with austenite.

Four variants take part: a Type-II pair (A, B) and its compound counterparts
(A', B'). With a Type-II volume fraction ``lam`` shared by both laminates and
a compound fraction ``Lam``, the macroscopic gradient is

    M = U_A + lam b_AB (x) n_AB + Lam (b_AA' - lam eta b_AB) (x) n_AA'

and the interface condition ``g = det(M^T M - 1) = 0`` reduces to

    g = a0 + a1 (lam^2 - lam) + a2 (Lam^2 - Lam) + a3 (lam^2 - lam)(Lam^2 - Lam),

which is quadratic in ``lam`` for every fixed ``Lam``.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DenominatorVanishes, Incompatible, NoSharedNormal
from .interface import TOL_MID, rank_one_to_identity
from .numerics3 import cof3, det3, frob_inner, inv3, sym_eig3
from .twinning import TwinSolution, TwinType, _as_map, solve_twin
from .variants import PointGroup, cubic_point_group

COMPAT_TOL = 1e-10
ETA_TOL = 1e-11
COPLANAR_TOL = 1e-10
SHARED_NORMAL_TOL = 1e-12
DENOM_TOL = 1e-13
DEGENERACY_RTOL = 1e-12
DEFAULT_GRID = 1001


@dataclass(frozen=True)
class GCoefficients:
    a0: float
    a1: float
    a2: float
    a3: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a0, self.a1, self.a2, self.a3)


@dataclass(frozen=True)
class ParallelogramSystem:
    indices: tuple[int, int, int, int]
    U_A: np.ndarray
    U_B: np.ndarray
    U_Ap: np.ndarray
    U_Bp: np.ndarray
    sol_ab: TwinSolution
    sol_apbp: TwinSolution
    sol_aap: TwinSolution
    sol_bbp: TwinSolution
    eta: float
    coeffs: GCoefficients
    compat_residual: float
    eta_residual: float
    coplanarity: float

    def normals(self) -> np.ndarray:
        return np.array([self.sol_ab.n, self.sol_apbp.n, self.sol_aap.n, self.sol_bbp.n])


def eta_from_shears(b_aap, b_ab) -> float:
    return 2.0 * float(b_aap @ b_ab) / float(b_ab @ b_ab)


def expansion_matrices(U_A, sol_ab: TwinSolution, sol_aap: TwinSolution, eta: float):
    """``(A0, A1, A2, A3)`` with ``g = det(A0 + lam A1 + Lam A2 + lam Lam A3)``."""
    Ui = inv3(U_A)
    b1, n1 = sol_ab.b, sol_ab.n
    b2, n2 = sol_aap.b, sol_aap.n
    A0 = U_A @ U_A - np.eye(3)
    A1 = np.outer(U_A @ b1, n1) + np.outer(n1, Ui @ b1)
    A2 = np.outer(U_A @ b2, n2) + np.outer(n2, Ui @ b2)
    A3 = -(float((Ui @ n1) @ b2) + eta) * np.outer(n2, Ui @ b1) - eta * np.outer(U_A @ b1, n2)
    return A0, A1, A2, A3


def g_coefficients(U_A, sol_ab: TwinSolution, sol_aap: TwinSolution, eta: float) -> GCoefficients:
    A0, A1, A2, A3 = expansion_matrices(U_A, sol_ab, sol_aap, eta)
    K = U_A @ cof3(A0)
    a0 = det3(A0)
    a1 = -2.0 * float(sol_ab.b @ K @ sol_ab.n)
    a2 = -2.0 * float(sol_aap.b @ K @ sol_aap.n)
    a3 = 4.0 * frob_inner(cof3(A0 + 0.5 * A2), A1 + 0.5 * A3) + 4.0 * a1
    return GCoefficients(a0, a1, a2, a3)


def g_eval(c: GCoefficients, lam, Lam):
    s = lam * lam - lam
    t = Lam * Lam - Lam
    return c.a0 + c.a1 * s + c.a2 * t + c.a3 * s * t


def build_system(A: int, B: int, Ap: int, Bp: int, variants,
                 group: PointGroup | None = None) -> ParallelogramSystem:
    group = cubic_point_group() if group is None else group
    U = _as_map(variants)
    if len({A, B, Ap, Bp}) != 4:
        raise ValueError("the four variant indices must be distinct")

    ab = solve_twin(U[A], U[B], A, B, group)
    apbp = solve_twin(U[Ap], U[Bp], Ap, Bp, group)
    aap = solve_twin(U[A], U[Ap], A, Ap, group)
    bbp = solve_twin(U[B], U[Bp], B, Bp, group)

    for pair, label in ((ab, "(A, B)"), (apbp, "(A', B')")):
        if not pair.of_type(TwinType.TYPE_II):
            raise Incompatible(f"{label} admits no Type-II twin")
    for pair, label in ((aap, "(A, A')"), (bbp, "(B, B')")):
        if any(s.twin_type != TwinType.COMPOUND for s in pair):
            raise NoSharedNormal(f"{label} is not a compound pair")

    best = None
    for s_ab, s_apbp, s_aap, s_bbp in itertools.product(
        ab.of_type(TwinType.TYPE_II), apbp.of_type(TwinType.TYPE_II), aap, bbp
    ):
        if np.max(np.abs(s_aap.n - s_bbp.n)) > SHARED_NORMAL_TOL:
            continue
        r8 = float(np.linalg.norm(s_ab.R @ s_bbp.R - s_aap.R @ s_apbp.R))
        if best is None or r8 < best[0]:
            best = (r8, s_ab, s_apbp, s_aap, s_bbp)
    if best is None:
        raise NoSharedNormal("no compound solutions with n_AA' = n_BB'")
    r8, s_ab, s_apbp, s_aap, s_bbp = best
    if r8 > COMPAT_TOL:
        raise Incompatible(f"R_AB R_BB' - R_AA' R_A'B' has norm {r8:.3e}")

    eta = eta_from_shears(s_aap.b, s_ab.b)
    eta_res = float(np.max(np.abs(eta * s_ab.b - (s_aap.b - s_ab.R @ s_bbp.b))))
    if eta_res > ETA_TOL:
        raise Incompatible(f"shear relation for eta violated by {eta_res:.3e}")
    normals = np.array([s_ab.n, s_apbp.n, s_aap.n, s_bbp.n])
    coplanarity = float(np.linalg.svd(normals, compute_uv=False)[2])
    if coplanarity > COPLANAR_TOL:
        raise Incompatible(f"twin normals are not coplanar (sigma_3 = {coplanarity:.3e})")

    U_A = np.array(U[A], dtype=float)
    return ParallelogramSystem(
        (A, B, Ap, Bp), U_A, np.array(U[B], dtype=float), np.array(U[Ap], dtype=float),
        np.array(U[Bp], dtype=float), s_ab, s_apbp, s_aap, s_bbp, eta,
        g_coefficients(U_A, s_ab, s_aap, eta), r8, eta_res, coplanarity,
    )


def b_star(sys: ParallelogramSystem, lam: float) -> np.ndarray:
    return sys.sol_aap.b - lam * sys.eta * sys.sol_ab.b


def macroscopic_M(sys: ParallelogramSystem, lam: float, Lam: float) -> np.ndarray:
    return (sys.U_A + lam * np.outer(sys.sol_ab.b, sys.sol_ab.n)
            + Lam * np.outer(b_star(sys, lam), sys.sol_aap.n))


def laminate_M(sys: ParallelogramSystem, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """The two Type-II laminate averages ``(M_AB, M_A'B')``."""
    M_ab = (1.0 - lam) * sys.U_A + lam * sys.sol_ab.R @ sys.U_B
    M_apbp = (1.0 - lam) * sys.U_Ap + lam * sys.sol_apbp.R @ sys.U_Bp
    return M_ab, M_apbp


def two_scale_M(sys: ParallelogramSystem, lam: float, Lam: float) -> np.ndarray:
    """Macroscopic gradient built directly as the average of the two rotated laminates."""
    M_ab, M_apbp = laminate_M(sys, lam)
    return (1.0 - Lam) * M_ab + Lam * sys.sol_aap.R @ M_apbp


def inverse_transpose(sys: ParallelogramSystem, lam: float, Lam: float) -> np.ndarray:
    """Closed-form ``M^-T`` from the rank-one structure of M."""
    Ui = inv3(sys.U_A)
    b1, n1 = sys.sol_ab.b, sys.sol_ab.n
    b2, n2 = sys.sol_aap.b, sys.sol_aap.n
    return (Ui
            - lam * np.outer(Ui @ n1, Ui @ b1)
            - Lam * np.outer(Ui @ n2, Ui @ b2)
            + Lam * lam * np.outer(Ui @ n2, Ui @ b1) * (float((Ui @ n1) @ b2) + sys.eta))


def g_direct(sys: ParallelogramSystem, lam: float, Lam: float) -> float:
    M = macroscopic_M(sys, lam, Lam)
    return det3(M.T @ M - np.eye(3))


def middle_eig_condition(sys: ParallelogramSystem, lam: float, Lam: float) -> float:
    """Nonnegative on a solution of g = 0 iff 1 is the middle eigenvalue of M^T M."""
    U2 = sys.U_A @ sys.U_A
    s = lam * lam - lam
    t = Lam * Lam - Lam
    bab2 = float(sys.sol_ab.b @ sys.sol_ab.b)
    baap2 = float(sys.sol_aap.b @ sys.sol_aap.b)
    return (float(np.trace(U2)) - det3(U2) - 2.0 + s * bab2 + t * baap2
            + s * t * sys.eta ** 2 * bab2)


@dataclass(frozen=True)
class ConditionReport:
    """Sign conditions on the g coefficients.

    denominator_ok: a1/a3 outside [0, 1/4], so a1 + a3 (Lam^2 - Lam) never vanishes.
    nondegenerate: a0 a3 != a1 a2 (otherwise the branches are constant in Lam).
    branches_meet: 0 <= (4 a0 - a2)/(4 a1 - a3) <= 1/4, so roots exist at Lam = 1/2.
    not_tangent: that ratio is not exactly 1/4 (the two branches do not touch).
    """

    denominator_ok: bool
    nondegenerate: bool
    branches_meet: bool
    not_tangent: bool
    degenerate: bool
    a1_over_a3: float
    meet_ratio: float

    @property
    def all_hold(self) -> bool:
        return (self.denominator_ok and self.nondegenerate and self.branches_meet
                and self.not_tangent)


def _is_degenerate(c: GCoefficients) -> bool:
    lhs, rhs = c.a0 * c.a3, c.a1 * c.a2
    return abs(lhs - rhs) <= DEGENERACY_RTOL * max(abs(lhs), abs(rhs))


def check_conditions(c: GCoefficients) -> ConditionReport:
    a1_over_a3 = c.a1 / c.a3 if c.a3 != 0 else math.inf
    denominator_ok = not (0.0 <= a1_over_a3 <= 0.25)
    degenerate = _is_degenerate(c)
    den = 4.0 * c.a1 - c.a3
    ratio = (4.0 * c.a0 - c.a2) / den if den != 0 else math.nan
    branches_meet = bool(0.0 <= ratio <= 0.25)
    not_tangent = bool(ratio != 0.25) if not math.isnan(ratio) else False
    return ConditionReport(denominator_ok, not degenerate, branches_meet, not_tangent, degenerate,
                           a1_over_a3, ratio)


@dataclass(frozen=True)
class BranchPoint:
    Lambda: float
    lam: float
    branch_id: str
    g_residual: float
    mid_eig: float | None = None
    mid_eig_check: float | None = None

    @property
    def side(self) -> str:
        return self.branch_id.split("-")[1]


@dataclass
class BranchSet:
    """Points of g = 0 on a uniform Lam grid, in ascending Lam (low before high)."""

    grid: np.ndarray
    points: list[BranchPoint]
    missing: list[float] = field(default_factory=list)
    degenerate: bool = False

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def side(self, name: str) -> list[BranchPoint]:
        return [p for p in self.points if p.side == name]

    def by_lambda(self) -> dict[float, dict[str, BranchPoint]]:
        rows: dict[float, dict[str, BranchPoint]] = {float(L): {} for L in self.grid}
        for p in self.points:
            rows[p.Lambda][p.side] = p
        return rows

    def coverage(self) -> list[tuple[float, float]]:
        """Maximal Lam intervals (grid endpoints) on which real roots exist."""
        covered = set(p.Lambda for p in self.points)
        runs, start, prev = [], None, None
        for L in map(float, self.grid):
            if L in covered:
                start = L if start is None else start
                prev = L
            elif start is not None:
                runs.append((start, prev))
                start = None
        if start is not None:
            runs.append((start, prev))
        return runs

    @property
    def full_coverage(self) -> bool:
        return not self.missing


def lambda_grid(grid_n: int) -> np.ndarray:
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    return np.array([k / (grid_n - 1) for k in range(grid_n)])


def _branch_roots(c: GCoefficients, Lam: float, degenerate: bool):
    t = Lam * Lam - Lam
    if degenerate:
        r = -c.a0 / c.a1
    else:
        den = c.a1 + c.a3 * t
        if abs(den) < DENOM_TOL:
            raise DenominatorVanishes(f"a1 + a3 (Lam^2 - Lam) vanishes at Lam = {Lam!r}")
        r = -(c.a0 + c.a2 * t) / den
    if not -0.25 <= r < 0.0:
        return None
    root = math.sqrt(max(1.0 + 4.0 * r, 0.0))
    return 0.5 * (1.0 - root), 0.5 * (1.0 + root)


def solve_branches(c: GCoefficients, grid_n: int = DEFAULT_GRID) -> BranchSet:
    grid = lambda_grid(grid_n)
    degenerate = _is_degenerate(c)
    points, missing = [], []
    for Lam in map(float, grid):
        roots = _branch_roots(c, Lam, degenerate)
        if roots is None:
            missing.append(Lam)
            continue
        origin = "L0" if Lam <= 0.5 else "L1"
        for side, lam in zip(("low", "high"), roots):
            points.append(BranchPoint(Lam, lam, f"{origin}-{side}", float(g_eval(c, lam, Lam))))
    return BranchSet(grid, points, missing, degenerate)


def annotate_branches(sys: ParallelogramSystem, branches: BranchSet) -> BranchSet:
    """Attach the middle eigenvalue of M^T M and the eigenvalue-order check to each point."""
    pts = []
    for p in branches:
        M = macroscopic_M(sys, p.lam, p.Lambda)
        mid = float(sym_eig3(M.T @ M).values[1])
        pts.append(BranchPoint(p.Lambda, p.lam, p.branch_id, p.g_residual, mid,
                               middle_eig_condition(sys, p.lam, p.Lambda)))
    return BranchSet(branches.grid, pts, list(branches.missing), branches.degenerate)


@dataclass(frozen=True)
class NormalCurve:
    """One continuous habit-normal curve along a branch side.

    ``points`` holds ``(BranchPoint, m, mid_eigenvalue)`` in ascending Lam; the
    sign of m is chosen for continuity, starting from the canonical gauge.
    """

    side: str
    sign: str
    points: tuple

    def normals(self) -> np.ndarray:
        return np.array([m for _, m, _ in self.points])

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points[0][1], self.points[-1][1]


def _runs(points: list[BranchPoint], grid: np.ndarray) -> list[list[BranchPoint]]:
    index = {float(L): k for k, L in enumerate(grid)}
    runs: list[list[BranchPoint]] = []
    for p in points:
        if runs and index[p.Lambda] == index[runs[-1][-1].Lambda] + 1:
            runs[-1].append(p)
        else:
            runs.append([p])
    return runs


def _habit(sys, p, tol_mid):
    return rank_one_to_identity(macroscopic_M(sys, p.lam, p.Lambda), tol_mid)


def normal_curves(sys: ParallelogramSystem, branches: BranchSet, tol_mid: float = TOL_MID,
                  workers: int = 1) -> list[NormalCurve]:
    """Habit normals along every contiguous run of each branch side.

    Full coverage gives four curves: {low, high} x {+, -}. Branch points at
    which 1 is not the middle eigenvalue of M^T M have no habit plane and
    split a run. The per-point decompositions may be fanned out over
    ``workers`` threads; the result does not depend on the worker count.
    """
    pts = list(branches)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            habits = list(pool.map(lambda p: _habit(sys, p, tol_mid), pts))
    else:
        habits = [_habit(sys, p, tol_mid) for p in pts]
    lookup = {(p.Lambda, p.side): h for p, h in zip(pts, habits) if h}

    curves = []
    for side in ("low", "high"):
        usable = [p for p in branches.side(side) if (p.Lambda, side) in lookup]
        for run in _runs(usable, branches.grid):
            first = lookup[(run[0].Lambda, side)]
            tracks = [[(run[0], s.m, float(s.eigs[1]))] for s in first]
            labels = ["+" if s.sign > 0 else "-" for s in first]
            for p in run[1:]:
                sols = lookup[(p.Lambda, side)]
                prev = [t[-1][1] for t in tracks]
                keep = abs(prev[0] @ sols[0].m) + abs(prev[1] @ sols[1].m)
                swap = abs(prev[0] @ sols[1].m) + abs(prev[1] @ sols[0].m)
                ordered = sols if keep >= swap else sols[::-1]
                for t, q, s in zip(tracks, prev, ordered):
                    m = s.m if q @ s.m >= 0 else -s.m
                    t.append((p, m, float(s.eigs[1])))
            for label, t in zip(labels, tracks):
                curves.append(NormalCurve(side, label, tuple(t)))
    return curves


def plane_angle(m1, m2) -> float:
    """Angle between the planes with normals m1, m2 (sign-insensitive, well conditioned)."""
    m1 = np.asarray(m1, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    d = min(np.linalg.norm(m1 - m2), np.linalg.norm(m1 + m2))
    return 2.0 * math.asin(min(d / 2.0, 1.0))
