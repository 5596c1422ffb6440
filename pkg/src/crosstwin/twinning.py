"""Solutions of the twinning equation ``R U_j - U_i = b (x) n``.

The construction is the classical two-well one: with
``C = U_i^-1 U_j^2 U_i^-1`` having eigenvalues ``l1 <= 1 <= l3``, there are
exactly two dyads ``b (x) n``, one for each sign choice in
``n ~ U_i (sqrt(1 - l1) e1 +- sqrt(l3 - 1) e3)``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import Degenerate, NoCounterpart, NoSharedNormal, NoTwin, NotTwinRelated
from .numerics3 import as_mat3, inv3, sym_eig3
from .variants import PointGroup, Variant, cubic_point_group

MID_EIG_TOL = 1e-9
IDENTITY_TOL = 1e-12
CONJUGACY_TOL = 1e-12
PARALLEL_TOL = 1e-10
_GAUGE_ZERO = 1e-12


class TwinType(str, enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    COMPOUND = "Compound"


def gauge_normal(b: np.ndarray, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale n to unit length with its first nonzero component positive.

    b absorbs the magnitude and sign so that ``b (x) n`` is unchanged.
    """
    norm = float(np.linalg.norm(n))
    n = n / norm
    b = b * norm
    for x in n:
        if abs(x) > _GAUGE_ZERO:
            if x < 0:
                n, b = -n, -b
            break
    return b, n


def connect_wells(F, G, sign: int, C=None):
    """One rank-one connection ``Q G - F = a (x) n`` between SO(3)F and SO(3)G.

    ``sign`` is the +-1 choice in ``n ~ F^T (sqrt(1 - l1) e1 + sign sqrt(l3 - 1) e3)``
    with (l_k, e_k) the eigenpairs of ``C = F^-T G^T G F^-1``. Returns
    ``(Q, a, n, eig)`` with n of unit length in the gauge of ``gauge_normal``.
    The middle eigenvalue is not checked here.
    """
    F = as_mat3(F)
    G = as_mat3(G)
    if C is None:
        Finv = inv3(F)
        C = Finv.T @ G.T @ G @ Finv
    eig = sym_eig3(C)
    l1, _, l3 = eig.values
    e1, e3 = eig.vectors[:, 0], eig.vectors[:, 2]
    gap = l3 - l1
    u = np.sqrt(max(1.0 - l1, 0.0))
    w = np.sqrt(max(l3 - 1.0, 0.0))
    a = -(np.sqrt(l3 / gap) * u * e1 - sign * np.sqrt(l1 / gap) * w * e3)
    n = (np.sqrt(l3) - np.sqrt(l1)) / np.sqrt(gap) * (F.T @ (u * e1 + sign * w * e3))
    a, n = gauge_normal(a, n)
    Q = (F + np.outer(a, n)) @ inv3(G)
    return Q, a, n, eig


@dataclass(frozen=True)
class TwinSolution:
    i: int | None
    j: int | None
    R: np.ndarray
    b: np.ndarray
    n: np.ndarray
    twin_type: TwinType | None = None
    sign: int = 1

    def __post_init__(self):
        for arr in (self.R, self.b, self.n):
            arr.setflags(write=False)

    def dyad(self) -> np.ndarray:
        return np.outer(self.b, self.n)

    def residual(self, Ui, Uj) -> float:
        return float(np.max(np.abs(self.R @ Uj - Ui - self.dyad())))


@dataclass(frozen=True)
class TwinPairSolutions:
    first: TwinSolution
    second: TwinSolution

    def __iter__(self):
        return iter((self.first, self.second))

    def __getitem__(self, k):
        return (self.first, self.second)[k]

    def of_type(self, kind: TwinType) -> list[TwinSolution]:
        return [s for s in self if s.twin_type == kind]


def _with_type(sol: TwinSolution, kind: TwinType | None) -> TwinSolution:
    return TwinSolution(sol.i, sol.j, sol.R.copy(), sol.b.copy(), sol.n.copy(), kind, sol.sign)


def solve_twin(Ui, Uj, i=None, j=None, group: PointGroup | None = None) -> TwinPairSolutions:
    """Both solutions (R, b, n) of the twinning equation for the ordered pair.

    Solutions are classified against ``group`` (the cubic group by default);
    if no 180 degree rotation relates the wells the type is left as None.
    """
    Ui = as_mat3(Ui)
    Uj = as_mat3(Uj)
    Uinv = inv3(Ui)
    C = Uinv @ Uj @ Uj @ Uinv
    C = 0.5 * (C + C.T)
    if np.max(np.abs(C - np.eye(3))) <= IDENTITY_TOL:
        raise Degenerate("the two wells coincide (C = 1)")
    mid = sym_eig3(C).values[1]
    if abs(mid - 1.0) > MID_EIG_TOL:
        raise NoTwin(f"middle eigenvalue of C is {mid!r}, not 1")

    sols = []
    for sign in (1, -1):
        R, b, n, _ = connect_wells(Ui, Uj, sign, C=C)
        sols.append(TwinSolution(i, j, R, b, n, None, sign))
    if abs(abs(float(sols[0].n @ sols[1].n)) - 1.0) <= PARALLEL_TOL:
        raise Degenerate("the two twin normals are parallel")

    group = cubic_point_group() if group is None else group
    try:
        kinds = [classify_twin(s, Ui, Uj, group) for s in sols]
    except NotTwinRelated:
        kinds = [None, None]
    return TwinPairSolutions(*(_with_type(s, k) for s, k in zip(sols, kinds)))


def relating_rotations(Ui, Uj, group: PointGroup) -> list[tuple[np.ndarray, np.ndarray]]:
    """180 degree rotations Q of ``group`` with ``Q Ui Q^T = Uj``."""
    return [
        (Q, ax)
        for Q, ax in group.two_fold()
        if np.max(np.abs(Q @ Ui @ Q.T - Uj)) <= CONJUGACY_TOL
    ]


def classify_twin(sol: TwinSolution, Ui, Uj, group: PointGroup | None = None) -> TwinType:
    group = cubic_point_group() if group is None else group
    rots = relating_rotations(as_mat3(Ui), as_mat3(Uj), group)
    if not rots:
        raise NotTwinRelated("no 180 degree rotation of the group relates the two wells")
    if len(rots) >= 2:
        return TwinType.COMPOUND
    axis = rots[0][1]
    n = sol.n / np.linalg.norm(sol.n)
    if abs(abs(float(n @ axis)) - 1.0) <= PARALLEL_TOL:
        return TwinType.TYPE_I
    return TwinType.TYPE_II


def _as_map(variants) -> dict[int, np.ndarray]:
    if isinstance(variants, Mapping):
        return dict(variants)
    if isinstance(variants[0], Variant):
        return {v.index: v.U for v in variants}
    return {k + 1: np.asarray(U) for k, U in enumerate(variants)}


def align_compound_normals(sol_aa: TwinPairSolutions, sol_bb: TwinPairSolutions,
                           tol: float = 1e-12) -> tuple[TwinSolution, TwinSolution]:
    """Pick one solution from each compound pair so that the twin normals agree."""
    for pair in (sol_aa, sol_bb):
        if any(s.twin_type != TwinType.COMPOUND for s in pair):
            raise NoSharedNormal("both pairs must be compound twins")
    for s, t in itertools.product(sol_aa, sol_bb):
        if np.max(np.abs(s.n - t.n)) <= tol:
            return s, t
    raise NoSharedNormal("no choice of compound solutions shares a twin normal")


def compound_counterparts(A: int, B: int, group: PointGroup | None, variants) -> tuple[int, int]:
    """Compound partners (A', B') of a Type-II pair (A, B).

    (A, A') and (B, B') must be compound-related, (A', B') must admit a Type-II
    solution, and the compound twins must admit a shared normal.
    """
    if A == B:
        raise ValueError("A and B must be distinct variants")
    group = cubic_point_group() if group is None else group
    U = _as_map(variants)
    if not solve_twin(U[A], U[B], A, B, group).of_type(TwinType.TYPE_II):
        raise NoCounterpart(f"pair ({A}, {B}) has no Type-II solution")

    def compound_partners(k):
        return [m for m in U if m != k and len(relating_rotations(U[k], U[m], group)) >= 2]

    found = []
    for Ap in compound_partners(A):
        for Bp in compound_partners(B):
            if len({A, B, Ap, Bp}) < 4:
                continue
            try:
                if not solve_twin(U[Ap], U[Bp], Ap, Bp, group).of_type(TwinType.TYPE_II):
                    continue
                align_compound_normals(
                    solve_twin(U[A], U[Ap], A, Ap, group), solve_twin(U[B], U[Bp], B, Bp, group)
                )
            except (NoTwin, Degenerate, NoSharedNormal):
                continue
            found.append((Ap, Bp))
    if not found:
        raise NoCounterpart(f"no compound counterparts for ({A}, {B})")
    return found[0]


def all_pair_types(variants, group: PointGroup | None = None) -> dict[tuple[int, int], list]:
    """Twin types of every unordered variant pair, for reporting."""
    U = _as_map(variants)
    out = {}
    for i, j in itertools.combinations(sorted(U), 2):
        try:
            out[(i, j)] = [s.twin_type for s in solve_twin(U[i], U[j], i, j, group)]
        except (NoTwin, Degenerate):
            out[(i, j)] = []
    return out


def pick(pair: TwinPairSolutions, kind: TwinType) -> TwinSolution:
    sols = pair.of_type(kind)
    if not sols:
        raise NoTwin(f"no {kind.value} solution for pair ({pair.first.i}, {pair.first.j})")
    return sols[0]


__all__ = [
    "TwinType", "TwinSolution", "TwinPairSolutions", "solve_twin", "classify_twin",
    "compound_counterparts", "align_compound_normals", "connect_wells", "gauge_normal",
    "relating_rotations", "all_pair_types", "pick",
]
