"""Cubic-to-orthorhombic transformation stretches and the cubic rotation group.

Variant numbering (a = alpha, b = beta, c = gamma, p = (a+c)/2, q = (a-c)/2)::

    U1 = [[p,  q, 0], [ q, p, 0], [0, 0, b]]     beta along z
    U2 = [[p, -q, 0], [-q, p, 0], [0, 0, b]]
    U3 = [[p, 0,  q], [0, b, 0], [ q, 0, p]]     beta along y
    U4 = [[p, 0, -q], [0, b, 0], [-q, 0, p]]
    U5 = [[b, 0, 0], [0, p,  q], [0,  q, p]]     beta along x
    U6 = [[b, 0, 0], [0, p, -q], [0, -q, p]]

Each U_i has eigenvalues {alpha, beta, gamma}. Under this table the pairs
(3, 4) and (5, 6) are compound-related, while (3, 6) and (4, 5) are each
related by a single 180 degree rotation about a <110> axis, which is the role
assignment used for the CuAlNi crossing-twins microstructure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParams

CUALNI = (1.06372, 0.91542, 1.02368)


@dataclass(frozen=True)
class LatticeParams:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise BadParams(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class Variant:
    index: int
    U: np.ndarray

    def __post_init__(self):
        self.U.setflags(write=False)


def make_variants(p: LatticeParams) -> list[Variant]:
    if not isinstance(p, LatticeParams):
        p = LatticeParams(*p)
    a, b, c = p.alpha, p.beta, p.gamma
    s = 0.5 * (a + c)
    d = 0.5 * (a - c)
    tables = [
        [[s, d, 0.0], [d, s, 0.0], [0.0, 0.0, b]],
        [[s, -d, 0.0], [-d, s, 0.0], [0.0, 0.0, b]],
        [[s, 0.0, d], [0.0, b, 0.0], [d, 0.0, s]],
        [[s, 0.0, -d], [0.0, b, 0.0], [-d, 0.0, s]],
        [[b, 0.0, 0.0], [0.0, s, d], [0.0, d, s]],
        [[b, 0.0, 0.0], [0.0, s, -d], [0.0, -d, s]],
    ]
    return [Variant(i + 1, np.array(t, dtype=float)) for i, t in enumerate(tables)]


def variant_map(p: LatticeParams) -> dict[int, np.ndarray]:
    """Index -> stretch matrix, for callers that only need the matrices."""
    return {v.index: v.U for v in make_variants(p)}


# (axis, angle in degrees) for the 24 proper rotations of the cube
_AXIS_ANGLE = (
    [((1, 0, 0), 0)]
    + [(ax, ang) for ax in ((1, 0, 0), (0, 1, 0), (0, 0, 1)) for ang in (90, 180, 270)]
    + [(ax, ang) for ax in ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1)) for ang in (120, 240)]
    + [(ax, 180) for ax in ((1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1))]
)


def axis_angle_matrix(axis, degrees: float) -> np.ndarray:
    e = np.asarray(axis, dtype=float)
    e = e / np.linalg.norm(e)
    t = np.deg2rad(degrees)
    K = np.array([[0.0, -e[2], e[1]], [e[2], 0.0, -e[0]], [-e[1], e[0], 0.0]])
    return np.eye(3) + np.sin(t) * K + (1.0 - np.cos(t)) * (K @ K)


@dataclass(frozen=True)
class PointGroup:
    rotations: tuple
    axes: tuple
    angles: tuple

    def __len__(self):
        return len(self.rotations)

    def __iter__(self):
        return iter(self.rotations)

    def two_fold(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """The 180 degree rotations with their unit axes."""
        return [(R, ax) for R, ax, ang in zip(self.rotations, self.axes, self.angles) if ang == 180]

    def contains(self, R, tol: float = 1e-13) -> bool:
        return any(np.max(np.abs(Q - R)) <= tol for Q in self.rotations)


def _build_group() -> PointGroup:
    mats, axes, angles = [], [], []
    for axis, ang in _AXIS_ANGLE:
        # entries of cubic rotations are exactly 0 or +-1
        R = np.rint(axis_angle_matrix(axis, ang))
        R.setflags(write=False)
        e = np.asarray(axis, dtype=float) / np.linalg.norm(axis)
        e.setflags(write=False)
        mats.append(R)
        axes.append(e)
        angles.append(ang)
    return PointGroup(tuple(mats), tuple(axes), tuple(angles))


_GROUP = _build_group()


def cubic_point_group() -> PointGroup:
    return _GROUP
