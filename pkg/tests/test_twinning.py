import itertools

import numpy as np
import pytest

from crosstwin.errors import Degenerate, NoCounterpart, NoSharedNormal, NoTwin, NotTwinRelated
from crosstwin.twinning import (TwinSolution, TwinType, align_compound_normals, all_pair_types,
                                classify_twin, compound_counterparts, gauge_normal, pick,
                                relating_rotations, solve_twin)
from crosstwin.variants import axis_angle_matrix


def two_fold(axis):
    e = np.asarray(axis, float) / np.linalg.norm(axis)
    return e, 2 * np.outer(e, e) - np.eye(3)


def dyad_oracle_type1(Ui, e):
    # Ui and Q Ui Q^T with Q the half-turn about e; normal is the axis itself
    Uinv_e = np.linalg.solve(Ui, e)
    return np.outer(2 * (Uinv_e / (Uinv_e @ Uinv_e) - Ui @ e), e)


def dyad_oracle_type2(Ui, e):
    Ue = Ui @ e
    return np.outer(Ue, 2 * (e - Ui @ Ue / (Ue @ Ue)))


def test_identical_wells_are_degenerate(U):
    with pytest.raises(Degenerate):
        solve_twin(U[3], U[3])


def test_incompatible_wells():
    with pytest.raises(NoTwin):
        solve_twin(np.eye(3), np.diag([1.1, 1.2, 1.3]))


def test_pair_36_types_and_residuals(U):
    sols = solve_twin(U[3], U[6], 3, 6)
    assert sorted(s.twin_type.value for s in sols) == ["TypeI", "TypeII"]
    for s in sols:
        assert s.residual(U[3], U[6]) <= 1e-12
        assert np.max(np.abs(s.R.T @ s.R - np.eye(3))) <= 1e-13
        assert abs(np.linalg.det(s.R) - 1) <= 1e-13
        assert abs(np.linalg.norm(s.n) - 1) <= 1e-15
        assert (s.i, s.j) == (3, 6)


def test_half_turn_formulas_as_oracle(U, group):
    # the two dyads for a half-turn-related pair have a closed form
    for i, j in [(3, 6), (4, 5), (1, 3), (2, 6)]:
        (Q, e), = relating_rotations(U[i], U[j], group)
        sols = solve_twin(U[i], U[j], i, j)
        t1 = pick(sols, TwinType.TYPE_I).dyad()
        t2 = pick(sols, TwinType.TYPE_II).dyad()
        assert np.max(np.abs(t1 - dyad_oracle_type1(U[i], e))) <= 1e-13
        assert np.max(np.abs(t2 - dyad_oracle_type2(U[i], e))) <= 1e-13


def test_volume_identity(U):
    # det(Ui + b (x) n) = det Uj  <=>  n . Ui^-1 b = 0 for equal determinants
    for i, j in itertools.permutations(range(1, 7), 2):
        for s in solve_twin(U[i], U[j], i, j):
            assert abs(s.n @ np.linalg.solve(U[i], s.b)) <= 1e-13


def test_compound_pairs(U, group):
    for i, j in [(3, 4), (5, 6), (1, 2)]:
        assert len(relating_rotations(U[i], U[j], group)) == 2
        assert [s.twin_type for s in solve_twin(U[i], U[j])] == [TwinType.COMPOUND] * 2


def test_compound_normals_34(U):
    ns = sorted(tuple(np.round(s.n, 12) + 0.0) for s in solve_twin(U[3], U[4]))
    assert ns == [(0.0, 0.0, 1.0), (1.0, 0.0, 0.0)]


def test_all_pairs_classified(U):
    table = all_pair_types(U)
    assert len(table) == 15
    compound = {k for k, v in table.items() if v == [TwinType.COMPOUND] * 2}
    assert compound == {(1, 2), (3, 4), (5, 6)}
    for k, v in table.items():
        if k not in compound:
            assert sorted(t.value for t in v) == ["TypeI", "TypeII"]


def test_non_cubic_half_turn_gives_untyped_solutions(U):
    _, Q = two_fold((1, 2, 0))
    Uj = Q @ U[3] @ Q.T
    sols = solve_twin(U[3], Uj)
    for s in sols:
        assert s.twin_type is None
        assert s.residual(U[3], Uj) <= 1e-12


def test_not_twin_related(U):
    Q = axis_angle_matrix((0, 0, 1), 30)
    Uj = Q @ U[3] @ Q.T
    sol = TwinSolution(None, None, np.eye(3), np.zeros(3), np.array([1.0, 0, 0]))
    with pytest.raises(NotTwinRelated):
        classify_twin(sol, U[3], Uj)


def test_classification_is_gauge_invariant(U):
    for s in solve_twin(U[3], U[6]):
        flipped = TwinSolution(s.i, s.j, s.R.copy(), -s.b, -s.n)
        assert classify_twin(flipped, U[3], U[6]) == s.twin_type


def test_gauge_normal():
    b, n = gauge_normal(np.array([1.0, 2.0, 3.0]), np.array([0.0, -2.0, 0.0]))
    assert np.array_equal(n, [0.0, 1.0, 0.0])
    assert np.allclose(np.outer(b, n), np.outer([1, 2, 3], [0, -2, 0]), atol=1e-15)
    b, n = gauge_normal(np.ones(3), np.array([1e-13, -1.0, 1.0]))
    assert n[1] > 0


def test_compound_counterparts(U, group):
    assert compound_counterparts(3, 6, group, U) == (4, 5)
    with pytest.raises(ValueError):
        compound_counterparts(3, 3, group, U)
    with pytest.raises(NoCounterpart):
        compound_counterparts(3, 4, group, U)


def test_align_compound_normals(U):
    aa = solve_twin(U[3], U[4], 3, 4)
    bb = solve_twin(U[6], U[5], 6, 5)
    s, t = align_compound_normals(aa, bb)
    assert np.max(np.abs(s.n - t.n)) <= 1e-12
    # exactly one of the four combinations shares a normal
    hits = [np.max(np.abs(x.n - y.n)) <= 1e-12 for x, y in itertools.product(aa, bb)]
    assert sum(hits) == 1
    with pytest.raises(NoSharedNormal):
        align_compound_normals(aa, solve_twin(U[3], U[6]))


def test_shared_normal_orthogonal_to_type2_shear(U):
    aa = solve_twin(U[3], U[4], 3, 4)
    bb = solve_twin(U[6], U[5], 6, 5)
    s, _ = align_compound_normals(aa, bb)
    b_ab = pick(solve_twin(U[3], U[6], 3, 6), TwinType.TYPE_II).b
    assert np.allclose(s.n, [0, 0, 1], atol=1e-12)
    assert abs(np.linalg.solve(U[3], s.n) @ b_ab) <= 1e-13


def test_pick_raises():
    sols = solve_twin(np.diag([1.1, 0.9, 1.0]), np.diag([0.9, 1.1, 1.0]))
    with pytest.raises(NoTwin):
        pick(sols, TwinType.TYPE_I)
