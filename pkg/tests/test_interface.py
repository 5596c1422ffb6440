import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from crosstwin.errors import IsRotation, NoClassical, NotInvertible
from crosstwin.interface import (classical_coefficients, classical_interface, laminate_gradient,
                                 rank_one_to_identity)
from crosstwin.twinning import TwinType, pick, solve_twin
from crosstwin.variants import LatticeParams, axis_angle_matrix, variant_map

LAMBDA_STAR = 0.30078170960805  # classical volume fraction, Type-II (3, 6) laminate


def is_habit(F, b, m, tol=1e-12):
    """1 + b (x) m must equal Q F for some rotation Q."""
    Q = (np.eye(3) + np.outer(b, m)) @ np.linalg.inv(F)
    return np.max(np.abs(Q.T @ Q - np.eye(3))) <= tol and np.linalg.det(Q) > 0


@pytest.fixture(scope="module")
def type2(U):
    return pick(solve_twin(U[3], U[6], 3, 6), TwinType.TYPE_II)


def test_diagonal_example():
    F = np.diag([0.96, 1.0, 1.05])
    sols = rank_one_to_identity(F)
    assert len(sols) == 2
    # closed form from the eigenvalues of F^T F: 0.9216, 1, 1.1025
    u, w = np.sqrt(1 - 0.96 ** 2), np.sqrt(1.05 ** 2 - 1)
    expected = np.array([u, 0.0, w]) / np.hypot(u, w)
    got = sorted((s.m for s in sols), key=lambda m: m[0])
    assert np.allclose(got[0], expected * [-1, 1, 1], atol=1e-12)
    assert np.allclose(got[1], expected, atol=1e-12)
    assert np.allclose(got[1], [0.6583, 0.0, 0.7528], atol=1e-4)
    for s in sols:
        assert is_habit(F, s.b, s.m)
        # in-plane vectors are not stretched
        v = np.cross(s.m, [0.0, 1.0, 0.0])
        assert abs(np.linalg.norm(F @ v) - np.linalg.norm(v)) <= 1e-12


def test_no_solution_returns_empty():
    assert rank_one_to_identity(np.diag([1.1, 1.2, 1.3])) == []


def test_rotation_and_reflection_rejected():
    with pytest.raises(IsRotation):
        rank_one_to_identity(axis_angle_matrix((0, 0, 1), 30))
    with pytest.raises(NotInvertible):
        rank_one_to_identity(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(NotInvertible):
        rank_one_to_identity(np.zeros((3, 3)))


def test_gauge_largest_component_positive():
    for s in rank_one_to_identity(np.diag([0.96, 1.0, 1.05])):
        assert s.m[np.argmax(np.abs(s.m))] > 0
        assert abs(np.linalg.norm(s.m) - 1) <= 1e-15


def test_rotation_invariance():
    F = np.diag([0.96, 1.0, 1.05])
    Q = axis_angle_matrix((1, 2, 3), 47)
    a = rank_one_to_identity(F)
    b = rank_one_to_identity(Q @ F)
    for s, t in zip(a, b):
        assert np.allclose(s.m, t.m, atol=1e-12)
        assert is_habit(Q @ F, t.b, t.m)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.8, 0.99), st.floats(1.01, 1.2), st.floats(0, 360), st.floats(0, 360))
def test_property_habit_reconstruction(l1, l3, t1, t2):
    Q1 = axis_angle_matrix((0.3, -1.0, 0.7), t1)
    Q2 = axis_angle_matrix((1.0, 0.2, 0.5), t2)
    F = Q1 @ np.diag([l1, 1.0, l3]) @ Q2
    sols = rank_one_to_identity(F)
    assert len(sols) == 2
    for s in sols:
        assert is_habit(F, s.b, s.m, tol=1e-11)


def test_classical_coefficients_match_determinant(U, type2):
    a0, a1 = classical_coefficients(U[3], type2)
    for lam in np.linspace(0, 1, 7):
        M = laminate_gradient(U[3], type2, lam)
        direct = np.linalg.det(M.T @ M - np.eye(3))
        assert abs(direct - (a0 + a1 * (lam * lam - lam))) <= 1e-15


def test_classical_lambda_star(U, type2):
    ci = classical_interface(U[3], type2)
    assert abs(ci.lambda_star - LAMBDA_STAR) <= 1e-12
    assert abs(ci.lambda_star ** 2 - ci.lambda_star + ci.a0 / ci.a1) <= 1e-15

    def f(lam):
        M = laminate_gradient(U[3], type2, lam)
        return np.linalg.det(M.T @ M - np.eye(3))

    assert abs(brentq(f, 1e-6, 0.5, xtol=1e-15) - ci.lambda_star) <= 1e-10
    assert abs(brentq(f, 0.5, 1 - 1e-6, xtol=1e-15) - (1 - ci.lambda_star)) <= 1e-10


def test_classical_middle_eigenvalue_and_normals(U, type2):
    ci = classical_interface(U[3], type2)
    assert len(ci.solutions) == 4
    assert [lam for lam, _ in ci.solutions][:2] == [ci.lambda_star] * 2
    for lam, s in ci.solutions:
        M = laminate_gradient(U[3], type2, lam)
        assert abs(np.linalg.eigvalsh(M.T @ M)[1] - 1) <= 1e-8
        assert is_habit(M, s.b, s.m)
    assert len(ci.normals()) == 4


def test_classical_symmetry_under_swap(U):
    # laminating (6, 3) instead of (3, 6) exchanges lambda and 1 - lambda
    t36 = pick(solve_twin(U[3], U[6], 3, 6), TwinType.TYPE_II)
    t63 = pick(solve_twin(U[6], U[3], 6, 3), TwinType.TYPE_II)
    a = classical_interface(U[3], t36)
    b = classical_interface(U[6], t63)
    assert abs(a.lambda_star - b.lambda_star) <= 1e-12


def test_no_classical_when_a0_vanishes():
    U = variant_map(LatticeParams(1.05, 1.0, 0.97))
    t = pick(solve_twin(U[3], U[6], 3, 6), TwinType.TYPE_II)
    a0, _ = classical_coefficients(U[3], t)
    assert a0 == 0.0
    with pytest.raises(NoClassical):
        classical_interface(U[3], t)


def test_no_classical_negative_discriminant(U, type2):
    # pretend the laminate is far stiffer: same shear on a larger well
    with pytest.raises(NoClassical):
        classical_interface(1.2 * U[3], type2)
