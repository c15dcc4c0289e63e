"""
数值引擎测试：刚性矩阵、精确秩、余核、应力与测量映射
"""

from fractions import Fraction

import numpy as np
import pytest

from constructions import base_graph
from errors import CokernelDimensionError, FrameworkInvariantError, PreconditionError
from graph import Graph, complete_graph, path_graph
from numeric import (
    Framework,
    Stress,
    as_exact_matrix,
    circle_point,
    coincident_framework,
    coincident_rank,
    cokernel,
    congruent,
    equilibrium_stress,
    equivalent,
    inverse_matrix,
    matrix_rank,
    measurement,
    random_framework,
    random_radii,
    rigidity_matrix,
    schur_rank_identity,
    stress_matrix_facts,
    stress_matrix_rank,
    to_float_framework,
    verify_stress,
    vfree_matrix,
    vr_equivalent,
    vr_matrix,
)
from scalars import QuadraticNumber

K5E = base_graph("K5-e")
BITS = 16


def rotate(framework: Framework, t: Fraction) -> Framework:
    c, s = circle_point(t)
    points = [(c * x - s * y, s * x + c * y, z) for x, y, z in framework.points]
    return framework.with_points(points)


def test_circle_point():
    assert circle_point(Fraction(0)) == (1, 0)
    assert circle_point(Fraction(1)) == (0, 1)
    assert circle_point(Fraction(1, 2)) == (Fraction(3, 5), Fraction(4, 5))
    assert circle_point(Fraction(1, 2), Fraction(2)) == (Fraction(6, 5), Fraction(8, 5))


def test_random_framework_is_exact_and_seeded():
    f1 = random_framework(K5E, 7, bits=BITS)
    f2 = random_framework(K5E, 7, bits=BITS)
    assert f1 == f2
    assert f1.points[0][2] != 0
    assert all(x * x + y * y == 1 for x, y, _ in f1.points)
    assert random_framework(K5E, 8, bits=BITS) != f1


def test_off_cylinder_point_rejected():
    with pytest.raises(FrameworkInvariantError):
        Framework(Graph(1), ((Fraction(1), Fraction(1), Fraction(0)),))
    with pytest.raises(FrameworkInvariantError):
        Framework(Graph(2), ((1, 0, 0),))


def test_matrix_rank_basics():
    assert matrix_rank(as_exact_matrix([[0] * 4] * 3)) == 0
    assert matrix_rank(as_exact_matrix(np.eye(5, dtype=int).tolist())) == 5
    rng = np.random.default_rng(1)
    extra_rows = [[Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 20))) for _ in range(4)] for _ in range(2)]
    extra_cols = [[Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 20))) for _ in range(5)] for _ in range(4)]
    left = as_exact_matrix(np.eye(4, dtype=int).tolist() + extra_rows)
    right = as_exact_matrix([np.eye(4, dtype=int).tolist()[i] + extra_cols[i] for i in range(4)])
    product = np.dot(left, right)
    assert product.shape == (6, 9)
    assert matrix_rank(product) == 4
    assert matrix_rank(product.astype(float)) == 4


def test_quadratic_rank():
    s = QuadraticNumber(0, 1)
    m = as_exact_matrix([[1, s], [s, 2]])
    assert matrix_rank(m) == 1
    m[1, 1] = QuadraticNumber(3)
    assert matrix_rank(m) == 2


def test_kernel_contains_trivial_motions():
    for seed in range(3):
        f = random_framework(K5E, seed, bits=BITS)
        r = rigidity_matrix(f)
        rotation = [c for x, y, _ in f.points for c in (-y, x, 0)]
        translation = [c for _ in f.points for c in (0, 0, 1)]
        assert not any(np.dot(r, np.array(rotation, dtype=object)))
        assert not any(np.dot(r, np.array(translation, dtype=object)))
        assert matrix_rank(r) <= 3 * f.n - 2


def test_cokernel():
    assert cokernel(as_exact_matrix(np.eye(3, dtype=int).tolist())) == []
    f = random_framework(K5E, 3, bits=BITS)
    r = rigidity_matrix(f)
    basis = cokernel(r)
    assert len(basis) == r.shape[0] - matrix_rank(r) == 1


def test_circuit_stress_has_maximum_rank():
    f = random_framework(K5E, 11, bits=BITS)
    assert matrix_rank(rigidity_matrix(f)) == 13
    stress = equilibrium_stress(f)
    assert stress.omega[0] == 1
    assert verify_stress(f, stress).valid
    assert all(w != 0 for w in stress.omega)
    rank, matrix = stress_matrix_rank(stress, f)
    assert rank == 9
    assert all(stress_matrix_facts(matrix, f).values())


def test_independent_graph_has_no_stress():
    f = random_framework(complete_graph(4), 2, bits=BITS)
    with pytest.raises(CokernelDimensionError) as info:
        equilibrium_stress(f)
    assert info.value.dimension == 0


def test_verify_stress_detects_perturbation():
    f = random_framework(K5E, 5, bits=BITS)
    zero = Stress(tuple(Fraction(0) for _ in K5E.edges), tuple(Fraction(0) for _ in range(5)))
    assert verify_stress(f, zero).valid
    stress = equilibrium_stress(f)
    bumped = Stress((stress.omega[0] + 1,) + stress.omega[1:], stress.lam)
    report = verify_stress(f, bumped)
    assert not report.valid
    assert report.max_abs > 0


def test_stress_is_projectively_unique():
    f = random_framework(K5E, 5, bits=BITS)
    stress = equilibrium_stress(f)
    assert stress.scaled(Fraction(-7, 3)).proportional_to(stress)
    other = equilibrium_stress(random_framework(K5E, 6, bits=BITS))
    assert not other.proportional_to(stress)


def test_vfree_matrix():
    for v in range(5):
        assert matrix_rank(vfree_matrix(random_framework(K5E, 4, bits=BITS), v)) == 13
    g = K5E.add_vertex([0, 1])
    f = random_framework(g, 9, bits=BITS)
    assert matrix_rank(vfree_matrix(f, 5)) < 3 * 6 - 2
    assert matrix_rank(vfree_matrix(f, 0)) == 3 * 6 - 2
    with pytest.raises(PreconditionError):
        vfree_matrix(f, 6)


def test_vr_matrix():
    k3 = complete_graph(3)
    f = random_framework(k3, 1, bits=BITS)
    r = vr_matrix(f)
    assert r.shape == (3 + 2 * 3 - 1, 9)
    assert matrix_rank(r) == 8
    for row in range(k3.m):
        assert matrix_rank(np.delete(r, row, axis=0)) < 8
    tree = random_framework(path_graph(3), 1, bits=BITS)
    assert matrix_rank(vr_matrix(tree)) < 8
    flat = f.with_points([(x, y, Fraction(0)) if i == 0 else (x, y, z) for i, (x, y, z) in enumerate(f.points)])
    with pytest.raises(PreconditionError):
        vr_matrix(flat)


def test_measurement_invariance():
    f = random_framework(K5E, 21, bits=BITS)
    turned = rotate(f, Fraction(2, 7))
    assert measurement(turned) == measurement(f)
    assert equivalent(f, turned)
    assert vr_equivalent(f, turned)
    assert congruent(f, turned)
    mirrored = f.with_points([(x, y, -z) for x, y, z in f.points])
    assert measurement(mirrored) == measurement(f)


def test_measurement_detects_reembedding():
    g = path_graph(4)
    f = random_framework(g, 1, bits=BITS)
    h = random_framework(g, 2, bits=BITS)
    assert measurement(f).lengths != measurement(h).lengths
    assert not equivalent(f, h)


def test_coincident_rigidity():
    k5 = complete_graph(5)
    # K5 − uv 与 K5/uv = K4 都刚性
    assert coincident_rank(k5, 0, 1, seed=3, bits=BITS) == 13
    # K5−e 收缩一条边得到 K4 − e，不刚性
    assert coincident_rank(K5E, 0, 1, seed=3, bits=BITS) < 13
    f = coincident_framework(random_framework(K5E, 3, bits=BITS), 0, 1)
    assert f.points[0] == f.points[1]
    assert not any(rigidity_matrix(f)[K5E.edges.index((0, 1))])
    with pytest.raises(PreconditionError):
        coincident_framework(f, 2, 2)


def test_schur_rank_identity():
    block = as_exact_matrix([[1, 2, 0, 0], [3, 4, 0, 0], [0, 0, 1, 1], [0, 0, 2, 2]])
    report = schur_rank_identity(block, 2)
    assert report.holds and report.rank_m == 3 and report.rank_f == 1

    rng = np.random.default_rng(4)
    m = as_exact_matrix([[Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(6)]
                         for _ in range(6)])
    m[0, 0], m[0, 1], m[1, 0], m[1, 1] = Fraction(2), Fraction(1), Fraction(1), Fraction(1)
    assert schur_rank_identity(m, 2).holds
    assert schur_rank_identity(m, (2, 4)) == schur_rank_identity(m, 2)
    with pytest.raises(PreconditionError):
        schur_rank_identity(m, (2, 3))

    singular = as_exact_matrix([[1, 2, 5], [2, 4, 6], [1, 1, 1]])
    with pytest.raises(PreconditionError):
        schur_rank_identity(singular, 2)


def test_inverse_matrix():
    m = as_exact_matrix([[2, 1], [7, 4]])
    product = np.dot(m, inverse_matrix(m))
    assert product.tolist() == [[1, 0], [0, 1]]


def test_framework_json_round_trip():
    f = random_framework(K5E, 2, bits=BITS, scalar="quadratic")
    assert Framework.from_dict(f.to_dict()) == f
    g = random_framework(K5E, 2, bits=BITS)
    assert Framework.from_dict(g.to_dict()) == g


def test_float_rank_matches_exact():
    for seed in range(4):
        f = random_framework(K5E.add_vertex([2, 3]), seed, bits=6)
        assert matrix_rank(rigidity_matrix(to_float_framework(f))) == matrix_rank(rigidity_matrix(f))


def test_concentric_cylinders():
    radii = random_radii(5, 3)
    assert len(set(radii)) == 5
    f = random_framework(K5E, 3, radii=radii, bits=BITS)
    assert all(x * x + y * y == r * r for (x, y, _), r in zip(f.points, radii))
    assert matrix_rank(rigidity_matrix(f)) == 13


def test_quadratic_scalar_agrees_with_rational():
    f = random_framework(K5E, 12, bits=BITS)
    q = random_framework(K5E, 12, bits=BITS, scalar="quadratic")
    assert q.scalar == "quadratic"
    assert matrix_rank(rigidity_matrix(q)) == matrix_rank(rigidity_matrix(f)) == 13
