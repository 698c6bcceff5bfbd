import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import null_space

from conftest import THETA, random_point, random_sl3
from quartalg.algebra import (
    Algebra,
    act,
    algebra_from_v12,
    eta0,
    eta0_tensor,
    multiply,
    mu_apply,
    project_traceless,
    random_traceless,
    square,
    trace_form,
    trace_matrix,
    v12_from_algebra,
)
from quartalg.errors import InputError

seeds = st.integers(0, 2**32 - 1)
prop = settings(max_examples=30, deadline=None)
E = np.eye(3)


def random_general(rng):
    v = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
    return Algebra.from_independent(v)


def cyclic():
    return E[:, [2, 0, 1]]  # e1 -> e2 -> e3 -> e1


# -- multiply / eta0 ------------------------------------------------------


def test_eta0_table():
    alg = eta0()
    expected = {(0, 0): E[1], (1, 1): E[2], (2, 2): E[0]}
    for i in range(3):
        for j in range(3):
            want = expected.get((i, j), np.zeros(3))
            np.testing.assert_array_equal(multiply(alg, E[i], E[j]), want)


def test_eta0_orbit_is_fixed_by_squaring():
    for t in THETA ** np.arange(7):
        a = np.array([t, t**2, t**4])
        np.testing.assert_allclose(square(eta0(), a), a, atol=1e-14)


@prop
@given(seeds)
def test_multiply_exactly_commutative_and_bilinear(seed):
    rng = np.random.default_rng(seed)
    alg = random_general(rng)
    a, b = random_point(rng), random_point(rng)
    assert np.array_equal(multiply(alg, a, b), multiply(alg, b, a))
    np.testing.assert_allclose(multiply(alg, 2 * a, b), 2 * multiply(alg, a, b), rtol=1e-14)


def test_symmetry_enforced():
    c = np.zeros((3, 3, 3))
    c[0, 0, 1] = 1
    with pytest.raises(ValueError):
        Algebra(c)
    with pytest.raises(ValueError):
        Algebra(np.zeros((3, 3)))


# -- traces ---------------------------------------------------------------


def test_trace_examples():
    np.testing.assert_array_equal(trace_form(eta0()), 0)
    c = np.zeros((3, 3, 3))
    c[0, 0, 0] = 1
    np.testing.assert_array_equal(trace_form(Algebra(c)), [1, 0, 0])


def test_projection_example():
    c = np.zeros((3, 3, 3))
    c[0, 0, 0] = 1
    p = project_traceless(Algebra(c)).c
    assert p[0, 0, 0] == 0.5
    for i in (1, 2):
        assert p[i, i, 0] == p[i, 0, i] == -0.25
    np.testing.assert_array_equal(trace_form(project_traceless(Algebra(c))), 0)
    assert np.count_nonzero(p) == 5


def test_projection_fixes_eta0():
    np.testing.assert_array_equal(project_traceless(eta0()).c, eta0().c)


@prop
@given(seeds)
def test_projection_is_idempotent_and_traceless(seed):
    alg = random_general(np.random.default_rng(seed))
    p = project_traceless(alg)
    assert np.max(np.abs(trace_form(p))) < 1e-12
    np.testing.assert_allclose(project_traceless(p).c, p.c, atol=1e-14)


def test_traceless_space_is_15_dimensional():
    T = trace_matrix()
    assert T.shape == (3, 18)
    assert np.linalg.matrix_rank(T) == 3
    assert null_space(T).shape[1] == 15


def test_trace_matrix_agrees_with_trace_form(rng):
    alg = random_general(rng)
    np.testing.assert_allclose(trace_matrix() @ alg.vector(), trace_form(alg), atol=1e-13)


# -- random sampling ------------------------------------------------------


def test_random_traceless_deterministic():
    assert np.array_equal(random_traceless(5).c, random_traceless(5).c)
    assert np.max(np.abs(trace_form(random_traceless(5)))) < 1e-12


def test_random_seeds_differ():
    close = sum(np.max(np.abs(random_traceless(s).c - random_traceless(s + 1000).c)) <= 0.1 for s in range(100))
    assert close == 0


# -- group action ---------------------------------------------------------


def test_act_identity():
    alg = random_traceless(1)
    np.testing.assert_allclose(act(E, alg).c, alg.c, atol=1e-15)


def test_eta0_symmetries():
    torus = np.diag([THETA, THETA**2, THETA**4])
    np.testing.assert_allclose(act(torus, eta0()).c, eta0().c, atol=1e-12)
    np.testing.assert_allclose(act(cyclic(), eta0()).c, eta0().c, atol=1e-12)


def test_act_rejects_bad_determinant():
    with pytest.raises(ValueError):
        act(2 * E, eta0())


@prop
@given(seeds)
def test_act_transports_product(seed):
    rng = np.random.default_rng(seed)
    g = random_sl3(rng)
    alg = random_traceless(seed)
    a, b = random_point(rng), random_point(rng)
    lhs = multiply(act(g, alg), g @ a, g @ b)
    rhs = g @ multiply(alg, a, b)
    assert np.linalg.norm(lhs - rhs) < 1e-10 * np.linalg.norm(rhs)


@prop
@given(seeds)
def test_act_group_law(seed):
    rng = np.random.default_rng(seed)
    g, h = random_sl3(rng), random_sl3(rng)
    alg = random_traceless(seed)
    gh = g @ h
    gh = gh / np.linalg.det(gh) ** (1 / 3)
    a, b = act(gh, alg).c, act(g, act(h, alg)).c
    assert np.max(np.abs(a - b)) < 1e-10 * np.max(np.abs(a))


def test_act_preserves_tracelessness(rng):
    g = random_sl3(rng)
    alg = act(g, random_traceless(3))
    assert np.max(np.abs(trace_form(alg))) < 1e-10 * np.max(np.abs(alg.c))


# -- V(1,2) ---------------------------------------------------------------


def test_mu_examples():
    t = np.zeros((3, 6))
    t[1, 0] = 1  # e2 (x) x1^2
    np.testing.assert_array_equal(mu_apply(t, E[0], E[0]), [0, 4, 0])
    t = np.zeros((3, 6))
    t[0, 5] = 1  # e1 (x) x3^2
    np.testing.assert_array_equal(mu_apply(t, E[0], E[0]), [0, 0, 0])


def test_eta0_tensor_reproduces_table():
    t = eta0_tensor()
    for i in range(3):
        for j in range(3):
            np.testing.assert_allclose(mu_apply(t, E[i], E[j]), multiply(eta0(), E[i], E[j]), atol=1e-15)
    np.testing.assert_array_equal(algebra_from_v12(t).c, eta0().c)
    np.testing.assert_array_equal(v12_from_algebra(eta0()), t)


def test_zero_tensor_roundtrip():
    assert not np.any(algebra_from_v12(np.zeros((3, 6))).c)
    assert not np.any(v12_from_algebra(Algebra(np.zeros((3, 3, 3)))))


def test_v12_rejects_traced_algebra():
    c = np.zeros((3, 3, 3))
    c[0, 0, 0] = 1
    with pytest.raises(ValueError):
        v12_from_algebra(Algebra(c))


@prop
@given(seeds)
def test_v12_roundtrip_and_mu_consistency(seed):
    rng = np.random.default_rng(seed)
    alg = random_traceless(seed)
    t = v12_from_algebra(alg)
    np.testing.assert_allclose(algebra_from_v12(t).c, alg.c, atol=1e-14)
    for _ in range(20):
        a, b = random_point(rng), random_point(rng)
        want = multiply(alg, a, b)
        assert np.linalg.norm(mu_apply(t, a, b) - want) < 1e-10 * max(1.0, np.linalg.norm(want))


# -- serialization --------------------------------------------------------


def test_json_roundtrip():
    alg = random_traceless(2)
    data = json.loads(json.dumps(alg.to_json()))
    assert data["traceless"] is True
    assert np.array_equal(Algebra.from_json(data).c, alg.c)


def test_json_rejects_asymmetric():
    data = eta0().to_json()
    data["c"][0][0][1] = [0.5, 0.0]
    with pytest.raises(InputError):
        Algebra.from_json(data)
    with pytest.raises(InputError):
        Algebra.from_json({"c": [[1, 2]]})
