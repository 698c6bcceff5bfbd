import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import THETA, eta0_orbit, random_point, random_sl3
from quartalg.algebra import Algebra, act, eta0, random_traceless, square
from quartalg.covariants import (
    QuarticCurve,
    covariant_cubic_Qi,
    covariant_cubic_Qij,
    gamma_residual,
    jacobian_curve,
    psi_net,
    recover_quartic,
    split_Qij,
    transport_quartic,
)
from quartalg.errors import DegenerateError
from quartalg.forms import (
    TernaryForm,
    evaluate,
    gradient,
    linear_substitution,
    monomials,
    mul,
    projective_distance,
    restrict_to_line,
)
from quartalg.idempotents import solve_idempotents

GOLDEN = Path(__file__).parent / "golden" / "eta0_quartic.json"
E = np.eye(3)
prop = settings(max_examples=10, deadline=None)
seeds = st.integers(0, 2**32 - 1)


def unit(p):
    p = np.asarray(p, dtype=complex)
    return p / np.linalg.norm(p)


def klein_support():
    """Monomials of degree 4 fixed by xi -> (t xi1, t^2 xi2, t^4 xi3), t^7 = 1."""
    return {tuple(m) for m in monomials(4) if (m[0] + 2 * m[1] + 4 * m[2]) % 7 == 0}


# -- the cubic net --------------------------------------------------------


def test_psi_at_e1():
    np.testing.assert_array_equal(psi_net(eta0())(E[0]), [0, 0, -1])


@pytest.mark.parametrize("seed", range(5))
def test_syzygy(seed):
    G = psi_net(random_traceless(seed)).G
    total = sum((mul(TernaryForm.linear(E[i]), G[i]) for i in range(3)), TernaryForm.zero(4))
    assert total.max_coeff() < 1e-12 * max(g.max_coeff() for g in G)


def test_psi_matches_determinant(rng):
    alg = random_traceless(4)
    a = random_point(rng)
    want = [np.linalg.det(np.column_stack([square(alg, a), a, E[i]])) for i in range(3)]
    np.testing.assert_allclose(psi_net(alg)(a), want, rtol=1e-12)


def test_psi_vanishes_on_eta0_orbit():
    net = psi_net(eta0())
    for a in eta0_orbit():
        assert np.max(np.abs(net(a))) < 1e-10


# -- Q_i ------------------------------------------------------------------


def _eta0_reps():
    return eta0_orbit()


def test_Qi_on_eta0():
    orbit = eta0_orbit()
    for a in orbit:
        Q = covariant_cubic_Qi(eta0(), a).scaled()
        assert max(abs(evaluate(Q, unit(p))) for p in orbit) < 1e-9
        grad = [evaluate(g, unit(a)) for g in gradient(Q)]
        assert np.linalg.norm(grad) < 1e-8


def test_Qi_expansion_has_double_point(rng):
    alg = random_traceless(6)
    X = solve_idempotents(alg)
    for a in X.representatives:
        Q = covariant_cubic_Qi(alg, a).scaled()
        for _ in range(10):
            q = restrict_to_line(Q, unit(a), unit(random_point(rng)))
            # coeffs[j] multiplies s^(3-j) t^j: t^0 and t^1 terms
            assert abs(q.coeffs[0]) < 1e-9 and abs(q.coeffs[1]) < 1e-9
            assert q.max_coeff() > 1e-6


# -- Q_ij -----------------------------------------------------------------


def test_Qij_on_eta0():
    orbit = eta0_orbit()
    for i in range(7):
        for j in range(i + 1, 7):
            Q = covariant_cubic_Qij(eta0(), orbit[i], orbit[j]).scaled()
            assert max(abs(evaluate(Q, unit(p))) for p in orbit) < 1e-9
            on_line = restrict_to_line(Q, unit(orbit[i]), unit(orbit[j]))
            assert on_line.max_coeff() < 1e-9
            conic, rem, _ = split_Qij(eta0(), orbit[i], orbit[j])
            assert rem.max_coeff() < 1e-8
            others = [orbit[k] for k in range(7) if k not in (i, j)]
            assert max(abs(evaluate(conic.scaled(), unit(p))) for p in others) < 1e-8


# -- the Jacobian sextic --------------------------------------------------


def test_jacobian_eta0():
    J = jacobian_curve(eta0())
    assert J.degree == 6 and not J.is_zero()
    # report-only: values at the idempotents are finite numbers
    vals = [abs(evaluate(J.scaled(), unit(a))) for a in eta0_orbit()]
    assert all(np.isfinite(vals))


@prop
@given(seeds)
def test_jacobian_equivariance(seed):
    rng = np.random.default_rng(seed)
    g = random_sl3(rng)
    alg = random_traceless(seed % 1000)
    J = jacobian_curve(alg)
    Jg = linear_substitution(jacobian_curve(act(g, alg)), g)
    assert projective_distance(J.coeffs, Jg.coeffs) < 1e-8


# -- quartic recovery -----------------------------------------------------


def test_eta0_quartic_against_symmetry_oracle():
    q = recover_quartic(eta0())
    support = klein_support()
    assert support == {(3, 0, 1), (1, 3, 0), (0, 1, 3)}
    on = [c for m, c in zip(monomials(4), q.form.coeffs) if tuple(m) in support]
    off = [c for m, c in zip(monomials(4), q.form.coeffs) if tuple(m) not in support]
    assert max(abs(c) for c in off) < 1e-8
    assert max(abs(c / on[0] - 1) for c in on) < 1e-8
    assert q.lam != 0
    assert q.residual < 1e-8


def test_eta0_quartic_is_symmetric():
    f = recover_quartic(eta0()).form
    for g in (np.diag([THETA, THETA**2, THETA**4]), E[:, [2, 0, 1]]):
        np.testing.assert_allclose(transport_quartic(f, g).coeffs, f.coeffs, atol=1e-10)


def test_eta0_golden_fixture():
    golden = QuarticCurve.from_json(json.loads(GOLDEN.read_text()))
    q = recover_quartic(eta0())
    np.testing.assert_allclose(q.form.coeffs, golden.form.coeffs, atol=1e-12)
    assert abs(q.lam - golden.lam) < 1e-10 * abs(golden.lam)
    assert q.scale_G == pytest.approx(golden.scale_G) and q.scale_J == pytest.approx(golden.scale_J)


def test_quartic_normalization():
    for seed in range(3):
        c = recover_quartic(random_traceless(seed)).form.coeffs
        assert np.max(np.abs(c)) == pytest.approx(1.0, abs=1e-15)
        first = c[np.nonzero(np.abs(c) > 1e-8)[0][0]]
        assert first.imag == 0 and first.real > 0


def test_zero_algebra_is_degenerate():
    with pytest.raises(DegenerateError, match="degenerate algebra"):
        recover_quartic(Algebra(np.zeros((3, 3, 3))))


def test_random_algebras_satisfy_identity(random_algebras):
    for alg in random_algebras:
        q = recover_quartic(alg)
        assert not q.form.is_zero() and q.lam != 0
        assert q.residual < 1e-8
        assert q.singular_values[-1] / q.singular_values[-2] < 1e-6


def test_raw_identity_reconstructed():
    alg = random_traceless(8)
    q = recover_quartic(alg)
    net = psi_net(alg)
    J = jacobian_curve(alg)
    assert gamma_residual(q.form, q.raw_lambda, net, J) < 1e-8


@pytest.mark.parametrize("t", [3.0, -0.25j, 1e3 * np.exp(0.7j)])
def test_quartic_scale_invariant(t):
    alg = random_traceless(9)
    a, b = recover_quartic(alg).form, recover_quartic(t * alg).form
    assert projective_distance(a.coeffs, b.coeffs) < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_quartic_equivariance(seed):
    rng = np.random.default_rng(100 + seed)
    g = random_sl3(rng)
    alg = random_traceless(seed)
    moved = recover_quartic(act(g, alg)).form
    want = transport_quartic(recover_quartic(alg).form, g)
    assert projective_distance(moved.coeffs, want.coeffs) < 1e-6


def test_quartic_json_roundtrip():
    q = recover_quartic(random_traceless(1))
    data = json.loads(json.dumps(q.to_json()))
    assert set(data) >= {"degree", "coeffs", "lambda", "scale_G", "scale_J"}
    back = QuarticCurve.from_json(data)
    np.testing.assert_array_equal(back.form.coeffs, q.form.coeffs)
    assert back.lam == q.lam
