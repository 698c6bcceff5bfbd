import numpy as np
import pytest

from quartalg.algebra import random_traceless
from quartalg.forms import TernaryForm, n_monomials

THETA = np.exp(2j * np.pi / 7)


def eta0_orbit():
    return [np.array([t, t**2, t**4]) for t in THETA ** np.arange(7)]


def random_form(rng, d):
    n = n_monomials(d)
    return TernaryForm(d, rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_point(rng, n=3):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_sl3(rng):
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    return g / np.linalg.det(g) ** (1 / 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def random_algebras():
    return [random_traceless(s) for s in range(20)]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
