"""Commutative products on C^3 and their trace-free subspace.

An algebra is stored by structure constants ``c[i, j, k]`` (0-based) with
``(a * b)_i = sum_{j,k} c[i, j, k] a_j b_k`` and ``c[i, j, k] == c[i, k, j]``.
The same data can be written as a tensor in C^3 (x) S^2(C^3)^*, i.e. a
3 x 6 array of quadratic-form coefficients in the monomial order
x1^2, x1x2, x1x3, x2^2, x2x3, x3^2. The two pictures are related through
the Delta^2 contraction implemented in :func:`mu_apply`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .forms import TernaryForm, complex_list, diff, monomials, mul, parse_complex_list

# (j, k) index pairs of the six quadratic monomials, j <= k
PAIRS = [tuple(int(v) for v in np.repeat(np.arange(3), e)) for e in monomials(2)]
TRACE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Algebra:
    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=complex)
        if c.shape != (3, 3, 3):
            raise ValueError(f"structure constants must have shape (3, 3, 3), got {c.shape}")
        asym = np.max(np.abs(c - c.transpose(0, 2, 1)))
        if asym > 1e-12 * max(1.0, np.max(np.abs(c))):
            raise ValueError(f"structure constants are not symmetric (defect {asym:.3g})")
        c = 0.5 * (c + c.transpose(0, 2, 1))
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_independent(cls, v) -> Algebra:
        """Build from the 3 x 6 array of constants c[i, j, k], j <= k."""
        v = np.asarray(v, dtype=complex).reshape(3, 6)
        c = np.zeros((3, 3, 3), dtype=complex)
        for m, (j, k) in enumerate(PAIRS):
            c[:, j, k] = v[:, m]
            c[:, k, j] = v[:, m]
        return cls(c)

    def independent(self) -> np.ndarray:
        return np.array([[self.c[i, j, k] for (j, k) in PAIRS] for i in range(3)])

    def vector(self) -> np.ndarray:
        """The 18 independent constants as a flat vector (row-major over i)."""
        return self.independent().reshape(-1)

    @property
    def is_traceless(self) -> bool:
        return bool(np.max(np.abs(trace_form(self))) <= TRACE_TOL * max(1.0, np.max(np.abs(self.c))))

    def __mul__(self, scalar) -> Algebra:
        return Algebra(self.c * complex(scalar))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        nested = [[complex_list(self.c[i, j]) for j in range(3)] for i in range(3)]
        return {"c": nested, "traceless": self.is_traceless}

    @classmethod
    def from_json(cls, data: dict) -> Algebra:
        try:
            arr = np.asarray(data["c"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed algebra JSON: {exc}") from exc
        if arr.shape != (3, 3, 3, 2):
            raise InputError(f"algebra 'c' must be 3x3x3 [re, im] pairs, got shape {arr.shape}")
        c = arr[..., 0] + 1j * arr[..., 1]
        try:
            alg = cls(c)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if data.get("traceless") and not alg.is_traceless:
            raise InputError("algebra marked traceless has nonzero trace")
        return alg


def multiply(alg: Algebra, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    # complex products may round asymmetrically, so fix the argument order
    if a.tobytes() > b.tobytes():
        a, b = b, a
    M = np.outer(a, b)
    return 0.5 * np.einsum("ijk,jk->i", alg.c, M + M.T)


def square(alg: Algebra, a) -> np.ndarray:
    return multiply(alg, a, a)


def trace_form(alg: Algebra) -> np.ndarray:
    return np.einsum("iik->k", alg.c)


def project_traceless(alg: Algebra) -> Algebra:
    T = trace_form(alg)
    d = np.eye(3)
    corr = 0.25 * (np.einsum("ij,k->ijk", d, T) + np.einsum("ik,j->ijk", d, T))
    return Algebra(alg.c - corr)


def trace_matrix() -> np.ndarray:
    """The 3 x 18 matrix sending independent constants to the trace covector."""
    rows = np.zeros((3, 18))
    for i in range(3):
        for m, (j, k) in enumerate(PAIRS):
            col = 6 * i + m
            # c[i, i, k] appears as the independent entry for the pair (i, k)
            if j == i:
                rows[k, col] += 1
            if k == i and j != k:
                rows[j, col] += 1
    return rows


def eta0() -> Algebra:
    """e1^2 = e2, e2^2 = e3, e3^2 = e1, and all mixed products vanish."""
    c = np.zeros((3, 3, 3), dtype=complex)
    c[1, 0, 0] = 1
    c[2, 1, 1] = 1
    c[0, 2, 2] = 1
    return Algebra(c)


def eta0_tensor() -> np.ndarray:
    """The V(1,2) tensor (1/4)(e1 x3^2 + e2 x1^2 + e3 x2^2)."""
    t = np.zeros((3, 6), dtype=complex)
    t[0, 5] = 0.25
    t[1, 0] = 0.25
    t[2, 3] = 0.25
    return t


def random_traceless(seed: int, real: bool = False) -> Algebra:
    """Standard complex Gaussian constants (real Gaussian with ``real``), made trace-free."""
    rng = np.random.default_rng(seed)
    if real:
        v = rng.standard_normal((3, 6))
    else:
        v = (rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))) / np.sqrt(2)
    return project_traceless(Algebra.from_independent(v))


def act(g, alg: Algebra) -> Algebra:
    """Transport the product along g in SL_3: (g.alg)(g a, g b) = g (a * b)."""
    g = np.asarray(g, dtype=complex)
    if abs(np.linalg.det(g) - 1) > 1e-10:
        raise ValueError("group element must have determinant 1")
    gi = np.linalg.inv(g)
    return Algebra(np.einsum("ip,pqr,qj,rk->ijk", g, alg.c, gi, gi))


# -- the V(1,2) picture ---------------------------------------------------


def v12_trace(t) -> np.ndarray:
    """Delta-contraction of e_i (x) t_i(x): sum_i d t_i / d x_i."""
    t = np.asarray(t, dtype=complex).reshape(3, 6)
    out = np.zeros(3, dtype=complex)
    for i in range(3):
        out += diff(TernaryForm(2, t[i]), i).coeffs
    return out


def mu_apply(t, a, b) -> np.ndarray:
    """Delta^2 (sum_i e_i a b (x) t_i) with Delta = sum_m d/de_m (x) d/dx_m."""
    t = np.asarray(t, dtype=complex).reshape(3, 6)
    A = TernaryForm.linear(a)
    B = TernaryForm.linear(b)
    AB = mul(A, B)
    out = np.zeros(3, dtype=complex)
    for i in range(3):
        if not np.any(t[i]):
            continue
        cubic = mul(TernaryForm.linear(np.eye(3)[i]), AB)
        quad = TernaryForm(2, t[i])
        for m in range(3):
            for n in range(3):
                weight = diff(diff(quad, m), n).coeffs[0]
                if weight != 0:
                    out += weight * diff(diff(cubic, m), n).coeffs
    return out


def algebra_from_v12(t) -> Algebra:
    t = np.asarray(t, dtype=complex).reshape(3, 6)
    v = np.empty((3, 6), dtype=complex)
    for m, (j, k) in enumerate(PAIRS):
        v[:, m] = (4.0 if j == k else 2.0) * t[:, m]
    return Algebra.from_independent(v)


def v12_from_algebra(alg: Algebra) -> np.ndarray:
    if not alg.is_traceless:
        raise ValueError("algebra is not trace-free")
    v = alg.independent()
    t = np.empty((3, 6), dtype=complex)
    for m, (j, k) in enumerate(PAIRS):
        t[:, m] = v[:, m] / (4.0 if j == k else 2.0)
    return t


def _pivot(v, rel: float) -> int:
    top = np.max(np.abs(v))
    if top == 0:
        raise ValueError("cannot normalize the zero vector")
    return int(np.nonzero(np.abs(v) > rel * top)[0][0])


def normalization_factor(v, rel: float = 1e-8) -> complex:
    """Scalar making max modulus 1 and the first non-negligible entry real positive."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    first = v[_pivot(v, rel)]
    return (abs(first) / first) / np.max(np.abs(v))


def normalize_vector(v, rel: float = 1e-8) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    out = v * normalization_factor(v, rel)
    i = _pivot(v, rel)
    out[i] = out[i].real  # exactly real, free of rounding in the phase
    return out


def normalized(alg: Algebra) -> Algebra:
    return Algebra.from_independent(normalize_vector(alg.vector()).reshape(3, 6))
