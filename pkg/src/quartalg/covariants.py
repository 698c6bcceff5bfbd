"""The cubic net a -> a^2 x a and the quartic it determines.

The identification of the second exterior power with the dual space is
<psi(a), b> = det[a^2 | a | b], so psi(a) is the cross product a^2 x a.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import PAIRS, Algebra, multiply, normalization_factor, normalize_vector
from .errors import DegenerateError, InconsistentSystemError
from .forms import (
    TernaryForm,
    complex_list,
    divide_linear,
    jacobian_det,
    monomials,
    mul,
    linear_substitution,
    parse_complex_list,
    powers,
    pullback,
)

NULLSPACE_RATIO = 1e-6
RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CubicNet:
    G: tuple[TernaryForm, TernaryForm, TernaryForm]

    def __iter__(self):
        return iter(self.G)

    def __call__(self, a) -> np.ndarray:
        return np.array([g(a) for g in self.G])

    def scale(self) -> float:
        return max(g.max_coeff() for g in self.G)

    def scaled(self) -> CubicNet:
        s = self.scale()
        return self if s == 0 else CubicNet(tuple(g / s for g in self.G))

    def combine(self, w) -> TernaryForm:
        """The cubic a -> <psi(a), w>."""
        w = np.asarray(w, dtype=complex)
        return sum((g * w[k] for k, g in enumerate(self.G[1:], start=1)), self.G[0] * w[0])


def _square_forms(alg: Algebra) -> list[TernaryForm]:
    out = []
    for i in range(3):
        coeffs = [alg.c[i, j, k] * (1 if j == k else 2) for (j, k) in PAIRS]
        out.append(TernaryForm(2, coeffs))
    return out


def psi_net(alg: Algebra) -> CubicNet:
    S = _square_forms(alg)
    A = [TernaryForm.linear(np.eye(3)[i]) for i in range(3)]
    G = (
        mul(S[1], A[2]) - mul(S[2], A[1]),
        mul(S[2], A[0]) - mul(S[0], A[2]),
        mul(S[0], A[1]) - mul(S[1], A[0]),
    )
    return CubicNet(G)


def covariant_cubic_Qi(alg: Algebra, a_i) -> TernaryForm:
    """Q_i(a) = det[a^2 | a | a_i]."""
    return psi_net(alg).combine(a_i)


def covariant_cubic_Qij(alg: Algebra, a_i, a_j) -> TernaryForm:
    """Q_ij(a) = det[a^2 | a | (a_i - a_j)^2]."""
    d = np.asarray(a_i, dtype=complex) - np.asarray(a_j, dtype=complex)
    return psi_net(alg).combine(multiply(alg, d, d))


def split_Qij(alg: Algebra, a_i, a_j) -> tuple[TernaryForm, TernaryForm, np.ndarray]:
    """Divide Q_ij by the line through a_i, a_j.

    Returns the quotient conic, the remainder (both relative to a unit-scale
    Q_ij) and the normalized line covector a_i x a_j.
    """
    Q = covariant_cubic_Qij(alg, a_i, a_j).scaled()
    ell = np.cross(np.asarray(a_i, dtype=complex), np.asarray(a_j, dtype=complex))
    ell = ell / np.max(np.abs(ell))
    quo, rem = divide_linear(Q, ell)
    return quo, rem, ell


def jacobian_curve(alg: Algebra) -> TernaryForm:
    return jacobian_det(psi_net(alg).G)


@dataclass(frozen=True, eq=False)
class QuarticCurve:
    """A quartic in the dual coordinates together with its relation constant.

    ``form`` satisfies ``form(G/scale_G) = lam * (J/scale_J)^2`` where G is the
    cubic net and J its Jacobian sextic.
    """

    form: TernaryForm
    lam: complex
    scale_G: float = 1.0
    scale_J: float = 1.0
    residual: float = float("nan")
    singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def raw_lambda(self) -> complex:
        """Relation constant for the unscaled identity form(G) = c J^2."""
        return self.lam * self.scale_G**4 / self.scale_J**2

    def to_json(self) -> dict:
        return {
            "degree": 4,
            "coeffs": complex_list(self.form.coeffs),
            "lambda": complex_list([self.lam])[0],
            "scale_G": float(self.scale_G),
            "scale_J": float(self.scale_J),
            "residual": float(self.residual),
        }

    @classmethod
    def from_json(cls, data: dict) -> QuarticCurve:
        coeffs = parse_complex_list(data["coeffs"])
        lam = complex(*data.get("lambda", [1.0, 0.0]))
        return cls(
            TernaryForm(4, coeffs),
            lam,
            float(data.get("scale_G", 1.0)),
            float(data.get("scale_J", 1.0)),
            float(data.get("residual", float("nan"))),
        )


def gamma_system(net: CubicNet, J: TernaryForm) -> np.ndarray:
    """91 x 16 matrix of (f, lam) -> coefficients of f(G) - lam J^2."""
    pw = [powers(g, 4) for g in net.G]
    cols = []
    for a, b, c in monomials(4):
        cols.append(mul(mul(pw[0][a], pw[1][b]), pw[2][c]).coeffs)
    cols.append(-mul(J, J).coeffs)
    return np.column_stack(cols)


def gamma_residual(form: TernaryForm, lam: complex, net: CubicNet, J: TernaryForm) -> float:
    lhs = pullback(form, net.G).coeffs
    rhs = lam * mul(J, J).coeffs
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)))
    return float(np.max(np.abs(lhs - rhs)) / scale) if scale > 0 else float("inf")


def recover_quartic(alg: Algebra) -> QuarticCurve:
    """Solve form(G) = lam J^2 for the quartic and the relation constant."""
    net = psi_net(alg)
    scale_G = net.scale()
    if scale_G == 0:
        raise DegenerateError("degenerate algebra")
    J = jacobian_det(net.G)
    scale_J = J.max_coeff()
    if scale_J == 0:
        raise DegenerateError("degenerate algebra")
    netn = net.scaled()
    Jn = J / scale_J
    A = gamma_system(netn, Jn)
    # equilibrate columns; badly conditioned coordinates spread the coefficient sizes
    D = np.linalg.norm(A, axis=0)
    if np.any(D == 0):
        raise DegenerateError("degenerate algebra")
    _, s, vh = np.linalg.svd(A / D)
    if s[-2] < RANK_TOL * s[0]:
        raise DegenerateError("degenerate algebra")
    if s[-1] / s[-2] >= NULLSPACE_RATIO:
        raise InconsistentSystemError("inconsistent system")
    null = vh[-1].conj() / D
    kappa = normalization_factor(null[:15])
    form = TernaryForm(4, normalize_vector(null[:15]))
    lam = complex(null[15] * kappa)
    if lam == 0 or form.is_zero():
        raise DegenerateError("degenerate algebra")
    return QuarticCurve(
        form,
        lam,
        scale_G,
        scale_J,
        gamma_residual(form, lam, netn, Jn),
        s / s[0],
    )


def transport_quartic(form: TernaryForm, g) -> TernaryForm:
    """The quartic of act(g, alg) given that of alg: xi -> form(g^T xi)."""
    return linear_substitution(form, np.asarray(g, dtype=complex).T)
