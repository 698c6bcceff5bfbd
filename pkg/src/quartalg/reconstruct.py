"""Recover an algebra, up to scale, from its seven generalized idempotents."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .algebra import PAIRS, Algebra, normalized, trace_matrix
from .config import DEFAULT, RunConfig
from .errors import ComputationError, DegenerateError, InputError
from .forms import complex_list, hausdorff_distance, normalize_point, parse_complex_list, projective_distance
from .idempotents import GENERIC_TOL, configuration_checks, solve_idempotents

NULLSPACE_RATIO = 1e-6
RANK_TOL = 1e-10


class NoAlgebraError(ComputationError):
    pass


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    points: tuple[np.ndarray, ...]

    def __post_init__(self):
        pts = tuple(normalize_point(p) for p in self.points)
        if len(pts) != 7:
            raise InputError(f"need 7 points, got {len(pts)}")
        object.__setattr__(self, "points", pts)

    def checks(self) -> dict:
        out = configuration_checks(self.points, GENERIC_TOL)
        dmin = min(
            projective_distance(p, q) for i, p in enumerate(self.points) for q in self.points[i + 1 :]
        )
        out["distinct"] = dmin > 1e-8
        out["min_point_distance"] = dmin
        out["generic"] = out["distinct"] and out["no_three_collinear"] and out["no_six_on_conic"]
        return out

    def to_json(self) -> dict:
        return {"points": [complex_list(p) for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> PointConfiguration:
        try:
            pts = [parse_complex_list(p) for p in data["points"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed points JSON: {exc}") from exc
        if any(p.size != 3 for p in pts):
            raise InputError("each point needs three coordinates")
        try:
            return cls(tuple(pts))
        except ValueError as exc:
            raise InputError(str(exc)) from exc


def _product_matrix(p, q) -> np.ndarray:
    """3 x 18 matrix M with multiply(alg, p, q) = M @ alg.vector()."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    M = np.zeros((3, 18), dtype=complex)
    for i in range(3):
        for m, (j, k) in enumerate(PAIRS):
            M[i, 6 * i + m] = p[j] * q[k] if j == k else p[j] * q[k] + p[k] * q[j]
    return M


def _cross_matrix(p) -> np.ndarray:
    x, y, z = p
    return np.array([[0, -z, y], [z, 0, -x], [-y, x, 0]], dtype=complex)


def point_conditions(p) -> np.ndarray:
    """3 x 18 rows of the linear map alg -> square(alg, p) x p."""
    p = np.asarray(p, dtype=complex)
    p = p / np.linalg.norm(p)
    return -_cross_matrix(p) @ _product_matrix(p, p)


def tangent_conditions(p, v) -> np.ndarray:
    """Rows forcing the scheme to contain p with tangent direction v.

    Derivative of (p + t v)^2 x (p + t v) at t = 0; used together with
    :func:`point_conditions` to build algebras with a double idempotent.
    """
    p = np.asarray(p, dtype=complex)
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(p)
    p, v = p / n, v / np.linalg.norm(v)
    return -2 * _cross_matrix(p) @ _product_matrix(p, v) - _cross_matrix(v) @ _product_matrix(p, p)


def traceless_basis() -> np.ndarray:
    """Orthonormal 18 x 15 basis of the trace-free constants."""
    return null_space(trace_matrix())


def condition_matrix(points, tangents=()) -> np.ndarray:
    """Stacked conditions on the trace-free basis; ``tangents`` holds (p, v) pairs."""
    B = traceless_basis()
    rows = [point_conditions(p) @ B for p in points]
    rows += [tangent_conditions(p, v) @ B for p, v in tangents]
    return np.vstack(rows)


def block_singular_values(p) -> np.ndarray:
    return np.linalg.svd(point_conditions(p) @ traceless_basis(), compute_uv=False)


def solve_conditions(A: np.ndarray) -> tuple[Algebra, np.ndarray]:
    """Algebra spanning the 1-dimensional nullspace of a condition matrix on the trace-free basis."""
    _, s, vh = np.linalg.svd(A)
    if s[0] == 0 or s[-2] < RANK_TOL * s[0]:
        raise DegenerateError("non-generic configuration")
    if s[-1] / s[-2] >= NULLSPACE_RATIO:
        raise NoAlgebraError("no algebra")
    v = traceless_basis() @ vh[-1].conj()
    return normalized(Algebra.from_independent(v.reshape(3, 6))), s / s[0]


def algebra_from_points(cfg, check: bool = True) -> Algebra:
    if not isinstance(cfg, PointConfiguration):
        cfg = PointConfiguration(tuple(cfg))
    if check:
        report = cfg.checks()
        if not report["generic"]:
            raise DegenerateError(f"configuration not in general position: {report['witnesses'] or 'repeated points'}")
    alg, _ = solve_conditions(condition_matrix(cfg.points))
    return alg


def inversion_report(cfg, run: RunConfig = DEFAULT) -> dict:
    """Invert an arbitrary 7-point set and check how well the result reproduces it."""
    if not isinstance(cfg, PointConfiguration):
        cfg = PointConfiguration(tuple(cfg))
    alg, s = solve_conditions(condition_matrix(cfg.points))
    out = {
        "algebra": alg,
        "nullspace_ratio": float(s[-1] / s[-2]),
        "second_smallest": float(s[-2]),
        "forward_hausdorff": float("inf"),
    }
    try:
        X = solve_idempotents(alg, run)
    except ComputationError:
        return out
    out["forward_hausdorff"] = hausdorff_distance(X.points, cfg.points)
    return out


def algebra_with_double_point(points, p, v) -> Algebra:
    """Trace-free algebra whose idempotent scheme has simple points ``points``
    (five of them) and a double point at ``p`` tangent to ``v``."""
    alg, _ = solve_conditions(condition_matrix(list(points) + [p], [(p, v)]))
    return alg


def algebra_distance(a: Algebra, b: Algebra) -> float:
    return projective_distance(a.vector(), b.vector())


def roundtrip_check(alg: Algebra, cfg: RunConfig = DEFAULT) -> dict:
    X = solve_idempotents(alg, cfg)
    back = algebra_from_points(X.points)
    X2 = solve_idempotents(back, cfg)
    return {
        "algebra_distance": algebra_distance(alg, back),
        "idempotent_hausdorff": hausdorff_distance(X.points, X2.points),
        "algebra": back,
    }
