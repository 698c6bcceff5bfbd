"""Full verification report for one algebra."""
from __future__ import annotations

import itertools

import numpy as np

from .algebra import Algebra
from .config import DEFAULT, RunConfig
from .covariants import covariant_cubic_Qi, recover_quartic, split_Qij
from .forms import evaluate, gradient
from .idempotents import IdempotentSet, genericity_report, solve_idempotents
from .quartic_geometry import verify_double_cover
from .reconstruct import roundtrip_check

CUBIC_TOL = 1e-8
QUARTIC_TOL = 1e-8
ROUNDTRIP_TOL = 1e-6


def _unit(p) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    return p / np.linalg.norm(p)


def node_cubic_checks(alg: Algebra, X: IdempotentSet) -> dict:
    """Each Q_i passes through all seven points and is singular at a_i."""
    vanish, grad_norm = 0.0, 0.0
    for a in X.points:
        Q = covariant_cubic_Qi(alg, a).scaled()
        vanish = max(vanish, max(abs(evaluate(Q, _unit(p))) for p in X.points))
        grad = np.array([evaluate(g, _unit(a)) for g in gradient(Q)])
        grad_norm = max(grad_norm, float(np.linalg.norm(grad)))
    return {
        "max_vanishing": vanish,
        "max_gradient_at_node": grad_norm,
        "pass": bool(vanish < CUBIC_TOL and grad_norm < CUBIC_TOL),
    }


def secant_cubic_checks(alg: Algebra, X: IdempotentSet) -> dict:
    """Each Q_ij splits as the line through a_i, a_j times a conic through the other five."""
    reps = X.representatives
    worst_rem, worst_conic = 0.0, 0.0
    for i, j in itertools.combinations(range(len(reps)), 2):
        conic, rem, _ = split_Qij(alg, reps[i], reps[j])
        worst_rem = max(worst_rem, rem.max_coeff())
        conic = conic.scaled()
        others = [X.points[k] for k in range(len(reps)) if k not in (i, j)]
        worst_conic = max(worst_conic, max(abs(evaluate(conic, _unit(p))) for p in others))
    return {
        "pairs": len(reps) * (len(reps) - 1) // 2,
        "max_remainder": worst_rem,
        "max_conic_vanishing": worst_conic,
        "pass": bool(worst_rem < CUBIC_TOL and worst_conic < CUBIC_TOL),
    }


def full_report(alg: Algebra, cfg: RunConfig = DEFAULT) -> dict:
    """Run every check; sections after a failed precondition are marked skipped."""
    report: dict = {"pass": False}
    X = solve_idempotents(alg, cfg)
    report["idempotents"] = X.to_json()
    gen = genericity_report(alg, X)
    report["genericity"] = gen.to_json()
    if not gen.is_A0doubleprime:
        report["skipped"] = "algebra is not in general position"
        return report
    report["node_cubics"] = node_cubic_checks(alg, X)
    report["secant_cubics"] = secant_cubic_checks(alg, X)
    quartic = recover_quartic(alg)
    report["quartic"] = {
        **quartic.to_json(),
        "nonzero": not quartic.form.is_zero(),
        "lambda_nonzero": quartic.lam != 0,
        "pass": bool(quartic.residual < QUARTIC_TOL and quartic.lam != 0),
    }
    report["double_cover"] = verify_double_cover(alg, cfg, X=X, quartic=quartic)
    rt = roundtrip_check(alg, cfg)
    report["roundtrip"] = {
        "algebra_distance": rt["algebra_distance"],
        "idempotent_hausdorff": rt["idempotent_hausdorff"],
        "pass": bool(rt["algebra_distance"] < ROUNDTRIP_TOL),
    }
    report["pass"] = all(
        report[k]["pass"] for k in ("node_cubics", "secant_cubics", "quartic", "double_cover", "roundtrip")
    )
    return report
