"""Trace-free commutative algebras on C^3 and the plane quartics they determine."""

from .algebra import Algebra, act, eta0, multiply, project_traceless, random_traceless, square, trace_form
from .config import RunConfig
from .covariants import QuarticCurve, psi_net, recover_quartic
from .forms import BinaryForm, TernaryForm, common_zeros, projective_distance
from .idempotents import IdempotentSet, genericity_report, solve_idempotents
from .quartic_geometry import bitangent_candidates, fiber_points, is_bitangent, smoothness_check, verify_double_cover, verify_theorem05
from .reconstruct import algebra_from_points, roundtrip_check

__all__ = [
    "Algebra",
    "BinaryForm",
    "IdempotentSet",
    "QuarticCurve",
    "RunConfig",
    "TernaryForm",
    "act",
    "algebra_from_points",
    "bitangent_candidates",
    "common_zeros",
    "eta0",
    "fiber_points",
    "genericity_report",
    "is_bitangent",
    "multiply",
    "project_traceless",
    "projective_distance",
    "psi_net",
    "random_traceless",
    "recover_quartic",
    "roundtrip_check",
    "smoothness_check",
    "solve_idempotents",
    "square",
    "trace_form",
    "verify_double_cover",
    "verify_theorem05",
]
