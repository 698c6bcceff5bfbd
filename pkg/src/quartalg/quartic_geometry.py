"""Bitangents, smoothness and the double cover of the dual plane."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .algebra import Algebra, multiply
from .config import DEFAULT, RunConfig
from .covariants import QuarticCurve, psi_net, recover_quartic
from .errors import CommonComponentError, ComputationError, DegenerateError
from .forms import (
    BinaryForm,
    TernaryForm,
    common_zeros,
    complex_list,
    gradient,
    normalize_point,
    point_sort_key,
    projective_distance,
    random_special_unitary,
    raw_roots,
    restrict_to_line,
)
from .idempotents import IdempotentSet, genericity_report, solve_idempotents

FIT_TOL = 1e-6
SMOOTH_TOL = 1e-7
COINCIDENCE_TOL = 1e-4
PSI_TOL = 1e-7


class NonReducedError(CommonComponentError):
    pass


class BaseLocusMismatch(ComputationError):
    pass


@dataclass(frozen=True, eq=False)
class DualLine:
    ell: np.ndarray
    label: str

    def to_json(self) -> dict:
        return {"label": self.label, "ell": complex_list(self.ell)}


@dataclass(eq=False)
class BitangencyCertificate:
    line: DualLine
    is_bitangent: bool
    pair_distance: float
    fit_residual: float
    tangency_points: list[np.ndarray] = field(default_factory=list)
    hyperflex: bool = False

    @property
    def residual(self) -> float:
        return max(self.pair_distance, self.fit_residual)

    def to_json(self) -> dict:
        return {
            "label": self.line.label,
            "is_bitangent": self.is_bitangent,
            "residual": self.residual,
            "pair_distance": self.pair_distance,
            "fit_residual": self.fit_residual,
            "hyperflex": self.hyperflex,
            "tangency_points": [complex_list(p) for p in self.tangency_points],
        }


def _form(f) -> TernaryForm:
    return f.form if isinstance(f, QuarticCurve) else f


# -- candidate lines ------------------------------------------------------


def bitangent_candidates(alg: Algebra, X: IdempotentSet, min_distance: float = 1e-8) -> list[DualLine]:
    reps = X.representatives
    if len(reps) != 7 or any(r is None for r in reps):
        raise DegenerateError("bitangent candidates need 7 idempotents with nonzero squares")
    lines = [DualLine(normalize_point(a), f"A_{i + 1}") for i, a in enumerate(reps)]
    scale = np.max(np.abs(alg.c))
    for i, j in itertools.combinations(range(7), 2):
        d = reps[i] - reps[j]
        w = multiply(alg, d, d)
        if np.linalg.norm(w) <= 1e-10 * scale * np.linalg.norm(d) ** 2:
            raise DegenerateError("degenerate pair line")
        lines.append(DualLine(normalize_point(w), f"A_{i + 1}{j + 1}"))
    for a, b in itertools.combinations(lines, 2):
        if projective_distance(a.ell, b.ell) <= min_distance:
            raise DegenerateError(f"candidate lines {a.label} and {b.label} coincide")
    return lines


def min_pairwise_distance(lines: list[DualLine]) -> float:
    return min(projective_distance(a.ell, b.ell) for a, b in itertools.combinations(lines, 2))


# -- bitangency -----------------------------------------------------------


def line_basis(ell) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal u, v spanning {xi : ell . xi = 0}."""
    N = null_space(np.asarray(ell, dtype=complex).reshape(1, 3))
    return N[:, 0], N[:, 1]


def _square_fit(q: BinaryForm, r0: np.ndarray, iters: int = 20) -> tuple[np.ndarray, float]:
    """Least-squares binary quadratic r with r^2 closest to q (relative residual)."""
    qn = np.asarray(q.coeffs) / q.max_coeff()
    r = np.asarray(r0, dtype=complex)
    r2 = np.convolve(r, r)
    kappa = np.vdot(r2, qn) / np.vdot(r2, r2)
    r = r * np.sqrt(kappa)
    err = np.linalg.norm(np.convolve(r, r) - qn)
    for _ in range(iters):
        # d(r^2) = 2 r * dr is complex-linear in dr
        J = np.column_stack([2 * np.convolve(r, e) for e in np.eye(3)])
        step = np.linalg.lstsq(J, qn - np.convolve(r, r), rcond=None)[0]
        cand = r + step
        ec = np.linalg.norm(np.convolve(cand, cand) - qn)
        if not ec < err:
            break
        r, err = cand, ec
    return r, float(err / np.linalg.norm(qn))


def is_bitangent(
    f, line: DualLine, tol_pair: float = DEFAULT.tol_pair, basis=None
) -> BitangencyCertificate:
    form = _form(f).scaled()
    u, v = basis if basis is not None else line_basis(line.ell)
    q = restrict_to_line(form, u, v)
    if q.max_coeff() <= 1e-12:
        raise DegenerateError("line is a component")
    roots = raw_roots(q)
    best = None
    for pairing in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        score = max(projective_distance(roots[a], roots[b]) for a, b in pairing)
        if best is None or score < best[0]:
            best = (score, pairing)
    score, pairing = best
    centers = []
    for a, b in pairing:
        ra, rb = roots[a], roots[b]
        i = int(np.argmax(np.abs(ra)))
        centers.append(normalize_point(0.5 * (ra / ra[i] + rb / rb[i])))
    # (t0 s - s0 t)(t1 s - s1 t) vanishes at both centers
    r0 = np.convolve([centers[0][1], -centers[0][0]], [centers[1][1], -centers[1][0]])
    _, fit = _square_fit(q, r0)
    points = [normalize_point(s * u + t * v) for s, t in centers]
    hyperflex = projective_distance(centers[0], centers[1]) < tol_pair
    if hyperflex:
        points = points[:1]
    return BitangencyCertificate(
        line,
        bool(score < tol_pair and fit < FIT_TOL),
        float(score),
        fit,
        points,
        hyperflex,
    )


# -- smoothness -----------------------------------------------------------


@dataclass
class SmoothnessResult:
    smooth: bool
    min_value: float
    witness: np.ndarray | None

    def to_json(self) -> dict:
        return {
            "smooth": self.smooth,
            "min_value": self.min_value,
            "witness": None if self.witness is None else complex_list(self.witness),
        }


def smoothness_check(f, cfg: RunConfig = DEFAULT) -> SmoothnessResult:
    """Singular points are common zeros of all three partials.

    Two random unitary combinations of the partials are intersected and the
    third combination is evaluated on the nine candidates.
    """
    form = _form(f).scaled()
    grad = gradient(form)
    rng = np.random.default_rng(cfg.seed)
    U = random_special_unitary(rng)
    H = [sum((grad[k] * U[r, k] for k in range(1, 3)), grad[0] * U[r, 0]) for r in range(3)]
    try:
        cands = common_zeros(
            H[0],
            H[1],
            seed=int(rng.integers(2**32)),
            tol_zero=cfg.tol_zero,
            tol_merge=cfg.tol_merge,
            chart_retries=cfg.chart_retries,
        )
    except CommonComponentError as exc:
        raise NonReducedError("non-reduced quartic") from exc
    best, witness = float("inf"), None
    for p, _ in cands:
        value = abs(H[2](p / np.linalg.norm(p)))
        if value < best:
            best, witness = value, p
    smooth = best > SMOOTH_TOL
    return SmoothnessResult(smooth, float(best), None if smooth else witness)


# -- the double cover -----------------------------------------------------


def psi_point(alg: Algebra, a) -> np.ndarray:
    return normalize_point(psi_net(alg)(a))


def fiber_points(
    alg: Algebra, y, X: IdempotentSet | None = None, cfg: RunConfig = DEFAULT
) -> list[np.ndarray]:
    """Points of the plane off the base locus that map to ``y``, with multiplicity."""
    if X is None:
        X = solve_idempotents(alg, cfg)
    net = psi_net(alg).scaled()
    y = normalize_point(y)
    k = int(np.argmax(np.abs(y)))
    eqs = [net.G[j] * y[k] - net.G[k] * y[j] for j in range(3) if j != k]
    zeros = common_zeros(
        eqs[0],
        eqs[1],
        seed=cfg.seed,
        tol_zero=cfg.tol_zero,
        tol_merge=cfg.tol_merge,
        chart_retries=cfg.chart_retries,
    )
    remaining = [[p, m] for p, m in zeros]
    matched = 0
    for b in X.points:
        for entry in remaining:
            if entry[1] > 0 and projective_distance(entry[0], b) < cfg.tol_merge:
                entry[1] -= 1
                matched += 1
                break
    if matched < X.total_multiplicity:
        raise BaseLocusMismatch("base-locus mismatch")
    out = [p for p, m in remaining for _ in range(m)]
    out.sort(key=point_sort_key)
    return out


def sample_branch_points(f, n: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Points of the quartic cut out by random lines of the dual plane."""
    form = _form(f).scaled()
    out: list[np.ndarray] = []
    while len(out) < n:
        z = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        q = restrict_to_line(form, z[0], z[1])
        for s, t in raw_roots(q):
            out.append(normalize_point(s * z[0] + t * z[1]))
    return out[:n]


def verify_double_cover(
    alg: Algebra,
    cfg: RunConfig = DEFAULT,
    n_generic: int = 10,
    n_branch: int = 10,
    X: IdempotentSet | None = None,
    quartic: QuarticCurve | None = None,
) -> dict:
    """Smoothness, the 28 bitangents, and fibre behaviour over and off the quartic."""
    if X is None:
        try:
            X = solve_idempotents(alg, cfg)
        except ComputationError as exc:
            return {"pass": False, "reason": f"precondition: {exc}"}
    gen = genericity_report(alg, X)
    if not gen.is_A0doubleprime:
        return {"pass": False, "reason": "precondition: algebra not in general position", "genericity": gen.to_json()}
    if quartic is None:
        quartic = recover_quartic(alg)
    smooth = smoothness_check(quartic, cfg)
    lines = bitangent_candidates(alg, X)
    certs = [is_bitangent(quartic, ln, cfg.tol_pair) for ln in lines]
    rng = np.random.default_rng(cfg.seed + 7919)

    generic_rows = []
    for _ in range(n_generic):
        y = normalize_point(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        fib = fiber_points(alg, y, X, cfg)
        back = max((projective_distance(psi_point(alg, p), y) for p in fib), default=float("inf"))
        generic_rows.append(
            {
                "y": complex_list(y),
                "fiber_points": [complex_list(p) for p in fib],
                "count": len(fib),
                "psi_distance": back,
                "ok": len(fib) == 2 and back < PSI_TOL,
            }
        )

    # a point of the plane must lie in the fibre over its own image
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    fib = fiber_points(alg, psi_point(alg, a), X, cfg)
    self_distance = min(projective_distance(p, a) for p in fib) if fib else float("inf")

    branch_rows = []
    for y in sample_branch_points(quartic, n_branch, rng):
        fib = fiber_points(alg, y, X, cfg)
        gap = projective_distance(fib[0], fib[1]) if len(fib) == 2 else float("inf")
        branch_rows.append(
            {
                "y": complex_list(y),
                "fiber_points": [complex_list(p) for p in fib],
                "min_pair_distance": gap,
                "ok": gap < COINCIDENCE_TOL,
            }
        )

    ok = (
        smooth.smooth
        and all(c.is_bitangent for c in certs)
        and all(r["ok"] for r in generic_rows)
        and all(r["ok"] for r in branch_rows)
        and self_distance < PSI_TOL
    )
    return {
        "pass": bool(ok),
        "smoothness": smooth.to_json(),
        "bitangents": [c.to_json() for c in certs],
        "bitangent_count": sum(c.is_bitangent for c in certs),
        "min_line_distance": min_pairwise_distance(lines),
        "generic_fibers": generic_rows,
        "self_fiber_distance": self_distance,
        "branch_fibers": branch_rows,
    }


verify_theorem05 = verify_double_cover
