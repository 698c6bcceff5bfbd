"""Generalized idempotents: the zero scheme of a -> a^2 x a."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, square
from .config import DEFAULT, RunConfig
from .covariants import CubicNet, psi_net
from .errors import CommonComponentError, SolverFailure
from .forms import (
    cluster_points,
    common_zeros,
    complex_list,
    gradient,
    normalize_point,
    point_sort_key,
    random_special_unitary,
)

GENERIC_TOL = 1e-8


class PositiveDimensionalError(CommonComponentError):
    pass


@dataclass(frozen=True, eq=False)
class IdempotentSet:
    points: list[np.ndarray]
    multiplicities: list[int]
    representatives: list[np.ndarray | None]
    square_nonzero: list[bool]
    collision: bool = False

    def __len__(self) -> int:
        return len(self.points)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)

    def to_json(self) -> list[dict]:
        return [
            {
                "point": complex_list(p),
                "multiplicity": int(k),
                "representative": None if r is None else complex_list(r),
            }
            for p, k, r in zip(self.points, self.multiplicities, self.representatives)
        ]


def _polish_net(net: CubicNet, grads, p: np.ndarray, iters: int = 8) -> np.ndarray:
    """Gauss-Newton on all three cubics in the affine chart of ``p``."""
    p = normalize_point(p)
    i = int(np.argmax(np.abs(p)))
    free = [j for j in range(3) if j != i]
    r = net(p)
    nr = np.linalg.norm(r)
    for _ in range(iters):
        if nr == 0:
            break
        J = np.array([[grads[k][j](p) for j in free] for k in range(3)])
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        q = p.copy()
        q[free] += step
        rq = net(q)
        nq = np.linalg.norm(rq)
        if not nq < nr:
            break
        p, r, nr = q, rq, nq
    return normalize_point(p)


def idempotent_representative(alg: Algebra, p, tol_zero: float = DEFAULT.tol_zero):
    """Return (a, square_nonzero) with a^2 = a when the square does not vanish."""
    p = np.asarray(p, dtype=complex)
    sq = square(alg, p)
    scale = max(np.max(np.abs(alg.c)), 1e-300)
    if np.linalg.norm(sq) <= tol_zero * scale * np.linalg.norm(p) ** 2:
        return None, False
    lam = np.vdot(p, sq) / np.vdot(p, p)
    return p / lam, True


def solve_idempotents(alg: Algebra, cfg: RunConfig = DEFAULT) -> IdempotentSet:
    """Solve a^2 x a = 0 on the projective plane.

    Two random combinations of the three cubics are intersected (9 points);
    the two spurious points are removed by the third combination.
    """
    net = psi_net(alg)
    if net.scale() == 0:
        raise PositiveDimensionalError("positive-dimensional locus")
    net = net.scaled()
    grads = [gradient(g) for g in net.G]
    rng = np.random.default_rng(cfg.seed)
    component_hits = 0
    for attempt in range(cfg.chart_retries):
        U = random_special_unitary(rng)
        H = [net.combine(U[r]) for r in range(3)]
        try:
            zeros = common_zeros(
                H[0],
                H[1],
                seed=int(rng.integers(2**32)),
                tol_zero=cfg.tol_zero,
                tol_merge=cfg.tol_merge,
                chart_retries=cfg.chart_retries,
            )
        except CommonComponentError:
            component_hits += 1
            continue
        except SolverFailure:
            continue
        kept = []
        for p, k in zeros:
            if np.max(np.abs(net(p))) < cfg.tol_zero:
                kept.append((_polish_net(net, grads, p), k))
        kept = cluster_points(kept, cfg.tol_merge)
        if sum(k for _, k in kept) != 7:
            continue
        kept.sort(key=lambda item: point_sort_key(item[0]))
        reps, flags = [], []
        for p, _ in kept:
            r, nz = idempotent_representative(alg, p, cfg.tol_zero)
            reps.append(r)
            flags.append(nz)
        mults = [k for _, k in kept]
        return IdempotentSet(
            [p for p, _ in kept], mults, reps, flags, collision=any(k > 1 for k in mults)
        )
    if component_hits == cfg.chart_retries:
        raise PositiveDimensionalError("positive-dimensional locus")
    raise SolverFailure("solver failure")


# -- genericity -----------------------------------------------------------


def veronese(p) -> np.ndarray:
    x, y, z = np.asarray(p, dtype=complex)
    return np.array([x * x, x * y, x * z, y * y, y * z, z * z])


def triple_score(p, q, r) -> float:
    M = np.column_stack([p, q, r])
    return float(abs(np.linalg.det(M)) / np.prod(np.linalg.norm(M, axis=0)))


def conic_score(points) -> float:
    rows = [veronese(np.asarray(p) / np.linalg.norm(p)) for p in points]
    V = np.array([v / np.linalg.norm(v) for v in rows])
    return float(abs(np.linalg.det(V)))


@dataclass
class GenericityReport:
    distinct_simple: bool
    squares_nonzero: bool
    no_three_collinear: bool
    no_six_on_conic: bool
    min_triple_score: float
    min_conic_score: float
    witnesses: dict = field(default_factory=dict)
    is_A0prime: bool = True

    @property
    def is_A0doubleprime(self) -> bool:
        return self.is_A0prime and all(
            (self.distinct_simple, self.squares_nonzero, self.no_three_collinear, self.no_six_on_conic)
        )

    def to_json(self) -> dict:
        return {
            "is_A0prime": self.is_A0prime,
            "is_A0doubleprime": self.is_A0doubleprime,
            "distinct_simple": self.distinct_simple,
            "squares_nonzero": self.squares_nonzero,
            "no_three_collinear": self.no_three_collinear,
            "no_six_on_conic": self.no_six_on_conic,
            "min_triple_score": self.min_triple_score,
            "min_conic_score": self.min_conic_score,
            "witnesses": self.witnesses,
        }


def configuration_checks(points, tol: float = GENERIC_TOL) -> dict:
    """Collinearity and conic checks on a point list (1-based witness indices)."""
    pts = [np.asarray(p, dtype=complex) for p in points]
    out = {"no_three_collinear": True, "no_six_on_conic": True, "witnesses": {}}
    tri = [(triple_score(*(pts[i] for i in c)), c) for c in itertools.combinations(range(len(pts)), 3)]
    out["min_triple_score"] = min((s for s, _ in tri), default=float("inf"))
    bad = [[i + 1 for i in c] for s, c in tri if not s > tol]
    if bad:
        out["no_three_collinear"] = False
        out["witnesses"]["collinear_triples"] = bad
    six = [(conic_score([pts[i] for i in c]), c) for c in itertools.combinations(range(len(pts)), 6)]
    out["min_conic_score"] = min((s for s, _ in six), default=float("inf"))
    bad = [[i + 1 for i in c] for s, c in six if not s > tol]
    if bad:
        out["no_six_on_conic"] = False
        out["witnesses"]["conic_sextuples"] = bad
    return out


def genericity_report(alg: Algebra, X: IdempotentSet, tol: float = GENERIC_TOL) -> GenericityReport:
    witnesses = {}
    distinct = len(X.points) == 7 and all(k == 1 for k in X.multiplicities)
    if not distinct:
        witnesses["multiple_points"] = [i + 1 for i, k in enumerate(X.multiplicities) if k > 1]
    squares = all(X.square_nonzero)
    if not squares:
        witnesses["square_zero"] = [i + 1 for i, f in enumerate(X.square_nonzero) if not f]
    conf = configuration_checks(X.points, tol)
    witnesses.update(conf["witnesses"])
    return GenericityReport(
        distinct_simple=distinct,
        squares_nonzero=squares,
        no_three_collinear=conf["no_three_collinear"],
        no_six_on_conic=conf["no_six_on_conic"],
        min_triple_score=conf["min_triple_score"],
        min_conic_score=conf["min_conic_score"],
        witnesses=witnesses,
        is_A0prime=X.total_multiplicity == 7,
    )
