"""Dense homogeneous polynomials in two and three complex variables.

Ternary forms store one coefficient per monomial x1^a x2^b x3^c (a+b+c = d)
in graded lexicographic order: ``a`` descending, then ``b`` descending.
Binary forms store the coefficient of s^(d-j) t^j at index ``j``.

Projective points are plain complex 3-vectors (or 2-vectors on P^1),
normalized by :func:`normalize_point`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import convolve2d

from .config import CHART_RETRIES, TOL_MERGE, TOL_ZERO
from .errors import CommonComponentError, SolverFailure


@lru_cache(maxsize=None)
def monomials(d: int) -> np.ndarray:
    """Exponent table of shape (n, 3) in the canonical order."""
    rows = [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]
    out = np.array(rows, dtype=int).reshape(-1, 3)
    out.setflags(write=False)
    return out


def n_monomials(d: int) -> int:
    return (d + 1) * (d + 2) // 2


@lru_cache(maxsize=None)
def _grid_index(d: int) -> tuple[np.ndarray, np.ndarray]:
    exps = monomials(d)
    return exps[:, 0], exps[:, 1]


def _as_vector(p) -> np.ndarray:
    return np.asarray(p, dtype=complex).reshape(-1)


@dataclass(frozen=True, eq=False)
class TernaryForm:
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if c.size != n_monomials(self.degree):
            raise ValueError(
                f"degree {self.degree} form needs {n_monomials(self.degree)} coefficients, got {c.size}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, degree: int) -> TernaryForm:
        return cls(degree, np.zeros(n_monomials(degree), dtype=complex))

    @classmethod
    def linear(cls, ell) -> TernaryForm:
        return cls(1, _as_vector(ell))

    @classmethod
    def monomial(cls, exps, coeff=1.0) -> TernaryForm:
        d = int(sum(exps))
        out = np.zeros(n_monomials(d), dtype=complex)
        out[monomial_index(exps)] = coeff
        return cls(d, out)

    @classmethod
    def from_grid(cls, grid: np.ndarray) -> TernaryForm:
        d = grid.shape[0] - 1
        a, b = _grid_index(d)
        return cls(d, grid[a, b])

    def grid(self) -> np.ndarray:
        """Coefficients on an (a, b) grid; the third exponent is implied."""
        d = self.degree
        g = np.zeros((d + 1, d + 1), dtype=complex)
        a, b = _grid_index(d)
        g[a, b] = self.coeffs
        return g

    def __call__(self, p) -> complex:
        return evaluate(self, p)

    def __add__(self, other: TernaryForm) -> TernaryForm:
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        return TernaryForm(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: TernaryForm) -> TernaryForm:
        if other.degree != self.degree:
            raise ValueError("cannot subtract forms of different degree")
        return TernaryForm(self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> TernaryForm:
        return TernaryForm(self.degree, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TernaryForm):
            return mul(self, other)
        return TernaryForm(self.degree, self.coeffs * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> TernaryForm:
        return TernaryForm(self.degree, self.coeffs / complex(scalar))

    def max_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_coeff() <= tol

    def scaled(self) -> TernaryForm:
        """Rescaled to unit max-modulus coefficient (zero form returned as is)."""
        m = self.max_coeff()
        return self if m == 0 else self / m

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": complex_list(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> TernaryForm:
        return cls(int(data["degree"]), parse_complex_list(data["coeffs"]))

    def __repr__(self) -> str:
        return f"TernaryForm(degree={self.degree}, coeffs={self.coeffs!r})"


@dataclass(frozen=True, eq=False)
class BinaryForm:
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size != self.degree + 1:
            raise ValueError(f"degree {self.degree} binary form needs {self.degree + 1} coefficients")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, s, t=None) -> complex:
        if t is None:
            s, t = s
        d = self.degree
        k = np.arange(d + 1)
        return complex(np.sum(self.coeffs * np.power(complex(s), d - k) * np.power(complex(t), k)))

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            return BinaryForm(self.degree + other.degree, np.convolve(self.coeffs, other.coeffs))
        return BinaryForm(self.degree, self.coeffs * complex(other))

    __rmul__ = __mul__

    def max_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs)))


def complex_list(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def parse_complex_list(items) -> np.ndarray:
    arr = np.asarray(items, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def monomial_index(exps) -> int:
    a, b, c = (int(e) for e in exps)
    d = a + b + c
    # rows with larger first exponent come first: sum_{a' > a} (d - a' + 1)
    before = sum(d - ap + 1 for ap in range(a + 1, d + 1))
    return before + (d - a - b)


# -- arithmetic -------------------------------------------------------------


def mul(f: TernaryForm, g: TernaryForm) -> TernaryForm:
    return TernaryForm.from_grid(convolve2d(f.grid(), g.grid()))


def evaluate(f: TernaryForm, p) -> complex:
    p = _as_vector(p)
    terms = np.prod(np.power(p[None, :], monomials(f.degree)), axis=1)
    return complex(np.dot(f.coeffs, terms))


def evaluate_many(f: TernaryForm, points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=complex).reshape(-1, 3)
    terms = np.prod(np.power(pts[:, None, :], monomials(f.degree)[None, :, :]), axis=2)
    return terms @ f.coeffs


def diff(f: TernaryForm, i: int) -> TernaryForm:
    """Formal partial derivative with respect to the i-th variable (0-based)."""
    if f.degree == 0:
        return TernaryForm.zero(0)
    exps = monomials(f.degree - 1)
    shifted = exps.copy()
    shifted[:, i] += 1
    idx = [monomial_index(e) for e in shifted]
    return TernaryForm(f.degree - 1, f.coeffs[idx] * shifted[:, i])


def gradient(f: TernaryForm) -> list[TernaryForm]:
    return [diff(f, i) for i in range(3)]


def powers(g: TernaryForm, n: int) -> list[TernaryForm]:
    out = [TernaryForm(0, [1.0])]
    for _ in range(n):
        out.append(mul(out[-1], g))
    return out


def pullback(f: TernaryForm, G) -> TernaryForm:
    """The composite a -> f(G1(a), G2(a), G3(a))."""
    G = list(G)
    if len(G) != 3:
        raise ValueError("pullback needs exactly three component forms")
    e = G[0].degree
    if any(g.degree != e for g in G):
        raise ValueError("map components must have equal degree")
    d = f.degree
    pw = [powers(g, d) for g in G]
    acc = np.zeros((d * e + 1, d * e + 1), dtype=complex)
    for coeff, (a, b, c) in zip(f.coeffs, monomials(d)):
        if coeff == 0:
            continue
        term = mul(mul(pw[0][a], pw[1][b]), pw[2][c])
        acc += coeff * term.grid()
    return TernaryForm.from_grid(acc)


def linear_substitution(f: TernaryForm, M) -> TernaryForm:
    """The form a -> f(M a) for a 3x3 matrix ``M``."""
    M = np.asarray(M, dtype=complex)
    return pullback(f, [TernaryForm.linear(M[k]) for k in range(3)])


def jacobian_det(G) -> TernaryForm:
    G = list(G)
    if len(G) != 3:
        raise ValueError("need three forms")
    d = G[0].degree
    if any(g.degree != d for g in G):
        raise ValueError("components must have equal degree")
    m = [[diff(G[i], j) for j in range(3)] for i in range(3)]
    acc = TernaryForm.zero(3 * (d - 1))
    for perm in itertools.permutations(range(3)):
        sign = np.linalg.det(np.eye(3)[list(perm)])
        acc = acc + mul(mul(m[0][perm[0]], m[1][perm[1]]), m[2][perm[2]]) * round(sign)
    return acc


def divide_linear(f: TernaryForm, ell) -> tuple[TernaryForm, TernaryForm]:
    """Divide ``f`` by the linear form ``ell . x``.

    Returns ``(quotient, remainder)`` with ``f = quotient * L + remainder`` and
    the remainder free of the variable where ``ell`` is largest.
    """
    ell = _as_vector(ell)
    k = int(np.argmax(np.abs(ell)))
    L = TernaryForm.linear(ell)
    rem = np.array(f.coeffs)
    quo = np.zeros(n_monomials(max(f.degree - 1, 0)), dtype=complex)
    if f.degree == 0:
        return TernaryForm.zero(0), f
    exps = monomials(f.degree)
    # peel monomials by decreasing power of x_k
    for power in range(f.degree, 0, -1):
        for idx in np.nonzero(exps[:, k] == power)[0]:
            c = rem[idx]
            if c == 0:
                continue
            e = exps[idx].copy()
            e[k] -= 1
            qc = c / ell[k]
            quo[monomial_index(e)] += qc
            rem -= (TernaryForm.monomial(e, qc) * L).coeffs
            rem[idx] = 0.0
    return TernaryForm(f.degree - 1, quo), TernaryForm(f.degree, rem)


def restrict_to_line(f: TernaryForm, u, v) -> BinaryForm:
    """The binary form q(s, t) = f(s u + t v)."""
    u, v = _as_vector(u), _as_vector(v)
    if np.linalg.norm(np.cross(u, v)) <= 1e-12 * np.linalg.norm(u) * np.linalg.norm(v):
        raise ValueError("degenerate parametrization")
    d = f.degree
    lin = [np.array([u[k], v[k]]) for k in range(3)]
    pw = []
    for k in range(3):
        seq = [np.array([1.0 + 0j])]
        for _ in range(d):
            seq.append(np.convolve(seq[-1], lin[k]))
        pw.append(seq)
    acc = np.zeros(d + 1, dtype=complex)
    for coeff, (a, b, c) in zip(f.coeffs, monomials(d)):
        if coeff != 0:
            acc += coeff * np.convolve(np.convolve(pw[0][a], pw[1][b]), pw[2][c])
    return BinaryForm(d, acc)


# -- projective points ------------------------------------------------------


def normalize_point(p) -> np.ndarray:
    """Scale so the first coordinate of (numerically) maximal modulus is 1."""
    p = _as_vector(p)
    mods = np.abs(p)
    top = mods.max()
    if top == 0:
        raise ValueError("zero vector is not a projective point")
    i = int(np.nonzero(mods >= top * (1 - 1e-9))[0][0])
    out = p / p[i]
    out[i] = 1.0
    return out


def projective_distance(p, q) -> float:
    """Chordal distance sqrt(1 - |<p, q>|^2 / (|p|^2 |q|^2)), computed stably."""
    p, q = _as_vector(p), _as_vector(q)
    p = p / np.linalg.norm(p)
    q = q / np.linalg.norm(q)
    n = p.size
    wedge = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            wedge += abs(p[i] * q[j] - p[j] * q[i]) ** 2
    return float(np.sqrt(min(wedge, 1.0)))


def hausdorff_distance(P, Q) -> float:
    P, Q = list(P), list(Q)
    if not P or not Q:
        return 0.0 if not P and not Q else float("inf")
    D = np.array([[projective_distance(p, q) for q in Q] for p in P])
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def point_sort_key(p) -> tuple:
    return tuple(x for z in np.asarray(p) for x in (round(z.real, 12), round(z.imag, 12)))


def random_special_unitary(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return q / np.linalg.det(q) ** (1.0 / n)


# -- univariate roots on P^1 -------------------------------------------------


def _chart(point: np.ndarray) -> tuple[int, complex]:
    """Chart index (0: t = 1, value s; 1: s = 1, value t) and affine value."""
    s, t = point
    if abs(s) <= abs(t):
        return 0, s / t
    return 1, t / s


def _chart_poly(p: BinaryForm, chart: int) -> np.ndarray:
    # numpy highest-first coefficients of p(x, 1) or p(1, x)
    return np.array(p.coeffs) if chart == 0 else np.array(p.coeffs[::-1])


def _taylor_coeff(poly: np.ndarray, x: complex, k: int) -> complex:
    d = poly
    for _ in range(k):
        d = np.polyder(d)
        if d.size == 0:
            return 0j
    return complex(np.polyval(d, x)) / float(np.prod(np.arange(1, k + 1)))


def _newton_1d(poly: np.ndarray, x: complex, iters: int = 12) -> complex:
    dpoly = np.polyder(poly)
    fx = abs(np.polyval(poly, x))
    for _ in range(iters):
        dx = np.polyval(dpoly, x)
        if dx == 0:
            break
        step = np.polyval(poly, x) / dx
        cand = x - step
        fc = abs(np.polyval(poly, cand))
        if not fc < fx:
            break
        x, fx = cand, fc
        if fx == 0:
            break
    return x


def raw_roots(p: BinaryForm) -> list[np.ndarray]:
    """Companion-matrix roots on P^1 without merging, one entry per root."""
    c = np.asarray(p.coeffs)
    top = np.max(np.abs(c)) if c.size else 0.0
    if top == 0:
        raise ValueError("identically zero")
    lead = 0
    while lead < c.size and abs(c[lead]) <= 1e-14 * top:
        lead += 1
    out = [np.array([1.0 + 0j, 0j]) for _ in range(lead)]
    for r in np.roots(c[lead:]):
        out.append(normalize_point([r, 1.0]))
    return out


def _centroid(points: list[np.ndarray]) -> np.ndarray:
    base = points[0]
    i = int(np.argmax(np.abs(base)))
    return normalize_point(np.mean([q / q[i] for q in points], axis=0))


def univariate_roots(p: BinaryForm, tol_merge: float = TOL_MERGE) -> list[tuple[np.ndarray, int]]:
    """All roots of a binary form on P^1 with multiplicities summing to its degree."""
    roots = raw_roots(p)
    scale = p.max_coeff()
    clusters = [[r] for r in roots]

    def merge_ok(members):
        c = _centroid(members)
        k = len(members)
        radius = max(projective_distance(m, c) for m in members)
        if radius <= tol_merge:
            return True
        chart, x = _chart(c)
        bk = abs(_taylor_coeff(_chart_poly(p, chart), x, k))
        if bk == 0:
            return False
        # spread of a k-fold root under coefficient rounding ~ (eps |p| / |b_k|)^(1/k)
        return radius <= (1e-13 * scale / bk) ** (1.0 / k)

    while len(clusters) > 1:
        cents = [_centroid(cl) for cl in clusters]
        pairs = sorted(
            (projective_distance(cents[i], cents[j]), i, j)
            for i in range(len(clusters))
            for j in range(i + 1, len(clusters))
        )
        for dist, i, j in pairs:
            if dist > 5e-2:
                return_early = True
                break
            if merge_ok(clusters[i] + clusters[j]):
                clusters[i] = clusters[i] + clusters[j]
                del clusters[j]
                return_early = False
                break
        else:
            return_early = True
        if return_early:
            break

    out = []
    for cl in clusters:
        c = _centroid(cl)
        k = len(cl)
        chart, x = _chart(c)
        poly = _chart_poly(p, chart)
        for _ in range(k - 1):
            poly = np.polyder(poly)
        if poly.size > 1:
            x = _newton_1d(poly, x)
        pt = np.array([x, 1.0]) if chart == 0 else np.array([1.0, x])
        out.append((normalize_point(pt), k))
    out.sort(key=lambda item: point_sort_key(item[0]))
    return out


# -- intersection of two plane curves ---------------------------------------


def _z_polys(f: TernaryForm, x: complex, y: complex) -> np.ndarray:
    """Coefficients (highest first) of z -> f(x, y, z)."""
    exps = monomials(f.degree)
    vals = f.coeffs * np.power(x, exps[:, 0]) * np.power(y, exps[:, 1])
    out = np.zeros(f.degree + 1, dtype=complex)
    np.add.at(out, f.degree - exps[:, 2], vals)
    return out


def sylvester(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    m, n = p.size - 1, q.size - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for r in range(n):
        S[r, r : r + m + 1] = p
    for r in range(m):
        S[n + r, r : r + n + 1] = q
    return S


def resultant_z(f: TernaryForm, g: TernaryForm) -> tuple[BinaryForm, float]:
    """Res_z(f, g) as a binary form in (x, y), interpolated on the unit circle.

    Also returns the largest ratio |Res| / Hadamard bound over the samples,
    a scale-free measure of whether the resultant vanishes identically.
    """
    m, n = f.degree, g.degree
    N = m * n + 1
    vals = np.empty(N, dtype=complex)
    rel = 0.0
    for k in range(N):
        s = np.exp(2j * np.pi * k / N)
        S = sylvester(_z_polys(f, 1.0, s), _z_polys(g, 1.0, s))
        vals[k] = np.linalg.det(S)
        bound = np.prod(np.linalg.norm(S, axis=1))
        if bound > 0:
            rel = max(rel, abs(vals[k]) / bound)
    coeffs = np.fft.fft(vals) / N
    return BinaryForm(m * n, coeffs), rel


def _polish_pair(F, G, dF, dG, p, iters: int = 12) -> np.ndarray:
    p = normalize_point(p)
    i = int(np.argmax(np.abs(p)))
    free = [j for j in range(3) if j != i]

    def res(q):
        return np.array([evaluate(F, q), evaluate(G, q)])

    r = res(p)
    nr = np.linalg.norm(r)
    for _ in range(iters):
        if nr == 0:
            break
        J = np.array([[evaluate(dF[j], p) for j in free], [evaluate(dG[j], p) for j in free]])
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        q = p.copy()
        q[free] += step
        rq = res(q)
        nq = np.linalg.norm(rq)
        if not nq < nr:
            break
        p, r, nr = q, rq, nq
    return p


def cluster_points(items, tol_merge: float) -> list[tuple[np.ndarray, int]]:
    """Merge (point, multiplicity) pairs closer than ``tol_merge``."""
    out: list[list] = []
    for p, k in items:
        for entry in out:
            if projective_distance(entry[0], p) <= tol_merge:
                if k > entry[1]:
                    entry[0] = p
                entry[1] += k
                break
        else:
            out.append([p, k])
    return [(normalize_point(p), k) for p, k in out]


class _ChartFailure(Exception):
    pass


def _solve_in_chart(F, G, tol_zero, tol_merge):
    m, n = F.degree, G.degree
    zf, zg = _z_polys(F, 0.0, 0.0), _z_polys(G, 0.0, 0.0)
    if abs(zf[0]) < 1e-6 or abs(zg[0]) < 1e-6:
        raise _ChartFailure("leading coefficient degenerate")
    R, rel = resultant_z(F, G)
    if rel < 1e-11:
        raise CommonComponentError("common component")
    dF, dG = gradient(F), gradient(G)
    found = []
    for (x, y), k in univariate_roots(R, tol_merge):
        pf, pg = _z_polys(F, x, y), _z_polys(G, x, y)
        cands = np.concatenate([np.roots(pf), np.roots(pg)])
        scored = []
        for z in cands:
            q = normalize_point([x, y, z])
            scored.append((max(abs(evaluate(F, q)), abs(evaluate(G, q))), z))
        scored.sort(key=lambda item: item[0])
        if not scored:
            raise _ChartFailure("no fibre candidates")
        best = normalize_point([x, y, scored[0][1]])
        if k > 1:
            # two distinct good candidates on one fibre line: projection collision
            for res, z in scored[1:]:
                q = normalize_point([x, y, z])
                if res < tol_zero and projective_distance(q, best) > 1e-4:
                    raise _ChartFailure("fibre collision")
        found.append((_polish_pair(F, G, dF, dG, best), k))
    return found


def common_zeros(
    f: TernaryForm,
    g: TernaryForm,
    *,
    seed: int = 0,
    tol_zero: float = TOL_ZERO,
    tol_merge: float = TOL_MERGE,
    chart_retries: int = CHART_RETRIES,
) -> list[tuple[np.ndarray, int]]:
    """Intersection points of two plane curves with multiplicities.

    Works in a random special-unitary chart: eliminates the third variable
    with a Sylvester resultant, solves the resulting binary form, recovers
    the third coordinate on each fibre line and polishes with Newton's
    method. Retries with fresh charts when the recovered multiplicities do
    not add up to deg f * deg g.
    """
    fn, gn = f.scaled(), g.scaled()
    if fn.is_zero() or gn.is_zero():
        raise CommonComponentError("common component")
    if f.degree == 0 or g.degree == 0:
        return []
    target = f.degree * g.degree
    rng = np.random.default_rng(seed)
    component_hits = 0
    for _ in range(chart_retries):
        U = random_special_unitary(rng)
        F = linear_substitution(fn, U)
        G = linear_substitution(gn, U)
        try:
            found = _solve_in_chart(F, G, tol_zero, tol_merge)
        except CommonComponentError:
            component_hits += 1
            continue
        except _ChartFailure:
            continue
        pts = [(normalize_point(U @ b), k) for b, k in found]
        pts = cluster_points(pts, tol_merge)
        if sum(k for _, k in pts) != target:
            continue
        if any(max(abs(evaluate(fn, p)), abs(evaluate(gn, p))) >= tol_zero for p, _ in pts):
            continue
        pts.sort(key=lambda item: point_sort_key(item[0]))
        return pts
    if component_hits == chart_retries:
        raise CommonComponentError("common component")
    raise SolverFailure("solver failure")
