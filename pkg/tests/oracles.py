"""Independent reference computations used by the tests.

Nothing here imports the estimators under test.
"""

import itertools
import math

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, Delaunay

CR1 = ([3, math.sqrt(2), 3 - math.sqrt(2), 0], 2.0)  # region normal.l <= offset
CR2 = ([0, 0, -3, -3], -1.0)

SORTED_VERTICES_4 = np.array(
    [[1, 0, 0, 0], [0.5, 0.5, 0, 0], [1 / 3, 1 / 3, 1 / 3, 0], [0.25, 0.25, 0.25, 0.25]]
)


def clip_polytope(vertices, normal, offset):
    """Vertices of conv(vertices) intersected with {x : normal.x <= offset}."""
    vertices = np.asarray(vertices, dtype=float)
    s = vertices @ normal - offset
    s = np.where(np.abs(s) < 1e-12, 0.0, s)
    keep = [v for v, si in zip(vertices, s) if si <= 0]
    for (a, sa), (b, sb) in itertools.combinations(zip(vertices, s), 2):
        if sa * sb < 0:
            t = sa / (sa - sb)
            keep.append(a + t * (b - a))
    return np.array(keep)


def _gauss01(k):
    x, w = np.polynomial.legendre.leggauss(k)
    return 0.5 * (x + 1), 0.5 * w


def integrate_tetra(tet, f, order=16):
    """Exact (for polynomials of modest degree) integral over a tetrahedron in R^3.

    Collapsed-coordinate Gauss-Legendre product rule; `f` maps (m, 3) -> (m,).
    """
    v0, v1, v2, v3 = tet
    x, w = _gauss01(order)
    a, b, c = (g.ravel() for g in np.meshgrid(x, x, x, indexing="ij"))
    wa, wb, wc = (g.ravel() for g in np.meshgrid(w, w, w, indexing="ij"))
    pts = v0 + np.outer(a, v1 - v0) + np.outer(a * b, v2 - v1) + np.outer(a * b * c, v3 - v2)
    jac = abs(np.linalg.det(np.array([v1 - v0, v2 - v1, v3 - v2]))) * a * a * b
    return float(np.sum(wa * wb * wc * jac * f(pts)))


def integrate_polytope(vertices4, f, order=16):
    """Integral of f over a 3-polytope inside the sum-one hyperplane of R^4.

    Coordinates are (l1, l2, l3) with l4 = 1 - l1 - l2 - l3; the constant
    Jacobian to intrinsic volume is dropped, so only ratios are meaningful.
    """
    p3 = np.asarray(vertices4)[:, :3]
    tri = Delaunay(p3)

    def f4(pts):
        lam = np.column_stack([pts, 1.0 - pts.sum(axis=1)])
        return f(lam)

    return math.fsum(integrate_tetra(p3[s], f4, order) for s in tri.simplices)


def vandermonde(lam, beta):
    out = np.ones(len(lam))
    for i, j in itertools.combinations(range(lam.shape[1]), 2):
        out *= lam[:, i] - lam[:, j]
    return np.abs(out) ** beta


def linear_cut_probability(normal, offset, beta=None, order=16):
    """Measure of {normal.l <= offset} within the sorted two-qubit simplex."""
    w = (lambda lam: np.ones(len(lam))) if beta is None else (lambda lam: vandermonde(lam, beta))
    part = clip_polytope(SORTED_VERTICES_4, np.asarray(normal, float), offset)
    return integrate_polytope(part, w, order) / integrate_polytope(SORTED_VERTICES_4, w, order)


def linear_cut_ratio(normal, offset, beta=None, h=1e-4):
    """|d/dt P(normal.l <= offset + t)| / P at t = 0, by exact integrals at +-h."""
    lo = linear_cut_probability(normal, offset - h, beta)
    hi = linear_cut_probability(normal, offset + h, beta)
    mid = linear_cut_probability(normal, offset, beta)
    return abs(hi - lo) / (2 * h) / mid


def facet_area(normal, offset):
    """Euclidean area of {normal.l = offset} inside the sorted simplex (R^4 metric)."""
    normal = np.asarray(normal, float)
    V = SORTED_VERTICES_4
    s = V @ normal - offset
    pts = [v for v, si in zip(V, s) if abs(si) < 1e-12]
    for (a, sa), (b, sb) in itertools.combinations(zip(V, s), 2):
        if sa * sb < 0:
            t = sa / (sa - sb)
            pts.append(a + t * (b - a))
    pts = np.array(pts)
    # orthonormal basis of the polygon's plane
    centre = pts.mean(axis=0)
    u, sv, vt = np.linalg.svd(pts - centre)
    coords = (pts - centre) @ vt[:2].T
    return ConvexHull(coords).volume


def mp_eigenvalues(m, dps=40):
    import mpmath

    with mpmath.workdps(dps):
        ev = mpmath.eigsy(mpmath.matrix(np.asarray(m).tolist()))[0]
        return sorted((float(x) for x in ev), reverse=True)


def _vad(l):
    return l[0] - l[2] - 2 * math.sqrt(l[1] * l[3])


def max_on_vad_boundary(k):
    # maximize lam[k] on {vad = 0} within the sorted simplex, multistart SLSQP
    cons = [
        {"type": "eq", "fun": lambda l: l.sum() - 1},
        {"type": "eq", "fun": lambda l: l[0] - l[2] - 2 * math.sqrt(max(l[1] * l[3], 0))},
        {"type": "ineq", "fun": lambda l: np.diff(-l)},
        {"type": "ineq", "fun": lambda l: l},
    ]
    rng = np.random.default_rng(k)
    best = -1.0
    for _ in range(40):
        x0 = -np.sort(-rng.dirichlet(np.ones(4)))
        res = minimize(lambda l: -l[k], x0, constraints=cons, method="SLSQP", options={"ftol": 1e-14, "maxiter": 500})
        l = res.x
        feasible = abs(l.sum() - 1) < 1e-9 and abs(_vad(np.clip(l, 0, 1))) < 1e-8 and np.all(np.diff(l) <= 1e-9)
        if res.success and feasible:
            best = max(best, l[k])
    return best
