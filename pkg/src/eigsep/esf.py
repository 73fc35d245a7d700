"""
Eigenvalue-parameterized separability functions (ESFs).

An ESF is the Haar-measure fraction of an orbit family ``g diag(lam) g^T``
that is PPT, with some Euler angles pinned and the rest free.  Three
families are covered:

* ``ex1``: x1 free, x4 = x6 = pi, x2 = x3 = x5 = pi/2 (uniform measure in x1)
* ``ex2``: x5 free, x1 = x4 = x6 = pi, x2 = x3 = pi/2 (measure sin x5)
* ``two_angle``: x1 and x5 free, the other four as above

``ex1`` and ``ex2`` have exact closed forms.  For ``two_angle`` the published
reduction keeps one of the two 2x2 blocks of the partial transpose
(:func:`~eigsep.criteria.ppt_det_two_angle`); :func:`esf_two_angle`
evaluates that quantity and :func:`esf_two_angle_ppt` the full PPT fraction.
"""

import math
import time
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate

from . import criteria, so4
from .linalg import ppt_det, is_ppt
from .measures import Estimate, _ratio, _spawn_rng

HALF_PI = 0.5 * np.pi


@dataclass(frozen=True)
class EsfScenario:
    kind: str
    fixed: tuple  # six angles; NaN marks a free coordinate

    @property
    def free(self):
        return tuple(k for k, v in enumerate(self.fixed) if math.isnan(v))


_NAN = float("nan")
SCENARIOS = {
    "ex1": EsfScenario("ex1", (_NAN, HALF_PI, HALF_PI, np.pi, HALF_PI, np.pi)),
    "ex2": EsfScenario("ex2", (np.pi, HALF_PI, HALF_PI, np.pi, _NAN, np.pi)),
    "two_angle": EsfScenario("two_angle", (_NAN, HALF_PI, HALF_PI, np.pi, _NAN, np.pi)),
}


def scenario(kind):
    key = kind.replace("-", "_")
    if key not in SCENARIOS:
        raise ValueError(f"unknown scenario {kind!r}; choose from {sorted(SCENARIOS)}")
    return SCENARIOS[key]


# --- x1 free -------------------------------------------------------------------

def esf_ex1(lam):
    """(2/pi) asin(2 sqrt(l1 l3)/(l2 - l4)), clamped to 1 where the argument reaches 1."""
    l1, l2, l3, l4 = (np.asarray(lam, dtype=float)[..., k] for k in range(4))
    d = l2 - l4
    num = 2.0 * np.sqrt(l1 * l3)
    full = (d <= 0) | (d * d <= 4.0 * l1 * l3)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.where(full, 1.0, num / np.where(full, 1.0, d))
    return np.where(full, 1.0, (2.0 / np.pi) * np.arcsin(np.clip(arg, 0.0, 1.0)))[()]


def _guarded_sqrt(x):
    # negative radicand -> NaN, which makes every comparison involving it False
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.where(x >= 0, np.sqrt(np.abs(x)), np.nan)


def esf_ex1_domain(lam):
    """Classify a sorted spectrum by the literal constraint systems.

    Returns ``"arcsin_region"`` where ``l1 + 2 l2 > 1`` and
    ``2 l2 + l3 + 2 sqrt(l1 - 2 l1 l2) < l1 + 1``, else
    ``"totally_separable"``.  The listed total-separability conditions,
    when they hold, never contradict this.
    """
    l1, l2, l3 = (float(v) for v in np.asarray(lam, dtype=float)[:3])
    root = _guarded_sqrt(l1 - 2.0 * l1 * l2)
    lhs = 2.0 * l2 + l3 + 2.0 * root
    arcsin_region = bool((l1 + 2.0 * l2 > 1.0) and (lhs < l1 + 1.0))
    total_a = bool((l1 + 2.0 * l2 >= 1.0) and (lhs >= l1 + 1.0))
    total_b = bool((l1 + 2.0 * l2 == 1.0) or (lhs > l1 + 1.0))
    if arcsin_region and total_a and total_b:
        raise AssertionError(f"inconsistent domain classification for {lam}")
    return "arcsin_region" if arcsin_region else "totally_separable"


# --- x5 free -------------------------------------------------------------------

def esf_ex2_of_v(v):
    """1 - sqrt(z+) + sqrt(z-) with z+- = (1 +- sqrt(1 - V))/2; 1 for V >= 1."""
    v = np.asarray(v, dtype=float)
    sat = ~(v < 1.0)  # NaN (degenerate l1 == l3) counts as saturated
    r = np.sqrt(np.clip(1.0 - np.where(sat, 1.0, v), 0.0, 1.0))
    val = 1.0 - np.sqrt(0.5 * (1.0 + r)) + np.sqrt(0.5 * (1.0 - r))
    return np.where(sat, 1.0, val)[()]


def esf_ex2(lam=None, v=None):
    """ESF of the x5-free family, from a sorted spectrum or directly from V."""
    if (lam is None) == (v is None):
        raise TypeError("pass exactly one of lam or v")
    if v is None:
        v = criteria.v_of(lam)
    return esf_ex2_of_v(v)


def esf_ex2_root(v):
    """Root form: 1 + (3rd) - (4th) ascending real root of 4 t^4 - 4 t^2 + V."""
    # near V = 1 the roots pair up, so solve at extended precision
    with mpmath.workdps(60):
        roots = mpmath.polyroots([4, 0, -4, 0, mpmath.mpf(float(v))], maxsteps=400, extraprec=400)
        roots = sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf("1e-25"))
        if len(roots) != 4:
            raise ValueError(f"expected four real roots at V={v}")
        return float(1 + roots[2] - roots[3])


def esf_ex2_radical(v):
    r = math.sqrt(1.0 - v)
    return math.sqrt(1.0 - r) / math.sqrt(2.0) - math.sqrt(1.0 + r) / math.sqrt(2.0) + 1.0


def esf_ex2_wrong_sign(v):
    """The radical form with the sign of the middle term flipped (exceeds 1)."""
    r = math.sqrt(1.0 - v)
    return math.sqrt(1.0 - r) / math.sqrt(2.0) + math.sqrt(1.0 + r) / math.sqrt(2.0) + 1.0


def esf_ex2_trig(v):
    a = 0.25 * math.asin(1.0 - 2.0 * v)
    return (
        1.0
        - math.sqrt(1.0 - 1.0 / math.sqrt(2.0)) * math.cos(a)
        - math.sqrt(1.0 + 1.0 / math.sqrt(2.0)) * math.sin(a)
    )


def esf_ex2_w(w):
    if w < -1.0:
        return 1.0
    a = math.acos(w)
    return 2.0 * math.sin(a / 8.0) ** 2 + math.sin(a / 4.0)


def esf_ex2_forms_agree(v, tol=1e-12):
    """Check the root, radical, trig and W forms against each other at V.

    Also requires the wrong-sign radical to exceed 1 on (0, 1).
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"V must lie in [0, 1], got {v}")
    vals = [esf_ex2_of_v(v), esf_ex2_root(v), esf_ex2_radical(v), esf_ex2_trig(v), esf_ex2_w(1.0 - 2.0 * v)]
    ok = max(vals) - min(vals) < tol
    if 0.0 < v < 1.0:
        ok = ok and esf_ex2_wrong_sign(v) > 1.0
    return bool(ok)


# --- x1 and x5 free ------------------------------------------------------------

def _two_angle_parts(lam):
    l1, l2, l3, l4 = (float(x) for x in lam)
    d2 = (l1 - l3) ** 2
    b2 = (l1 + 2.0 * l2 + l3 - 1.0) ** 2
    rest = 4.0 * l2 + 2.0 * l3 - 4.0 * l2 * (l2 + l3) + l1 * (-4.0 * l2 + 4.0 * l3 + 2.0) - 1.0
    return d2, b2, rest


def _cos4_breaks(level, upper):
    # points in [0, upper] where cos(4x) == level
    if not -1.0 < level < 1.0:
        return []
    a = math.acos(level)
    pts = []
    k = 0
    while True:
        lo = (2.0 * math.pi * k - a) / 4.0
        hi = (2.0 * math.pi * k + a) / 4.0
        if lo > upper:
            break
        pts += [p for p in (lo, hi) if 0.0 < p < upper]
        k += 1
    return sorted(pts)


def _quad(f, a, b, points):
    val, err = integrate.quad(f, a, b, points=points or None, limit=400, epsabs=1e-14, epsrel=1e-12)
    if not np.isfinite(val) or err > 1e-9:
        raise ArithmeticError(f"quadrature did not converge (estimate {val}, error {err})")
    return val


def esf_two_angle_kappa(lam):
    """Integral over x1 in [0, 2 pi] of the x5-reduced fraction, divided by 2 pi."""
    d2, b2, rest = _two_angle_parts(lam)
    if b2 == 0.0:
        return 1.0
    if d2 == 0.0:
        return esf_two_angle_eta(lam)

    def kappa(x1):
        return (math.cos(4.0 * x1) * b2 + rest) / d2

    def f(x1):
        k = kappa(x1)
        if k >= 1.0:
            return 1.0
        if k <= -1.0:
            return 0.0
        a = 0.25 * math.acos(k)
        return math.cos(a) - math.sin(a)

    pts = _cos4_breaks((d2 - rest) / b2, 2 * math.pi) + _cos4_breaks((-d2 - rest) / b2, 2 * math.pi)
    return _quad(f, 0.0, 2.0 * math.pi, sorted(pts)) / (2.0 * math.pi)


def esf_two_angle_eta(lam):
    """Integral over x5 in [0, pi] of sin(x5) times the x1-reduced fraction, divided by 2."""
    d2, b2, rest = _two_angle_parts(lam)
    if b2 == 0.0:
        return 1.0

    def eta(x5):
        return (-math.cos(4.0 * x5) * d2 + rest) / b2

    def f(x5):
        e = eta(x5)
        if e > 1.0:
            return math.sin(x5)
        if e <= -1.0:
            return 0.0
        return math.sin(x5) * (math.asin(e) / math.pi + 0.5)

    pts = []
    if d2 > 0.0:
        pts = _cos4_breaks((rest - b2) / d2, math.pi) + _cos4_breaks((rest + b2) / d2, math.pi)
    return _quad(f, 0.0, math.pi, sorted(pts)) / 2.0


def esf_two_angle(lam, tol=1e-8):
    """Two-angle ESF from the single-block PPT determinant.

    Evaluates both one-dimensional reductions and returns the eta form;
    raises if they disagree by more than `tol`.
    """
    lam = np.asarray(lam, dtype=float)
    eta = esf_two_angle_eta(lam)
    kap = esf_two_angle_kappa(lam)
    if abs(eta - kap) > tol:
        raise ArithmeticError(f"kappa ({kap}) and eta ({eta}) reductions disagree")
    return eta


def esf_two_angle_ppt(lam):
    """Two-angle ESF with full positivity of the partial transpose.

    Both 2x2 blocks constrain u = sin^2(2 x1) to an interval
    [lo(x5), hi(x5)]; the x1-fraction of such an interval is
    F(hi) - F(lo) with F(a) = (2/pi) asin(sqrt(a)).
    """
    l1, l2, l3, l4 = (float(x) for x in lam)
    d2 = (l1 - l3) ** 2
    b2 = (l2 - l4) ** 2

    def frac_below(a):
        return (2.0 / math.pi) * math.asin(math.sqrt(min(max(a, 0.0), 1.0)))

    def f(x5):
        s2 = math.sin(2.0 * x5) ** 2
        c, s = math.cos(x5) ** 2, math.sin(x5) ** 2
        A = (l3 * c + l1 * s) * (l1 * c + l3 * s)
        C = s2 * d2 - 4.0 * l2 * l4
        if b2 == 0.0:
            ok = A >= 0.0 and C <= 0.0
            return math.sin(x5) * float(ok)
        hi = 4.0 * A / b2
        lo = C / b2
        return math.sin(x5) * max(0.0, frac_below(hi) - frac_below(lo))

    pts = [math.pi / 4, math.pi / 2, 3 * math.pi / 4]
    # sqrt cusps where a bound crosses 0 or 1 trigger roundoff notices; err is checked below
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, 0.0, math.pi, points=pts, limit=400, epsabs=1e-13, epsrel=1e-11)
    if err > 1e-8:
        raise ArithmeticError(f"quadrature did not converge (error {err})")
    return val / 2.0


# --- Monte-Carlo ESF --------------------------------------------------------

_CHUNK = 1 << 18


def _formula_det(kind, x, lam):
    if kind == "ex1":
        return criteria.ppt_det_ex1(x[:, 0], lam)
    if kind == "ex2":
        return criteria.ppt_det_ex2(x[:, 4], lam)
    return criteria.ppt_det_two_angle(x[:, 0], x[:, 4], lam)


def esf_mc(scen, lam, n, seed, indicator="ppt", threads=1):
    """Haar-weighted Monte-Carlo estimate of an ESF.

    Free angles are drawn uniformly on their ranges and weighted by the
    free part of the invariant density; the estimate is the weighted mean
    of the separability indicator.

    Parameters
    ----------
    scen : EsfScenario or str
    lam : sorted spectrum (length 4)
    n, seed : sample count and seed; the result depends only on these
    indicator : ``"ppt"`` tests the partial transpose of ``g diag(lam) g^T``
        by its determinant sign; ``"eig"`` uses the Jacobi minimum
        eigenvalue (slower); ``"formula"`` uses the family's printed
        PPT determinant.
    """
    if isinstance(scen, str):
        scen = scenario(scen)
    if n < 1:
        raise ValueError("n must be positive")
    if indicator not in ("ppt", "eig", "formula"):
        raise ValueError(f"unknown indicator {indicator!r}")
    lam = np.asarray(lam, dtype=float)
    fixed = np.array(scen.fixed)
    free = scen.free
    t0 = time.perf_counter()

    def work(i):
        m = min(_CHUNK, n - i * _CHUNK)
        rng = _spawn_rng(seed, i)
        x = np.broadcast_to(fixed, (m, 6)).copy()
        for k in free:
            lo, hi = so4.ANGLE_RANGES[k]
            x[:, k] = rng.uniform(lo, hi, m)
        w = np.ones(m)
        if 1 in free:
            w *= np.sin(x[:, 1])
        if 2 in free:
            w *= np.sin(x[:, 2]) ** 2
        if 4 in free:
            w *= np.sin(x[:, 4])
        if indicator == "formula":
            sep = _formula_det(scen.kind, x, lam) >= 0
        else:
            rho = so4.rho_real(x, lam)
            sep = is_ppt(rho) if indicator == "eig" else ppt_det(rho) >= 0
        stats = np.stack([w, w * sep])
        return stats.sum(axis=1), stats @ stats.T

    from .measures import _map_chunks

    sums, cross = _map_chunks(work, -(-n // _CHUNK), threads)
    value, err = _ratio(sums, cross, 1, 0)
    return Estimate(value, err, n, seed, time.perf_counter() - t0)


# --- V is not enough ---------------------------------------------------------

@dataclass(frozen=True)
class VWitness:
    lam_a: tuple
    lam_b: tuple
    angles: tuple
    det_a: float
    det_b: float
    tries: int


def spectrum_with_v(l1, l3, v):
    """Solve V = 4 l2 l4/(l1 - l3)^2 for l2 (larger root) at fixed l1, l3."""
    s = 1.0 - l1 - l3
    disc = s * s - v * (l1 - l3) ** 2
    if disc < 0:
        return None
    l2 = 0.5 * (-l1 - l3 + math.sqrt((l1 + l3 - 1.0) ** 2 - v * (l1 - l3) ** 2) + 1.0)
    lam = np.array([l1, l2, l3, 1.0 - l1 - l2 - l3])
    if np.any(np.diff(lam) > 0) or lam[3] < 0:
        return None
    return lam


def v_insufficiency_witness(seed, max_tries=100_000, v=0.5, min_det=1e-12):
    """Two spectra with equal V and one angle set giving opposite PT-determinant signs."""
    rng = np.random.default_rng(seed)
    lo = np.array([r[0] for r in so4.ANGLE_RANGES])
    hi = np.array([r[1] for r in so4.ANGLE_RANGES])
    for t in range(1, max_tries + 1):
        x = rng.uniform(lo, hi)
        found = []
        while len(found) < 2:
            l1 = rng.uniform(0.25, 1.0)
            l3 = rng.uniform(0.0, l1)
            lam = spectrum_with_v(l1, l3, v)
            if lam is not None:
                found.append(lam)
        dets = [float(ppt_det(so4.rho_real(x, lam))) for lam in found]
        if dets[0] * dets[1] < 0 and min(abs(dets[0]), abs(dets[1])) > min_det:
            return VWitness(tuple(map(float, found[0])), tuple(map(float, found[1])), tuple(map(float, x)), dets[0], dets[1], t)
    raise RuntimeError(f"no witness found in {max_tries} tries (search failure, not a proof)")
