"""
Measures on the eigenvalue simplex and the Monte-Carlo estimators built on them.

Every estimator here is a ratio of weighted sums over sorted spectra drawn
from a Dirichlet law, so measure normalizations never appear.  Samples are
generated in fixed-size chunks, each with its own child seed, and chunk
sums are merged in order with ``math.fsum``; an estimate therefore depends
only on ``(n, seed)`` and not on the number of worker threads.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.stats import qmc as _qmc

from .criteria import CriterionSpec

CHUNK = 1 << 18
QMC_REPLICATES = 32
FAMILIES = ("uniform", "hs", "bures")


@dataclass(frozen=True)
class MeasureSpec:
    """Eigenvalue law on the simplex.

    ``uniform`` is flat; ``hs`` has density prod_{i<j} (l_i - l_j)^beta;
    ``bures`` has density prod l_i^(-1/2) prod_{i<j} (l_i - l_j)^beta /
    (l_i + l_j)^(beta/2), which is the usual Bures law at beta = 2.
    """

    family: str = "uniform"
    beta: int | None = None  # defaults to 2 for bures, 1 otherwise
    dim: int = 4

    def __post_init__(self):
        if self.beta is None:
            object.__setattr__(self, "beta", 2 if self.family == "bures" else 1)
        if self.family not in FAMILIES:
            raise ValueError(f"unknown measure family {self.family!r}; choose from {FAMILIES}")
        if self.dim not in (4, 6):
            raise ValueError(f"dim must be 4 or 6, got {self.dim}")
        if self.family in ("hs", "bures") and self.beta not in (1, 2, 4):
            raise ValueError(f"beta must be 1, 2 or 4, got {self.beta}")
        if self.family == "bures" and self.dim != 4:
            raise ValueError("the Bures measure is only provided for dim 4")

    @classmethod
    def parse(cls, text, dim=4):
        """Parse ``uniform``, ``hs:2`` or ``bures`` / ``bures:4``."""
        name, _, beta = text.partition(":")
        if name == "uniform":
            return cls("uniform", 1, dim)
        return cls(name, int(beta) if beta else (2 if name == "bures" else 1), dim)

    @property
    def label(self):
        return "uniform" if self.family == "uniform" else f"{self.family}:{self.beta}"

    @property
    def dirichlet_alpha(self):
        # proposal law; the Bures l^(-1/2) factor is absorbed here
        return 0.5 if self.family == "bures" else 1.0


@dataclass(frozen=True)
class RegionSpec:
    criterion: CriterionSpec
    condition_l1: float | None = None

    def __post_init__(self):
        if self.condition_l1 is not None:
            c = float(self.condition_l1)
            if not 0.0 < c < 1.0:
                raise ValueError(f"conditioning value must lie in (0, 1), got {c}")
            if c * self.criterion.dim < 1.0 - 1e-15:
                raise ValueError(f"l1 = {c} is below 1/dim; the slice is empty")

    @property
    def dim(self):
        return self.criterion.dim


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n: int
    seed: int
    elapsed_seconds: float = 0.0

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ValueError("stderr must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be positive")

    def z(self, reference):
        if self.stderr == 0:
            return 0.0 if self.value == reference else math.inf
        return (self.value - reference) / self.stderr


@dataclass(frozen=True)
class AreaResult:
    ratio: Estimate
    gamma: float
    gamma_stderr: float
    area: Estimate
    volume: Estimate
    raw: dict = field(default_factory=dict)  # ratio at each epsilon before extrapolation
    excluded_fraction: float = 0.0


def inradius(dim):
    """Inradius of the regular probability simplex in R^dim."""
    return 1.0 / math.sqrt(dim * (dim - 1))


# --- sampling ---------------------------------------------------------------------

def _spawn_rng(seed, i):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(i),))))


def _sort_desc(x):
    x.sort(axis=-1)
    return x[..., ::-1]


def dirichlet_unsorted(rng, n, dim, alpha=1.0):
    if alpha == 1.0:
        g = rng.standard_exponential((n, dim))
    else:
        g = rng.standard_gamma(alpha, (n, dim))
    return g / g.sum(axis=1, keepdims=True)


def sample_sorted_spectrum(dim, rng, n=None, alpha=1.0):
    """Sorted Dirichlet(alpha) spectra; alpha = 1 is the uniform law.

    Returns one vector if `n` is None, otherwise an ``(n, dim)`` array.
    """
    if dim not in (4, 6):
        raise ValueError(f"dim must be 4 or 6, got {dim}")
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    lam = _sort_desc(dirichlet_unsorted(rng, 1 if n is None else n, dim, alpha))
    return lam[0] if n is None else lam


def _vandermonde(lam):
    dim = lam.shape[-1]
    out = np.ones(lam.shape[:-1])
    for i in range(dim):
        for j in range(i + 1, dim):
            out = out * (lam[..., i] - lam[..., j])
    return np.abs(out)


def _bures_pairs(lam, beta):
    dim = lam.shape[-1]
    out = np.ones(lam.shape[:-1])
    for i in range(dim):
        for j in range(i + 1, dim):
            d = np.abs(lam[..., i] - lam[..., j])
            out = out * d**beta / (lam[..., i] + lam[..., j]) ** (beta / 2)
    return out


def measure_weight(m, lam):
    """Unnormalized density of measure `m` at sorted spectra `lam`.

    Bures at a spectrum with a zero eigenvalue returns ``inf``.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape[-1] != m.dim:
        raise ValueError(f"expected {m.dim} eigenvalues, got {lam.shape[-1]}")
    if m.family == "uniform":
        return np.ones(lam.shape[:-1])[()]
    if m.family == "hs":
        return (_vandermonde(lam) ** m.beta)[()]
    with np.errstate(divide="ignore"):
        return (np.prod(lam, axis=-1) ** -0.5 * _bures_pairs(lam, m.beta))[()]


def _proposal_weight(m, lam):
    # measure density divided by the Dirichlet(alpha) proposal density
    if m.family == "uniform":
        return np.ones(lam.shape[0])
    if m.family == "hs":
        return _vandermonde(lam) ** m.beta
    return _bures_pairs(lam, m.beta)


def _draw(m, rng, size, condition_l1=None):
    """Sorted samples and importance weights for one chunk."""
    if condition_l1 is None:
        lam = _sort_desc(dirichlet_unsorted(rng, size, m.dim, m.dirichlet_alpha))
        return lam, _proposal_weight(m, lam)
    if m.family == "bures":
        raise ValueError("conditioned slices are only provided for uniform and hs measures")
    c = float(condition_l1)
    rest = _sort_desc(dirichlet_unsorted(rng, size, m.dim - 1)) * (1.0 - c)
    lam = np.concatenate([np.full((size, 1), c), rest], axis=1)
    # draws with l2 > l1 fall outside the slice
    return lam, _proposal_weight(m, lam) * (rest[:, 0] <= c)


# --- chunked accumulation ---------------------------------------------------------

def _map_chunks(work, n_chunks, threads=1):
    """Run ``work(i) -> (sums, cross)`` over chunks and merge in chunk order."""
    if threads and threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, range(n_chunks)))
    else:
        parts = [work(i) for i in range(n_chunks)]
    sums = np.array([math.fsum(col) for col in zip(*(p[0] for p in parts))])
    k = sums.size
    cross = np.empty((k, k))
    for a in range(k):
        for b in range(k):
            cross[a, b] = math.fsum(p[1][a, b] for p in parts)
    return sums, cross


def _ratio(sums, cross, num, den):
    """Ratio of two sums with its delta-method standard error."""
    sb = sums[den]
    if not sb > 0:
        raise ZeroDivisionError("weight sum is zero; the measure/region combination is degenerate")
    r = sums[num] / sb
    var = (cross[num, num] - 2.0 * r * cross[num, den] + r * r * cross[den, den]) / (sb * sb)
    return float(r), float(math.sqrt(max(var, 0.0)))


def _linear_ratio(sums, cross, coef_num, den):
    # ratio (c . S) / S_den with the same delta-method error
    c = np.asarray(coef_num, dtype=float)
    k = sums.size
    ext_sums = np.append(sums, c @ sums)
    ext = np.zeros((k + 1, k + 1))
    ext[:k, :k] = cross
    ext[k, :k] = ext[:k, k] = c @ cross
    ext[k, k] = c @ cross @ c
    return _ratio(ext_sums, ext, k, den)


def _accumulate(n, seed, threads, stats_fn):
    """Sum per-sample statistic rows ``stats_fn(rng, m) -> (k, m)`` over n draws."""
    if n < 1:
        raise ValueError("n must be positive")

    def work(i):
        m = min(CHUNK, n - i * CHUNK)
        s = stats_fn(_spawn_rng(seed, i), m)
        return s.sum(axis=1), s @ s.T

    return _map_chunks(work, -(-n // CHUNK), threads)


def _check_pair(m, r):
    if m.dim != r.dim:
        raise ValueError(f"measure dim {m.dim} does not match criterion dim {r.dim}")


# --- probabilities ------------------------------------------------------------------

def _qmc_unit_to_dirichlet(u, dim, alpha):
    """Map points of the (dim-1)-cube to Dirichlet(alpha) vectors."""
    if alpha == 1.0:
        s = np.sort(u, axis=1)
        edges = np.concatenate([np.zeros((len(u), 1)), s, np.ones((len(u), 1))], axis=1)
        return np.diff(edges, axis=1)
    out = np.empty((len(u), dim))
    remaining = np.ones(len(u))
    for k in range(dim - 1):
        b = special.betaincinv(alpha, alpha * (dim - 1 - k), u[:, k])
        out[:, k] = remaining * b
        remaining = remaining * (1.0 - b)
    out[:, -1] = remaining
    return out


def _estimate_qmc(m, r, n, seed):
    if r.condition_l1 is not None:
        raise ValueError("qmc is not provided for conditioned slices")
    per = max(2, 1 << max(1, round(math.log2(max(n / QMC_REPLICATES, 2)))))
    root = np.random.SeedSequence(int(seed))
    vals = []
    for child in root.spawn(QMC_REPLICATES):
        sob = _qmc.Sobol(m.dim - 1, scramble=True, seed=np.random.default_rng(child))
        lam = _sort_desc(_qmc_unit_to_dirichlet(sob.random(per), m.dim, m.dirichlet_alpha))
        w = _proposal_weight(m, lam)
        den = math.fsum(w)
        if not den > 0:
            raise ZeroDivisionError("weight sum is zero")
        vals.append(math.fsum(w * r.criterion.holds(lam)) / den)
    vals = np.array(vals)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals))), per * QMC_REPLICATES


def estimate_probability(m, r, n, seed, qmc=False, threads=1):
    """Measure-`m` probability of region `r` from n sorted draws.

    The plain estimator is sum(w 1_region) / sum(w) with a delta-method
    standard error.  With ``qmc=True`` the draws come from 32 independently
    scrambled Sobol sequences and the error is taken from their spread; the
    total number of points is rounded to 32 times a power of two.
    """
    _check_pair(m, r)
    if n < 1000:
        raise ValueError("n must be at least 1000")
    t0 = time.perf_counter()
    if qmc:
        value, err, used = _estimate_qmc(m, r, n, seed)
        return Estimate(value, err, used, seed, time.perf_counter() - t0)

    def stats(rng, size):
        lam, w = _draw(m, rng, size, r.condition_l1)
        return np.stack([w, w * r.criterion.holds(lam)])

    sums, cross = _accumulate(n, seed, threads, stats)
    value, err = _ratio(sums, cross, 1, 0)
    return Estimate(value, err, n, seed, time.perf_counter() - t0)


def estimate_probability_two_stage(m, r, n_region, n_total, seed, threads=1, min_acceptance=1e-4):
    """P_uniform(region) * E_region[w] / E_simplex[w], each factor estimated separately.

    Suited to regions whose measure-`m` probability is too small for the
    direct ratio, but whose uniform probability is not.  ``n_region`` is
    the number of accepted in-region samples requested for the middle
    factor; the other two factors use ``n_total`` draws each.
    """
    _check_pair(m, r)
    if r.condition_l1 is not None:
        raise ValueError("two-stage estimation is not provided for conditioned slices")
    t0 = time.perf_counter()
    seq = np.random.SeedSequence(int(seed))
    s_uni, s_reg, s_all = (int(c.generate_state(1)[0]) for c in seq.spawn(3))
    uniform = MeasureSpec("uniform", 1, m.dim)
    p_uni = estimate_probability(uniform, r, n_total, s_uni, threads=threads)
    if p_uni.value < min_acceptance:
        raise ValueError(f"uniform acceptance {p_uni.value:.3g} is below {min_acceptance}")

    # mean weight inside the region, by rejection from the uniform law
    draws = int(math.ceil(1.2 * n_region / p_uni.value))

    def reg_stats(rng, size):
        lam = _sort_desc(dirichlet_unsorted(rng, size, m.dim))
        inside = r.criterion.holds(lam)
        w = np.where(inside, measure_weight(m, lam), 0.0)
        return np.stack([inside.astype(float), w])

    sums, cross = _accumulate(draws, s_reg, threads, reg_stats)
    e_reg, e_reg_err = _ratio(sums, cross, 1, 0)

    def all_stats(rng, size):
        lam = _sort_desc(dirichlet_unsorted(rng, size, m.dim))
        w = measure_weight(m, lam) * np.ones(size)
        return np.stack([np.ones(size), w])

    sums, cross = _accumulate(n_total, s_all, threads, all_stats)
    e_all, e_all_err = _ratio(sums, cross, 1, 0)

    value = p_uni.value * e_reg / e_all
    rel = math.sqrt((p_uni.stderr / p_uni.value) ** 2 + (e_reg_err / e_reg) ** 2 + (e_all_err / e_all) ** 2)
    return Estimate(value, abs(value) * rel, n_total * 2 + draws, seed, time.perf_counter() - t0)


# --- areas -----------------------------------------------------------------------------

def sorted_simplex_volume(dim):
    """Euclidean (dim-1)-volume of the sorted probability simplex."""
    return math.sqrt(dim) / math.factorial(dim - 1) / math.factorial(dim)


def _shell_stats(m, criterion, eps, mode, condition_l1, lam_floor):
    eps2 = 0.5 * eps

    def stats(rng, size):
        lam, w = _draw(m, rng, size, condition_l1)
        f = criterion.level(lam)
        inside = criterion.holds(lam)
        if mode == "geometric":
            g = criterion.gradient(lam)
            g = g - g.mean(axis=1, keepdims=True)
            scale = np.sqrt(np.sum(g * g, axis=1))
            keep = lam[:, -1] >= lam_floor
            scale = np.where(keep, scale, 0.0)
        else:
            scale = 1.0
            keep = True
        near = np.abs(f) < eps
        with np.errstate(invalid="ignore"):
            a1 = np.where(np.abs(f) < eps, w * scale, 0.0) / (2.0 * eps)
            a2 = np.where(np.abs(f) < eps2, w * scale, 0.0) / (2.0 * eps2)
        return np.stack([w, w * inside, a1, a2, w * (near & ~keep), w * near])

    return stats


def _area_pass(m, criterion, n, seed, epsilon, mode, condition_l1, threads, lam_floor):
    if mode not in ("level", "geometric"):
        raise ValueError(f"unknown area mode {mode!r}")
    if m.dim != criterion.dim:
        raise ValueError(f"measure dim {m.dim} does not match criterion dim {criterion.dim}")
    sums, cross = _accumulate(n, seed, threads, _shell_stats(m, criterion, epsilon, mode, condition_l1, lam_floor))
    if sums[2] == 0 or sums[3] == 0:
        raise ArithmeticError("no samples fell in the thin shell; increase n or epsilon")
    return sums, cross


# Richardson combination of the eps and eps/2 shells: (4 A(eps/2) - A(eps)) / 3
_RICH = np.array([0.0, 0.0, -1.0 / 3.0, 4.0 / 3.0, 0.0, 0.0])


def estimate_area(m, criterion, n, epsilon=1e-2, seed=0, mode="level", threads=1, lam_floor=1e-6):
    """Thin-shell estimate of the area of the zero set of a criterion's level function.

    ``mode="level"`` measures the density of the level value at zero,
    i.e. d/dt P(f < t) at t = 0, as a fraction of the total measure.
    ``mode="geometric"`` weights each shell sample by the norm of the
    gradient projected onto the sum-zero hyperplane, which gives the
    Euclidean surface measure; for the uniform law it is scaled by the
    sorted-simplex volume to give an absolute area.  In geometric mode
    samples with smallest eigenvalue below `lam_floor` are dropped.
    Shells at `epsilon` and `epsilon/2` are combined by Richardson
    extrapolation.
    """
    t0 = time.perf_counter()
    sums, cross = _area_pass(m, criterion, n, seed, epsilon, mode, None, threads, lam_floor)
    value, err = _linear_ratio(sums, cross, _RICH, 0)
    if mode == "geometric" and m.family == "uniform":
        vol = sorted_simplex_volume(m.dim)
        value, err = value * vol, err * vol
    return Estimate(value, err, n, seed, time.perf_counter() - t0)


def area_to_volume(m, r, n, seed=0, epsilon=1e-2, mode="level", threads=1, lam_floor=1e-6):
    """Area-to-volume ratio of a region and the dimensionless ratio gamma.

    Area and volume come from one shared sample, so unnormalized weights
    cancel.  gamma is the ratio times the simplex inradius
    1/sqrt(dim (dim - 1)).
    """
    if isinstance(r, CriterionSpec):
        r = RegionSpec(r)
    _check_pair(m, r)
    t0 = time.perf_counter()
    sums, cross = _area_pass(m, r.criterion, n, seed, epsilon, mode, r.condition_l1, threads, lam_floor)
    elapsed = time.perf_counter() - t0
    ratio, ratio_err = _linear_ratio(sums, cross, _RICH, 1)
    area, area_err = _linear_ratio(sums, cross, _RICH, 0)
    vol, vol_err = _ratio(sums, cross, 1, 0)
    raw = {epsilon: _ratio(sums, cross, 2, 1)[0], epsilon / 2: _ratio(sums, cross, 3, 1)[0]}
    excluded = float(sums[4] / sums[5])
    rad = inradius(m.dim)
    return AreaResult(
        ratio=Estimate(ratio, ratio_err, n, seed, elapsed),
        gamma=ratio * rad,
        gamma_stderr=ratio_err * rad,
        area=Estimate(area, area_err, n, seed, elapsed),
        volume=Estimate(vol, vol_err, n, seed, elapsed),
        raw=raw,
        excluded_fraction=excluded,
    )


# --- classification scans ---------------------------------------------------------------

def classify_scan(dim, n, seed, criterion="vad"):
    """Tag uniform simplex points by absolute-separability bound and purity.

    Returns a dict of arrays: ``points`` (unsorted, as drawn), ``level``
    (the bound's level function on the sorted spectrum), ``purity`` and
    ``cls``, one of ``both`` (purity ball and bound), ``bound_only``
    (bound holds, purity above threshold), ``purity_only`` and ``neither``.
    """
    if dim not in (4, 6):
        raise ValueError(f"dim must be 4 or 6, got {dim}")
    if criterion == "vad" and dim == 6:
        criterion = "hildebrand"
    spec = CriterionSpec(criterion, dim)
    rng = np.random.default_rng(seed)
    pts = dirichlet_unsorted(rng, n, dim)
    lam = _sort_desc(pts.copy())
    level = spec.level(lam)
    pur = np.sum(lam * lam, axis=1)
    ball = pur <= 1.0 / (dim - 1)
    bound = spec.holds(lam)
    cls = np.select(
        [ball & bound, bound & ~ball, ball & ~bound],
        ["both", "bound_only", "purity_only"],
        default="neither",
    )
    return {"points": pts, "level": level, "purity": pur, "cls": cls}
