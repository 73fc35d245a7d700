"""Acceptance checks: one printed PASS/FAIL line per criterion.

Run with ``pytest -m acceptance -s`` to see the lines as they are produced;
they are also collected in the terminal summary.
"""

import math
from decimal import Decimal

import numpy as np
import pytest

from conftest import record
from eigsep import criteria as cr
from eigsep import esf, so4
from eigsep.constants import constant, paper_constants
from eigsep.linalg import majorizes, partial_transpose, ppt_det, sym_eigenvalues
from eigsep.registry import TARGETS, run_target
from oracles import CR1, CR2, linear_cut_probability, max_on_vad_boundary

pytestmark = [pytest.mark.acceptance, pytest.mark.slow]

SEED = 20240611
RESULTS = {}


def rel_ok(rec, tol):
    return rec.rel_err <= tol


def fmt(rec):
    return f"{rec.target}={rec.value:.6g}+-{rec.stderr:.2g} (ref {rec.reference:.6g}, rel {rec.rel_err:.2%})"


def test_criterion_1_constants():
    table = paper_constants()
    bad = [c.id for c in table.values() if c.exact and c.printed and not c.matches_printed()]
    a = Decimal(table["vad_uniform"].value)
    forms = all(abs(a - Decimal(table[o].value)) < Decimal("1e-25") for o in ("vad_tilde_uniform", "vad_uniform_dihedral"))
    quad = [
        (linear_cut_probability(*CR1, 2), 0.00060239769, 5e-12),
        (linear_cut_probability(*CR1, 4), 1.502473896e-6, 5e-16),
    ]
    quad_ok = all(abs(v - p) <= h for v, p, h in quad)
    rationals = {
        "cr1_uniform": 1 / (3 * math.sqrt(2)),
        "cr1_hs_real": (104 + 75 * math.sqrt(2)) / 17496,
        "cr2_uniform": 1 / 9,
        "cr2_hs_real": 7 / 6561,
        "cr2_hs_complex": 143 / 14348907,
        "cr2_hs_quat": 2185 / 2541865828329,
        "qq_cr2_uniform": 1 / 256,
        "qq_cr2_hs_real": 18989 / 214748364800000,
    }
    rat_ok = all(constant(k) == pytest.approx(v, rel=1e-14) for k, v in rationals.items())
    ok = not bad and forms and quad_ok and rat_ok
    record(1, ok, f"{sum(c.exact and bool(c.printed) for c in table.values())} closed forms at printed precision"
                  f" (mismatches: {bad or 'none'}); VAD forms agree to 1e-25: {forms};"
                  f" numeric HS linear-bound values by quadrature: {quad_ok}")
    assert ok


@pytest.mark.parametrize("tid", ["purity-uniform", "vad-uniform"])
def test_criterion_2_uniform(tid):
    rec = run_target(tid, n=10_000_000, seed=SEED)
    ok = abs(rec.value - rec.reference) <= 3 * rec.stderr and rec.rel_err <= 0.005
    RESULTS.setdefault(2, []).append((ok, fmt(rec)))
    if len(RESULTS[2]) == 2:
        record(2, all(o for o, _ in RESULTS[2]), "; ".join(d for _, d in RESULTS[2]) + " [3 sigma and 0.5%]")
    assert ok


@pytest.mark.parametrize("tid, tol", [("vad-hs-real", 0.01), ("vad-hs-complex", 0.02), ("vad-hs-quat", 0.05)])
def test_criterion_3_hs_vad(tid, tol):
    rec = run_target(tid, n=100_000_000, seed=SEED)
    ok = rel_ok(rec, tol)
    RESULTS.setdefault(3, []).append((ok, fmt(rec) + f" [{tol:.0%}]"))
    if len(RESULTS[3]) == 3:
        record(3, all(o for o, _ in RESULTS[3]), "; ".join(d for _, d in RESULTS[3]))
    assert ok


def test_criterion_4_bures_vad():
    rec = run_target("vad-bures", n=20_000_000, seed=SEED)
    ok = rel_ok(rec, 0.10)
    record(4, ok, fmt(rec) + " [10%]")
    assert ok


CRIT5 = [
    ("ratio-vad-uniform", 0.03), ("ratio-vad-hs-real", 0.03), ("ratio-vad-hs-complex", 0.03),
    ("ratio-vad-hs-quat", 0.05), ("gamma-vad-hs-real", 0.03), ("gamma-vad-hs-complex", 0.03),
    ("gamma-vad-hs-quat", 0.05),
]


@pytest.mark.parametrize("tid, tol", CRIT5)
def test_criterion_5_ratios(tid, tol):
    rec = run_target(tid, n=20_000_000, seed=SEED)
    ok = rel_ok(rec, tol)
    RESULTS.setdefault(5, []).append((ok, fmt(rec) + f" [{tol:.0%}]"))
    if len(RESULTS[5]) == len(CRIT5):
        record(5, all(o for o, _ in RESULTS[5]), "; ".join(d for _, d in RESULTS[5]))
    assert ok


CRIT6 = [f"ratio-{c}-{m}" for c in ("cr1", "cr2") for m in ("uniform", "hs1", "hs2", "hs4")]


@pytest.mark.parametrize("tid", CRIT6)
def test_criterion_6_linear_ratios(tid):
    rec = run_target(tid, n=20_000_000, seed=SEED)
    ok = rel_ok(rec, 0.02)
    RESULTS.setdefault(6, []).append((ok, f"{tid}={rec.value:.3f}"))
    if len(RESULTS[6]) == len(CRIT6):
        record(6, all(o for o, _ in RESULTS[6]), ", ".join(d for _, d in RESULTS[6]) + " vs 6/18/30/54 [2%]")
    assert ok


CRIT7 = [
    ("qq-cr2-uniform", None, 10_000_000),
    ("ratio-qq-cr2-uniform", 0.02, 20_000_000),
    ("qq-cr2-hs-real", 0.10, 10_000_000),
    ("ratio-qq-cr2-hs-real", 0.05, 20_000_000),
    ("qq-hildebrand-l1-third", 0.10, 10_000_000),
    ("qq-hildebrand-l1-quarter", 0.10, 1_000_000),
]


def _criterion_7_line():
    parts = RESULTS.get(7, [])
    if len(parts) == len(CRIT7) + 1:
        record(7, all(o for o, _ in parts), "; ".join(d for _, d in parts))


@pytest.mark.parametrize("tid, tol, n", CRIT7)
def test_criterion_7_qubit_qutrit(tid, tol, n):
    rec = run_target(tid, n=n, seed=SEED)
    if tol is None:
        ok = abs(rec.value - rec.reference) <= 3 * rec.stderr
        tag = "3 sigma"
    else:
        ok = rel_ok(rec, tol)
        tag = f"{tol:.0%}"
    RESULTS.setdefault(7, []).append((ok, fmt(rec) + f" [{tag}]"))
    _criterion_7_line()
    assert ok


@pytest.mark.xfail(strict=True, reason="the inscribed-ball probability is 0.05231, not 0.056")
def test_criterion_7_purity_two_figures():
    rec = run_target("qq-purity-uniform", n=10_000_000, seed=SEED)
    ok = f"{rec.value:.2g}" == "0.056"
    RESULTS.setdefault(7, []).append((ok, f"{rec.target}={rec.value:.5f}+-{rec.stderr:.1g} vs 0.056 [2 significant figures]"))
    _criterion_7_line()
    assert ok


def test_criterion_8_esf_forms():
    grid = np.linspace(0.0, 1.0, 1000)
    agree = all(esf.esf_ex2_forms_agree(v, tol=1e-12) for v in grid)
    worst = max(
        max(f(v) for f in (esf.esf_ex2_of_v, esf.esf_ex2_root, esf.esf_ex2_radical, esf.esf_ex2_trig))
        - min(f(v) for f in (esf.esf_ex2_of_v, esf.esf_ex2_root, esf.esf_ex2_radical, esf.esf_ex2_trig))
        for v in grid[::37]
    )
    wrong = min(esf.esf_ex2_wrong_sign(v) for v in grid[1:-1])
    ok = agree and wrong > 1.0
    record(8, ok, f"four forms agree to 1e-12 on 1000 points (sampled spread {worst:.1e}); wrong-sign radical min {wrong:.4f} > 1")
    assert ok


def _random_spectra(k, seed):
    rng = np.random.default_rng(seed)
    return -np.sort(-rng.dirichlet(np.ones(4), size=k), axis=1)


CRIT9 = [
    ("ex1", "ppt", esf.esf_ex1),
    ("ex2", "ppt", esf.esf_ex2),
    ("two-angle", "formula", esf.esf_two_angle),
    ("two-angle", "ppt", esf.esf_two_angle_ppt),
]


@pytest.mark.parametrize("kind, indicator, exact", CRIT9, ids=[f"{k}-{i}" for k, i, _ in CRIT9])
def test_criterion_9_esf_vs_mc(kind, indicator, exact):
    spectra = _random_spectra(50, SEED + len(kind))
    worst, fails = 0.0, 0
    for i, lam in enumerate(spectra):
        est = esf.esf_mc(kind, lam, 1_000_000, seed=SEED + i, indicator=indicator)
        d = abs(exact(lam) - est.value)
        z = d / est.stderr if est.stderr > 0 else (0.0 if d < 1e-12 else math.inf)
        worst = max(worst, z)
        fails += z >= 3
    extra = ""
    ok = fails == 0
    if kind == "two-angle" and indicator == "formula":
        gap = max(abs(esf.esf_two_angle_kappa(l) - esf.esf_two_angle_eta(l)) for l in spectra)
        ok = ok and gap < 1e-8
        extra = f"; kappa/eta max gap {gap:.1e}"
    RESULTS.setdefault(9, []).append((ok, f"{kind}/{indicator}: {fails} of 50 beyond 3 sigma, worst z {worst:.2f}{extra}"))
    if len(RESULTS[9]) == len(CRIT9):
        record(9, all(o for o, _ in RESULTS[9]), "; ".join(d for _, d in RESULTS[9]))
    assert ok


def _box_integral(order=10):
    x, w = np.polynomial.legendre.leggauss(order)
    pts, wts = [], []
    for lo, hi in so4.ANGLE_RANGES:
        pts.append(lo + (hi - lo) * (x + 1) / 2)
        wts.append((hi - lo) / 2 * w)
    grid = np.stack(np.meshgrid(*pts, indexing="ij"), axis=-1)
    wgrid = wts[0]
    for w_ in wts[1:]:
        wgrid = np.multiply.outer(wgrid, w_)
    return float(np.sum(wgrid * so4.haar_density(grid)))


def test_criterion_10_properties():
    rng = np.random.default_rng(SEED)
    lo = np.array([r[0] for r in so4.ANGLE_RANGES])
    hi = np.array([r[1] for r in so4.ANGLE_RANGES])
    checks = {}

    x = rng.uniform(lo, hi, size=(10_000, 6))
    g = so4.group_element(x)
    lam = -np.sort(-rng.dirichlet(np.ones(4), size=10_000), axis=1)
    rho = so4.rho_real(x, lam)
    orth = np.max(np.abs(g @ np.swapaxes(g, -1, -2) - np.eye(4)))
    det = np.max(np.abs(np.linalg.det(g) - 1))
    spec = np.max(np.abs(sym_eigenvalues(rho) - lam))
    checks["SO(4) orthogonality/det/spectrum"] = max(orth, det, spec) < 1e-10

    haar = _box_integral()
    checks["Haar box 16 pi^4"] = abs(haar / so4.HAAR_VOLUME - 1) < 1e-3

    m = rng.normal(size=(1000, 4, 4))
    checks["PT involution"] = np.array_equal(partial_transpose(partial_transpose(m)), m)

    diag = -np.sort(-np.diagonal(rho, axis1=1, axis2=2), axis=1)
    checks["Schur-Horn"] = bool(np.all(majorizes(lam, diag, tol=1e-12)))

    big = -np.sort(-rng.dirichlet(np.ones(4), size=1_000_000), axis=1)
    v, vt = cr.vad(big), cr.vad_tilde(big)
    checks["sign(vad) == sign(vad_tilde)"] = bool(np.all(np.sign(v) == np.sign(vt)))
    checks["purity => VAD"] = bool(np.all(v[cr.purity_ok(big)] < 0))

    checks["a(8) = -5983, 5983^2 + 2*1904^2 = 3^16"] = cr.dihedral_a(8) == -5983 and 5983**2 + 2 * 1904**2 == 3**16

    target = cr.max_absep_eigenvalues()
    found = [max_on_vad_boundary(k) for k in range(4)]
    checks["max eigenvalues"] = all(abs(f - t) < 1e-5 for f, t in zip(found, target))

    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    record(10, ok, f"{len(checks) - len(failed)}/{len(checks)} suites hold (orth err {max(orth, det, spec):.1e},"
                   f" Haar {haar / so4.HAAR_VOLUME:.6f} x 16 pi^4); failed: {failed or 'none'}")
    assert ok


def test_criterion_11_witness():
    w = esf.v_insufficiency_witness(seed=SEED, max_tries=100_000)
    va, vb = cr.v_of(np.array(w.lam_a)), cr.v_of(np.array(w.lam_b))
    dets = [float(ppt_det(so4.rho_real(np.array(w.angles), np.array(l)))) for l in (w.lam_a, w.lam_b)]
    ok = (
        w.tries <= 100_000
        and dets[0] * dets[1] < 0
        and min(map(abs, dets)) > 1e-12
        and abs(va - vb) < 1e-12
    )
    record(11, ok, f"found after {w.tries} tries; V = {va:.12f} and {vb:.12f}; dets {dets[0]:.3e}, {dets[1]:.3e}")
    assert ok


def test_criterion_12_bures_ordering():
    parts, ok = [], True
    for kind, hs in (("real", "ratio-vad-hs-real"), ("complex", "ratio-vad-hs-complex"), ("quat", "ratio-vad-hs-quat")):
        rec = run_target(f"ratio-vad-bures-{kind}", n=10_000_000, seed=SEED)
        hs_ref = TARGETS[hs].reference
        this = rel_ok(rec, 0.10) and rec.value > hs_ref
        ok = ok and this
        parts.append(f"{kind} {rec.value:.3f} vs {rec.reference} ({rec.rel_err:.1%}), HS {hs_ref:.3f}")
    record(12, ok, "; ".join(parts) + " [10%, Bures > HS]")
    assert ok
