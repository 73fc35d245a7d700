"""
Reproduction targets: each published number paired with the estimator that
recomputes it, a tolerance and a provenance tag.
"""

import hashlib
import json
import time
from dataclasses import asdict, dataclass

from .constants import constant
from .criteria import CriterionSpec
from .measures import (
    MeasureSpec,
    RegionSpec,
    area_to_volume,
    estimate_probability,
    estimate_probability_two_stage,
)


@dataclass(frozen=True)
class Target:
    id: str
    kind: str  # prob | two_stage | ratio | gamma
    measure: str
    criterion: str
    dim: int
    reference: float
    source: str
    tol_abs: float = 0.0
    tol_rel: float = 0.005
    n: int = 10_000_000
    condition_l1: float | None = None

    def region(self):
        return RegionSpec(CriterionSpec(self.criterion, self.dim), self.condition_l1)

    def measure_spec(self):
        return MeasureSpec.parse(self.measure, self.dim)


def _t(id, kind, measure, criterion, ref, source, dim=4, **kw):
    ref = constant(ref) if isinstance(ref, str) else float(ref)
    return Target(id, kind, measure, criterion, dim, ref, source, **kw)


_AREA = "area-to-volume ratio"
_TARGETS = [
    _t("purity-uniform", "prob", "uniform", "purity", "zhsl_uniform_purity", "uniform purity-ball probability, closed form pi/(6 sqrt3)"),
    _t("vad-uniform", "prob", "uniform", "vad", "vad_uniform", "uniform VAD probability, closed form with arctan(1904 sqrt2/5983)"),
    _t("vad-tilde-uniform", "prob", "uniform", "vad_tilde", "vad_tilde_uniform", "uniform probability of the negativity bound, equal to VAD"),
    _t("vad-hs-real", "prob", "hs:1", "vad", "hs_real_vad", "real HS VAD probability (6928 - 2205 pi)/(16 sqrt2)", tol_rel=0.01, n=100_000_000),
    _t("vad-hs-complex", "prob", "hs:2", "vad", "hs_complex_vad", "complex HS VAD probability, closed form", tol_rel=0.02, n=100_000_000),
    _t("vad-hs-quat", "prob", "hs:4", "vad", "hs_quat_vad", "quaternionic HS VAD probability, closed form", tol_rel=0.05, n=100_000_000),
    _t("vad-bures", "prob", "bures:2", "vad", "bures_vad", "Bures VAD probability, numerical estimate only", tol_rel=0.10, n=20_000_000),
    _t("cr1-uniform", "prob", "uniform", "cr1", "cr1_uniform", "uniform linear-bound probability 1/(3 sqrt2)"),
    _t("cr1-hs-real", "prob", "hs:1", "cr1", "cr1_hs_real", "real HS linear-bound probability (104 + 75 sqrt2)/17496", tol_rel=0.01),
    _t("cr1-hs-complex", "prob", "hs:2", "cr1", "cr1_hs_complex", "complex HS linear-bound probability, numeric", tol_rel=0.02),
    _t("cr1-hs-quat", "prob", "hs:4", "cr1", "cr1_hs_quat", "quaternionic HS linear-bound probability, numeric", tol_rel=0.10),
    _t("cr2-uniform", "prob", "uniform", "cr2", "cr2_uniform", "uniform probability of 3 l3 + 3 l4 >= 1, 1/9"),
    _t("cr2-hs-real", "prob", "hs:1", "cr2", "cr2_hs_real", "real HS probability of 3 l3 + 3 l4 >= 1, 7/6561", tol_rel=0.02),
    _t("cr2-hs-complex", "two_stage", "hs:2", "cr2", "cr2_hs_complex", "complex HS probability 143/14348907", tol_rel=0.10),
    _t("cr2-hs-quat", "two_stage", "hs:4", "cr2", "cr2_hs_quat", "quaternionic HS probability 2185/2541865828329", tol_rel=0.10),
    _t("qq-cr2-uniform", "prob", "uniform", "qq_cr2", "qq_cr2_uniform", "qubit-qutrit uniform probability 1/256", dim=6),
    _t("qq-cr2-hs-real", "two_stage", "hs:1", "qq_cr2", "qq_cr2_hs_real", "qubit-qutrit real HS probability 18989/214748364800000", dim=6, tol_rel=0.10),
    _t("qq-hildebrand-l1-third", "prob", "uniform", "hildebrand", "qq_hildebrand_l1_third", "qubit-qutrit bound on the slice l1 = 1/3", dim=6, tol_rel=0.10, condition_l1=1 / 3),
    _t("qq-hildebrand-l1-quarter", "prob", "uniform", "hildebrand", "qq_hildebrand_l1_quarter", "qubit-qutrit bound on the slice l1 = 1/4", dim=6, tol_rel=0.10, n=1_000_000, condition_l1=0.25),
    _t("qq-purity-uniform", "prob", "uniform", "purity", "qq_purity_uniform", "qubit-qutrit uniform purity-ball probability, quoted to two figures", dim=6, tol_abs=5e-4, tol_rel=0.0),
    _t("ratio-vad-uniform", "ratio", "uniform", "vad", "ratio_vad_uniform", f"uniform VAD {_AREA}", tol_rel=0.03, n=20_000_000),
    _t("ratio-vad-hs-real", "ratio", "hs:1", "vad", "ratio_hs_real_vad", f"real HS VAD {_AREA}", tol_rel=0.03, n=20_000_000),
    _t("ratio-vad-hs-complex", "ratio", "hs:2", "vad", "ratio_hs_complex_vad", f"complex HS VAD {_AREA}", tol_rel=0.03, n=20_000_000),
    _t("ratio-vad-hs-quat", "ratio", "hs:4", "vad", "ratio_hs_quat_vad", f"quaternionic HS VAD {_AREA}", tol_rel=0.05, n=20_000_000),
    _t("gamma-vad-hs-real", "gamma", "hs:1", "vad", "gamma_hs_real", "real HS VAD dimensionless ratio", tol_rel=0.03, n=20_000_000),
    _t("gamma-vad-hs-complex", "gamma", "hs:2", "vad", "gamma_hs_complex", "complex HS VAD dimensionless ratio", tol_rel=0.03, n=20_000_000),
    _t("gamma-vad-hs-quat", "gamma", "hs:4", "vad", "gamma_hs_quat", "quaternionic HS VAD dimensionless ratio", tol_rel=0.05, n=20_000_000),
    _t("ratio-vad-bures-real", "ratio", "bures:1", "vad", "ratio_bures_real_vad", f"Bures-type (beta 1) VAD {_AREA}, numeric", tol_rel=0.10, n=10_000_000),
    _t("ratio-vad-bures-complex", "ratio", "bures:2", "vad", "ratio_bures_complex_vad", f"Bures VAD {_AREA}, numeric", tol_rel=0.10, n=10_000_000),
    _t("ratio-vad-bures-quat", "ratio", "bures:4", "vad", "ratio_bures_quat_vad", f"Bures-type (beta 4) VAD {_AREA}, numeric", tol_rel=0.10, n=10_000_000),
    _t("ratio-qq-cr2-uniform", "ratio", "uniform", "qq_cr2", 15, f"qubit-qutrit uniform {_AREA} 15", dim=6, tol_rel=0.02, n=20_000_000),
    _t("ratio-qq-cr2-hs-real", "ratio", "hs:1", "qq_cr2", 60, f"qubit-qutrit real HS {_AREA} 60", dim=6, tol_rel=0.05, n=20_000_000),
]
for _crit in ("cr1", "cr2"):
    for _m, _ref in (("uniform", 6), ("hs:1", 18), ("hs:2", 30), ("hs:4", 54)):
        _TARGETS.append(
            _t(f"ratio-{_crit}-{_m.replace(':', '')}", "ratio", _m, _crit, _ref,
               f"linear-bound {_AREA} {_ref}", tol_rel=0.02, n=20_000_000)
        )

TARGETS = {t.id: t for t in _TARGETS}


@dataclass
class RunRecord:
    target: str
    value: float
    stderr: float
    n: int
    seed: int
    reference: float
    ref_source: str
    abs_err: float
    rel_err: float
    passed: bool
    elapsed_seconds: float
    config_hash: str
    timestamp: float

    def to_json(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    @classmethod
    def from_json(cls, d):
        d = dict(d)
        d["passed"] = d.pop("pass")
        return cls(**d)


def passes(value, stderr, reference, tol_abs=0.0, tol_rel=0.0):
    """|value - reference| <= max(tol_abs, tol_rel |reference|, 3 stderr)."""
    return abs(value - reference) <= max(tol_abs, tol_rel * abs(reference), 3.0 * stderr)


def config_hash(config):
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def run_target(target, n=None, seed=0, threads=1):
    """Run a target's estimator and return its RunRecord."""
    if isinstance(target, str):
        if target not in TARGETS:
            raise KeyError(target)
        target = TARGETS[target]
    n = int(n or target.n)
    m, r = target.measure_spec(), target.region()
    if target.kind == "prob":
        est = estimate_probability(m, r, n, seed, threads=threads)
        value, err = est.value, est.stderr
    elif target.kind == "two_stage":
        est = estimate_probability_two_stage(m, r, max(n // 500, 2000), n, seed, threads=threads)
        value, err = est.value, est.stderr
    else:
        est = area_to_volume(m, r, n, seed, threads=threads)
        if target.kind == "ratio":
            value, err = est.ratio.value, est.ratio.stderr
        else:
            value, err = est.gamma, est.gamma_stderr
        est = est.ratio
    ref = target.reference
    cfg = {"command": "reproduce", "target": target.id, "n": n, "seed": seed}
    return RunRecord(
        target=target.id,
        value=value,
        stderr=err,
        n=n,
        seed=seed,
        reference=ref,
        ref_source=target.source,
        abs_err=abs(value - ref),
        rel_err=abs(value - ref) / abs(ref),
        passed=passes(value, err, ref, target.tol_abs, target.tol_rel),
        elapsed_seconds=est.elapsed_seconds,
        config_hash=config_hash(cfg),
        timestamp=time.time(),
    )
