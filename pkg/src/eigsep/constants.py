"""
High-precision table of the published closed-form constants.

Values are evaluated with mpmath at 50 digits and stored as decimal
strings; ``printed`` is the decimal as published, used to check that the
closed form reproduces it to the last printed digit.
"""

from dataclasses import dataclass
from decimal import Decimal
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

DIGITS = 50


@dataclass(frozen=True)
class PaperConstant:
    id: str
    formula: str
    value: str | None  # closed form to DIGITS digits; None if only numeric is known
    printed: str | None  # published decimal
    source: str

    @property
    def exact(self):
        return self.value is not None

    def __float__(self):
        return float(self.value if self.value is not None else self.printed)

    def half_ulp(self):
        if self.printed is None:
            return None
        return Decimal(5).scaleb(Decimal(self.printed).as_tuple().exponent - 1)

    def matches_printed(self):
        """|closed form - printed| <= half a unit in the printed last place."""
        if self.value is None or self.printed is None:
            return None
        return abs(Decimal(self.value) - Decimal(self.printed)) <= self.half_ulp()


def _acot(x):
    # principal branch in (-pi/2, pi/2], matching the published formulas
    return mpmath.atan(1 / x)


def _closed_forms():
    s2 = mpmath.sqrt(2)
    pi = mp.pi
    acot = _acot
    acsc3 = mpmath.asin(mpf(1) / 3)
    asec3 = mpmath.acos(mpf(1) / 3)

    vad_uniform = (8 - 6 * s2 + 3 * s2 * mpmath.atan(1904 * s2 / 5983)) / 4
    vad_uniform_neg = -(12 - 8 * s2 + 3 * pi + 12 * acot((-6561 + 1904 * s2) / 5983)) / (4 * s2)
    vad_uniform_dihedral = (8 - 6 * s2 + 3 * s2 * (pi - 8 * acsc3)) / 4
    area_uniform = 3 * (-1 + 3 * s2 * acot(2 * s2))
    ratio_uniform = 12 * (-1 + 3 * s2 * acot(2 * s2)) / (8 - 6 * s2 + 3 * s2 * (pi - 8 * acsc3))
    ratio_uniform_alt = 12 * (-1 + 3 * s2 * acot(2 * s2)) / (8 - 6 * s2 + 3 * s2 * pi - 24 * s2 * acot(2 * s2))

    hs_real = (6928 - 2205 * pi) / (16 * s2)
    alpha1 = 34087768 * s2 - 247867344 * pi - 1292769261 * mpmath.acos(mpf(1) / 3)
    alpha2 = (
        3226925088 * acot(s2)
        + 3760128 * mpmath.atan(1 / (2 * s2))
        + 350082810 * mpmath.atan(s2)
    )
    ratio_hs_real = (alpha1 + alpha2) / (1287 * (-6928 + 2205 * pi))

    psi1 = 1959684729929728 - 1601255307608064 * s2 - 1529087492782080 * s2 * pi
    psi2 = 45247615492565918250 * s2 * acot(s2) - 22619730179635540245 * s2 * asec3
    hs_complex = (psi1 + psi2) / 32614907904
    tau1 = -5358569267936 + 33756573946095 * s2 * pi - 270052591568760 * s2 * acot(s2)
    tau2 = 11149704525960 * s2 * acot(2 * s2) + 270052591568760 * s2 * acot(3 + s2)
    tau3 = -1959684729929728 + 1601255307608064 * s2 + 1529087492782080 * s2 * pi
    tau4 = -45247615492565918250 * s2 * acot(s2) + 22619730179635540245 * s2 * asec3
    ratio_hs_complex = -3840 * (tau1 + tau2) / (tau3 + tau4)

    zeta = [
        -216449750678398795533760757497856 + 176860737736399592490919645937664 * s2,
        279292548969739228073088142369304501839785 * s2 * pi,
        -558572941247617043110461841280869072896000 * s2 * acot(s2),
        23637916932187025487103667523337320 * s2 * acot(2 * s2),
        -16178155879591789043088455851252390200 * s2 * acot(3 + s2),
        -558589165778586158484606527963549721006600 * s2 * mpmath.atan(s2),
    ]
    hs_quat = -mpf(13) / 816946343106356485029888 * mpmath.fsum(zeta)
    qpsi1 = -18147776040854148031593056 - 4720063928074960763823525 * s2 * pi
    qpsi2 = -37760511424599686110588200 * s2 * mpmath.atan(9 - 7 * s2)
    ratio_hs_quat = 13 / (3606947894919168 * hs_quat) * (qpsi1 + qpsi2)

    inradius4 = 1 / mpmath.sqrt(12)

    return {
        "zhsl_uniform_purity": (pi / (6 * mpmath.sqrt(3)), "pi/(6 sqrt3)"),
        "vad_uniform": (vad_uniform, "(8 - 6 sqrt2 + 3 sqrt2 atan(1904 sqrt2/5983))/4"),
        "vad_tilde_uniform": (
            vad_uniform_neg,
            "-(12 - 8 sqrt2 + 3 pi + 12 acot((-6561 + 1904 sqrt2)/5983))/(4 sqrt2)",
        ),
        "vad_uniform_dihedral": (vad_uniform_dihedral, "(8 - 6 sqrt2 + 3 sqrt2 (pi - 8 acsc 3))/4"),
        "area_vad_uniform": (area_uniform, "3 (-1 + 3 sqrt2 acot(2 sqrt2))"),
        "ratio_vad_uniform": (
            ratio_uniform,
            "12 (-1 + 3 sqrt2 acot(2 sqrt2)) / (8 - 6 sqrt2 + 3 sqrt2 (pi - 8 acsc 3))",
        ),
        "ratio_vad_uniform_alt": (
            ratio_uniform_alt,
            "12 (-1 + 3 sqrt2 acot(2 sqrt2)) / (8 - 6 sqrt2 + 3 sqrt2 pi - 24 sqrt2 acot(2 sqrt2))",
        ),
        "hs_real_vad": (hs_real, "(6928 - 2205 pi)/(16 sqrt2)"),
        "ratio_hs_real_vad": (ratio_hs_real, "(alpha1 + alpha2)/(1287 (-6928 + 2205 pi))"),
        "gamma_hs_real": (ratio_hs_real * inradius4, "ratio_hs_real_vad / sqrt(12)"),
        "hs_complex_vad": (hs_complex, "(psi1 + psi2)/32614907904"),
        "ratio_hs_complex_vad": (ratio_hs_complex, "-3840 (tau1 + tau2)/(tau3 + tau4)"),
        "gamma_hs_complex": (ratio_hs_complex * inradius4, "ratio_hs_complex_vad / sqrt(12)"),
        "hs_quat_vad": (hs_quat, "-13/816946343106356485029888 sum(zeta_i)"),
        "ratio_hs_quat_vad": (ratio_hs_quat, "13 (psi1 + psi2)/(3606947894919168 hs_quat_vad)"),
        "gamma_hs_quat": (ratio_hs_quat * inradius4, "ratio_hs_quat_vad / sqrt(12)"),
        "cr1_uniform": (1 / (3 * s2), "1/(3 sqrt2)"),
        "cr1_hs_real": ((104 + 75 * s2) / 17496, "(104 + 75 sqrt2)/17496"),
        "cr2_uniform": (mpf(1) / 9, "1/9"),
        "cr2_hs_real": (mpf(7) / 6561, "7/6561"),
        "cr2_hs_complex": (mpf(143) / 14348907, "143/14348907"),
        "cr2_hs_quat": (mpf(2185) / 2541865828329, "2185/2541865828329"),
        "qq_cr2_uniform": (mpf(1) / 256, "1/256"),
        "qq_cr2_hs_real": (mpf(18989) / 214748364800000, "18989/214748364800000"),
        "inradius_dim4": (inradius4, "1/sqrt(12)"),
        "hs_real_conjecture": (mpf(8) / 17, "8/17"),
        "hs_complex_conjecture": (mpf(8) / 33, "8/33"),
        "hs_quat_conjecture": (mpf(72442944) / 936239725, "72442944/936239725"),
        "bures_conjecture": (1680 * (s2 - 1) / pi**8, "1680 (sqrt2 - 1)/pi^8"),
    }


# id -> (published decimal, source tag)
_PRINTED = {
    "zhsl_uniform_purity": ("0.30229989", "uniform simplex, purity ball"),
    "vad_uniform": ("0.32723006", "uniform simplex, VAD bound"),
    "vad_tilde_uniform": ("0.32723006", "uniform simplex, negativity bound"),
    "vad_uniform_dihedral": ("0.32723006", "uniform simplex, dihedral-angle form"),
    "area_vad_uniform": (None, "uniform simplex, VAD boundary area"),
    "ratio_vad_uniform": ("4.050415", "uniform simplex, VAD area-to-volume"),
    "ratio_vad_uniform_alt": ("4.050415", "uniform simplex, VAD area-to-volume (acot form)"),
    "hs_real_vad": ("0.0348338", "HS real, VAD"),
    "ratio_hs_real_vad": ("12.489976122", "HS real, VAD area-to-volume"),
    "gamma_hs_real": ("3.60555", "HS real, dimensionless ratio"),
    "hs_complex_vad": ("0.0036582630543035", "HS complex, VAD"),
    "ratio_hs_complex_vad": ("20.9648519", "HS complex, VAD area-to-volume"),
    "gamma_hs_complex": ("6.05203", "HS complex, dimensionless ratio"),
    "hs_quat_vad": ("0.000039870347068", "HS quaternionic, VAD"),
    "ratio_hs_quat_vad": ("37.9283799507", "HS quaternionic, VAD area-to-volume"),
    "gamma_hs_quat": ("10.948980", "HS quaternionic, dimensionless ratio"),
    "cr1_uniform": ("0.235702", "uniform simplex, linear Clement-Raggio"),
    "cr1_hs_real": ("0.0120065", "HS real, linear Clement-Raggio"),
    "cr2_uniform": ("0.11111", "uniform simplex, general Clement-Raggio"),
    "cr2_hs_real": ("0.00106691", "HS real, general Clement-Raggio"),
    "cr2_hs_complex": ("0.00000996592", "HS complex, general Clement-Raggio"),
    "cr2_hs_quat": ("0.000000000859605", "HS quaternionic, general Clement-Raggio"),
    "qq_cr2_uniform": ("0.00390625", "qubit-qutrit uniform, Clement-Raggio"),
    "qq_cr2_hs_real": ("0.00000000008842442", "qubit-qutrit HS real, Clement-Raggio"),
    "inradius_dim4": (None, "inradius of the two-qubit eigenvalue simplex"),
    "hs_real_conjecture": ("0.470588", "conjectured HS real separability probability"),
    "hs_complex_conjecture": ("0.242424", "conjectured HS complex separability probability"),
    "hs_quat_conjecture": ("0.0773765", "conjectured HS quaternionic separability probability"),
    "bures_conjecture": ("0.0733389", "conjectured Bures separability probability"),
}

# published values with no closed form given
_NUMERIC_ONLY = {
    "cr1_hs_complex": ("0.00060239769", "HS complex, linear Clement-Raggio"),
    "cr1_hs_quat": ("0.000001502473896", "HS quaternionic, linear Clement-Raggio"),
    "bures_vad": ("0.000161792", "Bures complex, VAD"),
    "ratio_bures_real_vad": ("14.582", "Bures real, VAD area-to-volume"),
    "ratio_bures_complex_vad": ("23.7826", "Bures complex, VAD area-to-volume"),
    "ratio_bures_quat_vad": ("42.115", "Bures quaternionic, VAD area-to-volume"),
    "qq_hildebrand_l1_third": ("0.00976679", "qubit-qutrit uniform, Hildebrand, l1 = 1/3"),
    "qq_hildebrand_l1_quarter": ("0.733736", "qubit-qutrit uniform, Hildebrand, l1 = 1/4"),
    "qq_purity_uniform": ("0.056", "qubit-qutrit uniform, purity ball (cited)"),
}


@lru_cache(maxsize=None)
def paper_constants():
    """Return ``{id: PaperConstant}`` for every published constant."""
    table = {}
    with mp.workdps(DIGITS + 10):
        for cid, (val, formula) in _closed_forms().items():
            printed, source = _PRINTED[cid]
            table[cid] = PaperConstant(cid, formula, mpmath.nstr(val, DIGITS, strip_zeros=False), printed, source)
    for cid, (printed, source) in _NUMERIC_ONLY.items():
        table[cid] = PaperConstant(cid, "numeric", None, printed, source)
    return table


def constant(cid):
    return float(paper_constants()[cid])
