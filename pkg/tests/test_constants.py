from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest

from eigsep.constants import paper_constants, constant

TABLE = paper_constants()


@pytest.mark.parametrize("cid", [c for c in TABLE if TABLE[c].exact and TABLE[c].printed])
def test_closed_form_matches_printed(cid):
    c = TABLE[cid]
    assert c.matches_printed(), (cid, c.value[:20], c.printed)


def test_values_have_thirty_digits():
    for c in TABLE.values():
        if c.exact:
            assert len(c.value.replace(".", "").replace("-", "").lstrip("0")) >= 30


def test_vad_forms_agree():
    a = Decimal(TABLE["vad_uniform"].value)
    for other in ("vad_tilde_uniform", "vad_uniform_dihedral"):
        assert abs(a - Decimal(TABLE[other].value)) < Decimal("1e-25")
    assert abs(Decimal(TABLE["ratio_vad_uniform"].value) - Decimal(TABLE["ratio_vad_uniform_alt"].value)) < Decimal("1e-25")


def test_ratio_is_area_over_volume():
    with mpmath.workdps(40):
        r = mpmath.mpf(TABLE["area_vad_uniform"].value) / mpmath.mpf(TABLE["vad_uniform"].value)
        assert abs(r - mpmath.mpf(TABLE["ratio_vad_uniform"].value)) < mpmath.mpf("1e-30")


def test_gamma_uses_inradius():
    for kind in ("real", "complex", "quat"):
        assert constant(f"gamma_hs_{kind}") == pytest.approx(constant(f"ratio_hs_{kind}_vad") / 12**0.5, rel=1e-14)


def test_purity_ball_is_inscribed_ball():
    # the ball sum(l^2) <= 1/3 has radius 1/sqrt(12), the simplex inradius
    r = 1 / 12**0.5
    ball = 4 / 3 * mpmath.pi * r**3
    simplex = 2 / 6  # sqrt(4)/3!
    assert float(ball / simplex) == pytest.approx(constant("zhsl_uniform_purity"), rel=1e-14)


def test_rationals_exact():
    assert Fraction(1, 256) == Fraction(TABLE["qq_cr2_uniform"].printed)
    assert float(Fraction(18989, 214748364800000)) == pytest.approx(8.842442e-11, rel=1e-7)
    assert float(Fraction(7, 6561)) == pytest.approx(0.00106691, abs=5e-9)


def test_half_ulp():
    assert TABLE["cr2_uniform"].half_ulp() == Decimal("0.000005")


def test_numeric_only_entries():
    c = TABLE["cr1_hs_complex"]
    assert not c.exact and c.matches_printed() is None
    assert float(c) == pytest.approx(0.00060239769)
