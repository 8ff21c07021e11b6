import math
from fractions import Fraction

import pytest
from scipy import integrate, special

from manin_malle.heights import count_points
from manin_malle.peyre import (CalibrationError, archimedean_density, calibrate_normalization,
                               finite_part, local_density, normalization_rule, peyre_constant, zeta)


def test_local_density_examples():
    assert local_density(2, 3, 0) == Fraction(13, 9)
    assert local_density(1, 2, 1) == Fraction(3, 4)
    assert local_density(0, 7, 0) == 1


def test_zeta_against_scipy():
    for s in (1.5, 2, 3, 4.5, 7):
        assert zeta(s) == pytest.approx(float(special.zeta(s)), rel=1e-13)


def test_finite_part_examples():
    assert finite_part(1) == pytest.approx(6 / math.pi ** 2, rel=1e-13)
    assert finite_part(1) == pytest.approx(0.607927, abs=1e-6)
    assert finite_part(2) == pytest.approx(1 / float(special.zeta(3)), rel=1e-13)
    assert finite_part(2) == pytest.approx(0.831907, abs=1e-6)
    assert finite_part(1, {2: 1}) == pytest.approx(finite_part(1) / 2, rel=1e-15)


def test_archimedean_density_by_quadrature():
    one, _ = integrate.quad(lambda x: max(1.0, abs(x)) ** -2, -1, 1)
    tail, _ = integrate.quad(lambda x: x ** -2, 1, math.inf)
    assert archimedean_density(1) == 4
    assert one + 2 * tail == pytest.approx(4, rel=1e-8)
    inner, _ = integrate.dblquad(lambda y, x: max(1.0, abs(x), abs(y)) ** -3, -8, 8, -8, 8)
    # tail beyond the box: the region max(|x|,|y|) > R contributes 8/R exactly
    assert archimedean_density(2) == 12
    assert inner + 8 / 8 == pytest.approx(12, rel=1e-6)


def test_peyre_constant_examples():
    c1 = peyre_constant(1)
    assert c1.value == pytest.approx(12 / math.pi ** 2, rel=1e-13)
    assert peyre_constant(1, {2: 1}).value == pytest.approx(c1.value / 2, rel=1e-15)
    assert normalization_rule(1) == Fraction(1, 2)
    js = c1.to_json()
    assert js["provenance"]["finite_part"] == "computed"


def test_peyre_p2_against_counts():
    c2 = peyre_constant(2).value
    assert count_points(2, 10**6) / 10**6 == pytest.approx(c2, rel=0.02)


def test_calibration_matches_rule():
    for d in (1, 2):
        cal = calibrate_normalization(d)
        assert cal.value == pytest.approx(float(normalization_rule(d)), rel=0.02)
    tw = calibrate_normalization(1, twist={3: 1})
    assert tw.value == pytest.approx(0.5, rel=0.02)


def test_calibration_instability_raises():
    with pytest.raises(CalibrationError):
        calibrate_normalization(1, B_top=200, samples=5, tol=1e-6)
