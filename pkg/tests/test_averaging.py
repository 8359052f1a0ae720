import math

import numpy as np
import pytest

from hybridtele.averaging import (CLASSICAL_LIMIT_FIDELITY, QuadratureSpec,
                                  average_fidelity, average_fidelity_closed, bloch_average)
from hybridtele.errors import NonConvergent, UnsupportedDirection
from hybridtele.teleport import Direction


def test_classical_limit_constant():
    assert CLASSICAL_LIMIT_FIDELITY == pytest.approx(2.0 / 3.0)


def test_quadrature_moments_exact():
    # <|a|^4> = 1/3 and <|a|^2 |b|^2> = 1/6: low-degree polynomials in cos(theta)
    spec = QuadratureSpec(n_theta=8, n_phi=8, tolerance=1e-12)
    m4 = bloch_average(lambda a, b: np.abs(a) ** 4, spec)
    assert m4.value == pytest.approx(1.0 / 3.0, abs=1e-14)
    m22 = bloch_average(lambda a, b: (np.abs(a) * np.abs(b)) ** 2, spec)
    assert m22.value == pytest.approx(1.0 / 6.0, abs=1e-14)
    # a phi-dependent moment: <(2 Re a b*)^2> = <sin^2 theta cos^2 phi> = 1/3
    mphi = bloch_average(lambda a, b: (2.0 * (a * b.conj()).real) ** 2, spec)
    assert mphi.value == pytest.approx(1.0 / 3.0, abs=1e-14)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(n_theta=4)
    with pytest.raises(ValueError):
        QuadratureSpec(tolerance=0.0)


def test_s2c_average_lossless():
    for alpha in (0.5, 1.0, 2.0, 10.0):
        res = average_fidelity(Direction.S2C, alpha, 0.0)
        assert res.converged
        assert res.value == pytest.approx(1.0, abs=1e-9)


def test_c2s_average_boundaries():
    assert average_fidelity(Direction.C2S, 1.0, 0.0).value == pytest.approx(1.0, abs=1e-9)
    r_near_one = math.sqrt(1.0 - 1e-12)
    val = average_fidelity(Direction.C2S, 1.0, r_near_one).value
    assert val == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 10.0])
@pytest.mark.parametrize("r", [0.0, 0.25, 0.5, 0.75, 0.99])
def test_c2s_quadrature_matches_corrected_closed_form(alpha, r):
    quad = average_fidelity(Direction.C2S, alpha, r).value
    closed = average_fidelity_closed(Direction.C2S, alpha, r, "corrected")
    assert quad == pytest.approx(closed, abs=1e-9)


def test_c2s_printed_average_exceeds_bound():
    printed = average_fidelity_closed(Direction.C2S, 1.0, 0.0, "printed")
    assert printed == pytest.approx(7.0 / 6.0, abs=1e-12)
    assert printed > 1.0


def test_c2s_corrected_closed_form_boundaries():
    assert average_fidelity_closed(Direction.C2S, 1.7, 0.0, "corrected") == pytest.approx(1.0, abs=1e-12)
    # t -> 0 limit of the corrected form
    t = 1e-8
    r = math.sqrt(1.0 - t * t)
    assert average_fidelity_closed(Direction.C2S, 1.7, r, "corrected") == pytest.approx(0.5, abs=1e-7)


def test_c2p_closed_form_value_and_quadrature():
    # alpha = 1, t = 0.9: 0.81 (2 + e^-0.38)/3
    r = math.sqrt(1.0 - 0.81)
    closed = average_fidelity_closed(Direction.C2P, 1.0, r)
    assert closed == pytest.approx(0.81 * (2.0 + math.exp(-0.38)) / 3.0, abs=1e-12)
    assert closed == pytest.approx(0.7246, abs=5e-5)
    quad = average_fidelity(Direction.C2P, 1.0, r, variant="corrected").value
    assert quad == pytest.approx(closed, abs=1e-9)


def test_c2p_closed_form_lossless():
    assert average_fidelity_closed(Direction.C2P, 2.0, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_closed_form_unsupported_directions():
    with pytest.raises(UnsupportedDirection):
        average_fidelity_closed(Direction.S2C, 1.0, 0.5)
    with pytest.raises(UnsupportedDirection):
        average_fidelity_closed(Direction.P2C, 1.0, 0.5)


def test_nonconvergent_raises_and_flags():
    # an integrand the 8-node rule cannot certify at 1e-15 without escalation
    spec = QuadratureSpec(n_theta=8, n_phi=8, tolerance=1e-15, max_refinements=0)

    def nasty(a, b):
        return 1.0 / (1.001 + 2.0 * (a * b.conj()).real)

    with pytest.raises(NonConvergent):
        bloch_average(nasty, spec)
    res = bloch_average(nasty, spec, raise_on_nonconvergent=False)
    assert not res.converged


def test_escalation_certifies_hard_point():
    res = average_fidelity(Direction.S2C, 0.5, 0.99, raise_on_nonconvergent=False)
    assert res.converged
    assert 0.0 <= res.value <= 1.0


def test_averages_stay_in_unit_interval():
    for direction in Direction:
        for alpha in (0.5, 2.0):
            for r in (0.1, 0.7):
                res = average_fidelity(direction, alpha, r, raise_on_nonconvergent=False)
                assert 0.0 <= res.value <= 1.0 + 1e-12
