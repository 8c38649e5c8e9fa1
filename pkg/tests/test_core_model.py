"""Closed-form susceptibility, cavity response and intensity ratios."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from app.core.errors import PassivityViolation
from app.model.physics import IntensityRecord, SystemParams
from app.services.core_model import (
    absorption_of,
    cavity_response,
    coefficient_abc,
    intensity_ratios,
    intracavity_amplitude,
    susceptibility,
)

_DETUNINGS = np.linspace(-5.0, 5.0, 21).tolist()
_PHASES = np.linspace(0.0, 2.0 * math.pi, 17).tolist()


def test_coefficients_at_defaults():
    a, b, c = coefficient_abc(SystemParams(), 0.5)
    assert a == pytest.approx(0.5 + 0.001j)
    assert b == pytest.approx(0.5 + 1j)
    assert c == pytest.approx(0.5 + 1j)


def test_susceptibility_at_defaults_on_resonance(defaults):
    chi = susceptibility(defaults, 0.0)
    assert abs(chi - (0.25000 + 0.25025j)) < 1e-4, f"chi={chi}"


def test_susceptibility_quarter_loop_is_imaginary(quarter_loop):
    chi = susceptibility(quarter_loop, 0.0)
    assert abs(chi - 0.5j) < 1e-12, f"chi={chi}"


def test_susceptibility_even_in_loop_phase(defaults):
    for phi1 in (0.2, 1.0, 2.0, 3.0):
        for delta_p in (-3.0, 0.0, 1.5):
            plus = susceptibility(defaults.with_phases(phi1=phi1), delta_p)
            minus = susceptibility(defaults.with_phases(phi1=2.0 * math.pi - phi1), delta_p)
            assert abs(plus - minus) <= 1e-12 * abs(plus)


def test_susceptibility_vanishes_without_atoms():
    assert susceptibility(SystemParams(g_n=0.0), 0.7) == 0


def test_cavity_response_empty_cavity_on_resonance():
    assert cavity_response(SystemParams(g_n=0.0), 0.0) == pytest.approx(1.0)


def test_quarter_loop_trapping_values(quarter_loop):
    rec = intensity_ratios(quarter_loop, 0.0)
    assert cavity_response(quarter_loop, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert rec.i_c == pytest.approx(16.0 / 9.0, abs=1e-12)
    assert rec.i_out_r == pytest.approx(1.0 / 9.0, abs=1e-12)
    assert rec.i_out_l == pytest.approx(1.0 / 9.0, abs=1e-12)
    assert rec.i_total == pytest.approx(2.0 / 9.0, abs=1e-12)
    assert rec.absorption == pytest.approx(1.0 - 1.0 / 9.0, abs=1e-12)
    assert rec.i_total <= 0.25


def test_perfect_transmitter_at_anti_phase():
    """φ2 = π: the intracavity field cancels and both inputs leave untouched."""
    for phi1 in _PHASES:
        for delta_p in _DETUNINGS:
            rec = intensity_ratios(SystemParams(phi1=phi1, phi2=math.pi), delta_p)
            assert abs(rec.i_c) <= 1e-12
            assert abs(rec.i_out_r - 1.0) <= 1e-12
            assert abs(rec.i_out_l - 1.0) <= 1e-12
            assert abs(rec.i_total - 2.0) <= 1e-12


def test_empty_cavity_conserves_power():
    empty = SystemParams(g_n=0.0, delta_ac=0.3)
    for phi2 in _PHASES:
        for delta_p in _DETUNINGS:
            rec = intensity_ratios(empty.with_phases(phi2=phi2), delta_p)
            assert abs(rec.i_total - 2.0) <= 1e-12, f"phi2={phi2}, delta_p={delta_p}"


def test_total_output_bounded_and_passive(defaults):
    for phi1 in _PHASES[::2]:
        for phi2 in _PHASES[::2]:
            for delta_p in _DETUNINGS:
                rec = intensity_ratios(defaults.with_phases(phi1, phi2), delta_p)
                assert -1e-9 <= rec.absorption
                assert 0.0 <= rec.i_total <= 4.0


def test_channel_degeneracy_on_resonance(quarter_loop):
    for phi2 in _PHASES:
        rec = intensity_ratios(quarter_loop.with_phases(phi2=phi2), 0.0)
        assert abs(rec.i_out_r - rec.i_out_l) <= 1e-12


def test_detuning_flip_swaps_channels(quarter_loop):
    for phi2 in _PHASES:
        for delta_p in (0.5, 2.0, 4.0):
            p = quarter_loop.with_phases(phi2=phi2)
            assert intensity_ratios(p, -delta_p).i_out_r == pytest.approx(
                intensity_ratios(p, delta_p).i_out_l, abs=1e-12
            )


def test_phase_periodicity(defaults):
    for delta_p in (-2.0, 0.0, 3.0):
        start = intensity_ratios(defaults.with_phases(phi2=0.0), delta_p)
        end = intensity_ratios(defaults.with_phases(phi2=2.0 * math.pi), delta_p)
        for field in ("i_c", "i_out_r", "i_out_l", "i_total"):
            assert abs(getattr(start, field) - getattr(end, field)) <= 1e-12


def test_record_carries_point_and_chi(quarter_loop):
    rec = intensity_ratios(quarter_loop.with_phases(phi2=0.4), 1.25)
    assert (rec.delta_p, rec.phi1, rec.phi2) == (1.25, math.pi / 2.0, 0.4)
    assert rec.chi == susceptibility(quarter_loop, 1.25)
    assert rec.flag is None


@pytest.mark.parametrize("kappa", [0.5, 1.0, 2.0])
def test_intracavity_amplitude_matches_buildup_ratio(kappa):
    p = SystemParams(kappa=kappa, g_n=math.sqrt(kappa), phi1=0.7, phi2=1.1)
    magnitude = 0.3
    alpha = intracavity_amplitude(p, 0.8, magnitude * cmath.exp(1j * p.phi2), magnitude)
    ratio = kappa * abs(alpha) ** 2 / magnitude**2
    assert ratio == pytest.approx(intensity_ratios(p, 0.8).i_c, rel=1e-12)


def test_absorption_of_rejects_gain():
    rec = IntensityRecord(
        delta_p=0.0,
        phi1=0.0,
        phi2=0.0,
        i_c=0.0,
        i_out_r=1.05,
        i_out_l=1.05,
        i_total=2.1,
        absorption=-0.05,
        chi_re=0.0,
        chi_im=0.0,
    )
    with pytest.raises(PassivityViolation):
        absorption_of(rec)


def test_absorption_of_accepts_physical_record(quarter_loop):
    rec = intensity_ratios(quarter_loop, 0.0)
    assert absorption_of(rec) == pytest.approx(rec.absorption)
