from __future__ import annotations

import math

import pytest

from app.model.physics import SystemParams
from app.services.analysis import (
    channel_phase_delay,
    collective_threshold_params,
    detuning_mirror_delay,
    switching_contrast,
)


def test_threshold_params_balance_coupling_and_losses():
    p = collective_threshold_params(kappa=2.0, gamma=0.5, phi1=1.0)
    assert p.g_n**2 == pytest.approx(p.kappa * p.gamma3)
    assert (p.kappa, p.gamma3, p.gamma4, p.phi1) == (2.0, 0.5, 0.5, 1.0)


def test_threshold_params_default_to_unit_rates():
    assert collective_threshold_params() == SystemParams()


def test_switching_between_absorber_and_transmitter(quarter_loop):
    contrast = switching_contrast(quarter_loop, 0.0)
    assert contrast.absorber_total == pytest.approx(2.0 / 9.0, abs=1e-12)
    assert contrast.transmitter_total == pytest.approx(2.0, abs=1e-12)
    assert contrast.difference == pytest.approx(16.0 / 9.0, abs=1e-12)
    assert contrast.ratio == pytest.approx(9.0, rel=1e-10)


def test_no_channel_delay_on_resonance(quarter_loop):
    delay = channel_phase_delay(quarter_loop, 0.0)
    assert delay.shift == 0.0
    assert delay.residual <= 1e-12


def test_channel_delay_approaches_pi_far_from_resonance(quarter_loop):
    delay = channel_phase_delay(quarter_loop, 4.0)
    assert abs(delay.shift - math.pi) < 0.1
    assert delay.residual <= 0.02


def test_detuning_mirror_holds_for_quarter_loop(quarter_loop):
    for delta_p in (0.5, 2.0, 4.0):
        assert detuning_mirror_delay(quarter_loop, delta_p) <= 1e-12


def test_detuning_mirror_broken_by_loop_interference(defaults):
    assert detuning_mirror_delay(defaults, 1.0) > 1e-6


def test_phase_grid_needs_two_points(defaults):
    with pytest.raises(ValueError):
        channel_phase_delay(defaults, 0.0, count=1)
