from __future__ import annotations

import pytest

from app.core.errors import NonPhysical
from app.model.physics import SystemParams
from app.model.run import Tolerances
from app.services import validation
from app.services.validation import Context, validate_all

_FAST_IDENTITY = [
    ("perfect_transmitter", validation.check_perfect_transmitter),
    ("phi2_periodicity", validation.check_periodicity),
    ("lossless_conservation", validation.check_lossless_conservation),
    ("detuning_mirror", validation.check_detuning_mirror),
    ("oracle_equivalence", validation.check_oracle),
    ("oracle_phi1_evenness", validation.check_oracle_evenness),
    ("state_invariants", validation.check_state_invariants),
    ("rhs_consistency", validation.check_rhs_consistency),
    ("dynamics_field_cancellation", validation.check_dynamics_cancellation),
]

_FAST_REGIME = [
    ("channel_degeneracy", validation.check_channel_degeneracy),
    ("insensitivity", validation.check_insensitivity),
    ("phase_delay", validation.check_phase_delay),
    ("switching_contrast", validation.check_switching_contrast),
]


def _context(params: SystemParams = SystemParams(), scale: float = 1.0) -> Context:
    return Context(params=params, tol=Tolerances().scaled(scale), workers=2)


@pytest.mark.parametrize("name, check", _FAST_IDENTITY + _FAST_REGIME)
def test_check_passes_at_defaults(name, check):
    outcome = check(_context())
    assert outcome is not None
    assert outcome.passed, f"{name}: measured {outcome.measured:.3e} > {outcome.bound:.3e} ({outcome.detail})"


@pytest.mark.parametrize("name, check", _FAST_IDENTITY)
def test_identities_hold_for_unequal_decay_rates(name, check):
    outcome = check(_context(SystemParams(gamma3=2.0, gamma4=0.5)))
    assert outcome is None or outcome.passed, f"{name}: {outcome}"


def test_insensitivity_value_at_defaults():
    outcome = validation.check_insensitivity(_context())
    assert outcome.measured == pytest.approx(0.0215, abs=2e-3)


def test_phase_delay_value_at_defaults():
    outcome = validation.check_phase_delay(_context())
    assert outcome.measured == pytest.approx(0.0213, abs=1e-3)


def test_switching_contrast_at_threshold():
    """Quarter loop on resonance: in-phase inputs leave 2/9, anti-phase inputs leave 2."""
    outcome = validation.check_switching_contrast(_context())
    assert outcome.passed
    assert outcome.measured == pytest.approx(2.0 / 9.0, abs=1e-12)
    assert "on/off ratio 9.00" in outcome.detail


def test_state_invariants_cover_hundred_states():
    outcome = validation.check_state_invariants(_context())
    assert outcome.passed
    assert outcome.measured <= 1e-12
    assert outcome.detail.startswith("100 states")


def test_zero_tolerance_fails_oracle():
    outcome = validation.check_oracle(_context(scale=0.0))
    assert not outcome.passed


def test_mirror_check_skipped_for_detuned_controls():
    assert validation.check_detuning_mirror(_context(SystemParams(delta2=0.5))) is None


def test_scaled_tolerances():
    tol = Tolerances().scaled(2.0)
    assert tol.identity == 2e-12
    assert tol.phase_delay == 0.05
    with pytest.raises(ValueError):
        Tolerances().scaled(-1.0)


def test_regime_checks_skipped_for_other_media(monkeypatch):
    monkeypatch.setattr(validation, "IDENTITY_CHECKS", _FAST_IDENTITY[:2])
    report = validate_all(SystemParams(kappa=2.0), workers=2)
    regime = [c for c in report.checks if c.category == "regime"]
    assert regime and all(c.status == "skip" for c in regime)
    assert report.passed


def test_regime_checks_ignore_phases(monkeypatch):
    monkeypatch.setattr(validation, "IDENTITY_CHECKS", [])
    monkeypatch.setattr(validation, "REGIME_CHECKS", _FAST_REGIME)
    report = validate_all(SystemParams(phi1=1.0, phi2=2.0))
    assert [c.status for c in report.checks] == ["pass"] * len(_FAST_REGIME)


def test_simulation_error_fails_only_that_check(monkeypatch):
    def broken(ctx):
        raise NonPhysical("trace drifted")

    monkeypatch.setattr(validation, "IDENTITY_CHECKS", [("broken", broken)] + _FAST_IDENTITY[:1])
    monkeypatch.setattr(validation, "REGIME_CHECKS", [])
    report = validate_all()
    assert [c.status for c in report.checks] == ["fail", "pass"]
    assert "NonPhysical" in report.checks[0].detail
    assert not report.passed
    assert [c.name for c in report.failures] == ["broken"]


def test_zero_tolerance_report_fails(monkeypatch):
    monkeypatch.setattr(validation, "IDENTITY_CHECKS", _FAST_IDENTITY)
    monkeypatch.setattr(validation, "REGIME_CHECKS", [])
    report = validate_all(tolerances=Tolerances().scaled(0.0))
    assert not report.passed


@pytest.mark.slow
def test_full_suite_passes_at_defaults():
    report = validate_all(workers=4)
    failures = [(c.name, c.measured, c.bound, c.detail) for c in report.failures]
    assert report.passed, failures
    assert {c.status for c in report.checks} == {"pass"}
