from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from app.constants.constants import PRESET_RESOLUTION, TWO_PI
from app.model.physics import PhaseDelay, SwitchingContrast, SystemParams
from app.services.core_model import intensity_ratios


def collective_threshold_params(kappa: float = 1.0, gamma: float = 1.0, **overrides) -> SystemParams:
    """Parameters sitting on the strong collective-coupling threshold g²N = κΓ."""
    return SystemParams(
        g_n=math.sqrt(kappa * gamma),
        kappa=kappa,
        gamma3=gamma,
        gamma4=gamma,
        **overrides,
    )


def switching_contrast(p: SystemParams, delta_p: float = 0.0) -> SwitchingContrast:
    absorber = intensity_ratios(p.with_phases(phi2=0.0), delta_p)
    transmitter = intensity_ratios(p.with_phases(phi2=math.pi), delta_p)
    return SwitchingContrast(
        delta_p=delta_p,
        absorber_total=absorber.i_total,
        transmitter_total=transmitter.i_total,
    )


def _periodic_phase_grid(count: int) -> np.ndarray:
    if count < 2:
        raise ValueError(f"phase grid needs at least 2 points, got {count}")
    return np.arange(count) * (TWO_PI / count)


def _output_channels(p: SystemParams, delta_p: float, phases: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    records = [intensity_ratios(p.with_phases(phi2=phi2), delta_p) for phi2 in phases.tolist()]
    right = np.array([r.i_out_r for r in records])
    left = np.array([r.i_out_l for r in records])
    return right, left


def channel_phase_delay(
    p: SystemParams, delta_p: float, count: int = PRESET_RESOLUTION - 1
) -> PhaseDelay:
    """Shift s of the input phase that best maps the right channel onto the left one.

    Minimises max over φ2 of |I_out^l(φ2) − I_out^r(φ2 + s)| on a periodic grid of
    `count` points; s is a multiple of 2π/count in [0, 2π).
    """
    phases = _periodic_phase_grid(count)
    right, left = _output_channels(p, delta_p, phases)
    residuals = np.array([np.max(np.abs(left - np.roll(right, -j))) for j in range(count)])
    best = int(np.argmin(residuals))
    return PhaseDelay(delta_p=delta_p, shift=float(phases[best]), residual=float(residuals[best]))


def detuning_mirror_delay(
    p: SystemParams, delta_p: float, count: int = PRESET_RESOLUTION - 1
) -> float:
    """max over φ2 of |I_out^r(−Δp, φ2) − I_out^l(Δp, φ2)|.

    Vanishes when the controls are resonant, cos φ1 = 0 and Δac = 0: there
    χ(−Δp) = −χ(Δp)* and the two channels swap under a detuning flip.
    """
    phases = _periodic_phase_grid(count)
    right_neg, _ = _output_channels(p, -delta_p, phases)
    _, left_pos = _output_channels(p, delta_p, phases)
    return float(np.max(np.abs(right_neg - left_pos)))
