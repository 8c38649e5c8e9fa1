"""Closed-form cavity response of the closed-loop four-level medium.

Susceptibility, intracavity amplitude and the intensity ratios at both mirrors for
a symmetric two-sided cavity driven by two equal-amplitude probe beams whose
relative phase is φ2. Everything is in units of Γ with τ = 1.
"""

from __future__ import annotations

import cmath
import math
from typing import Tuple

from app.constants.constants import (
    GAMMA_UNIT,
    PASSIVITY_FLOOR,
    ROUND_TRIP_TIME,
    SINGULAR_GUARD,
)
from app.core.errors import NearSingular, PassivityViolation
from app.model.physics import IntensityRecord, SystemParams


def _mod2(z: complex) -> float:
    return z.real * z.real + z.imag * z.imag


def coefficient_abc(p: SystemParams, delta_p: float) -> Tuple[complex, complex, complex]:
    two_photon = delta_p - p.delta1
    a = complex(two_photon, p.gamma12)
    b = complex(two_photon + p.delta2, p.gamma4)
    c = complex(two_photon + p.delta2 - p.delta_t, p.gamma3)
    return a, b, c


def susceptibility(p: SystemParams, delta_p: float) -> complex:
    """χ in units of Γ; depends on φ1 only through cos φ1."""
    a, b, c = coefficient_abc(p, delta_p)
    o1, o2, ot = p.omega1, p.omega2, p.omega_t
    loop = 2.0 * o1 * o2 * ot * math.cos(p.phi1)
    den = loop - a * ot**2 - b * o1**2 - c * o2**2 + a * b * c
    threshold = SINGULAR_GUARD * max(GAMMA_UNIT**3, o1 * o2 * ot)
    if abs(den) < threshold:
        raise NearSingular("susceptibility denominator", abs(den), threshold)
    return p.g_n**2 * (o2**2 - a * b) / den


def _response(p: SystemParams, delta_p: float) -> Tuple[complex, complex]:
    chi = susceptibility(p, delta_p)
    pole = p.kappa - 1j * p.cavity_detuning(delta_p) - 1j * chi
    threshold = SINGULAR_GUARD * p.kappa
    if abs(pole) < threshold:
        raise NearSingular("cavity pole", abs(pole), threshold)
    return chi, p.kappa / pole


def cavity_response(p: SystemParams, delta_p: float) -> complex:
    """r = κ / (κ − iΔc − iχ), so that I_c/I_in = |r(1 + e^{iφ2})|²."""
    return _response(p, delta_p)[1]


def intracavity_amplitude(
    p: SystemParams, delta_p: float, alpha_in_l: complex, alpha_in_r: complex
) -> complex:
    r = cavity_response(p, delta_p)
    drive = math.sqrt(2.0 * p.kappa_left / ROUND_TRIP_TIME) * alpha_in_l + math.sqrt(
        2.0 * p.kappa_right / ROUND_TRIP_TIME
    ) * alpha_in_r
    return drive * r / p.kappa


def intensity_ratios(p: SystemParams, delta_p: float) -> IntensityRecord:
    chi, r = _response(p, delta_p)
    buildup_r = r * (1.0 + cmath.exp(1j * p.phi2))
    buildup_l = r * (1.0 + cmath.exp(-1j * p.phi2))
    i_c = _mod2(buildup_r)
    i_out_r = _mod2(buildup_r - 1.0)
    i_out_l = _mod2(buildup_l - 1.0)
    i_total = i_out_r + i_out_l
    return IntensityRecord(
        delta_p=delta_p,
        phi1=p.phi1,
        phi2=p.phi2,
        i_c=i_c,
        i_out_r=i_out_r,
        i_out_l=i_out_l,
        i_total=i_total,
        absorption=1.0 - i_total / 2.0,
        chi_re=chi.real,
        chi_im=chi.imag,
    )


def absorption_of(rec: IntensityRecord) -> float:
    absorption = 1.0 - rec.i_total / 2.0
    if absorption < PASSIVITY_FLOOR:
        raise PassivityViolation(absorption)
    return absorption
