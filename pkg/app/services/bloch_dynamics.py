"""Brute-force steady states of the mean-field atom-cavity equations of motion.

Two independent routes to the medium response, used to cross-check core_model:

* `linear_response_coherences` / `chi_oracle`: the weak-probe closure (all
  population in |1⟩) reduces the ρ12, ρ13, ρ14 equations to a 3×3 complex linear
  system that is solved directly.
* `integrate_to_steady_state`: the full nonlinear equations for the 4×4 density
  matrix and the intracavity amplitude, marched in time with a fixed-step
  classical Runge-Kutta integrator from ρ = |1⟩⟨1|, α = 0.

Only the upper triangle of ρ is evolved from its own equation; the lower triangle
is always the conjugate. Decay rates: γ13 = Γ3, γ14 = Γ4, γ23 = γ24 = Γ and
γ34 = √(Γ3Γ4).
"""

from __future__ import annotations

import cmath
import logging
import math
from typing import NamedTuple, Tuple

import numpy as np

from app.constants.constants import (
    BLOCH_CHECK_INTERVAL,
    BLOCH_HORIZON_FACTOR,
    BLOCH_RESIDUAL_TOL,
    BLOCH_TIME_STEP,
    DRIVE_SPLIT_TOL,
    GAMMA_UNIT,
    ROUND_TRIP_TIME,
    SINGULAR_GUARD,
    TRACE_DRIFT_LIMIT,
)
from app.core.errors import ConfigValidationError, NearSingular, NonPhysical, NotConverged
from app.model.physics import (
    BlochState,
    DriveConfig,
    IntensityRecord,
    SteadyStateResult,
    SystemParams,
)
from app.services import core_model

logger = logging.getLogger(__name__)

POPULATION_FLOOR = -1e-10


class _Coefficients(NamedTuple):
    det12: complex
    det13: complex
    det14: complex
    det23: complex
    det24: complex
    det34: complex
    omega1: float
    omega2: float
    omega_t: float
    gamma3: float
    gamma4: float
    loop: complex
    g: float
    g_n_total: float
    cavity: complex
    drive: complex


def input_amplitudes(p: SystemParams, d: DriveConfig) -> Tuple[complex, complex]:
    """(α_in^l, α_in^r): equal magnitudes, the left beam carrying the relative phase φ2."""
    return d.alpha_in_mag * cmath.exp(1j * p.phi2), complex(d.alpha_in_mag)


def _check_drive(p: SystemParams, d: DriveConfig) -> None:
    if abs(d.collective_coupling - p.g_n) > DRIVE_SPLIT_TOL:
        raise ConfigValidationError(
            ["g_single", "n_atoms"],
            f"g·√N = {d.collective_coupling!r} does not match g_n = {p.g_n!r}",
        )


def _coefficients(p: SystemParams, d: DriveConfig) -> _Coefficients:
    two_photon = d.delta_p - p.delta1
    alpha_in_l, alpha_in_r = input_amplitudes(p, d)
    drive = math.sqrt(2.0 * p.kappa_left / ROUND_TRIP_TIME) * alpha_in_l + math.sqrt(
        2.0 * p.kappa_right / ROUND_TRIP_TIME
    ) * alpha_in_r
    return _Coefficients(
        det12=complex(-p.gamma12, two_photon),
        det13=complex(-p.gamma3, two_photon + p.delta2 - p.delta_t),
        det14=complex(-p.gamma4, two_photon + p.delta2),
        det23=complex(-GAMMA_UNIT, p.delta2 - p.delta_t),
        det24=complex(-GAMMA_UNIT, p.delta2),
        det34=complex(-math.sqrt(p.gamma3 * p.gamma4), p.delta_t),
        omega1=p.omega1,
        omega2=p.omega2,
        omega_t=p.omega_t,
        gamma3=p.gamma3,
        gamma4=p.gamma4,
        loop=cmath.exp(1j * p.phi1),
        g=d.g_single,
        g_n_total=d.g_single * d.n_atoms,
        cavity=complex(-p.kappa, p.cavity_detuning(d.delta_p)),
        drive=drive,
    )


def _rhs(rho: np.ndarray, alpha: complex, k: _Coefficients) -> Tuple[np.ndarray, complex]:
    rows = rho.tolist()
    r11, r12, r13, r14 = rows[0]
    r21, r22, r23, r24 = rows[1]
    r31, r32, r33, r34 = rows[2]
    _, r42, r43, r44 = rows[3]
    o1, o2, ot = k.omega1, k.omega2, k.omega_t
    e, ec = k.loop, k.loop.conjugate()
    ga, gac = k.g * alpha, k.g * alpha.conjugate()
    repop = 0.5 * k.gamma3 * r33 + 0.5 * k.gamma4 * r44

    d11 = 1j * (gac * r13 - ga * r31) + repop
    d12 = k.det12 * r12 - 1j * ga * r32 + 1j * o1 * r13 + 1j * o2 * r14
    d13 = k.det13 * r13 + 1j * ga * (r11 - r33) + 1j * o1 * r12 + 1j * ot * r14 * e
    d14 = k.det14 * r14 - 1j * ga * r34 * ec + 1j * o2 * r12 + 1j * ot * r13 * ec
    d22 = 1j * o1 * (r23 - r32) + 1j * o2 * (r24 - r42) + repop
    d23 = (
        k.det23 * r23
        + 1j * ga * r21
        + 1j * o1 * (r22 - r33)
        - 1j * o2 * r43 * e
        + 1j * ot * r24 * e
    )
    d24 = k.det24 * r24 - 1j * o1 * r34 * ec + 1j * o2 * (r22 - r44) + 1j * ot * r23 * ec
    d33 = (
        1j * (ga * r31 - gac * r13)
        + 1j * o1 * (r32 - r23)
        + 1j * ot * (r34 - r43)
        - k.gamma3 * r33
    )
    d34 = (
        k.det34 * r34
        - 1j * gac * r14 * e
        - 1j * o1 * r24 * e
        + 1j * o2 * r32 * e
        + 1j * ot * (r33 - r44)
    )
    d44 = 1j * o2 * (r42 - r24) + 1j * ot * (r43 - r34) - k.gamma4 * r44

    d11, d22, d33, d44 = d11.real, d22.real, d33.real, d44.real
    drho = np.array(
        [
            [d11, d12, d13, d14],
            [d12.conjugate(), d22, d23, d24],
            [d13.conjugate(), d23.conjugate(), d33, d34],
            [d14.conjugate(), d24.conjugate(), d34.conjugate(), d44],
        ],
        dtype=complex,
    )
    dalpha = k.cavity * alpha + 1j * k.g_n_total * r13 + k.drive
    return drho, dalpha


def eom_rhs(s: BlochState, p: SystemParams, d: DriveConfig) -> BlochState:
    """Time derivative of (ρ, α); returned in a BlochState container."""
    drho, dalpha = _rhs(s.rho, s.alpha, _coefficients(p, d))
    return BlochState(rho=drho, alpha=dalpha)


def _residual(drho: np.ndarray, dalpha: complex) -> float:
    return max(float(np.max(np.abs(drho))), abs(dalpha))


def _check_physical(rho: np.ndarray, t: float) -> None:
    # written so that NaN fails both comparisons
    drift = abs(np.trace(rho) - 1.0)
    if not drift <= TRACE_DRIFT_LIMIT:
        raise NonPhysical(f"trace drifted by {drift:.3e} at t={t:.2f}")
    lowest = float(np.min(np.real(np.diag(rho))))
    if not lowest >= POPULATION_FLOOR:
        raise NonPhysical(f"population {lowest:.3e} below zero at t={t:.2f}")


def steady_state_horizon(p: SystemParams) -> float:
    return BLOCH_HORIZON_FACTOR * max(1.0 / p.gamma12, 1.0 / p.kappa, 1.0 / GAMMA_UNIT)


def integrate_to_steady_state(
    p: SystemParams,
    d: DriveConfig,
    time_step: float = BLOCH_TIME_STEP,
    residual_tol: float = BLOCH_RESIDUAL_TOL,
    max_time: float | None = None,
) -> SteadyStateResult:
    """March the equations of motion until max|d(ρ, α)/dt| < residual_tol.

    Raises NotConverged (carrying the last state) past the time horizon and
    NonPhysical if the trace or the populations leave their physical range.
    """
    _check_drive(p, d)
    k = _coefficients(p, d)
    horizon = steady_state_horizon(p) if max_time is None else max_time
    rho = BlochState.ground().rho.copy()
    alpha = 0j
    h = time_step
    steps = 0

    logger.debug(
        f"Integrating to steady state: delta_p={d.delta_p}, phi1={p.phi1}, phi2={p.phi2}, "
        f"|alpha_in|={d.alpha_in_mag}, horizon={horizon:.3g}"
    )
    while True:
        t = steps * h
        k1, a1 = _rhs(rho, alpha, k)
        residual = _residual(k1, a1)
        if residual < residual_tol or t > horizon:
            break
        k2, a2 = _rhs(rho + 0.5 * h * k1, alpha + 0.5 * h * a1, k)
        k3, a3 = _rhs(rho + 0.5 * h * k2, alpha + 0.5 * h * a2, k)
        k4, a4 = _rhs(rho + h * k3, alpha + h * a3, k)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        alpha = alpha + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        steps += 1
        if steps % BLOCH_CHECK_INTERVAL == 0:
            _check_physical(rho, steps * h)

    _check_physical(rho, t)
    result = SteadyStateResult(
        state=BlochState(rho=rho, alpha=alpha),
        converged=residual < residual_tol,
        residual=residual,
        time=t,
        steps=steps,
    )
    if not result.converged:
        logger.warning(
            f"No steady state by t={t:.1f} (residual {residual:.3e}, tol {residual_tol:.1e})"
        )
        raise NotConverged(result)
    logger.debug(f"Steady state after {steps} steps (t={t:.2f}), residual {residual:.3e}")
    return result


def _coherence_matrix(p: SystemParams, delta_p: float) -> np.ndarray:
    a, b, c = core_model.coefficient_abc(p, delta_p)
    loop = cmath.exp(1j * p.phi1)
    return np.array(
        [
            [a, p.omega1, p.omega2],
            [p.omega1, c, p.omega_t * loop],
            [p.omega2, p.omega_t * loop.conjugate(), b],
        ],
        dtype=complex,
    )


def linear_response_coherences(
    p: SystemParams, d: DriveConfig, alpha: complex
) -> Tuple[complex, complex, complex]:
    """(ρ12, ρ13, ρ14) solving M·ρ = (0, −gα, 0) under the weak-probe closure."""
    m = _coherence_matrix(p, d.delta_p)
    det = np.linalg.det(m)
    threshold = SINGULAR_GUARD * max(GAMMA_UNIT**3, p.omega1 * p.omega2 * p.omega_t)
    if abs(det) < threshold:
        raise NearSingular("weak-probe coherence matrix", float(abs(det)), threshold)
    source = np.array([0.0, -d.g_single * alpha, 0.0], dtype=complex)
    rho12, rho13, rho14 = np.linalg.solve(m, source).tolist()
    return rho12, rho13, rho14


def chi_oracle(p: SystemParams, delta_p: float) -> complex:
    """χ = gN·ρ13/α from a direct linear solve, never from the closed form."""
    d = DriveConfig.weak(p, delta_p)
    _, rho13, _ = linear_response_coherences(p, d, 1.0 + 0j)
    return d.g_single * d.n_atoms * rho13


def analytic_steady_state(p: SystemParams, d: DriveConfig) -> BlochState:
    """Weak-probe steady state assembled from the closed form and the coherence solve."""
    alpha_in_l, alpha_in_r = input_amplitudes(p, d)
    alpha = core_model.intracavity_amplitude(p, d.delta_p, alpha_in_l, alpha_in_r)
    rho12, rho13, rho14 = linear_response_coherences(p, d, alpha)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    rho[0, 1:] = (rho12, rho13, rho14)
    rho[1:, 0] = np.conj(rho[0, 1:])
    return BlochState(rho=rho, alpha=alpha)


def output_from_state(s: BlochState, d: DriveConfig, p: SystemParams) -> IntensityRecord:
    """Apply a_out + a_in = √(2κτ)·a at each mirror and report ratios to |α_in|²."""
    if d.alpha_in_mag <= 0.0:
        raise ConfigValidationError(["alpha_in_mag"], "output ratios need a non-zero input")
    alpha_in_l, alpha_in_r = input_amplitudes(p, d)
    out_l = math.sqrt(2.0 * p.kappa_left * ROUND_TRIP_TIME) * s.alpha - alpha_in_l
    out_r = math.sqrt(2.0 * p.kappa_right * ROUND_TRIP_TIME) * s.alpha - alpha_in_r
    i_in = d.alpha_in_mag**2
    i_out_r = abs(out_r) ** 2 / i_in
    i_out_l = abs(out_l) ** 2 / i_in
    i_total = i_out_r + i_out_l
    chi = chi_oracle(p, d.delta_p)
    return IntensityRecord(
        delta_p=d.delta_p,
        phi1=p.phi1,
        phi2=p.phi2,
        i_c=p.kappa * ROUND_TRIP_TIME * abs(s.alpha) ** 2 / i_in,
        i_out_r=i_out_r,
        i_out_l=i_out_l,
        i_total=i_total,
        absorption=1.0 - i_total / 2.0,
        chi_re=chi.real,
        chi_im=chi.imag,
    )
