"""Self-check suite behind the `validate` command.

Two kinds of checks:

* identity checks hold for any passive parameter set and always run;
* regime checks encode numbers measured at the threshold-regime defaults and are
  skipped for any other medium or cavity.

Each check reports the measured deviation next to its bound. Simulation errors
raised inside a check fail that check only.
"""

from __future__ import annotations

import io
import logging
import math
import time
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from app.constants.constants import DEFAULT_SWEEP_WORKERS, TWO_PI
from app.core.errors import SimulationError
from app.model.physics import BlochState, DriveConfig, SystemParams
from app.model.run import CheckResult, Tolerances, ValidationReport
from app.model.sweep import Axis, SweepResult
from app.services import bloch_dynamics, core_model
from app.services.analysis import (
    channel_phase_delay,
    collective_threshold_params,
    detuning_mirror_delay,
    switching_contrast,
)
from app.services.presets import figure_preset
from app.services.serialization import emit_csv
from app.services.sweep_engine import run_sweep, sweep_1d, sweep_2d

logger = logging.getLogger(__name__)

ORACLE_SAMPLES = 1000
STATE_SAMPLES = 100
ACCEPTANCE_POINTS = 51
PASSIVITY_POINTS = 41
PHASE_SCAN_POINTS = 200
# best channel shift must land within four grid steps of π
PHASE_DELAY_WINDOW = 4.0 * TWO_PI / PHASE_SCAN_POINTS
DYNAMICS_DETUNINGS = (0.0, 2.0, 4.0)
DYNAMICS_PHASES = (0.0, math.pi / 2.0, math.pi)
ORDER_DRIVES = (0.3, 3.0, 30.0)
DETERMINISM_PRESETS = ("fig3a", "fig3b", "fig3c")
RANDOM_SEED = 20240531

INTENSITY_FIELDS = ("i_c", "i_out_r", "i_out_l", "i_total")


class Context(NamedTuple):
    params: SystemParams
    tol: Tolerances
    workers: int


class _Measured(NamedTuple):
    measured: float
    bound: float
    passed: bool
    detail: str = ""


def _le(measured: float, bound: float, detail: str = "") -> _Measured:
    # NaN never passes.
    return _Measured(float(measured), float(bound), bool(measured <= bound), detail)


def _relative(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(abs(reference), 1e-12)


def _periodic(count: int) -> np.ndarray:
    return np.arange(count) * (TWO_PI / count)


def _nanmax_abs(values: np.ndarray) -> float:
    values = np.abs(values)
    if np.all(np.isnan(values)):
        return float("nan")
    return float(np.nanmax(values))


def _acceptance_grid(p: SystemParams, phi2: float, ctx: Context) -> SweepResult:
    return sweep_2d(
        p.with_phases(phi2=phi2),
        Axis(name="delta_p", start=-5.0, stop=5.0, count=ACCEPTANCE_POINTS),
        # [0, 2π) sampled on ACCEPTANCE_POINTS points
        Axis(
            name="phi1",
            start=0.0,
            stop=TWO_PI * (ACCEPTANCE_POINTS - 1) / ACCEPTANCE_POINTS,
            count=ACCEPTANCE_POINTS,
        ),
        workers=ctx.workers,
    )


# --- identity checks -----------------------------------------------------------


def check_perfect_transmitter(ctx: Context) -> _Measured:
    grid = _acceptance_grid(ctx.params, math.pi, ctx)
    dark = _nanmax_abs(grid.column("i_c"))
    total = _nanmax_abs(grid.column("i_total") - 2.0)
    worst = max(dark, total)
    return _le(worst, ctx.tol.identity, f"max|i_c|={dark:.3e}, max|i_total-2|={total:.3e}")


def check_phi1_symmetry(ctx: Context) -> _Measured:
    preset = figure_preset("fig2b")
    p = ctx.params.with_phases(phi2=preset.params.phi2)
    grid = run_sweep(p, preset.axes, preset.delta_p, workers=ctx.workers)
    worst = 0.0
    for field in INTENSITY_FIELDS:
        data = grid.column(field)
        worst = max(worst, _nanmax_abs(data - data[:, ::-1]))
    return _le(worst, ctx.tol.identity, f"{grid.shape[0]}x{grid.shape[1]} grid")


def check_periodicity(ctx: Context) -> _Measured:
    scan = sweep_1d(ctx.params, Axis(name="phi2", start=0.0, stop=TWO_PI, count=5), workers=1)
    first, last = scan.records[0], scan.records[-1]
    worst = max(abs(getattr(first, f) - getattr(last, f)) for f in INTENSITY_FIELDS)
    return _le(worst, ctx.tol.identity, "phi2 = 0 against phi2 = 2pi")


def check_lossless_conservation(ctx: Context) -> _Measured:
    empty = ctx.params.model_copy(update={"g_n": 0.0})
    grid = sweep_2d(
        empty,
        Axis(name="delta_p", start=-5.0, stop=5.0, count=ACCEPTANCE_POINTS),
        Axis(name="phi2", start=0.0, stop=TWO_PI, count=ACCEPTANCE_POINTS),
        workers=ctx.workers,
    )
    worst = _nanmax_abs(grid.column("i_total") - 2.0)
    return _le(worst, ctx.tol.identity, "g_n = 0 over delta_p x phi2")


def check_passivity(ctx: Context) -> _Measured:
    lowest = math.inf
    highest = -math.inf
    phase = Axis(name="phi1", start=0.0, stop=TWO_PI, count=PASSIVITY_POINTS)
    probe = Axis(name="phi2", start=0.0, stop=TWO_PI, count=PASSIVITY_POINTS)
    for delta_p in np.linspace(-5.0, 5.0, PASSIVITY_POINTS).tolist():
        grid = sweep_2d(ctx.params, phase, probe, delta_p, workers=ctx.workers)
        lowest = min(lowest, float(np.nanmin(grid.column("absorption"))))
        highest = max(highest, float(np.nanmax(grid.column("i_total"))))
    excess = max(-lowest, highest - 4.0)
    return _le(
        excess, ctx.tol.passivity, f"min absorption={lowest:.3e}, max i_total={highest:.6f}"
    )


def check_detuning_mirror(ctx: Context) -> Optional[_Measured]:
    p = ctx.params
    if any((p.delta1, p.delta2, p.delta_t, p.delta_ac)):
        return None
    worst = max(
        detuning_mirror_delay(p.with_phases(phi1=math.pi / 2.0), delta_p, PHASE_SCAN_POINTS)
        for delta_p in (1.0, 4.0)
    )
    return _le(worst, ctx.tol.identity, "resonant controls, cos(phi1) = 0")


def check_oracle(ctx: Context) -> _Measured:
    rng = np.random.default_rng(RANDOM_SEED)
    worst = 0.0
    used = 0
    for _ in range(ORACLE_SAMPLES):
        p = SystemParams(
            g_n=rng.uniform(0.1, 3.0),
            omega1=rng.uniform(0.1, 3.0),
            omega2=rng.uniform(0.1, 3.0),
            omega_t=rng.uniform(0.1, 3.0),
            kappa=rng.uniform(0.1, 3.0),
            gamma3=rng.uniform(0.1, 3.0),
            gamma4=rng.uniform(0.1, 3.0),
            gamma12=rng.uniform(1e-4, 0.1),
            delta1=rng.uniform(-5.0, 5.0),
            delta2=rng.uniform(-5.0, 5.0),
            delta_t=rng.uniform(-5.0, 5.0),
            delta_ac=rng.uniform(-5.0, 5.0),
            phi1=rng.uniform(0.0, TWO_PI),
            phi2=rng.uniform(0.0, TWO_PI),
        )
        delta_p = rng.uniform(-5.0, 5.0)
        try:
            closed = core_model.susceptibility(p, delta_p)
            solved = bloch_dynamics.chi_oracle(p, delta_p)
        except SimulationError:
            continue
        used += 1
        worst = max(worst, _relative(solved, closed))
    return _le(worst, ctx.tol.oracle, f"{used} random points")


def check_oracle_evenness(ctx: Context) -> _Measured:
    worst = 0.0
    for phi1 in (0.3, 1.0, math.pi / 2.0, 2.5):
        for delta_p in (-2.0, 0.0, 3.0):
            plus = bloch_dynamics.chi_oracle(ctx.params.with_phases(phi1=phi1), delta_p)
            minus = bloch_dynamics.chi_oracle(ctx.params.with_phases(phi1=TWO_PI - phi1), delta_p)
            worst = max(worst, _relative(minus, plus))
    return _le(worst, ctx.tol.oracle, "linear solve at phi1 against 2pi - phi1")


def _random_state(rng: np.random.Generator) -> BlochState:
    raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = raw @ raw.conj().T
    rho /= np.trace(rho).real
    alpha = complex(rng.normal(), rng.normal())
    return BlochState(rho=rho, alpha=alpha)


def check_state_invariants(ctx: Context) -> _Measured:
    rng = np.random.default_rng(RANDOM_SEED + 1)
    d = DriveConfig.weak(ctx.params, delta_p=0.5)
    worst_trace = 0.0
    worst_herm = 0.0
    for _ in range(STATE_SAMPLES):
        deriv = bloch_dynamics.eom_rhs(_random_state(rng), ctx.params, d)
        worst_trace = max(worst_trace, abs(deriv.trace))
        worst_herm = max(worst_herm, deriv.hermiticity_error)
    passed = worst_trace <= ctx.tol.state_invariants and worst_herm <= ctx.tol.hermiticity
    return _Measured(
        worst_trace,
        ctx.tol.state_invariants,
        passed,
        f"{STATE_SAMPLES} states, hermiticity={worst_herm:.3e} (bound {ctx.tol.hermiticity:.0e})",
    )


def check_rhs_consistency(ctx: Context) -> _Measured:
    worst = 0.0
    for delta_p in DYNAMICS_DETUNINGS:
        p = ctx.params.with_phases(phi1=math.pi / 2.0, phi2=0.0)
        d = DriveConfig.weak(p, delta_p)
        state = bloch_dynamics.analytic_steady_state(p, d)
        deriv = bloch_dynamics.eom_rhs(state, p, d)
        worst = max(worst, deriv.max_abs() / state.max_abs())
    return _le(worst, ctx.tol.rhs_consistency, "weak-probe state in the full equations")


def check_dynamics_cancellation(ctx: Context) -> _Measured:
    p = ctx.params.with_phases(phi2=math.pi)
    d = DriveConfig.weak(p)
    result = bloch_dynamics.integrate_to_steady_state(p, d)
    ratio = abs(result.state.alpha) / d.alpha_in_mag
    return _le(ratio, ctx.tol.field_cancellation, "anti-phase inputs leave the cavity empty")


def check_determinism(ctx: Context) -> _Measured:
    other = ctx.workers if ctx.workers > 1 else DEFAULT_SWEEP_WORKERS
    mismatched = []
    for preset_id in DETERMINISM_PRESETS:
        preset = figure_preset(preset_id)
        tables = []
        for workers in (1, other):
            sink = io.StringIO()
            emit_csv(run_sweep(preset.params, preset.axes, preset.delta_p, workers=workers), sink)
            tables.append(sink.getvalue().encode("utf-8"))
        if tables[0] != tables[1]:
            mismatched.append(preset_id)
    detail = f"workers 1 vs {other}" + (f"; differs: {', '.join(mismatched)}" if mismatched else "")
    return _le(float(len(mismatched)), 0.0, detail)


# --- regime checks -------------------------------------------------------------


def _phase_scan(p: SystemParams, delta_p: float, phi1: float):
    phases = _periodic(PHASE_SCAN_POINTS)
    records = [
        core_model.intensity_ratios(p.with_phases(phi1=phi1, phi2=phi2), delta_p)
        for phi2 in phases.tolist()
    ]
    right = np.array([r.i_out_r for r in records])
    left = np.array([r.i_out_l for r in records])
    return right, left


def check_channel_degeneracy(ctx: Context) -> _Measured:
    right, left = _phase_scan(ctx.params, 0.0, math.pi / 2.0)
    split = float(np.max(np.abs(right - left)))
    trapped = core_model.intensity_ratios(ctx.params.with_phases(phi1=math.pi / 2.0, phi2=0.0), 0.0)
    passed = split <= ctx.tol.identity and trapped.i_total <= ctx.tol.trapping_total
    return _Measured(
        split,
        ctx.tol.identity,
        passed,
        f"i_total at phi2=0 is {trapped.i_total:.4f} (bound {ctx.tol.trapping_total})",
    )


def check_insensitivity(ctx: Context) -> _Measured:
    right, left = _phase_scan(ctx.params, 4.0, math.pi / 2.0)
    total = right + left
    spread = float(np.max(total) - np.min(total)) / float(np.mean(total))
    return _le(spread, ctx.tol.insensitivity, "(max - min) / mean of i_total over phi2")


def check_phase_delay(ctx: Context) -> _Measured:
    tol = ctx.tol
    loop = _periodic(PHASE_SCAN_POINTS)

    def loop_scan(phi2: float) -> float:
        gap = 0.0
        for phi1 in loop.tolist():
            rec = core_model.intensity_ratios(ctx.params.with_phases(phi1=phi1, phi2=phi2), 0.0)
            gap = max(gap, abs(rec.i_out_r - rec.i_out_l))
        return gap

    distinct = loop_scan(math.pi / 2.0)
    degenerate = max(loop_scan(0.0), loop_scan(math.pi))
    right, left = _phase_scan(ctx.params, 4.0, math.pi / 2.0)
    # A shift of π is half the periodic grid.
    delay = float(np.max(np.abs(left - np.roll(right, -PHASE_SCAN_POINTS // 2))))
    best = channel_phase_delay(
        ctx.params.with_phases(phi1=math.pi / 2.0), 4.0, count=PHASE_SCAN_POINTS
    )
    near_pi = abs(best.shift - math.pi) <= PHASE_DELAY_WINDOW
    passed = (
        distinct > 10.0 * tol.noise_floor
        and degenerate <= tol.identity
        and delay <= tol.phase_delay
        and near_pi
    )
    return _Measured(
        delay,
        tol.phase_delay,
        passed,
        f"split at phi2=pi/2: {distinct:.3e}; at phi2 in (0, pi): {degenerate:.3e}; "
        f"best shift {best.shift:.4f} (residual {best.residual:.3e})",
    )


def check_switching_contrast(ctx: Context) -> _Measured:
    overrides = ctx.params.model_dump(exclude={"g_n", "kappa", "gamma3", "gamma4", "phi1", "phi2"})
    p = collective_threshold_params(
        kappa=ctx.params.kappa, gamma=ctx.params.gamma3, phi1=math.pi / 2.0, **overrides
    )
    contrast = switching_contrast(p, 0.0)
    passed = (
        contrast.absorber_total <= ctx.tol.trapping_total
        and abs(contrast.transmitter_total - 2.0) <= ctx.tol.identity
    )
    ratio = "-" if contrast.ratio is None else f"{contrast.ratio:.2f}"
    return _Measured(
        contrast.absorber_total,
        ctx.tol.trapping_total,
        passed,
        f"transmitter total {contrast.transmitter_total:.4f}, on/off ratio {ratio}",
    )


def check_dynamics_agreement(ctx: Context) -> _Measured:
    worst = 0.0
    for delta_p in DYNAMICS_DETUNINGS:
        for phi2 in DYNAMICS_PHASES:
            p = ctx.params.with_phases(phi1=math.pi / 2.0, phi2=phi2)
            d = DriveConfig.weak(p, delta_p)
            state = bloch_dynamics.integrate_to_steady_state(p, d).state
            brute = bloch_dynamics.output_from_state(state, d, p)
            closed = core_model.intensity_ratios(p, delta_p)
            for field in ("i_out_r", "i_out_l", "i_c"):
                worst = max(worst, _relative(getattr(brute, field), getattr(closed, field)))
    return _le(worst, ctx.tol.dynamics, f"{len(DYNAMICS_DETUNINGS) * len(DYNAMICS_PHASES)} points")


def _saturation_gap(p: SystemParams, alpha_in_mag: float) -> float:
    d = DriveConfig.weak(p, alpha_in_mag=alpha_in_mag)
    state = bloch_dynamics.integrate_to_steady_state(p, d).state
    brute = bloch_dynamics.output_from_state(state, d, p)
    closed = core_model.intensity_ratios(p, 0.0)
    return max(_relative(getattr(brute, f), getattr(closed, f)) for f in ("i_out_r", "i_out_l", "i_c"))


def check_convergence_order(ctx: Context) -> _Measured:
    """Gap to the weak-probe result grows as |α_in|²: two orders per decade of drive."""
    p = ctx.params.with_phases(phi1=math.pi / 2.0, phi2=0.0)
    gaps = [_saturation_gap(p, drive) for drive in ORDER_DRIVES]
    orders = [
        math.log10(gaps[i + 1] / gaps[i]) / math.log10(ORDER_DRIVES[i + 1] / ORDER_DRIVES[i])
        for i in range(len(gaps) - 1)
    ]
    # the lowest drive sits near the integrator residual floor
    deviation = abs(orders[-1] - 2.0)
    return _le(
        deviation,
        ctx.tol.order_slack,
        "gaps " + ", ".join(f"{g:.2e}" for g in gaps) + "; orders " + ", ".join(f"{o:.2f}" for o in orders),
    )


Check = Callable[[Context], Optional[_Measured]]

IDENTITY_CHECKS: List[Tuple[str, Check]] = [
    ("perfect_transmitter", check_perfect_transmitter),
    ("phi1_symmetry", check_phi1_symmetry),
    ("phi2_periodicity", check_periodicity),
    ("lossless_conservation", check_lossless_conservation),
    ("passivity", check_passivity),
    ("detuning_mirror", check_detuning_mirror),
    ("oracle_equivalence", check_oracle),
    ("oracle_phi1_evenness", check_oracle_evenness),
    ("state_invariants", check_state_invariants),
    ("rhs_consistency", check_rhs_consistency),
    ("dynamics_field_cancellation", check_dynamics_cancellation),
    ("determinism", check_determinism),
]

REGIME_CHECKS: List[Tuple[str, Check]] = [
    ("channel_degeneracy", check_channel_degeneracy),
    ("insensitivity", check_insensitivity),
    ("phase_delay", check_phase_delay),
    ("switching_contrast", check_switching_contrast),
    ("dynamics_agreement", check_dynamics_agreement),
    ("convergence_order", check_convergence_order),
]


def _run_check(name: str, category: str, check: Check, ctx: Context) -> CheckResult:
    started = time.perf_counter()
    try:
        outcome = check(ctx)
    except SimulationError as e:
        logger.error(f"Check {name} raised {type(e).__name__}: {e}")
        return CheckResult(
            name=name,
            category=category,
            status="fail",
            detail=f"{type(e).__name__}: {e}",
            elapsed=time.perf_counter() - started,
        )
    elapsed = time.perf_counter() - started
    if outcome is None:
        return CheckResult(
            name=name, category=category, status="skip", detail="not applicable", elapsed=elapsed
        )
    result = CheckResult(
        name=name,
        category=category,
        status="pass" if outcome.passed else "fail",
        measured=outcome.measured,
        bound=outcome.bound,
        detail=outcome.detail,
        elapsed=elapsed,
    )
    if result.failed:
        logger.error(f"Check {name} failed: measured {outcome.measured:.3e} > {outcome.bound:.3e}")
    else:
        logger.debug(f"Check {name} passed in {elapsed:.2f}s")
    return result


def validate_all(
    params: Optional[SystemParams] = None,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> ValidationReport:
    params = params or SystemParams()
    ctx = Context(params=params, tol=tolerances or Tolerances(), workers=workers or DEFAULT_SWEEP_WORKERS)
    checks = [_run_check(name, "identity", fn, ctx) for name, fn in IDENTITY_CHECKS]
    if params.is_default():
        checks += [_run_check(name, "regime", fn, ctx) for name, fn in REGIME_CHECKS]
    else:
        logger.info("Non-default medium or cavity: skipping regime checks")
        checks += [
            CheckResult(name=name, category="regime", status="skip", detail="non-default parameters")
            for name, _ in REGIME_CHECKS
        ]
    report = ValidationReport(params=params, tolerances=ctx.tol, checks=checks)
    logger.info(
        f"Validation {'passed' if report.passed else 'failed'}: "
        f"{len(report.failures)} of {len(checks)} checks failed"
    )
    return report
