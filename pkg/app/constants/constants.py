import math
from typing import Dict, Final, Tuple


# Frequency unit: every rate, Rabi frequency and detuning is expressed in units of Γ.
GAMMA_UNIT: Final[float] = 1.0
# Photon round-trip time; fixes the time scale of the input-output relations.
ROUND_TRIP_TIME: Final[float] = 1.0

TWO_PI: Final[float] = 2.0 * math.pi

# Threshold of the strong collective-coupling regime (g²N = κΓ), resonant controls.
DEFAULT_PARAMS: Final[Dict[str, float]] = {
    "g_n": 1.0,
    "omega1": 1.0,
    "omega2": 1.0,
    "omega_t": 1.0,
    "kappa": 1.0,
    "gamma3": 1.0,
    "gamma4": 1.0,
    "gamma12": 0.001,
    "delta1": 0.0,
    "delta2": 0.0,
    "delta_t": 0.0,
    "delta_ac": 0.0,
    "phi1": 0.0,
    "phi2": 0.0,
}

PARAM_KEYS: Final[Tuple[str, ...]] = tuple(DEFAULT_PARAMS)
CONFIG_KEYS: Final[Tuple[str, ...]] = PARAM_KEYS + ("delta_p",)
AXIS_NAMES: Final[Tuple[str, ...]] = ("delta_p", "phi1", "phi2")

# Relative guard used for every closed-form denominator and linear solve.
SINGULAR_GUARD: Final[float] = 1e-12
PASSIVITY_FLOOR: Final[float] = -1e-9

# Weak-probe split of g√N used by the brute-force solvers.
WEAK_N_ATOMS: Final[float] = 1e6
WEAK_DRIVE_MAGNITUDE: Final[float] = 0.1
DRIVE_SPLIT_TOL: Final[float] = 1e-12

# Fixed-step integrator.
BLOCH_TIME_STEP: Final[float] = 0.01
BLOCH_RESIDUAL_TOL: Final[float] = 1e-12
BLOCH_HORIZON_FACTOR: Final[float] = 10.0 * 100.0
TRACE_DRIFT_LIMIT: Final[float] = 1e-8
# Checked every this many steps; the invariants are cheap but not free.
BLOCH_CHECK_INTERVAL: Final[int] = 100

# Presets.
PRESET_RESOLUTION: Final[int] = 201
SPECTRUM_RANGE: Final[Tuple[float, float]] = (-5.0, 5.0)
PRESET_IDS: Final[Tuple[str, ...]] = (
    "fig2a",
    "fig2b",
    "fig3a",
    "fig3b",
    "fig3c",
    "fig4a",
    "fig4b",
    "fig4c",
    "fig5a",
    "fig5b",
    "fig5c",
)

# Serialization.
CSV_SIGNIFICANT_DIGITS: Final[int] = 12
CSV_HEADER: Final[Tuple[str, ...]] = (
    "delta_p",
    "phi1",
    "phi2",
    "i_c",
    "i_out_r",
    "i_out_l",
    "i_total",
    "absorption",
    "chi_re",
    "chi_im",
    "flag",
)
NEAR_SINGULAR_FLAG: Final[str] = "near_singular"

# Sweep worker pool.
DEFAULT_SWEEP_WORKERS: Final[int] = 4
DEFAULT_SWEEP_CHUNK_SIZE: Final[int] = 256

# Exit codes.
EXIT_OK: Final[int] = 0
EXIT_VALIDATION_FAILED: Final[int] = 1
EXIT_USAGE: Final[int] = 2
EXIT_SIMULATION: Final[int] = 3
