from __future__ import annotations

import math
from typing import Annotated, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.constants.constants import (
    DEFAULT_PARAMS,
    NEAR_SINGULAR_FLAG,
    WEAK_DRIVE_MAGNITUDE,
    WEAK_N_ATOMS,
)

Finite = Annotated[float, Field(allow_inf_nan=False)]
NonNegative = Annotated[float, Field(ge=0.0, allow_inf_nan=False)]
Positive = Annotated[float, Field(gt=0.0, allow_inf_nan=False)]


class SystemParams(BaseModel):
    """One physical configuration, every quantity in units of Γ.

    Phases are stored unreduced. The cavity loss is split symmetrically between
    the two mirrors.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    g_n: NonNegative = Field(default=DEFAULT_PARAMS["g_n"], description="collective coupling g√N")
    omega1: NonNegative = DEFAULT_PARAMS["omega1"]
    omega2: NonNegative = DEFAULT_PARAMS["omega2"]
    omega_t: NonNegative = DEFAULT_PARAMS["omega_t"]
    kappa: Positive = Field(default=DEFAULT_PARAMS["kappa"], description="κ = κl + κr")
    gamma3: Positive = DEFAULT_PARAMS["gamma3"]
    gamma4: Positive = DEFAULT_PARAMS["gamma4"]
    gamma12: Positive = DEFAULT_PARAMS["gamma12"]
    delta1: Finite = DEFAULT_PARAMS["delta1"]
    delta2: Finite = DEFAULT_PARAMS["delta2"]
    delta_t: Finite = DEFAULT_PARAMS["delta_t"]
    delta_ac: Finite = DEFAULT_PARAMS["delta_ac"]
    phi1: Finite = Field(default=DEFAULT_PARAMS["phi1"], description="closed-loop phase")
    phi2: Finite = Field(default=DEFAULT_PARAMS["phi2"], description="input relative phase")

    @property
    def kappa_left(self) -> float:
        return self.kappa / 2.0

    @property
    def kappa_right(self) -> float:
        return self.kappa / 2.0

    def cavity_detuning(self, delta_p: float) -> float:
        return delta_p - self.delta_ac

    def with_phases(
        self, phi1: Optional[float] = None, phi2: Optional[float] = None
    ) -> "SystemParams":
        update = {}
        if phi1 is not None:
            update["phi1"] = float(phi1)
        if phi2 is not None:
            update["phi2"] = float(phi2)
        return self.model_copy(update=update) if update else self

    def is_default(self) -> bool:
        """True when the medium and cavity match the section-III defaults (phases ignored)."""
        dumped = self.model_dump(exclude={"phi1", "phi2"})
        return all(dumped[k] == DEFAULT_PARAMS[k] for k in dumped)


class DriveConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha_in_mag: NonNegative
    g_single: NonNegative
    n_atoms: Positive
    delta_p: Finite = 0.0

    @property
    def collective_coupling(self) -> float:
        return self.g_single * math.sqrt(self.n_atoms)

    @classmethod
    def weak(
        cls,
        params: SystemParams,
        delta_p: float = 0.0,
        alpha_in_mag: float = WEAK_DRIVE_MAGNITUDE,
        n_atoms: float = WEAK_N_ATOMS,
    ) -> "DriveConfig":
        return cls(
            alpha_in_mag=alpha_in_mag,
            g_single=params.g_n / math.sqrt(n_atoms),
            n_atoms=n_atoms,
            delta_p=delta_p,
        )


class BlochState(BaseModel):
    """Atomic density matrix (levels |1⟩..|4⟩ at indices 0..3) and intracavity amplitude α."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: np.ndarray
    alpha: complex = 0j

    @field_validator("rho")
    @classmethod
    def _square_four_level(cls, value: np.ndarray) -> np.ndarray:
        arr = np.asarray(value, dtype=complex)
        if arr.shape != (4, 4):
            raise ValueError(f"rho must be 4x4, got shape {arr.shape}")
        return arr

    @classmethod
    def ground(cls) -> "BlochState":
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = 1.0
        return cls(rho=rho, alpha=0j)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.rho))

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    @property
    def min_population(self) -> float:
        return float(np.min(np.real(np.diag(self.rho))))

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(self.rho))), abs(self.alpha))


class SteadyStateResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    state: BlochState
    converged: bool
    residual: float
    time: float
    steps: int


class IntensityRecord(BaseModel):
    """Observables at one (Δp, φ1, φ2) point, as ratios to the single-beam input."""

    model_config = ConfigDict(frozen=True)

    delta_p: float
    phi1: float
    phi2: float
    i_c: float
    i_out_r: float
    i_out_l: float
    i_total: float
    absorption: float
    chi_re: float
    chi_im: float
    flag: Optional[Literal["near_singular"]] = None

    @property
    def chi(self) -> complex:
        return complex(self.chi_re, self.chi_im)

    @property
    def is_flagged(self) -> bool:
        return self.flag is not None

    @classmethod
    def near_singular(cls, delta_p: float, phi1: float, phi2: float) -> "IntensityRecord":
        nan = float("nan")
        return cls(
            delta_p=delta_p,
            phi1=phi1,
            phi2=phi2,
            i_c=nan,
            i_out_r=nan,
            i_out_l=nan,
            i_total=nan,
            absorption=nan,
            chi_re=nan,
            chi_im=nan,
            flag=NEAR_SINGULAR_FLAG,
        )


class SwitchingContrast(BaseModel):
    """Total output with in-phase inputs (absorber side) against anti-phase inputs."""

    model_config = ConfigDict(frozen=True)

    delta_p: float
    absorber_total: float
    transmitter_total: float

    @property
    def difference(self) -> float:
        return self.transmitter_total - self.absorber_total

    @property
    def ratio(self) -> Optional[float]:
        if self.absorber_total == 0.0:
            return None
        return self.transmitter_total / self.absorber_total


class PhaseDelay(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta_p: float
    shift: float
    residual: float
