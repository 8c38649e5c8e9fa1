from __future__ import annotations

from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.model.physics import Finite, SystemParams
from app.model.sweep import Axis

Mode = Literal["point", "spectrum", "contour", "preset", "validate"]
OutputFormat = Literal["csv", "json"]

_AXES_PER_MODE = {"point": 0, "spectrum": 1, "contour": 2}


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    identity: float = Field(default=1e-12, ge=0.0)
    oracle: float = Field(default=1e-10, ge=0.0)
    dynamics: float = Field(default=1e-4, ge=0.0)
    field_cancellation: float = Field(default=1e-6, ge=0.0)
    state_invariants: float = Field(default=1e-10, ge=0.0)
    hermiticity: float = Field(default=1e-14, ge=0.0)
    rhs_consistency: float = Field(default=1e-6, ge=0.0)
    passivity: float = Field(default=1e-9, ge=0.0)
    trapping_total: float = Field(default=0.25, ge=0.0)
    insensitivity: float = Field(default=0.05, ge=0.0)
    phase_delay: float = Field(default=0.025, ge=0.0)
    order_slack: float = Field(default=0.5, ge=0.0)
    noise_floor: float = Field(default=1e-12, ge=0.0)

    def scaled(self, factor: float) -> "Tolerances":
        if factor < 0:
            raise ValueError("tolerance scale must be non-negative")
        return Tolerances(**{k: v * factor for k, v in self.model_dump().items()})


class CheckResult(BaseModel):
    name: str
    category: Literal["identity", "regime"]
    status: Literal["pass", "fail", "skip"]
    measured: Optional[float] = None
    bound: Optional[float] = None
    detail: str = ""
    elapsed: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status == "fail"


class ValidationReport(BaseModel):
    params: SystemParams
    tolerances: Tolerances
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.failed]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: Mode
    params: SystemParams = Field(default_factory=SystemParams)
    delta_p: Finite = 0.0
    axes: Tuple[Axis, ...] = ()
    preset_id: Optional[str] = None
    output: Optional[Path] = None
    format: OutputFormat = "csv"
    workers: Optional[int] = Field(default=None, ge=1)
    tolerance_scale: float = Field(default=1.0, ge=0.0)

    @model_validator(mode="after")
    def _mode_shape(self) -> "RunConfig":
        expected = _AXES_PER_MODE.get(self.mode)
        if expected is not None and len(self.axes) != expected:
            raise ValueError(
                f"mode '{self.mode}' takes {expected} axis definition(s), got {len(self.axes)}"
            )
        if self.mode in ("preset", "validate") and self.axes:
            raise ValueError(f"mode '{self.mode}' does not accept --axis")
        if self.mode == "preset" and not self.preset_id:
            raise ValueError("mode 'preset' requires a preset id")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise ValueError("sweep axes must be distinct")
        return self
