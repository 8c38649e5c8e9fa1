from __future__ import annotations

import math
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.model.physics import Finite, IntensityRecord, SystemParams

AxisName = Literal["delta_p", "phi1", "phi2"]


class Axis(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: AxisName
    start: Finite
    stop: Finite
    count: int = Field(ge=2)

    @model_validator(mode="after")
    def _ordered(self) -> "Axis":
        if not self.start < self.stop:
            raise ValueError(f"axis {self.name}: start must be below stop")
        return self

    def points(self) -> np.ndarray:
        """Uniform grid including both endpoints."""
        return np.linspace(self.start, self.stop, self.count)

    def describe(self) -> str:
        return f"{self.name}:{self.start!r}:{self.stop!r}:{self.count}"


class SweepResult(BaseModel):
    """Row-major table: first axis outer, second inner. Zero axes means a single point."""

    model_config = ConfigDict(frozen=True)

    params: SystemParams
    delta_p: float = 0.0
    axes: Tuple[Axis, ...] = ()
    records: List[IntensityRecord]

    @model_validator(mode="after")
    def _record_count(self) -> "SweepResult":
        if len(self.axes) > 2:
            raise ValueError("at most two sweep axes are supported")
        expected = math.prod(a.count for a in self.axes)
        if len(self.records) != expected:
            raise ValueError(
                f"expected {expected} records for axes "
                f"{[a.describe() for a in self.axes]}, got {len(self.records)}"
            )
        return self

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(a.count for a in self.axes)

    @property
    def flagged_count(self) -> int:
        return sum(1 for r in self.records if r.is_flagged)

    def column(self, field: str) -> np.ndarray:
        """One observable reshaped onto the sweep grid."""
        values = np.array([getattr(r, field) for r in self.records], dtype=float)
        return values.reshape(self.shape) if self.axes else values


class FigurePreset(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    description: str
    params: SystemParams
    delta_p: float = 0.0
    axes: Tuple[Axis, ...]


class RecordRow(BaseModel):
    """IntensityRecord as serialized: floats rounded to the CSV precision, NaN as null."""

    delta_p: Optional[float]
    phi1: Optional[float]
    phi2: Optional[float]
    i_c: Optional[float]
    i_out_r: Optional[float]
    i_out_l: Optional[float]
    i_total: Optional[float]
    absorption: Optional[float]
    chi_re: Optional[float]
    chi_im: Optional[float]
    flag: Optional[str] = None


class SweepDocument(BaseModel):
    params: SystemParams
    delta_p: float
    axes: Tuple[Axis, ...]
    records: List[RecordRow]
