from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Optional

if TYPE_CHECKING:
    from app.model.physics import SteadyStateResult


class SimulationError(Exception):
    pass


class NearSingular(SimulationError):
    def __init__(self, what: str, modulus: float, threshold: float):
        super().__init__(
            f"{what} is near-singular: |value|={modulus:.3e} < {threshold:.3e}"
        )
        self.what = what
        self.modulus = modulus
        self.threshold = threshold


class PassivityViolation(SimulationError):
    def __init__(self, absorption: float):
        super().__init__(f"absorption {absorption:.3e} is below the passivity floor")
        self.absorption = absorption


class NotConverged(SimulationError):
    """Integration hit its time horizon; `result` holds the best state reached."""

    def __init__(self, result: "SteadyStateResult"):
        super().__init__(
            f"steady state not reached by t={result.time:.1f}: residual {result.residual:.3e}"
        )
        self.result = result


class NonPhysical(SimulationError):
    pass


class UnknownPreset(SimulationError):
    def __init__(self, preset_id: str, known: Iterable[str]):
        super().__init__(
            f"unknown preset '{preset_id}' (expected one of: {', '.join(known)})"
        )
        self.preset_id = preset_id


class ConfigError(Exception):
    pass


class ParseError(ConfigError):
    def __init__(self, message: str, line: Optional[int] = None, flag: Optional[str] = None):
        where = ""
        if line is not None:
            where = f"line {line}: "
        elif flag is not None:
            where = f"{flag}: "
        super().__init__(f"{where}{message}")
        self.line = line
        self.flag = flag


class ConfigValidationError(ConfigError):
    def __init__(self, fields: Iterable[str], message: str):
        self.fields = tuple(fields)
        super().__init__(f"invalid value for {', '.join(self.fields)}: {message}")
