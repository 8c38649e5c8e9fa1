from __future__ import annotations

import math
from typing import Callable, Dict

from app.constants.constants import PRESET_RESOLUTION, SPECTRUM_RANGE, TWO_PI
from app.core.errors import UnknownPreset
from app.model.physics import SystemParams
from app.model.sweep import Axis, FigurePreset


def _axis(name: str, start: float = 0.0, stop: float = TWO_PI) -> Axis:
    return Axis(name=name, start=start, stop=stop, count=PRESET_RESOLUTION)


def _detuning_axis() -> Axis:
    lo, hi = SPECTRUM_RANGE
    return _axis("delta_p", float(lo), float(hi))


def _detuning_by_probe_phase() -> FigurePreset:
    return FigurePreset(
        id="fig2a",
        description="intensity ratios over detuning and input phase, closed-loop phase 0",
        params=SystemParams(phi1=0.0),
        axes=(_detuning_axis(), _axis("phi2")),
    )


def _detuning_by_loop_phase() -> FigurePreset:
    return FigurePreset(
        id="fig2b",
        description="intensity ratios over detuning and closed-loop phase, input phase 0",
        params=SystemParams(phi2=0.0),
        axes=(_detuning_axis(), _axis("phi1")),
    )


def _phase_plane(preset_id: str, delta_p: float) -> Callable[[], FigurePreset]:
    def build() -> FigurePreset:
        return FigurePreset(
            id=preset_id,
            description=f"intensity ratios over both phases at delta_p={delta_p:g}",
            params=SystemParams(),
            delta_p=delta_p,
            axes=(_axis("phi1"), _axis("phi2")),
        )

    return build


def _probe_phase_scan(preset_id: str, delta_p: float) -> Callable[[], FigurePreset]:
    def build() -> FigurePreset:
        return FigurePreset(
            id=preset_id,
            description=f"input-phase scan at closed-loop phase pi/2, delta_p={delta_p:g}",
            params=SystemParams(phi1=math.pi / 2.0),
            delta_p=delta_p,
            axes=(_axis("phi2"),),
        )

    return build


def _loop_phase_scan(preset_id: str, phi2: float, label: str) -> Callable[[], FigurePreset]:
    def build() -> FigurePreset:
        return FigurePreset(
            id=preset_id,
            description=f"closed-loop phase scan on resonance, input phase {label}",
            params=SystemParams(phi2=phi2),
            delta_p=0.0,
            axes=(_axis("phi1"),),
        )

    return build


_PRESETS: Dict[str, Callable[[], FigurePreset]] = {
    "fig2a": _detuning_by_probe_phase,
    "fig2b": _detuning_by_loop_phase,
    "fig3a": _phase_plane("fig3a", -1.0),
    "fig3b": _phase_plane("fig3b", 0.0),
    "fig3c": _phase_plane("fig3c", 1.0),
    "fig4a": _probe_phase_scan("fig4a", 0.0),
    "fig4b": _probe_phase_scan("fig4b", 2.0),
    "fig4c": _probe_phase_scan("fig4c", 4.0),
    "fig5a": _loop_phase_scan("fig5a", 0.0, "0"),
    "fig5b": _loop_phase_scan("fig5b", math.pi / 2.0, "pi/2"),
    "fig5c": _loop_phase_scan("fig5c", math.pi, "pi"),
}


def figure_preset(preset_id: str) -> FigurePreset:
    try:
        build = _PRESETS[preset_id]
    except KeyError:
        raise UnknownPreset(preset_id, list(_PRESETS)) from None
    return build()
