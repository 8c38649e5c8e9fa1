from __future__ import annotations

import logging

from app.constants.constants import EXIT_OK
from app.core.settings import Settings
from app.model.run import RunConfig
from app.model.sweep import SweepResult
from app.services.presets import figure_preset
from app.services.serialization import write_result
from app.services.sweep_engine import point_result, run_sweep

logger = logging.getLogger(__name__)


def _workers(config: RunConfig, settings: Settings) -> int:
    return config.workers or settings.sweep_max_workers


def run_point(config: RunConfig, settings: Settings) -> SweepResult:
    return point_result(config.params, config.delta_p)


def run_grid(config: RunConfig, settings: Settings) -> SweepResult:
    return run_sweep(
        config.params,
        config.axes,
        config.delta_p,
        workers=_workers(config, settings),
        chunk_size=settings.sweep_chunk_size,
    )


def run_preset(config: RunConfig, settings: Settings) -> SweepResult:
    preset = figure_preset(config.preset_id)
    logger.info(f"Preset {preset.id}: {preset.description}")
    return run_sweep(
        preset.params,
        preset.axes,
        preset.delta_p,
        workers=_workers(config, settings),
        chunk_size=settings.sweep_chunk_size,
    )


def evaluate(config: RunConfig, settings: Settings) -> int:
    if config.mode == "point":
        result = run_point(config, settings)
    elif config.mode == "preset":
        result = run_preset(config, settings)
    else:
        result = run_grid(config, settings)
    write_result(result, config.output, config.format)
    return EXIT_OK
