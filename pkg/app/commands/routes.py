from __future__ import annotations

import logging
from typing import Callable, Dict

from app.constants.constants import EXIT_SIMULATION, EXIT_USAGE
from app.core.errors import ConfigError, SimulationError, UnknownPreset
from app.core.settings import Settings
from app.model.run import RunConfig

from .evaluate import evaluate
from .validate import validate

logger = logging.getLogger(__name__)

Handler = Callable[[RunConfig, Settings], int]

HANDLERS: Dict[str, Handler] = {
    "point": evaluate,
    "spectrum": evaluate,
    "contour": evaluate,
    "preset": evaluate,
    "validate": validate,
}


def dispatch(config: RunConfig, settings: Settings) -> int:
    """Run one mode and map its failure to an exit code."""
    handler = HANDLERS[config.mode]
    try:
        return handler(config, settings)
    except (UnknownPreset, ConfigError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except SimulationError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_SIMULATION
    except OSError as e:
        logger.error(str(e))
        return EXIT_USAGE
