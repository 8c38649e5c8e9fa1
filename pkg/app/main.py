import logging
import sys
from typing import Optional, Sequence

from .commands.routes import dispatch
from .constants.constants import EXIT_USAGE
from .core.errors import ConfigError
from .core.settings import load_settings
from .services.config_service import parse_config

logger = logging.getLogger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = load_settings()
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_USAGE
    logger.info(
        f"Mode {config.mode}, workers {config.workers or settings.sweep_max_workers}"
    )
    return dispatch(config, settings)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
