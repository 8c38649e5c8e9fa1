import math

import pytest

from app.model.physics import SystemParams


@pytest.fixture
def defaults() -> SystemParams:
    return SystemParams()


@pytest.fixture
def quarter_loop() -> SystemParams:
    """Defaults with cos φ1 = 0, the regime of the input-phase scans."""
    return SystemParams(phi1=math.pi / 2.0)
