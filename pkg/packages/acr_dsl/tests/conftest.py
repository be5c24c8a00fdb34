from __future__ import annotations

import pytest
import structlog


@pytest.fixture(autouse=True)
def _reset_structlog():
    # cli.main() binds structlog to the sys.stderr of the current test; pytest closes
    # that capture stream afterwards, so later tests must not inherit the config.
    yield
    structlog.reset_defaults()
