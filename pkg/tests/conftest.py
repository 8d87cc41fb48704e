import json
from importlib.resources import files

import pytest

from lcmlab import build_spf

# Frozen oracle values; regenerating them requires a deliberate re-pin.
PINS = json.loads(files("lcmlab.data").joinpath("regressions.json").read_text())["pins"]


@pytest.fixture(scope="session")
def table_1e4():
    return build_spf(10**4)


@pytest.fixture(scope="session")
def table_1e6():
    return build_spf(10**6)


@pytest.fixture(scope="session")
def table_1e7():
    return build_spf(10**7)
