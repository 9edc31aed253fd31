from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("ncqm", deadline=None, max_examples=60)
settings.load_profile("ncqm")

GOLDEN = Path(__file__).parent / "data" / "golden"


@pytest.fixture
def golden_dir():
    return GOLDEN
