import random

import pytest
from hypothesis import settings

settings.register_profile("ggs", deadline=None, print_blob=True)
settings.load_profile("ggs")


@pytest.fixture
def rng():
    return random.Random(1)
