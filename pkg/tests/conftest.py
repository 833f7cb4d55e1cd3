import random

import pytest


@pytest.fixture
def rng(request):
    # seed from the test name so failures replay without extra flags
    return random.Random(hash(request.node.name) & 0xFFFFFFFF)
