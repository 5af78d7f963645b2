import random

import pytest

DEFAULT_SEED = 20020


def pytest_addoption(parser):
    parser.addoption("--seed", action="store", type=int, default=DEFAULT_SEED, help="seed for randomized tests")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)
