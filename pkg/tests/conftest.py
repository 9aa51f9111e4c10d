import random

import pytest

from horocalc.groups import standard_group


@pytest.fixture(scope="session")
def z2():
    return standard_group("z2")


@pytest.fixture(scope="session")
def h1():
    return standard_group("h1")


@pytest.fixture(scope="session")
def h1z():
    return standard_group("h1z")


@pytest.fixture(scope="session")
def cartan():
    return standard_group("cartan")


@pytest.fixture()
def rng():
    return random.Random(20240811)


def random_word(group, rng, max_len, min_len=0):
    return tuple(rng.choice(group.labels) for _ in range(rng.randint(min_len, max_len)))
