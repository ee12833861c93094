import logging

import pytest

from virtquad.config import Budget
from virtquad.field import make_field


@pytest.fixture
def gf2():
    return make_field(2)


@pytest.fixture
def gf3():
    return make_field(3)


@pytest.fixture
def gf4():
    return make_field(2, 2)


@pytest.fixture
def gf5():
    return make_field(5)


@pytest.fixture
def budget():
    return Budget(max_nodes=10**7, max_dim=6, max_q=5, max_scan=10**6)


@pytest.fixture(autouse=True)
def quiet_logging():
    logger = logging.getLogger("virtquad")
    logger.handlers = []
    logger.propagate = True
    yield
