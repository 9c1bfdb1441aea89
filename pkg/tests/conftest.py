import pytest

import oracles


@pytest.fixture
def fib():
    return oracles.FIB


@pytest.fixture
def six():
    return oracles.SIX


@pytest.fixture
def three():
    return oracles.THREE


@pytest.fixture
def left():
    return oracles.LEFT


@pytest.fixture
def right():
    return oracles.RIGHT


@pytest.fixture
def linked():
    return oracles.LINKED


@pytest.fixture
def ab23():
    return oracles.AB23


@pytest.fixture
def pc23():
    return oracles.PC23
