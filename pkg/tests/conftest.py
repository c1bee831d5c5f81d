import pytest

from hyperset.universe import Universe


@pytest.fixture
def u():
    return Universe()
