import pytest

from bodies import make_disc, make_rectangle, make_regular_polygon, make_square


@pytest.fixture
def disc():
    return make_disc()


@pytest.fixture
def unit_square():
    """[0, 1]^2"""
    return make_square()


@pytest.fixture
def centered_square():
    return make_square(1.0, center=(0.0, 0.0))


@pytest.fixture
def hexagon():
    return make_regular_polygon(6)


@pytest.fixture
def rect_1x3():
    return make_rectangle(1.0, 3.0)
