import math

from pytest import fixture
from scipy import special

from starkres import Potential, SmoothPart, NystromGrid, ModelParams, AsymptoticConstants


@fixture(scope="session")
def smooth_potential():
    yield Potential(gamma=1.0, smooth_part=SmoothPart("polynomial", [1.0, 0.5]))


@fixture(scope="session")
def singular_potential():
    yield Potential(gamma=1.0, c_star=1.0, p=0.75)


@fixture(scope="session")
def vanishing_end_potential():
    yield Potential(gamma=1.0, c_star=1.0, p=0.75, smooth_part=SmoothPart("polynomial", [0.0, -1.0]))


@fixture(scope="session")
def zero_potential():
    yield Potential()


@fixture(scope="session")
def smooth_grid(smooth_potential):
    yield NystromGrid.for_potential(smooth_potential)


@fixture(scope="session")
def singular_grid(singular_potential):
    yield NystromGrid.for_potential(singular_potential)


@fixture(scope="session")
def reference_consts(singular_potential):
    yield AsymptoticConstants.from_potential(singular_potential)


@fixture(scope="session")
def model_params():
    yield ModelParams(0.5, 1 + 1j)


@fixture(scope="session")
def c_p_three_quarters():
    yield special.gamma(0.75)


@fixture(scope="function")
def smooth_config_dict():
    yield {
        "potential": {"gamma": 1.0, "c_star": 0.0, "p": 0.75, "smooth_part": {"kind": "polynomial", "coefficients": [1.0, 0.5]}},
        "grid": {"nodes": 160},
        "solver": {"mode": "born"},
    }


@fixture(scope="function")
def singular_config_dict():
    yield {
        "potential": {"gamma": 1.0, "c_star": 1.0, "p": 0.75},
        "grid": {"nodes": 160},
        "solver": {"mode": "born"},
    }


@fixture(scope="session")
def two_thirds_pi():
    yield 2 * math.pi / 3
