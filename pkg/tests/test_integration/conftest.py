from pytest import fixture

from starkres import Solver


@fixture(scope="session")
def born_records(singular_potential):
    yield Solver(singular_potential).resonances((10, 60), family="+", mode="born")
