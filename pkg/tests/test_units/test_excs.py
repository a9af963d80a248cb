import logging

import pytest

from starkres.excs import (
    StarkError,
    DomainError,
    BoundaryZeroError,
    ConfigError,
    AccuracyError,
    ConvergenceError,
    RegimeError,
    FitError,
    SingularOperatorError,
    _NewtonStalled,
)


def test_every_error_is_a_stark_error():
    for error in (DomainError, ConfigError, AccuracyError, ConvergenceError, RegimeError, FitError, SingularOperatorError):
        assert issubclass(error, StarkError)


def test_boundary_zero_is_a_domain_error():
    error = BoundaryZeroError("zero on the edge", point=1 + 1j, suggested_shift=0.1 + 0.1j)
    assert isinstance(error, DomainError)
    assert error.point == 1 + 1j
    assert error.suggested_shift == 0.1 + 0.1j
    assert error.value == 1 + 1j


def test_config_error_keeps_fields():
    error = ConfigError("Invalid configuration", fields={"potential.p": "must lie in (0, 1)"})
    assert error.fields == {"potential.p": "must lie in (0, 1)"}
    assert "potential.p" in str(error)


def test_message_without_context_is_plain():
    assert str(FitError("Too few points")) == "Too few points"


def test_convergence_error_context():
    error = _NewtonStalled("Newton did not converge", iterations=50, residual=1e-3, last_iterate=2 + 1j)
    assert isinstance(error, ConvergenceError)
    assert error.last_iterate == 2 + 1j
    assert "iterations" in str(error)


def test_singular_operator_error_context():
    error = SingularOperatorError("I + M is singular", lambda_=3 + 1j, condition=1e16)
    assert error.lambda_ == 3 + 1j
    assert error.condition == 1e16


def test_errors_are_logged(caplog):
    with caplog.at_level(logging.ERROR, logger="starkres.excs"):
        RegimeError("Outside the sector", value=0.5, bound=0.2)
    assert "Outside the sector" in caplog.text


def test_raise_and_catch_as_base():
    with pytest.raises(StarkError):
        raise AccuracyError("Quadrature did not converge", achieved=1e-6, requested=1e-10)
