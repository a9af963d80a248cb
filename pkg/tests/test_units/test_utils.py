import cmath
import math

import numpy as np
import pytest

from starkres.excs import ConfigError, FitError
from starkres.utils import (
    LOG_ZERO,
    _Dict,
    _fit_power_law,
    _format_float,
    _hash_dict,
    _log1p_exp,
    _log_add,
    _log_of,
    _normalize_family,
    _parse_complex,
    _parse_range,
    _safe_exp,
    _safe_getitem,
    _wrap_phase,
)


def test_safe_getitem_nested():
    dct = {"potential": {"smooth_part": {"kind": "zero"}}}
    assert _safe_getitem(dct, "potential", "smooth_part", "kind") == "zero"
    assert _safe_getitem(dct, "potential", "missing") is None
    assert _safe_getitem(None, "anything") is None


def test_parse_range():
    assert _parse_range("10..60") == (10, 60)
    assert _parse_range("5") == (5, 5)
    assert _parse_range("2.2..3.14", cast=float) == (2.2, 3.14)


def test_parse_range_rejects_garbage():
    with pytest.raises(ConfigError):
        _parse_range("a..b")
    with pytest.raises(ConfigError):
        _parse_range("60..10")


def test_parse_complex():
    assert _parse_complex("1+2i") == 1 + 2j
    assert _parse_complex("0+0i") == 0
    assert _parse_complex(" -3.5 - 1j ") == -3.5 - 1j
    with pytest.raises(ConfigError):
        _parse_complex("one")


def test_log1p_exp():
    assert _log1p_exp(LOG_ZERO) == 0
    assert _log1p_exp(1000) == pytest.approx(1000)
    assert abs(_log1p_exp(cmath.log(0.5 + 0.5j)) - cmath.log(1.5 + 0.5j)) < 1e-15


def test_log_add():
    assert abs(_log_add(math.log(2), math.log(3)) - math.log(5)) < 1e-15
    assert _log_add(LOG_ZERO, LOG_ZERO).real == -math.inf
    assert _log_add(800, 0).real == pytest.approx(800)


def test_log_of_zero():
    assert _log_of(0) == LOG_ZERO
    assert _log_of(-1).imag == pytest.approx(math.pi)


def test_safe_exp_saturates():
    big = _safe_exp(800)
    assert math.isinf(big.real) and big.imag == 0
    assert _safe_exp(LOG_ZERO) == 0
    assert _safe_exp(1j * math.pi) == pytest.approx(-1)


def test_wrap_phase():
    assert _wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    assert np.allclose(_wrap_phase(np.array([0.1, -0.1, 2 * math.pi + 0.1])), [0.1, -0.1, 0.1])


def test_fit_power_law_exact():
    xs = np.array([10.0, 20.0, 40.0, 80.0])
    exponent, constant, rms = _fit_power_law(xs, 3 * xs ** -1.5)
    assert exponent == pytest.approx(-1.5, abs=1e-12)
    assert constant == pytest.approx(3.0, rel=1e-12)
    assert rms < 1e-12


def test_fit_power_law_needs_points():
    with pytest.raises(FitError):
        _fit_power_law([1.0, 2.0], [0.0, -1.0])
    with pytest.raises(FitError):
        _fit_power_law([3.0, 3.0, 3.0], [1.0, 2.0, 3.0])


def test_format_float_keeps_seventeen_digits():
    assert _format_float(0.1) == "0.10000000000000001"
    assert float(_format_float(math.pi)) == math.pi


def test_hash_dict_ignores_key_order():
    assert _hash_dict({"a": 1, "b": [1, 2]}) == _hash_dict({"b": [1, 2], "a": 1})
    assert _hash_dict({"a": 1}) != _hash_dict({"a": 2})


def test_normalize_family():
    for spelling in (1, "+", "plus", "+1"):
        assert _normalize_family(spelling) == 1
    for spelling in (-1, "-", "minus", "-1"):
        assert _normalize_family(spelling) == -1
    with pytest.raises(ConfigError):
        _normalize_family("both")


def test_dict_attribute_access():
    dct = _Dict(total=3)
    dct.plus = 2
    assert dct["plus"] == 2
    assert dct.total == 3
    assert dct.missing is None
