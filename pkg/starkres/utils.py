import cmath
import math
import hashlib

try:
    import ujson as json
except:  # noqa: E722
    import json

import numpy as np

from .excs import ConfigError, FitError


LOG_ZERO = complex(-np.inf, 0.0)


def _safe_getitem(dct, *keys):
    for key in keys:
        try:
            dct = dct[key]
        except (KeyError, TypeError):
            return None
    return dct


def _parse_range(text, cast=int):
    """ Parses ``"10..60"`` (inclusive) into a tuple. A single number gives a degenerate range """
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            low, high = cast(low), cast(high)
        else:
            low = high = cast(text)
    except (TypeError, ValueError):
        raise ConfigError("Invalid range", fields={"range": repr(text)})
    if high < low:
        raise ConfigError("Empty range", fields={"range": repr(text)})
    return low, high


def _parse_complex(text):
    """ Accepts both ``1+2i`` and ``1+2j`` """
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError("Invalid complex number", fields={"value": repr(text)})


def _log1p_exp(log_x):
    """ log(1 + e^{log_x}) for complex log_x, without forming e^{log_x} when it would overflow """
    log_x = complex(log_x)
    if log_x.real == -np.inf:
        return 0j
    if log_x.real < 0:
        return complex(np.log1p(cmath.exp(log_x)))
    return log_x + complex(np.log1p(cmath.exp(-log_x)))


def _log_add(log_a, log_b):
    """ log(e^{log_a} + e^{log_b}) """
    log_a, log_b = complex(log_a), complex(log_b)
    if log_a.real < log_b.real:
        log_a, log_b = log_b, log_a
    if log_a.real == -np.inf:
        return LOG_ZERO
    return log_a + _log1p_exp(log_b - log_a)


def _log_of(value):
    value = complex(value)
    if value == 0:
        return LOG_ZERO
    return cmath.log(value)


def _safe_exp(log_value):
    """ exp that saturates to a complex infinity instead of raising OverflowError """
    log_value = complex(log_value)
    if log_value.real > 700:
        phase = cmath.exp(1j * log_value.imag)
        return complex(
            math.copysign(np.inf, phase.real) if phase.real else 0.0,
            math.copysign(np.inf, phase.imag) if phase.imag else 0.0,
        )
    if log_value.real == -np.inf:
        return 0j
    return cmath.exp(log_value)


def _wrap_phase(delta):
    return (np.asarray(delta) + np.pi) % (2 * np.pi) - np.pi


def _fit_power_law(xs, ys, min_points=2):
    """
    Least squares fit of ``log y = exponent * log x + log constant``

    Returns:

        tuple: (exponent, constant, rms residual of the log fit)
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0) & np.isfinite(ys)
    if keep.sum() < max(min_points, 2):
        raise FitError("Not enough positive data points for a power law fit", size=int(keep.sum()))
    log_x, log_y = np.log(xs[keep]), np.log(ys[keep])
    if np.ptp(log_x) == 0:
        raise FitError("Abscissae do not spread", size=int(keep.sum()))
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residual = log_y - (slope * log_x + intercept)
    return float(slope), float(np.exp(intercept)), float(np.sqrt(np.mean(residual ** 2)))


def _format_float(value):
    """ 17 significant digits, the CSV convention """
    return "{:.17g}".format(value)


def _canonical_json(obj):
    return json.dumps(obj, sort_keys=True)


def _hash_dict(obj):
    return hashlib.sha256(_canonical_json(obj).encode("utf-8")).hexdigest()


def _normalize_family(family):
    if family in (1, "+", "plus", "+1"):
        return 1
    if family in (-1, "-", "minus", "-1"):
        return -1
    raise ConfigError("Unknown family", fields={"family": repr(family)})


class _Dict(dict):
    def __init__(self, *args, **kwargs):
        super(_Dict, self).__init__(*args, **kwargs)
        for arg in args:
            if isinstance(arg, dict):
                for k, v in arg.items():
                    self[k] = v

        if kwargs:
            for k, v in kwargs.items():
                self[k] = v

    def __getattr__(self, attr):
        return self.get(attr)

    def __setattr__(self, key, value):
        self.__setitem__(key, value)

    def __setitem__(self, key, value):
        super(_Dict, self).__setitem__(key, value)
        self.__dict__.update({key: value})

    def __delattr__(self, item):
        self.__delitem__(item)

    def __delitem__(self, key):
        super(_Dict, self).__delitem__(key)
        del self.__dict__[key]
