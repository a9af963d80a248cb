"""
Branch conventions for every multivalued power in the package.

Powers are taken as ``|λ|^α e^{iα arg λ}`` with the argument continued from the
closed upper half-plane. Arguments are kept in [−π/2, 3π/2): a point just below
the positive real axis keeps an argument near 0, a point just below the
negative real axis keeps an argument near π.
"""
import cmath
import math
import logging

import numpy as np

from .excs import DomainError


logger = logging.getLogger(__name__)

TWO_PI_OVER_THREE = 2 * math.pi / 3


def closed_upper_arg(value):
    """
    Argument of ``value`` in [−π/2, 3π/2)

    The real axis keeps arg 0 (positive half) and π (negative half) whatever the sign of a zero imaginary part.
    """
    value = complex(value)
    phase = cmath.phase(value)
    if value.imag == 0 and value.real < 0:
        return math.pi
    if phase < -math.pi / 2:
        phase += 2 * math.pi
    return phase


def closed_upper_arg_array(values):
    values = np.asarray(values, dtype=complex)
    phase = np.angle(values)
    phase = np.where((values.imag == 0) & (values.real < 0), np.pi, phase)
    return np.where(phase < -np.pi / 2, phase + 2 * np.pi, phase)


class SpectralPoint:
    """
    A spectral parameter λ with its branch data

    Arguments:

        lambda_ (complex): spectral parameter, nonzero and finite

        phi (float): explicit argument of λ. Defaults to ``closed_upper_arg(lambda_)``.
            Pass it to follow an analytic continuation across the real axis.

    Attributes:

        modulus (float): ``|λ|``

        phi (float): arg λ

        k (complex): ``√λ`` with ``Im k ≥ 0`` for ``phi`` in [0, π]

        z (complex): ``(4/3) λ^{3/2}``

        s (float): ``sin(3φ/2)``

        c (float): ``cos(3φ/2)``
    """

    __slots__ = ("lambda_", "modulus", "phi", "k", "z", "s", "c")

    def __init__(self, lambda_, phi=None):
        if isinstance(lambda_, SpectralPoint):
            phi = lambda_.phi if phi is None else phi
            lambda_ = lambda_.lambda_
        lambda_ = complex(lambda_)
        if not cmath.isfinite(lambda_):
            raise DomainError("Spectral parameter must be finite", value=lambda_)
        if lambda_ == 0:
            raise DomainError("λ = 0 is a branch point", value=lambda_)
        self.lambda_ = lambda_
        self.modulus = abs(lambda_)
        self.phi = closed_upper_arg(lambda_) if phi is None else float(phi)
        self.k = math.sqrt(self.modulus) * cmath.exp(0.5j * self.phi)
        self.z = (4.0 / 3.0) * self.modulus ** 1.5 * cmath.exp(1.5j * self.phi)
        self.s = math.sin(1.5 * self.phi)
        self.c = math.cos(1.5 * self.phi)

    @classmethod
    def from_polar(cls, modulus, phi):
        return cls(modulus * cmath.exp(1j * phi), phi=phi)

    @property
    def log(self):
        return log_branch(self)

    def conjugate(self):
        """ The reflected point ``λ̄``, its argument mirrored about the nearer half of the real axis """
        phi = -self.phi if self.phi <= math.pi / 2 else 2 * math.pi - self.phi
        return SpectralPoint(self.lambda_.conjugate(), phi=phi)

    def __complex__(self):
        return self.lambda_

    def __repr__(self):
        return "SpectralPoint({!r}, phi={!r})".format(self.lambda_, self.phi)


def _as_point(value):
    if isinstance(value, SpectralPoint):
        return value
    return SpectralPoint(value)


def log_branch(lam):
    """ ``log|λ| + i arg λ`` with the stored argument """
    point = _as_point(lam)
    return complex(math.log(point.modulus), point.phi)


def branch_power(lam, alpha):
    """
    ``λ^α = |λ|^α e^{iα arg λ}``

    Arguments:

        lam (complex or SpectralPoint): nonzero. A ``SpectralPoint`` keeps its stored argument.

        alpha (float): exponent

    Examples:

        ::

            branch_power(-1, 2/3)  # e^{2πi/3}
    """
    point = _as_point(lam)
    return point.modulus ** alpha * cmath.exp(1j * alpha * point.phi)


def branch_power_array(values, alpha):
    values = np.asarray(values, dtype=complex)
    if np.any(values == 0):
        raise DomainError("Branch power of zero", value=0)
    return np.abs(values) ** alpha * np.exp(1j * alpha * closed_upper_arg_array(values))


def minus_ik_power(k, p):
    """ ``(−ik)^p = e^{−ipπ/2} |k|^p e^{ip arg k}`` """
    k = complex(k)
    if k == 0:
        raise DomainError("(−ik)^p is singular at k = 0", value=k)
    return cmath.exp(-0.5j * p * math.pi) * abs(k) ** p * cmath.exp(1j * p * closed_upper_arg(k))
