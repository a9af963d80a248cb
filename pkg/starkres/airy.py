"""
Airy functions of complex argument with overflow-safe scaling.

The values come from the AMOS routines wrapped by ``scipy.special``. Inside
``|Re ζ| < UNSCALED_LIMIT`` (ζ = (2/3) z^{3/2}) the unscaled routine is used, so
the negative real axis, where the branch of ζ is ambiguous, never relies on a
rescaling factor. The Maclaurin series is kept as an independent oracle.
"""
import math
import logging
from collections import namedtuple

import numpy as np
from scipy import special

from .branchcut import SpectralPoint
from .excs import AccuracyError, DomainError, RegimeError


logger = logging.getLogger(__name__)

UNSCALED_LIMIT = 50.0
ASYMPTOTIC_MIN_MODULUS = 10.0
DEFAULT_EPS = 0.2

_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * special.gamma(2.0 / 3.0))
_AIP0 = 1.0 / (3.0 ** (1.0 / 3.0) * special.gamma(1.0 / 3.0))
_ROT = np.exp(2j * np.pi / 3)


AiryValue = namedtuple("AiryValue", ["ai", "aip", "bi", "bip", "scale_exponent"])
AiryValue.__doc__ = """ Ai, Ai′, Bi, Bi′ at one argument, all multiplied by ``e^{−scale_exponent}`` """

ScaledAiry = namedtuple("ScaledAiry", ["value", "derivative", "log_scale"])
ScaledAiry.__doc__ = """ A single Airy solution: true value = ``value · e^{log_scale}``, same for the derivative """


def _zeta(z):
    return (2.0 / 3.0) * z * np.sqrt(z)


def _as_complex_array(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("Airy argument must be finite", value=z[~np.isfinite(z)].ravel()[:1])
    return z


def _check_finite(*arrays):
    for array in arrays:
        if not np.all(np.isfinite(array)):
            raise AccuracyError("Airy evaluation lost all accuracy (argument too large)", achieved=np.inf)


def _unwrap(value, scalar):
    return value[()] if scalar else value


def airy_eval(z):
    """
    Ai, Ai′, Bi, Bi′ scaled by a shared exponent

    Arguments:

        z (complex or array): finite argument(s)

    Returns:

        AiryValue: ``scale_exponent = |Re ζ|``, which keeps all four magnitudes of order ``|z|^{±1/4}``
    """
    z = _as_complex_array(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    zeta = _zeta(z)
    exponent = np.abs(zeta.real)
    small = exponent < UNSCALED_LIMIT

    ai, aip, bi, bip = (np.empty_like(z) for _ in range(4))
    if np.any(small):
        damp = np.exp(-exponent[small])
        a, ap, b, bp = special.airy(z[small])
        ai[small], aip[small], bi[small], bip[small] = a * damp, ap * damp, b * damp, bp * damp
    large = ~small
    if np.any(large):
        ea, eap, eb, ebp = special.airye(z[large])
        shift = np.exp(-zeta[large] - exponent[large])
        ai[large], aip[large], bi[large], bip[large] = ea * shift, eap * shift, eb, ebp
    _check_finite(ai, aip, bi, bip)
    return AiryValue(*(_unwrap(v, scalar) for v in (ai, aip, bi, bip, exponent)))


def ai_scaled(t):
    """ Ai(t), Ai′(t) with the decay or growth factor ``e^{−Re ζ}`` split off into ``log_scale`` """
    t = _as_complex_array(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    zeta = _zeta(t)
    small = np.abs(zeta.real) < UNSCALED_LIMIT

    value, derivative = np.empty_like(t), np.empty_like(t)
    log_scale = np.where(small, 0.0, -zeta.real)
    if np.any(small):
        a, ap, _, _ = special.airy(t[small])
        value[small], derivative[small] = a, ap
    large = ~small
    if np.any(large):
        ea, eap, _, _ = special.airye(t[large])
        phase = np.exp(-1j * zeta[large].imag)
        value[large], derivative[large] = ea * phase, eap * phase
    _check_finite(value, derivative)
    return ScaledAiry(_unwrap(value, scalar), _unwrap(derivative, scalar), _unwrap(log_scale, scalar))


def _rotated(t, turn, prefactor):
    # Ai(t e^{±2πi/3}) and its t-derivative
    rotation = _ROT if turn > 0 else np.conj(_ROT)
    inner = ai_scaled(np.asarray(t, dtype=complex) * rotation)
    return ScaledAiry(prefactor * inner.value, prefactor * rotation * inner.derivative, inner.log_scale)


def airy_outgoing(t):
    """
    Outgoing solution ``w = Bi + iAi = 2e^{iπ/6} Ai(t e^{2πi/3})``

    ``w`` decays as ``t → −∞`` along rays with ``Im t < 0``, that is for ``t = x − λ`` with ``Im λ > 0``; it is the second factor of the resolvent kernel.
    """
    return _rotated(t, +1, 2 * np.exp(1j * np.pi / 6))


def airy_incoming(t):
    """ Incoming solution ``Bi − iAi = 2e^{−iπ/6} Ai(t e^{−2πi/3})``, the conjugate-branch partner of ``airy_outgoing`` """
    return _rotated(t, -1, 2 * np.exp(-1j * np.pi / 6))


def airy_maclaurin(z, terms=60):
    """
    Unscaled (Ai, Ai′, Bi, Bi′) from the Maclaurin series of the two even/odd solutions

    Accurate to double precision for ``|z| ≲ 6``; used as an oracle.
    """
    z = np.asarray(z, dtype=complex)
    z3 = z ** 3
    f, fp = np.ones_like(z), np.zeros_like(z)
    g, gp = z.copy(), np.ones_like(z)
    f_term, g_term = np.ones_like(z), np.ones_like(z)
    for k in range(1, terms):
        f_term = f_term / ((3 * k - 1) * (3 * k))
        g_term = g_term / ((3 * k) * (3 * k + 1))
        f = f + f_term * z3 ** k
        fp = fp + 3 * k * f_term * z ** (3 * k - 1)
        g = g + g_term * z ** (3 * k + 1)
        gp = gp + (3 * k + 1) * g_term * z3 ** k
    sqrt3 = math.sqrt(3.0)
    return (
        _AI0 * f - _AIP0 * g,
        _AI0 * fp - _AIP0 * gp,
        sqrt3 * (_AI0 * f + _AIP0 * g),
        sqrt3 * (_AI0 * fp + _AIP0 * gp),
    )


def airy_decay_asymptotic(z):
    """ Leading decay form ``Ai(z) ≈ e^{−ζ} / (2√π z^{1/4})``, valid for ``|arg z| ≤ π − ε`` """
    z = np.asarray(z, dtype=complex)
    return np.exp(-_zeta(z)) / (2 * math.sqrt(math.pi) * z ** 0.25)


def regime_of(lam, eps=DEFAULT_EPS):
    point = SpectralPoint(lam)
    return "near-real" if point.phi <= eps else "interior"


def airy_asymptotic_square(x, lam, regime=None, eps=DEFAULT_EPS):
    """
    Leading asymptotics of ``Ai(x − λ)²`` for large ``|λ|``

    Arguments:

        x (float or array): point(s) in the support

        lam (complex or SpectralPoint): ``|λ| ≥ 10``

        regime (str): "interior" (valid for arg λ ≥ eps) or "near-real" (arg λ ≤ eps).
            Defaults to the regime of ``lam``.

    Returns:

        ``(i/4πk) e^{−iΦ}`` (interior) or ``(1 + sin Φ)/(2πk)`` (near-real), with ``Φ = (4/3)k³ − 2xk``
    """
    point = SpectralPoint(lam)
    if point.modulus < ASYMPTOTIC_MIN_MODULUS:
        raise RegimeError("Airy square asymptotics need a large spectral parameter", value=point.modulus, bound=ASYMPTOTIC_MIN_MODULUS)
    if regime is None:
        regime = regime_of(point, eps)
    k = point.k
    phase = (4.0 / 3.0) * k ** 3 - 2 * np.asarray(x, dtype=float) * k
    if regime == "interior":
        if point.phi < eps:
            raise RegimeError("Interior form requested too close to the real axis", value=point.phi, bound=eps)
        return 1j / (4 * k * math.pi) * np.exp(-1j * phase)
    if regime == "near-real":
        if point.phi > eps:
            raise RegimeError("Near-real form requested away from the real axis", value=point.phi, bound=eps)
        return (1 + np.sin(phase)) / (2 * math.pi * k)
    raise RegimeError("Unknown regime {!r}".format(regime))


def phase_expansion_residual(x, lam):
    """ ``(x − λ)^{3/2} − [(−λ)^{3/2} + (3/2) x (−λ)^{1/2}]``, which is ``O(|λ|^{−1/2})`` on the support """
    lam = complex(lam)
    x = np.asarray(x, dtype=float)
    # a zero imaginary part stays +0.0 in both terms, so they share a branch
    neg = complex(-lam.real, 0.0 - lam.imag)
    shifted = x + neg
    root = np.sqrt(neg)
    return shifted * np.sqrt(shifted) - (neg * root + 1.5 * x * root)
