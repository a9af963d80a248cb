"""
Closed-form asymptotics of the resonances and the metrics that compare computed sequences against them.

Remainders are never asserted against fixed values: each comparison returns the fitted constant and
decay exponent so callers can judge the rate.
"""
import cmath
import math
import logging

import numpy as np

from .branchcut import SpectralPoint, branch_power
from .excs import DomainError, FitError, RegimeError
from .utils import _Dict, _fit_power_law, _normalize_family, _safe_exp


logger = logging.getLogger(__name__)

REGIME_THRESHOLD = 0.1
MIN_SEQUENCE = 10


def resonance_z_star(p, c_p):
    """
    ``z*⁺ = (π/2)(p + 2) + i log(6^b / C_p)``, ``b = (p + 1)/3``

    The resonance equation ``1 = iC_p e^{−iz} / (−i2k)^{p+1}`` with ``2k = (6z)^{1/3}`` reads
    ``e^{−i(z − z*)} / z^b = 1``.
    """
    c_p = complex(c_p)
    if c_p == 0:
        raise DomainError("C_p must be nonzero", value=c_p)
    b = (p + 1) / 3.0
    return 0.5 * math.pi * (p + 2) + 1j * (b * math.log(6) - cmath.log(c_p))


def _u(b, z_star, n, family):
    x = family * 2 * math.pi * n
    y = b * math.log(2 * math.pi * n)
    return x, y, (1j * y + z_star) / x


def regime_start(p, c_p, threshold=REGIME_THRESHOLD):
    """ Smallest ``n ≥ 2`` with ``|uₙ| < threshold`` for both families """
    b = (p + 1) / 3.0
    plus = resonance_z_star(p, c_p)
    minus = plus - b * math.pi
    n = 2
    while abs(_u(b, plus, n, 1)[2]) >= threshold or abs(_u(b, minus, n, -1)[2]) >= threshold:
        n += 1
    return n


class AsymptoticConstants:
    """
    Constants of the resonance asymptotics for a potential with singular exponent ``p`` and ``C_p = C* Γ(p)``

    Attributes:

        b (float): ``(p + 1)/3``

        z_star_plus (complex)

        z_star_minus (complex): ``z_star_plus − bπ``

        r (int): first index of the asymptotic regime

        rho_r (float): ``π(2r − 1) + Re z*⁺ − bπ/2``
    """

    def __init__(self, p, c_p, r=None):
        if not 0 < p < 1:
            raise DomainError("p must lie in (0, 1)", value=p)
        self.p = float(p)
        self.c_p = complex(c_p)
        self.b = (self.p + 1) / 3.0
        self.z_star_plus = resonance_z_star(self.p, self.c_p)
        self.z_star_minus = self.z_star_plus - self.b * math.pi
        self.r = int(r) if r is not None else regime_start(self.p, self.c_p)
        self.rho_r = math.pi * (2 * self.r - 1) + self.z_star_plus.real - 0.5 * self.b * math.pi

    @classmethod
    def from_potential(cls, V, r=None):
        V.require_condition_c()
        return cls(V.p, V.c_p, r)

    def z_star_for(self, family):
        return self.z_star_plus if _normalize_family(family) > 0 else self.z_star_minus

    def to_dict(self):
        return {
            "p": self.p,
            "c_p": [self.c_p.real, self.c_p.imag],
            "b": self.b,
            "z_star_plus": [self.z_star_plus.real, self.z_star_plus.imag],
            "z_star_minus": [self.z_star_minus.real, self.z_star_minus.imag],
            "r": self.r,
            "rho_r": self.rho_r,
        }

    def __repr__(self):
        return "AsymptoticConstants(p={}, c_p={}, r={})".format(self.p, self.c_p, self.r)


def _predicted_resonance(consts, n, family):
    family = _normalize_family(family)
    leading = branch_power(family * 1.5 * math.pi * n, 2.0 / 3.0)
    correction = (1j * consts.b * math.log(2 * math.pi * n) + consts.z_star_for(family)) / (3 * math.pi * n)
    return leading * (1 + family * correction)


def predicted_resonance(consts, n, family=1):
    """
    ``λₙ± ≈ (±3πn/2)^{2/3} (1 ± (ib log(2πn) + z*^±)/(3πn))``

    Raises:

        RegimeError: for ``n`` below ``consts.r``
    """
    if n < consts.r:
        raise RegimeError("Index below the asymptotic regime", value=n, bound=consts.r)
    return _predicted_resonance(consts, n, family)


def predicted_model_root(params, n, family=1):
    """
    ``zₙᵒ + z*^± + ibuₙ`` with ``zₙᵒ = ±2πn + ib log(2πn)`` and ``uₙ = (iyₙᵒ + z*^±)/xₙᵒ``

    Arguments:

        params: anything with ``b`` and ``z_star_for(family)``, e.g. ``ModelParams``
    """
    family = _normalize_family(family)
    if n < 1:
        raise RegimeError("Model roots are indexed from 1", value=n, bound=1)
    z_star = params.z_star_for(family)
    x, y, u = _u(params.b, z_star, n, family)
    return complex(x, y) + z_star + 1j * params.b * u


def model_residual(consts, lam):
    """ ``1 − iC_p e^{−i(4/3)k³} / (−i2k)^{p+1}``: the leading resonance equation at λ """
    point = SpectralPoint(lam)
    log_minus_i2k = complex(math.log(2 * abs(point.k)), 0.5 * point.phi - 0.5 * math.pi)
    log_term = cmath.log(1j * consts.c_p) - 1j * point.z - (consts.p + 1) * log_minus_i2k
    return 1 - _safe_exp(log_term)


def counting_prediction(r):
    """ ``N(r) ≈ (4/(3π)) r^{3/2}`` """
    if r < 0:
        raise DomainError("Radius must be nonnegative", value=r)
    return 4.0 * r ** 1.5 / (3.0 * math.pi)


def zworski_count(r, gamma):
    """ ``(2/π) γ r^{1/2}``: the half-line Schrödinger count with support ``[0, γ]`` """
    if r < 0:
        raise DomainError("Radius must be nonnegative", value=r)
    return 2.0 * gamma * math.sqrt(r) / math.pi


def count_within(lambdas, r):
    return int(np.count_nonzero(np.abs(np.asarray(list(lambdas), dtype=complex)) <= r))


def predicted_count(consts, r):
    """ Number of predicted resonances, both families and every ``n ≥ 1``, with modulus ≤ r """
    count = 0
    for family in (1, -1):
        n = 1
        while abs(_predicted_resonance(consts, n, family)) <= r:
            count += 1
            n += 1
    return count


def _require_sequence(records):
    records = list(records)
    if len(records) < MIN_SEQUENCE:
        raise FitError("At least {} records are needed".format(MIN_SEQUENCE), size=len(records))
    return records


def compare_sequences(records, consts=None):
    """
    Fits ``abs_error ≈ C n^{exponent}`` over a computed resonance sequence

    Records without an ``abs_error`` are compared against ``predicted_resonance`` (``consts`` required).

    Returns:

        _Dict: ``n``, ``abs_error``, ``rel_error``, ``exponent``, ``constant``, ``residual`` and
        the same fit of the relative error as ``rel_exponent``, ``rel_constant``, ``rel_residual``
    """
    records = _require_sequence(records)
    ns, errors, relative = [], [], []
    for record in records:
        error = getattr(record, "abs_error", None)
        if error is None:
            if consts is None:
                raise FitError("Record has no abs_error and no constants were given", size=len(records))
            error = abs(record.lambda_n - predicted_resonance(consts, record.n, record.family))
        ns.append(record.n)
        errors.append(error)
        relative.append(error / abs(record.lambda_n))
    exponent, constant, residual = _fit_power_law(ns, errors, min_points=MIN_SEQUENCE)
    rel_exponent, rel_constant, rel_residual = _fit_power_law(ns, relative, min_points=MIN_SEQUENCE)
    logger.debug("error decay exponent %.3f (relative %.3f)", exponent, rel_exponent)
    return _Dict(
        n=ns,
        abs_error=errors,
        rel_error=relative,
        exponent=exponent,
        constant=constant,
        residual=residual,
        rel_exponent=rel_exponent,
        rel_constant=rel_constant,
        rel_residual=rel_residual,
    )


def compare_model_roots(roots, params):
    """
    ``K_n = |zₙ − prediction|·n²/log²n`` over model roots

    Returns:

        _Dict: ``n``, ``error``, ``k_values``, ``k_min``, ``k_max``, ``k_variation`` (max/min),
        and the power-law ``exponent`` of the raw error
    """
    roots = _require_sequence(roots)
    ns, errors, ks = [], [], []
    for root in roots:
        error = abs(root.z - predicted_model_root(params, root.n, root.family))
        ns.append(root.n)
        errors.append(error)
        ks.append(error * root.n ** 2 / math.log(root.n) ** 2)
    exponent, constant, residual = _fit_power_law(ns, errors, min_points=MIN_SEQUENCE)
    k_min, k_max = min(ks), max(ks)
    return _Dict(
        n=ns,
        error=errors,
        k_values=ks,
        k_min=k_min,
        k_max=k_max,
        k_variation=k_max / k_min if k_min > 0 else math.inf,
        exponent=exponent,
        constant=constant,
        residual=residual,
    )


def imaginary_part_law(records):
    """
    ``Im λₙ · n^{1/3} / log n`` over a resonance sequence

    Returns:

        _Dict: ``n``, ``values``, ``lower``, ``upper`` and the fitted ``exponent`` of ``Im λₙ``
    """
    records = _require_sequence(records)
    ns = [record.n for record in records]
    imag = [record.lambda_n.imag for record in records]
    values = [y * n ** (1.0 / 3.0) / math.log(n) for n, y in zip(ns, imag)]
    exponent, constant, _ = _fit_power_law(ns, imag, min_points=MIN_SEQUENCE)
    return _Dict(n=ns, values=values, lower=min(values), upper=max(values), exponent=exponent, constant=constant)
