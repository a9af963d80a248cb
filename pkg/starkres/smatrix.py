"""
Scattering matrix in the stationary and determinant-ratio representations.

Every quantity whose size is governed by ``ξ(λ)`` is carried as a complex log
(``log|·| + i arg``): in growth sectors ``|S|`` overflows long before the scans
reach their outer radius, while in decay sectors ``S − 1`` underflows.
"""
import cmath
import math
import logging
from collections import namedtuple

import numpy as np

from .airy import DEFAULT_EPS, ai_scaled, airy_eval
from .branchcut import TWO_PI_OVER_THREE, SpectralPoint, log_branch, minus_ik_power
from .contour import polar_cell_loop, winding_number
from .determinant import BirmanSchwinger, _KernelOverflow
from .excs import DomainError, RegimeError
from .potential import fourier_half, integrate_log
from .utils import LOG_ZERO, _Dict, _log1p_exp, _log_add, _safe_exp
from .wrappers import _inject_grid, _spectral_point_arg


logger = logging.getLogger(__name__)

_NAN = complex(np.nan, np.nan)


class SMatrixSample(
    namedtuple(
        "SMatrixSample",
        [
            "lambda_",
            "log_s_stationary",
            "log_s_det_ratio",
            "log_a0",
            "log_a1",
            "log_x_bound",
            "log_xi",
            "log_s_minus_one",
        ],
    )
):
    """
    Both representations of ``S(λ)`` with their ingredients, all in log form

    ``log_s_stationary`` and the stationary ingredients are NaN below the real axis.
    """

    __slots__ = ()

    @property
    def s_stationary(self):
        return _safe_exp(self.log_s_stationary)

    @property
    def s_det_ratio(self):
        return _safe_exp(self.log_s_det_ratio)

    @property
    def a0(self):
        return _safe_exp(self.log_a0)

    @property
    def a1(self):
        return _safe_exp(self.log_a1)

    @property
    def x_bound(self):
        return math.exp(self.log_x_bound) if self.log_x_bound < 700 else math.inf

    @property
    def xi(self):
        return _safe_exp(self.log_xi)


@_spectral_point_arg
def log_xi(point):
    """ ``log ξ(λ)`` for ``ξ = e^{−i(4/3)λ^{3/2}} / (2√λ)``; ``Re log ξ = (4/3)s|λ|^{3/2} − log(2|λ|^{1/2})`` """
    return -1j * point.z - math.log(2) - 0.5 * log_branch(point)


def xi(lam):
    return _safe_exp(log_xi(lam))


def _ai_square(point):
    def integrand(x):
        airy = ai_scaled(x - point.lambda_)
        return airy.value ** 2, 2 * airy.log_scale

    return integrand


def _scale(point):
    return 2 * abs(point.k)


def log_a0(V, lam):
    """ ``log A₀`` for ``A₀(λ) = −2πi ∫ Ai(x − λ)² V(x) dx`` """
    if V.is_zero:
        return LOG_ZERO
    point = SpectralPoint(lam)
    return cmath.log(-2j * math.pi) + integrate_log(V, _ai_square(point), scale=_scale(point))


def a0(V, lam):
    return _safe_exp(log_a0(V, lam))


def log_a0_derivative(V, lam):
    """ ``log dA₀/dλ`` with ``dA₀/dλ = 4πi ∫ Ai Ai′(x − λ) V(x) dx`` """
    if V.is_zero:
        return LOG_ZERO
    point = SpectralPoint(lam)

    def integrand(x):
        airy = ai_scaled(x - point.lambda_)
        return airy.value * airy.derivative, 2 * airy.log_scale

    return cmath.log(4j * math.pi) + integrate_log(V, integrand, scale=_scale(point))


def log_big_x(V, lam):
    """ ``log X`` for ``X(λ) = 2π ∫ |Ai(x − λ)|² |V(x)| dx`` """
    if V.is_zero:
        return -math.inf
    point = SpectralPoint(lam)

    def integrand(x):
        airy = ai_scaled(x - point.lambda_)
        return np.abs(airy.value) ** 2, 2 * airy.log_scale

    return math.log(2 * math.pi) + integrate_log(V, integrand, scale=_scale(point), absolute=True).real


def big_x(V, lam):
    value = log_big_x(V, lam)
    return math.exp(value) if value < 700 else math.inf


def psi_norm_sq(V, lam):
    """ ``‖Ψ(λ)‖² = ∫ |Ai(x − λ)|² |V(x)| dx``, evaluated through ``airy_eval`` """
    if V.is_zero:
        return 0.0
    point = SpectralPoint(lam)

    def integrand(x):
        airy = airy_eval(x - point.lambda_)
        return np.abs(airy.ai) ** 2, 2 * airy.scale_exponent

    value = integrate_log(V, integrand, scale=_scale(point), absolute=True).real
    return math.exp(value) if value < 700 else math.inf


@_spectral_point_arg(1)
def j0(V, point):
    """ ``J₀(λ) = ∫ e^{2ixk} V dx`` """
    return fourier_half(V, point.k)


@_spectral_point_arg(1)
def j1(V, point):
    """ ``J₁(λ) = ∫ e^{−2x Im k} |V| dx`` """
    if V.is_zero:
        return 0.0
    decay = 2 * point.k.imag
    value = integrate_log(V, lambda x: (np.ones_like(x, dtype=complex), -decay * x), absolute=True, scale=decay)
    return math.exp(value.real)


@_inject_grid
def log_a1(V, lam, grid=None):
    """ ``log A₁`` for ``A₁ = 2πi bᵀ Y a`` on the Nyström grid """
    if V.is_zero:
        return LOG_ZERO
    return BirmanSchwinger(V, lam, grid).log_a1()


def a1(V, lam, grid=None):
    return _safe_exp(log_a1(V, lam, grid=grid))


@_inject_grid
def log_s(V, lam, grid=None):
    """ ``log S(λ)`` through the rank-one identity; the cheapest evaluation, valid for every λ """
    if V.is_zero:
        return 0j
    return _log1p_exp(BirmanSchwinger(V, lam, grid).log_s_minus_one())


@_inject_grid
def s_matrix(V, lam, grid=None):
    """
    Evaluates ``S(λ)`` both ways

    The stationary form ``1 + A₀ + A₁`` needs ``Im λ ≥ 0``; the determinant ratio ``D₋/D₊`` is formed
    directly where the incoming kernel fits in floating point and through ``S = 1 − 2πi bᵀ(I + M₊)^{−1}a``
    elsewhere.
    """
    point = SpectralPoint(lam)
    log_xi_value = log_xi(point)
    if V.is_zero:
        return SMatrixSample(point, 0j, 0j, LOG_ZERO, LOG_ZERO, -math.inf, log_xi_value, LOG_ZERO)

    plus = BirmanSchwinger(V, point, grid, 1)
    log_s_minus_one = plus.log_s_minus_one()
    try:
        minus = BirmanSchwinger(V, point, grid, -1)
        log_ratio = minus.log_det() - plus.log_det()
    except _KernelOverflow:
        log_ratio = _log1p_exp(log_s_minus_one)

    if point.lambda_.imag >= 0:
        log_a0_value = log_a0(V, point)
        log_a1_value = plus.log_a1()
        log_stationary = _log1p_exp(_log_add(log_a0_value, log_a1_value))
        log_x_value = log_big_x(V, point)
    else:
        log_a0_value = log_a1_value = log_stationary = _NAN
        log_x_value = math.nan
    return SMatrixSample(
        point, log_stationary, log_ratio, log_a0_value, log_a1_value, log_x_value, log_xi_value, log_s_minus_one
    )


@_inject_grid
def growth_ratio(V, lam, grid=None):
    """ ``S(λ)(−i2k)^p / ξ(λ)``, which tends to ``C_p`` in the growth sector """
    point = SpectralPoint(lam)
    log_value = log_s(V, point, grid=grid) + cmath.log(minus_ik_power(2 * point.k, V.p)) - log_xi(point)
    return _safe_exp(log_value)


@_inject_grid
def bound_ratio(V, lam, grid=None):
    """ ``|S(λ) − 1| / |ξ(λ)|`` """
    if V.is_zero:
        return 0.0
    point = SpectralPoint(lam)
    log_value = BirmanSchwinger(V, point, grid).log_s_minus_one() - log_xi(point)
    return math.exp(log_value.real) if log_value.real < 700 else math.inf


@_spectral_point_arg(1)
def small_angle_expansion(V, point, eps=DEFAULT_EPS):
    """
    Splits ``A₀`` near the positive real axis

    Returns:

        tuple: ``(−iV₀/k, −(i/k) ∫ V sin Φ dx)`` with ``Φ = (4/3)k³ − 2xk``
    """
    if point.phi > eps:
        raise RegimeError("Small angle expansion needs arg λ ≤ eps", value=point.phi, bound=eps)
    k = point.k
    leading = -1j * V.integral() / k
    if V.is_zero:
        return leading, 0j

    def phase(x):
        return (4.0 / 3.0) * k ** 3 - 2 * x * k

    def exp_plus(x):
        value = phase(x)
        return np.exp(1j * value.real), -value.imag

    def exp_minus(x):
        value = phase(x)
        return np.exp(-1j * value.real), value.imag

    scale = _scale(point)
    plus = _safe_exp(integrate_log(V, exp_plus, scale=scale))
    minus = _safe_exp(integrate_log(V, exp_minus, scale=scale))
    # −(i/k)·(e^{iΦ} − e^{−iΦ})/(2i)
    return leading, -(plus - minus) / (2 * k)


def _sector_log_function(V, grid, divide_by_xi):
    def function(lams):
        values = []
        for lam in np.ravel(lams):
            value = log_s(V, lam, grid=grid)
            if divide_by_xi:
                value -= log_xi(lam)
            values.append(value)
        return np.array(values, dtype=complex)

    return function


@_inject_grid
def forbidden_domain_scan(V, sector, radii, n_points=4, grid=None):
    """
    Argument-principle census of ``S`` on a polar grid of cells

    In cells strictly inside the growth sector ``(0, 2π/3)`` the phase of ``S/ξ`` is followed instead of
    ``S``: both have the same zeros there and the quotient does not spin with ``ξ``.

    Arguments:

        sector (tuple): ``(phi_min, phi_max)`` within [0, π]

        radii (tuple): ``(r_min, r_max)``

        n_points (int or tuple): cells along (phi, r)

    Returns:

        _Dict: ``cells`` (one _Dict per cell), ``winding_cells`` (cells with nonzero winding),
        ``min_log_abs_s``, ``max_log_abs_s``, ``max_log_bound_ratio``
    """
    phi_min, phi_max = sector
    r_min, r_max = radii
    if not 0 <= phi_min < phi_max <= math.pi:
        raise DomainError("Sector must lie in [0, π]", value=sector)
    if not 0 < r_min < r_max:
        raise DomainError("Radii must be positive and increasing", value=radii)
    n_phi, n_r = (n_points, n_points) if isinstance(n_points, int) else n_points
    phis = np.linspace(phi_min, phi_max, n_phi + 1)
    rs = np.geomspace(r_min, r_max, n_r + 1)

    cells = []
    for phi0, phi1 in zip(phis[:-1], phis[1:]):
        divide_by_xi = (not V.is_zero) and phi0 > 0 and phi1 < TWO_PI_OVER_THREE
        function = _sector_log_function(V, grid, divide_by_xi)
        for r0, r1 in zip(rs[:-1], rs[1:]):
            if V.is_zero:
                winding, samples = 0, np.zeros(1, dtype=complex)
                log_bound = -math.inf
            else:
                winding, traces = winding_number(function, polar_cell_loop(r0, r1, phi0, phi1), log=True, threshold=1e-300)
                points = np.concatenate([trace.points for trace in traces])
                samples = np.array([log_s(V, lam, grid=grid) for lam in points]) if divide_by_xi else np.concatenate(
                    [trace.values for trace in traces]
                )
                log_bound = max(
                    (BirmanSchwinger(V, lam, grid).log_s_minus_one() - log_xi(lam)).real for lam in points[:: max(1, points.size // 16)]
                )
            center = math.sqrt(r0 * r1) * cmath.exp(0.5j * (phi0 + phi1))
            cells.append(
                _Dict(
                    center=center,
                    log_abs_s=float(samples.real.mean()),
                    min_log_abs_s=float(samples.real.min()),
                    max_log_abs_s=float(samples.real.max()),
                    max_log_bound_ratio=float(log_bound),
                    winding=winding,
                )
            )
            logger.debug("scan cell %s: winding %d", center, winding)
    return _Dict(
        sector=tuple(sector),
        radii=tuple(radii),
        cells=cells,
        winding_cells=sum(1 for cell in cells if cell.winding != 0),
        min_log_abs_s=min(cell.min_log_abs_s for cell in cells),
        max_log_abs_s=max(cell.max_log_abs_s for cell in cells),
        max_log_bound_ratio=max(cell.max_log_bound_ratio for cell in cells),
    )
