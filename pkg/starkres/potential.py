import cmath
import math
import logging

import numpy as np
from numpy.polynomial import Polynomial, legendre
from scipy import interpolate, special

from .branchcut import closed_upper_arg, minus_ik_power
from .excs import AccuracyError, ConfigError, DomainError, FitError
from .utils import _log_of


logger = logging.getLogger(__name__)

GAUSS_ORDER = 24
PANEL_PHASE = 2.0  # oscillation phase allowed per panel
GEOMETRIC_RATIO = 0.25
GEOMETRIC_LEVELS = 8
QUADRATURE_RTOL = 1e-10


class SmoothPart:
    """
    Bounded part V₁ of a potential on [0, γ]

    Arguments:

        kind (str): "zero", "polynomial" or "table"

        coefficients (list): polynomial coefficients in increasing degree, for kind "polynomial"

        x (list): sample abscissae, for kind "table"

        values (list): sample values, for kind "table"

        order (int): spline order of the table interpolation
    """

    KINDS = ("zero", "polynomial", "table")

    def __init__(self, kind="zero", coefficients=None, x=None, values=None, order=3):
        if kind not in self.KINDS:
            raise ConfigError("Unknown smooth part", fields={"smooth_part.kind": repr(kind)})
        self.kind = kind
        self.coefficients = list(coefficients) if coefficients is not None else None
        self.x = list(x) if x is not None else None
        self.values = list(values) if values is not None else None
        self.order = int(order)
        if kind == "polynomial":
            if not self.coefficients:
                raise ConfigError("Polynomial smooth part needs coefficients", fields={"smooth_part.coefficients": "empty"})
            self._function = Polynomial(self.coefficients)
        elif kind == "table":
            if self.x is None or self.values is None or len(self.x) != len(self.values):
                raise ConfigError("Table smooth part needs matching x and values", fields={"smooth_part.values": "length mismatch"})
            if len(self.x) <= self.order:
                raise ConfigError("Too few samples for the interpolation order", fields={"smooth_part.order": self.order})
            self._function = interpolate.make_interp_spline(self.x, self.values, k=self.order)
        else:
            self._function = None

    @property
    def is_zero(self):
        if self.kind == "zero":
            return True
        if self.kind == "polynomial":
            return not any(self.coefficients)
        return not any(self.values)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self._function is None:
            return np.zeros_like(x)
        return np.asarray(self._function(x), dtype=float)

    def to_dict(self):
        if self.kind == "polynomial":
            return {"kind": "polynomial", "coefficients": self.coefficients}
        if self.kind == "table":
            return {"kind": "table", "x": self.x, "values": self.values, "order": self.order}
        return {"kind": "zero"}

    @classmethod
    def from_dict(cls, dct):
        if dct is None:
            return cls()
        return cls(
            kind=dct.get("kind", "zero"),
            coefficients=dct.get("coefficients"),
            x=dct.get("x"),
            values=dct.get("values"),
            order=dct.get("order", 3),
        )


class Potential:
    """
    ``V(x) = c_star · x^{p−1} + V₁(x)`` on [0, γ], zero outside

    Arguments:

        gamma (float): support endpoint

        c_star (float): coefficient of the endpoint singularity, may be 0

        p (float): singular exponent in (0, 1); resonance runs need (1/2, 1)

        smooth_part (SmoothPart): bounded part. Defaults to zero.

        nu (float): declared remainder exponent of the transform asymptotics, must exceed p
    """

    def __init__(self, gamma=1.0, c_star=0.0, p=0.75, smooth_part=None, nu=None):
        errors = {}
        if not (math.isfinite(gamma) and gamma > 0):
            errors["gamma"] = "must be positive and finite, got {!r}".format(gamma)
        if not math.isfinite(c_star):
            errors["c_star"] = "must be finite"
        if not 0 < p < 1:
            errors["p"] = "must lie in (0, 1), got {!r}".format(p)
        if nu is not None and not nu > p:
            errors["nu"] = "must exceed p"
        if errors:
            raise ConfigError("Invalid potential", fields=errors)
        self.gamma = float(gamma)
        self.c_star = float(c_star)
        self.p = float(p)
        self.smooth_part = smooth_part if smooth_part is not None else SmoothPart()
        self.nu = float(nu) if nu is not None else 1.0

    @property
    def is_singular(self):
        return self.c_star != 0

    @property
    def is_zero(self):
        return self.c_star == 0 and self.smooth_part.is_zero

    @property
    def c_p(self):
        """ ``C_p = C* Γ(p)`` """
        return self.c_star * special.gamma(self.p)

    def require_condition_c(self):
        """ Raises ConfigError unless the endpoint singularity produces transform asymptotics with p in (1/2, 1) """
        errors = {}
        if not self.is_singular:
            errors["c_star"] = "must be nonzero"
        if not 0.5 < self.p < 1:
            errors["p"] = "must lie in (1/2, 1) for resonance runs"
        if errors:
            raise ConfigError("Potential does not produce resonance asymptotics", fields=errors)

    def scaled(self, factor):
        smooth = self.smooth_part.to_dict()
        if smooth["kind"] == "polynomial":
            smooth["coefficients"] = [factor * c for c in smooth["coefficients"]]
        elif smooth["kind"] == "table":
            smooth["values"] = [factor * v for v in smooth["values"]]
        return Potential(self.gamma, factor * self.c_star, self.p, SmoothPart.from_dict(smooth), self.nu)

    def __call__(self, x):
        return eval_potential(self, x)

    def regular_part(self, x):
        """ ``c_star + V₁(x) x^{1−p}``: the potential with the singular factor divided out """
        x = np.asarray(x, dtype=float)
        return self.c_star + self.smooth_part(x) * x ** (1 - self.p)

    def quadrature(self, scale=1.0, order=GAUSS_ORDER, absolute=False, refine=1):
        """
        Nodes and V-weighted weights for ``∫₀^γ f(x) V(x) dx ≈ Σ w_j f(x_j)``

        Panels are at most ``PANEL_PHASE / scale`` wide so an integrand oscillating like ``e^{i scale x}``
        is resolved. With a singular potential the first panel is split geometrically toward 0 and
        its innermost piece uses Gauss–Jacobi nodes for the weight ``x^{p−1}``.

        Arguments:

            scale (float): oscillation wavenumber of f

            absolute (bool): weights for ``∫ f |V|`` instead

            refine (int): multiplies the panel count, for error estimates
        """
        panels = max(1, int(math.ceil(self.gamma * max(scale, 1.0) / PANEL_PHASE))) * refine
        breaks = np.linspace(0.0, self.gamma, panels + 1)
        nodes, weights = [], []
        ref_nodes, ref_weights = legendre.leggauss(order)

        start = 0
        if self.is_singular:
            first = breaks[1]
            inner = first * GEOMETRIC_RATIO ** np.arange(GEOMETRIC_LEVELS * refine, 0, -1)
            jacobi_nodes, jacobi_weights = special.roots_jacobi(order, 0.0, self.p - 1.0)
            h = inner[0]
            x = 0.5 * h * (jacobi_nodes + 1)
            nodes.append(x)
            weights.append((0.5 * h) ** self.p * jacobi_weights * self.regular_part(x))
            graded = np.concatenate([inner, [first]])
            for a, b in zip(graded[:-1], graded[1:]):
                x = 0.5 * (b - a) * ref_nodes + 0.5 * (b + a)
                nodes.append(x)
                weights.append(0.5 * (b - a) * ref_weights * eval_potential(self, x))
            start = 1
        for a, b in zip(breaks[start:-1], breaks[start + 1:]):
            x = 0.5 * (b - a) * ref_nodes + 0.5 * (b + a)
            nodes.append(x)
            weights.append(0.5 * (b - a) * ref_weights * eval_potential(self, x))

        nodes, weights = np.concatenate(nodes), np.concatenate(weights)
        if absolute:
            weights = np.abs(weights)
        return nodes, weights

    def integral(self, absolute=False):
        """ ``V₀ = ∫₀^γ V`` (or ``∫|V|``) """
        _, weights = self.quadrature(absolute=absolute)
        return float(np.sum(weights))

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "c_star": self.c_star,
            "p": self.p,
            "nu": self.nu,
            "smooth_part": self.smooth_part.to_dict(),
        }

    @classmethod
    def from_dict(cls, dct):
        return cls(
            gamma=dct.get("gamma", 1.0),
            c_star=dct.get("c_star", 0.0),
            p=dct.get("p", 0.75),
            smooth_part=SmoothPart.from_dict(dct.get("smooth_part")),
            nu=dct.get("nu"),
        )

    def __repr__(self):
        return "Potential(gamma={}, c_star={}, p={}, smooth_part={})".format(
            self.gamma, self.c_star, self.p, self.smooth_part.kind
        )


def eval_potential(V, x):
    """
    ``c_star x^{p−1} + V₁(x)`` on (0, γ], 0 outside

    At ``x = 0`` with ``c_star ≠ 0`` the value is ``±inf``: an integrable endpoint singularity.
    """
    x = np.asarray(x, dtype=float)
    inside = (x >= 0) & (x <= V.gamma)
    safe = np.where(inside & (x > 0), x, 1.0)
    singular = V.c_star * safe ** (V.p - 1) if V.is_singular else 0.0
    values = np.where(inside, singular + V.smooth_part(np.clip(x, 0, V.gamma)), 0.0)
    if V.is_singular:
        values = np.where(x == 0, math.copysign(np.inf, V.c_star), values)
    return values[()] if values.ndim == 0 else values


def integrate_log(V, log_integrand, scale=1.0, absolute=False, rtol=QUADRATURE_RTOL):
    """
    ``log ∫ f V`` for an integrand given in log-scaled form

    Arguments:

        log_integrand (callable): maps nodes to ``(mantissa, log_scale)`` arrays, ``f = mantissa·e^{log_scale}``

    Returns:

        complex: the log of the integral; ``-inf`` when it vanishes

    Raises:

        AccuracyError: when a rule with doubled panels disagrees by more than ``rtol``
    """
    estimates = []
    for refine in (1, 2):
        nodes, weights = V.quadrature(scale=scale, absolute=absolute, refine=refine)
        mantissa, log_scale = log_integrand(nodes)
        log_scale = np.broadcast_to(np.asarray(log_scale, dtype=float), nodes.shape)
        top = np.max(log_scale)
        terms = weights * mantissa * np.exp(log_scale - top)
        estimates.append((np.sum(terms), np.sum(np.abs(terms)), top))
    (coarse, _, top_c), (fine, size, top_f) = estimates
    coarse = coarse * math.exp(top_c - top_f)
    # measured against ∫|f V| so cancelling integrals do not trip the check
    if size > 0:
        achieved = abs(fine - coarse) / size
        if achieved > rtol:
            raise AccuracyError("Quadrature did not converge", achieved=achieved, requested=rtol)
    return _log_of(fine) + top_f


def fourier_half(V, k):
    """
    ``∫₀^γ e^{2ixk} V(x) dx``

    Arguments:

        k (complex): ``Im k ≥ 0``
    """
    k = complex(k)
    if not cmath.isfinite(k) or k.imag < -1e-12:
        raise DomainError("fourier_half needs a finite k in the closed upper half-plane", value=k)
    if V.is_zero:
        return 0j
    log_value = integrate_log(
        V,
        lambda x: (np.exp(2j * x * k.real), -2 * x * k.imag),
        scale=2 * abs(k),
    )
    return cmath.exp(log_value) if log_value.real > -np.inf else 0j


class GammaCheck:
    """ Result of ``gamma_integral_check`` """

    __slots__ = ("lhs", "rhs", "residual")

    def __init__(self, lhs, rhs, residual):
        self.lhs = lhs
        self.rhs = rhs
        self.residual = residual

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.residual))

    def __repr__(self):
        return "GammaCheck(lhs={!r}, rhs={!r}, residual={!r})".format(self.lhs, self.rhs, self.residual)


def gamma_integral_check(p, gamma, k):
    """
    Compares ``∫₀^γ e^{ikx} x^{p−1} dx`` with ``Γ(p)/(−ik)^p``

    ``residual = |lhs − rhs|·|k|`` stays bounded as ``|k| → ∞`` for every arg k in [0, π].
    """
    k = complex(k)
    if not 0 < p < 1:
        raise DomainError("p must lie in (0, 1)", value=p)
    if abs(k) < 1:
        raise DomainError("|k| must be at least 1", value=k)
    if not 0 <= closed_upper_arg(k) <= math.pi:
        raise DomainError("arg k must lie in [0, π]", value=k)
    weight = Potential(gamma=gamma, c_star=1.0, p=p)
    # e^{ikx} = e^{2i(k/2)x}
    lhs = fourier_half(weight, 0.5 * k)
    rhs = special.gamma(p) / minus_ik_power(k, p)
    return GammaCheck(lhs, rhs, abs(lhs - rhs) * abs(k))


class ConditionCFit:
    """
    Result of ``condition_c_fit``

    Attributes:

        c_p_estimate (complex): limit of ``fourier_half(V, k)·(−i2k)^p``

        remainder_exponent (float): log-log slope of ``|fourier_half·(−i2k)^p − C_p|`` in ``|k|``

        effective_p (float): decay exponent of ``|fourier_half|``

        satisfied (bool): whether the data look like transform asymptotics with ``p ∈ (1/2, 1)``
    """

    __slots__ = ("c_p_estimate", "remainder_exponent", "effective_p", "satisfied")

    def __init__(self, c_p_estimate, remainder_exponent, effective_p, satisfied):
        self.c_p_estimate = c_p_estimate
        self.remainder_exponent = remainder_exponent
        self.effective_p = effective_p
        self.satisfied = satisfied

    def __iter__(self):
        return iter((self.c_p_estimate, self.remainder_exponent))

    def __repr__(self):
        return "ConditionCFit(c_p_estimate={!r}, remainder_exponent={!r}, effective_p={!r}, satisfied={!r})".format(
            self.c_p_estimate, self.remainder_exponent, self.effective_p, self.satisfied
        )


REMAINDER_FLOOR = 1e-10


def condition_c_fit(V, k_grid):
    """
    Fits ``fourier_half(V, k)·(−i2k)^p`` to a constant over ``k_grid``

    The constant is the mean over the top decade of ``|k|``; the remainder slope is fitted on the
    residuals above a noise floor.
    """
    ks = np.asarray(list(k_grid), dtype=complex)
    moduli = np.abs(ks)
    if ks.size < 3 or moduli.min() <= 0 or math.log10(moduli.max() / moduli.min()) < 1:
        raise FitError("The k grid must span at least one decade", size=int(ks.size))
    transforms = np.array([fourier_half(V, k) for k in ks])
    scaled = np.array([t * minus_ik_power(2 * k, V.p) for t, k in zip(transforms, ks)])

    top = moduli >= moduli.max() / 10
    c_p_estimate = complex(np.mean(scaled[top]))

    remainder = np.maximum(np.abs(scaled - c_p_estimate), REMAINDER_FLOOR * max(abs(c_p_estimate), 1.0))
    order = np.argsort(moduli)
    lower = order[: max(3, len(order) // 2)]
    remainder_exponent = float(np.polyfit(np.log(moduli[lower]), np.log(remainder[lower]), 1)[0])

    magnitude = np.maximum(np.abs(transforms), 1e-300)
    effective_p = -float(np.polyfit(np.log(moduli), np.log(magnitude), 1)[0])
    satisfied = bool(V.is_singular and 0.5 < effective_p < 1 and abs(effective_p - V.p) < 0.1)
    logger.debug("condition C fit: C_p=%s effective p=%s", c_p_estimate, effective_p)
    return ConditionCFit(c_p_estimate, remainder_exponent, effective_p, satisfied)
