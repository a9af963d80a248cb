"""
Resonance and model-equation roots.

All Newton iterations run in the variable ``z = (4/3)λ^{3/2}``, where both the
model equation ``e^{−i(z − z*)}/z^b = 1 + g(z)`` and the resonance equations are
close to linear, on the log form of the equation with its phase wrapped to
(−π, π]. Restarts go through ``backoff`` with a deterministic seed jitter.
"""
import cmath
import math
import logging
from collections import namedtuple

import backoff
import numpy as np

from .asympt import AsymptoticConstants, _predicted_resonance, model_residual, predicted_model_root
from .branchcut import SpectralPoint, closed_upper_arg_array
from .contour import ZERO_THRESHOLD, rectangle_loop, winding_number
from .determinant import BirmanSchwinger
from .excs import AccuracyError, BoundaryZeroError, ConfigError, DomainError, StarkError, _NewtonStalled
from .smatrix import log_a0, log_a0_derivative
from .utils import _Dict, _log1p_exp, _normalize_family, _wrap_phase
from .wrappers import _inject_grid, _normalize_family_arg


logger = logging.getLogger(__name__)

MODEL_TOL = 1e-12
RESONANCE_TOL = 1e-10
MAX_ITERATIONS = 50
MAX_RESTARTS = 4
RESTART_JITTER = 0.3
BASIN_RADIUS = math.pi
SIMPLE_ROOT_FLOOR = 1e-8
STEP_FLOOR = 4e-16
DISAGREEMENT_TOL = 0.05
MODES = ("born", "full")
MULTIPLICITY_HALF_WIDTH = 0.5


def map_lambda_z(lam):
    """ ``z = (4/3)λ^{3/2}`` """
    return SpectralPoint(lam).z


def _z_to_point(z, family=1):
    z = complex(z)
    if z == 0 or not cmath.isfinite(z):
        raise DomainError("z must be nonzero and finite", value=z)
    phase = cmath.phase(z)
    if family < 0 and phase < 0:
        phase += 2 * math.pi
    return SpectralPoint.from_polar((0.75 * abs(z)) ** (2.0 / 3.0), 2.0 * phase / 3.0)


def map_z_lambda(z, family=1):
    """
    ``λ = (3z/4)^{2/3}``

    The + family takes the principal argument of z, the − family continues it into [0, 2π) so the
    negative real z-axis maps to ``arg λ = 2π/3``.
    """
    return _z_to_point(z, _normalize_family(family)).lambda_


class Perturbation:
    """
    ``g(z) = coefficient · z^{exponent}`` with ``exponent`` in (−1, 0)

    Powers use the closed upper half-plane argument.
    """

    def __init__(self, coefficient=1.0, exponent=-0.5):
        if not -1 < exponent < 0:
            raise ConfigError("Perturbation must decay like |z|^{-β} with β in (0, 1)", fields={"exponent": exponent})
        self.coefficient = complex(coefficient)
        self.exponent = float(exponent)

    @property
    def decay(self):
        return -self.exponent

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        value = self.coefficient * np.abs(z) ** self.exponent * np.exp(1j * self.exponent * closed_upper_arg_array(z))
        return value[()] if value.ndim == 0 else value

    def derivative(self, z):
        return self.exponent * self(z) / np.asarray(z, dtype=complex)

    def to_dict(self):
        return {"coefficient": [self.coefficient.real, self.coefficient.imag], "exponent": self.exponent}

    def __repr__(self):
        return "Perturbation(coefficient={}, exponent={})".format(self.coefficient, self.exponent)


class ModelParams:
    """
    Parameters of ``F(z) = e^{−i(z − z*)} / z^b``

    Arguments:

        b (float): in (0, 1)

        z_star (complex)

        perturbation (Perturbation): optional right-hand side correction ``g``
    """

    def __init__(self, b, z_star, perturbation=None):
        if not 0 < b < 1:
            raise ConfigError("Invalid model parameters", fields={"b": "must lie in (0, 1), got {!r}".format(b)})
        self.b = float(b)
        self.z_star = complex(z_star)
        self.perturbation = perturbation

    @classmethod
    def from_constants(cls, consts, perturbation=None):
        return cls(consts.b, consts.z_star_plus, perturbation)

    def z_star_for(self, family):
        return self.z_star if _normalize_family(family) > 0 else self.z_star - self.b * math.pi

    def g(self, z):
        if self.perturbation is None:
            return np.zeros_like(np.asarray(z, dtype=complex))[()]
        return self.perturbation(z)

    def g_derivative(self, z):
        if self.perturbation is None:
            return np.zeros_like(np.asarray(z, dtype=complex))[()]
        return self.perturbation.derivative(z)

    def __repr__(self):
        return "ModelParams(b={}, z_star={}, perturbation={!r})".format(self.b, self.z_star, self.perturbation)


def log_f_model(z, params):
    """ ``log F(z) = −i(z − z*) − b log z`` with ``arg z`` in the closed upper half-plane convention """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("F is singular at z = 0", value=0)
    log_z = np.log(np.abs(z)) + 1j * closed_upper_arg_array(z)
    value = -1j * (z - params.z_star) - params.b * log_z
    return value[()] if value.ndim == 0 else value


def f_model(z, params):
    with np.errstate(over="ignore"):
        return np.exp(log_f_model(z, params))


def _model_equation(params):
    """ ``F − 1 − g``, vectorised """

    def function(z):
        return f_model(z, params) - 1 - params.g(z)

    return function


ModelRoot = namedtuple("ModelRoot", ["n", "family", "z", "residual", "derivative", "converged", "flag"])
ModelRoot.__doc__ = """ One root of the model equation. ``flag`` is None or a comma separated list of warnings """

LocatedRoot = namedtuple("LocatedRoot", ["z", "multiplicity", "residual"])


def _wrapped(value):
    value = complex(value)
    return complex(value.real, float(_wrap_phase(value.imag)))


def _newton(function, derivative, start, tol, max_iterations):
    """ Newton on a log-form equation, returning ``(z, wrapped log residual)`` """
    z = complex(start)
    residual = math.inf
    for iteration in range(max_iterations):
        try:
            r = _wrapped(function(z))
            if abs(r) <= tol:
                return z, r
            step = r / derivative(z)
        except StarkError as e:
            raise _NewtonStalled(
                "Newton step could not be evaluated: {}".format(e.msg), iterations=iteration, last_iterate=z
            )
        residual = abs(r)
        if not cmath.isfinite(step):
            break
        z -= step
        if abs(step) <= STEP_FLOOR * max(1.0, abs(z)) and residual <= 100 * tol:
            return z, _wrapped(function(z))
    raise _NewtonStalled("Newton did not converge", iterations=max_iterations, residual=residual, last_iterate=z)


def _restarting_newton(
    function, derivative, seed, tol=MODEL_TOL, max_iterations=MAX_ITERATIONS, max_restarts=MAX_RESTARTS, backoff_interval=0.0
):
    """
    Newton from ``seed``, restarted from ``seed + 0.3·attempt`` while it stalls, ``backoff_interval`` seconds apart

    Returns:

        tuple: ``(z, wrapped log residual, converged)``
    """
    state = {"attempt": 0}

    def on_backoff(details):
        state["attempt"] = details["tries"]
        logger.warning("Newton stalled from seed %s, restart %d", seed, details["tries"])

    def attempt():
        return _newton(function, derivative, seed + RESTART_JITTER * state["attempt"], tol, max_iterations)

    try:
        z, r = backoff.on_exception(
            wait_gen=backoff.constant,
            exception=_NewtonStalled,
            max_tries=max(1, max_restarts),
            on_backoff=on_backoff,
            jitter=None,
            interval=backoff_interval,
        )(attempt)()
        return z, r, True
    except _NewtonStalled as e:
        z = e.last_iterate if e.last_iterate is not None else seed
        try:
            r = _wrapped(function(z))
        except StarkError:
            r = complex(math.inf, 0.0)
        return z, r, False


@_normalize_family_arg
def solve_model_root(
    params,
    n,
    family=1,
    tol=MODEL_TOL,
    max_iterations=MAX_ITERATIONS,
    max_restarts=MAX_RESTARTS,
    seed=None,
    backoff_interval=0.0,
):
    """
    The n-th root of ``F(z) = 1 + g(z)`` in the given family, seeded at ``predicted_model_root``

    Never raises on non-convergence: the returned ``ModelRoot`` is flagged instead.
    """
    family = _normalize_family(family)
    predicted = predicted_model_root(params, n, family)
    start = predicted if seed is None else complex(seed)

    def function(z):
        return log_f_model(z, params) - cmath.log(1 + params.g(z))

    def derivative(z):
        g = params.g(z)
        return -1j - params.b / z - params.g_derivative(z) / (1 + g)

    z, r, converged = _restarting_newton(function, derivative, start, tol, max_iterations, max_restarts, backoff_interval)
    one_plus_g = 1 + complex(params.g(z))
    residual = abs(one_plus_g) * abs(cmath.exp(r) - 1) if cmath.isfinite(r) else math.inf
    slope = one_plus_g * (-1j - params.b / z) - complex(params.g_derivative(z))

    flags = []
    if not converged:
        flags.append("not_converged")
    if abs(z - start) > BASIN_RADIUS:
        flags.append("basin_escape")
    if abs(slope) < SIMPLE_ROOT_FLOOR:
        flags.append("not_simple")
    if flags:
        logger.warning("model root n=%d family=%d flagged: %s", n, family, ", ".join(flags))
    return ModelRoot(n, family, z, residual, slope, converged, ",".join(flags) or None)


@_normalize_family_arg
def model_roots(params, n_range, family=1, tol=MODEL_TOL, max_iterations=MAX_ITERATIONS, max_restarts=MAX_RESTARTS):
    """
    Model roots for every ``n`` in ``n_range``

    Arguments:

        n_range (tuple or iterable): ``(low, high)`` inclusive, or explicit indices
    """
    indices = range(n_range[0], n_range[1] + 1) if isinstance(n_range, tuple) else n_range
    return [
        solve_model_root(params, n, family=family, tol=tol, max_iterations=max_iterations, max_restarts=max_restarts)
        for n in indices
    ]


def _difference_derivative(function, z):
    h = 1e-6 * max(1.0, abs(z))
    return (function(z + h) - function(z - h)) / (2 * h)


def _polish(f, z, multiplicity, tol, max_iterations=MAX_ITERATIONS):
    for _ in range(max_iterations):
        value = complex(f(z))
        if value == 0:
            break
        slope = complex(_difference_derivative(f, z))
        if slope == 0 or not cmath.isfinite(slope):
            break
        step = multiplicity * value / slope
        z -= step
        if abs(step) <= tol * max(1.0, abs(z)):
            break
    return z


def _split(cell, fraction):
    x0, x1, y0, y1 = cell
    if x1 - x0 >= y1 - y0:
        cut = x0 + fraction * (x1 - x0)
        return (x0, cut, y0, y1), (cut, x1, y0, y1)
    cut = y0 + fraction * (y1 - y0)
    return (x0, x1, y0, cut), (x0, x1, cut, y1)


def _children(f, cell, winding, log, threshold):
    for fraction in (0.5, 0.43, 0.57, 0.36, 0.64):
        first, second = _split(cell, fraction)
        try:
            w_first, _ = winding_number(f, rectangle_loop(*first), log=log, threshold=threshold)
            w_second, _ = winding_number(f, rectangle_loop(*second), log=log, threshold=threshold)
        except BoundaryZeroError:
            logger.debug("zero on a cut of %s, moving the cut", cell)
            continue
        if w_first + w_second != winding:
            raise AccuracyError(
                "Winding number is not conserved under subdivision", achieved=w_first + w_second, requested=winding
            )
        return [(first, w_first), (second, w_second)]
    raise AccuracyError("Every cut through the cell hits a zero", achieved=winding)


def brute_force_roots(f, region, tol=1e-12, resolution=None, log=False, threshold=ZERO_THRESHOLD, max_depth=60):
    """
    All zeros of an analytic ``f`` inside a rectangle by recursive argument-principle subdivision

    Cells are halved across their longest side and dropped once their winding is 0. A cell with winding 1
    and diameter below ``resolution`` is polished by Newton; a cell with larger winding is refined until its
    diameter falls below ``resolution·1e-4`` and reported as one root of that multiplicity.

    Arguments:

        f (callable): vectorised over complex arrays; ``log f`` when ``log=True``

        region (tuple): ``(x0, x1, y0, y1)``

        resolution (float): defaults to a twentieth of the shorter side

    Returns:

        list of LocatedRoot, sorted by real then imaginary part

    Raises:

        BoundaryZeroError: ``f`` vanishes on the region boundary; ``suggested_shift`` moves the region off it
    """
    x0, x1, y0, y1 = region
    if not (x1 > x0 and y1 > y0):
        raise DomainError("Region must be a nondegenerate rectangle", value=region)
    if resolution is None:
        resolution = 0.05 * min(x1 - x0, y1 - y0)

    def value_of(z):
        return np.exp(f(z)) if log else f(z)

    winding, _ = winding_number(f, rectangle_loop(*region), log=log, threshold=threshold)
    stack = [(tuple(region), winding, 0)] if winding else []
    roots = []
    while stack:
        cell, w, depth = stack.pop()
        cx0, cx1, cy0, cy1 = cell
        diameter = math.hypot(cx1 - cx0, cy1 - cy0)
        center = complex(0.5 * (cx0 + cx1), 0.5 * (cy0 + cy1))
        resolved = diameter <= resolution if w == 1 else diameter <= 1e-4 * resolution
        if resolved or depth >= max_depth:
            z = _polish(value_of, center, w, tol)
            inside = abs(z - center) <= diameter
            if inside or depth >= max_depth:
                if not inside:
                    z = center
                roots.append(LocatedRoot(z, w, abs(complex(value_of(z)))))
                continue
        for child, child_winding in _children(f, cell, w, log, threshold):
            if child_winding < 0:
                raise DomainError("Negative winding: f has poles in the region", value=child)
            if child_winding:
                stack.append((child, child_winding, depth + 1))
    return sorted(roots, key=lambda root: (root.z.real, root.z.imag))


def _census_columns(f, x_start, x_stop, y0, y1, width, resolution):
    """ Brute-force roots in vertical strips from ``x_start`` toward ``x_stop``, moving any edge that hits a zero """
    direction = 1 if x_stop > x_start else -1
    roots = []
    edge = x_start
    while direction * (x_stop - edge) > 0:
        other = edge + direction * width
        for _ in range(8):
            left, right = min(edge, other), max(edge, other)
            try:
                roots.extend(brute_force_roots(f, (left, right, y0, y1), resolution=resolution))
                break
            except BoundaryZeroError:
                other += direction * 0.37
        else:
            raise AccuracyError("Could not place a census strip edge off the zeros", achieved=other)
        edge = other
    return roots


def model_census(params, z_radius, resolution=1.0, strip_width=8 * math.pi, inner=1.0):
    """
    Counts model roots with ``|z| ≤ z_radius`` by brute force, both families

    The strip ``|Re z| < inner`` around the branch point is excluded.

    Returns:

        _Dict: ``roots`` (LocatedRoot list), ``plus`` and ``minus`` counts (by sign of Re z), ``total``
    """
    if z_radius <= inner:
        raise DomainError("Census radius must exceed the excluded strip", value=z_radius)
    f = _model_equation(params)
    y_star = params.z_star.imag
    outer = z_radius + 2 * math.pi
    y0 = y_star + params.b * math.log(inner) - 3
    y1 = y_star + params.b * math.log(1.5 * outer) + 3
    found = _census_columns(f, inner, outer, y0, y1, strip_width, resolution)
    found += _census_columns(f, -inner, -outer, y0, y1, strip_width, resolution)
    kept = sorted((root for root in found if abs(root.z) <= z_radius), key=lambda root: (root.z.real, root.z.imag))
    plus = sum(root.multiplicity for root in kept if root.z.real > 0)
    minus = sum(root.multiplicity for root in kept if root.z.real < 0)
    return _Dict(roots=kept, plus=plus, minus=minus, total=plus + minus)


class ResonanceRecord:
    """
    One computed resonance

    Attributes:

        n (int), family (int): index and family (±1)

        lambda_n (complex), z_n (complex)

        residual (float): ``|1 + A₀|`` (born) or ``|S|`` (full) at ``lambda_n``

        model_residual (float): residual of the leading resonance equation at ``lambda_n``

        multiplicity (int): from the winding number around ``z_n``; None if the check was skipped or failed

        prediction (complex): asymptotic prediction for this index

        abs_error (float): ``|lambda_n − prediction|``

        converged (bool)

        warning (str): None or a comma separated list of warnings
    """

    __slots__ = (
        "n",
        "family",
        "lambda_n",
        "z_n",
        "residual",
        "model_residual",
        "multiplicity",
        "prediction",
        "abs_error",
        "converged",
        "warning",
    )

    def __init__(self, **kwargs):
        for name in self.__slots__:
            setattr(self, name, kwargs.get(name))

    def to_dict(self):
        return {name: getattr(self, name) for name in self.__slots__}

    def __repr__(self):
        return "ResonanceRecord(n={}, family={}, lambda_n={!r}, residual={:.3g})".format(
            self.n, self.family, self.lambda_n, self.residual
        )


def _born_equation(V, family):
    """ ``log(−A₀(λ(z)))`` and its z-derivative """

    def function(z):
        return log_a0(V, _z_to_point(z, family)) - 1j * math.pi

    def derivative(z):
        point = _z_to_point(z, family)
        ratio = cmath.exp(log_a0_derivative(V, point) - log_a0(V, point))
        return ratio * (2.0 / 3.0) * point.lambda_ / z

    return function, derivative


def _full_equation(V, family, grid):
    """ ``log(−(S − 1))`` through the outgoing operator, with a difference derivative """

    def function(z):
        return BirmanSchwinger(V, _z_to_point(z, family), grid).log_s_minus_one() - 1j * math.pi

    def derivative(z):
        h = 1e-6 * max(1.0, abs(z))
        return _wrapped(function(z + h) - function(z - h)) / (2 * h)

    return function, derivative


def _multiplicity(log_equation, z):
    """ Winding of ``1 − e^{log_equation}`` (that is ``1 + A₀`` or ``S``) around a square centred at z """
    half = MULTIPLICITY_HALF_WIDTH

    def log_value(zs):
        return np.array([_log1p_exp(_negate(log_equation(w))) for w in np.ravel(zs)])

    winding, _ = winding_number(log_value, rectangle_loop(z.real - half, z.real + half, z.imag - half, z.imag + half), log=True)
    return winding


def _negate(log_value):
    # log(−x) from log(x)
    return log_value + 1j * math.pi


def _check_mode(mode):
    mode = "full" if mode == "full-determinant" else mode
    if mode not in MODES:
        raise ConfigError("Unknown resonance mode", fields={"mode": repr(mode)})
    return mode


@_inject_grid
@_normalize_family_arg
def solve_resonance(
    V,
    n,
    family=1,
    mode="born",
    grid=None,
    consts=None,
    tol=RESONANCE_TOL,
    max_iterations=MAX_ITERATIONS,
    max_restarts=MAX_RESTARTS,
    backoff_interval=0.0,
    check_multiplicity=True,
    disagreement_tol=DISAGREEMENT_TOL,
):
    """
    The n-th resonance of a family

    ``born`` solves ``1 + A₀(λ) = 0``; ``full`` solves ``S(λ) = 0`` for the continuation of the determinant
    ratio and also runs the born solve to flag disagreement. Both are seeded from the predicted model root.
    """
    mode = _check_mode(mode)
    family = _normalize_family(family)
    consts = consts if consts is not None else AsymptoticConstants.from_potential(V)
    seed = predicted_model_root(ModelParams.from_constants(consts), n, family)
    function, derivative = _full_equation(V, family, grid) if mode == "full" else _born_equation(V, family)

    warnings = []
    z, r, converged = _restarting_newton(function, derivative, seed, tol, max_iterations, max_restarts, backoff_interval)
    if not converged:
        warnings.append("not_converged")
    if abs(z - seed) > BASIN_RADIUS:
        warnings.append("basin_escape")
    if n < consts.r:
        warnings.append("below_regime")
    point = _z_to_point(z, family)
    prediction = _predicted_resonance(consts, n, family)

    multiplicity = None
    if check_multiplicity and converged:
        try:
            multiplicity = _multiplicity(function, z)
        except (AccuracyError, BoundaryZeroError):
            warnings.append("multiplicity_unchecked")
        else:
            if multiplicity != 1:
                warnings.append("not_simple")

    if mode == "full":
        born_function, born_derivative = _born_equation(V, family)
        born_z, _, born_converged = _restarting_newton(
            born_function, born_derivative, seed, tol, max_iterations, max_restarts, backoff_interval
        )
        born_lambda = _z_to_point(born_z, family).lambda_
        if not born_converged or abs(born_lambda - point.lambda_) > disagreement_tol * abs(point.lambda_):
            warnings.append("mode_disagreement")

    record = ResonanceRecord(
        n=n,
        family=family,
        lambda_n=point.lambda_,
        z_n=z,
        residual=abs(cmath.exp(r) - 1) if cmath.isfinite(r) else math.inf,
        model_residual=abs(model_residual(consts, point)),
        multiplicity=multiplicity,
        prediction=prediction,
        abs_error=abs(point.lambda_ - prediction),
        converged=converged,
        warning=",".join(warnings) or None,
    )
    logger.debug("resonance %r", record)
    if warnings:
        logger.warning("resonance n=%d family=%d: %s", n, family, record.warning)
    return record


@_inject_grid
@_normalize_family_arg
def find_resonances(V, n_range, family=1, mode="born", grid=None, consts=None, **kwargs):
    """
    Resonances for every ``n`` in ``n_range`` (inclusive tuple or explicit indices)

    ``V ≡ 0`` has no resonances and returns an empty list.
    """
    mode = _check_mode(mode)
    if V.is_zero:
        return []
    consts = consts if consts is not None else AsymptoticConstants.from_potential(V)
    indices = range(n_range[0], n_range[1] + 1) if isinstance(n_range, tuple) else n_range
    return [solve_resonance(V, n, family=family, mode=mode, grid=grid, consts=consts, **kwargs) for n in indices]
