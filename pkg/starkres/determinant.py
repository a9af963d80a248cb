"""
Birman–Schwinger discretisation and Fredholm determinants.

The resolvent kernel ``G(x, y) = π Ai(max − λ) w(min − λ)`` has a kink on the
diagonal. Each row is therefore integrated with panel product integration: the
part of the row left of ``x_i`` and the part right of it are integrated
separately with the exact cumulative weights of the Gauss–Legendre interpolant,
which keeps spectral convergence in the number of nodes.
"""
import math
import logging
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre
from scipy import linalg

from .airy import ai_scaled, airy_incoming, airy_outgoing
from .branchcut import SpectralPoint
from .excs import AccuracyError, ConfigError, SingularOperatorError
from .utils import LOG_ZERO, _log1p_exp, _log_of, _safe_exp
from .wrappers import _inject_grid


logger = logging.getLogger(__name__)

PANEL_ORDER = 16
DEFAULT_NODES = 160
DEFAULT_RATIO = 0.1
LOG_OVERFLOW = 600.0
SINGULAR_CONDITION = 1e14
RULES = ("product", "nystrom")
GRADINGS = ("uniform", "geometric")


class _KernelOverflow(AccuracyError):
    pass


@lru_cache(maxsize=32)
def _panel_cumulative(order):
    """ ``C[i, j] = ∫_{−1}^{t_i} ℓ_j(t) dt`` for the Lagrange basis at the Gauss nodes """
    t, w = legendre.leggauss(order)
    vander = legendre.legvander(t, order)  # P_0 .. P_order at the nodes
    cumulative = np.outer(t + 1, w)
    for k in range(1, order):
        integral_k = vander[:, k + 1] - vander[:, k - 1]
        cumulative += np.outer(integral_k, vander[:, k] * w)
    return t, w, 0.5 * cumulative


class NystromGrid:
    """
    Composite Gauss–Legendre nodes on [0, γ]

    Arguments:

        gamma (float): support endpoint

        breaks (array): panel endpoints, increasing from 0 to γ

        order (int): nodes per panel

        grading (str): "uniform" or "geometric" (panels shrinking toward 0)

        ratio (float): geometric shrink factor
    """

    def __init__(self, gamma, breaks, order=PANEL_ORDER, grading="uniform", ratio=DEFAULT_RATIO):
        self.gamma = float(gamma)
        self.breaks = np.asarray(breaks, dtype=float)
        self.order = int(order)
        self.grading = grading
        self.ratio = ratio
        t, w, cumulative = _panel_cumulative(self.order)

        nodes, weights, blocks = [], [], []
        for a, b in zip(self.breaks[:-1], self.breaks[1:]):
            half = 0.5 * (b - a)
            nodes.append(half * t + 0.5 * (a + b))
            weights.append(half * w)
            blocks.append(half * cumulative)
        self.nodes = np.concatenate(nodes)
        self.weights = np.concatenate(weights)

        n = self.nodes.size
        lower = np.zeros((n, n))
        for panel, block in enumerate(blocks):
            rows = slice(panel * self.order, (panel + 1) * self.order)
            lower[rows, : panel * self.order] = self.weights[: panel * self.order]
            lower[rows, rows] = block
        self.lower = lower
        # exactly zero left of the row's panel
        self.upper = self.weights[None, :] - lower

    @classmethod
    def build(cls, gamma, n=DEFAULT_NODES, grading="uniform", ratio=DEFAULT_RATIO, order=PANEL_ORDER):
        """
        Arguments:

            n (int): requested node count, rounded to a multiple of ``order``
        """
        if grading not in GRADINGS:
            raise ConfigError("Unknown grading", fields={"grid.grading": repr(grading)})
        if not 0 < ratio < 1:
            raise ConfigError("Geometric ratio must lie in (0, 1)", fields={"grid.ratio": ratio})
        order = min(order, n)
        panels = max(1, int(round(n / order)))
        if grading == "uniform":
            return cls(gamma, np.linspace(0.0, gamma, panels + 1), order, grading, ratio)
        if panels < 2:
            raise ConfigError("A graded grid needs at least two panels", fields={"grid.nodes": n})
        levels = panels // 2
        uniform = np.linspace(0.0, gamma, panels - levels + 1)
        inner = uniform[1] * ratio ** np.arange(levels, 0, -1)
        breaks = np.concatenate([[0.0], inner, uniform[1:]])
        return cls(gamma, breaks, order, grading, ratio)

    @classmethod
    def for_potential(cls, V, n=DEFAULT_NODES, ratio=DEFAULT_RATIO):
        return _cached_grid(V.gamma, n, "geometric" if V.is_singular else "uniform", ratio)

    def refined(self):
        return _cached_grid(self.gamma, 2 * self.dim, self.grading, self.ratio)

    @property
    def dim(self):
        return self.nodes.size

    def __repr__(self):
        return "NystromGrid(gamma={}, dim={}, grading={!r})".format(self.gamma, self.dim, self.grading)


@lru_cache(maxsize=16)
def _cached_grid(gamma, n, grading, ratio):
    return NystromGrid.build(gamma, n, grading, ratio)


class DeterminantSample:
    """
    ``det(I + M)`` at one spectral point

    Attributes:

        lambda_ (SpectralPoint)

        log_det (complex): ``log|D| + i arg D``

        matrix_dim (int)

        condition_estimate (float): 2-norm condition number of ``I + M``

        singular (bool): factorisation broke down or the condition number is beyond reach: a candidate resonance
    """

    __slots__ = ("lambda_", "log_det", "matrix_dim", "condition_estimate", "singular")

    def __init__(self, lambda_, log_det, matrix_dim, condition_estimate=1.0, singular=False):
        self.lambda_ = lambda_
        self.log_det = complex(log_det)
        self.matrix_dim = matrix_dim
        self.condition_estimate = condition_estimate
        self.singular = singular

    @property
    def det_value(self):
        return _safe_exp(self.log_det)

    def __repr__(self):
        return "DeterminantSample(lambda_={!r}, det_value={!r}, singular={})".format(
            self.lambda_.lambda_, self.det_value, self.singular
        )


def green_kernel(x, y, lam):
    """ ``G₀(x, y; λ) = π Ai(max(x, y) − λ)·(Bi + iAi)(min(x, y) − λ)``, entire in λ """
    lam = complex(lam)
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    far, near = np.maximum(x, y), np.minimum(x, y)
    decaying = ai_scaled(far - lam)
    outgoing = airy_outgoing(near - lam)
    value = math.pi * decaying.value * outgoing.value * np.exp(decaying.log_scale + outgoing.log_scale)
    return value[()] if np.ndim(value) == 0 else value


class BirmanSchwinger:
    """
    The matrix ``M`` of ``|V|^{1/2} R₀(λ) V^{1/2}`` on a Nyström grid

    Arguments:

        V (Potential)

        lam (complex or SpectralPoint)

        grid (NystromGrid): defaults to ``NystromGrid.for_potential(V)``

        branch (int): +1 uses the outgoing kernel (D₊), −1 the incoming one (D₋)

        rule (str): "product" (kink-exact, default) or "nystrom" (plain weights)
    """

    def __init__(self, V, lam, grid=None, branch=1, rule="product"):
        if rule not in RULES:
            raise ConfigError("Unknown quadrature rule", fields={"grid.rule": repr(rule)})
        grid = grid if grid is not None else NystromGrid.for_potential(V)
        if abs(grid.gamma - V.gamma) > 1e-12 * V.gamma:
            raise ConfigError("Grid does not cover the potential's support", fields={"grid.gamma": grid.gamma})
        if V.is_singular and grid.grading != "geometric":
            raise ConfigError("A singular potential needs a graded grid", fields={"grid.grading": grid.grading})
        self.V = V
        self.point = SpectralPoint(lam)
        self.grid = grid
        self.branch = 1 if branch > 0 else -1
        self.rule = rule

        values = V(grid.nodes)
        sqrt_w = np.sqrt(grid.weights)
        sqrt_abs_v = np.sqrt(np.abs(values))
        self._left = sqrt_w * sqrt_abs_v
        self._right = np.sign(values) * sqrt_abs_v * sqrt_w

        shifted = grid.nodes - self.point.lambda_
        self._ai = ai_scaled(shifted)
        self._partner = airy_outgoing(shifted) if self.branch > 0 else airy_incoming(shifted)
        self.matrix = self._assemble()
        self._lu = None

    @property
    def dim(self):
        return self.grid.dim

    def _assemble(self):
        ai, partner, grid = self._ai, self._partner, self.grid
        if self.rule == "product":
            lower, upper = grid.lower, grid.upper
        else:
            below = grid.nodes[None, :] <= grid.nodes[:, None]
            lower = np.where(below, grid.weights[None, :], 0.0)
            upper = np.where(below, 0.0, grid.weights[None, :])
        lower_mask, upper_mask = lower != 0, upper != 0
        log_lower = ai.log_scale[:, None] + partner.log_scale[None, :]
        log_upper = partner.log_scale[:, None] + ai.log_scale[None, :]
        largest = max(
            log_lower[lower_mask].max(initial=-np.inf), log_upper[upper_mask].max(initial=-np.inf)
        )
        if largest > LOG_OVERFLOW:
            raise _KernelOverflow("Kernel entries overflow on this branch", achieved=largest, requested=LOG_OVERFLOW)
        kernel = ai.value[:, None] * lower * partner.value[None, :] * np.exp(np.where(lower_mask, log_lower, 0.0))
        kernel += partner.value[:, None] * upper * ai.value[None, :] * np.exp(np.where(upper_mask, log_upper, 0.0))
        kernel *= math.pi
        # kernel already carries the column weights
        return self._left[:, None] * kernel * (self._right / grid.weights)[None, :]

    def identity_plus(self):
        return np.eye(self.dim) + self.matrix

    def factor(self):
        if self._lu is None:
            self._lu = linalg.lu_factor(self.identity_plus(), check_finite=False)
        return self._lu

    def condition(self):
        return float(np.linalg.cond(self.identity_plus()))

    def log_det(self):
        """ ``log det(I + M)`` accumulated from the pivots; ``-inf`` on breakdown """
        lu, piv = self.factor()
        pivots = np.diag(lu)
        if np.any(pivots == 0):
            return LOG_ZERO
        swaps = np.count_nonzero(piv != np.arange(piv.size))
        return complex(np.sum(np.log(pivots))) + (1j * math.pi if swaps % 2 else 0)

    def determinant(self):
        condition = self.condition()
        log_det = self.log_det()
        singular = log_det.real == -np.inf or not condition < SINGULAR_CONDITION
        if singular:
            logger.warning("I + M is numerically singular at λ = %s", self.point.lambda_)
        return DeterminantSample(self.point, log_det, self.dim, max(condition, 1.0), singular)

    def psi_vectors(self):
        """
        Scaled Ψ vectors

        Returns:

            tuple: ``(a, b, shift)`` with ``a_i = √w_i |V_i|^{1/2} Ai(x_i − λ)·e^{−shift}`` and
            ``b_j = Ai(x_j − λ) V_j^{1/2} √w_j·e^{−shift}``
        """
        shift = float(np.max(self._ai.log_scale))
        ai = self._ai.value * np.exp(self._ai.log_scale - shift)
        return self._left * ai, self._right * ai, shift

    def solve(self, rhs):
        return linalg.lu_solve(self.factor(), rhs, check_finite=False)

    def y_operator(self):
        """ ``Y = M (I + M)^{−1}`` """
        if self.determinant().singular:
            raise SingularOperatorError("I + M is singular, Y is undefined", lambda_=self.point.lambda_)
        return self.solve(self.matrix)

    def log_s_minus_one(self):
        """
        ``log(S − 1)`` with ``S − 1 = −2πi bᵀ(I + M₊)^{−1} a``

        Follows from ``M₋ = M₊ − 2πi a bᵀ`` and the determinant lemma. Only valid on the outgoing branch.
        """
        if self.branch < 0:
            raise ConfigError("log(S − 1) is formed from the outgoing operator", fields={"branch": self.branch})
        a, b, shift = self.psi_vectors()
        q = b @ self.solve(a)
        return _log_of(-2j * math.pi * q) + 2 * shift

    def log_a0(self):
        """ Discrete ``A₀ = −2πi bᵀa`` in log form """
        a, b, shift = self.psi_vectors()
        return _log_of(-2j * math.pi * (b @ a)) + 2 * shift

    def log_a1(self):
        """ Discrete ``A₁ = 2πi bᵀ Y a`` in log form """
        a, b, shift = self.psi_vectors()
        return _log_of(2j * math.pi * (b @ (self.y_operator() @ a))) + 2 * shift


@_inject_grid
def bs_matrix(V, lam, grid=None, branch=1, rule="product"):
    """ The Birman–Schwinger matrix; the zero matrix for ``V ≡ 0`` """
    if V.is_zero:
        return np.zeros((grid.dim, grid.dim), dtype=complex)
    return BirmanSchwinger(V, lam, grid, branch, rule).matrix


@_inject_grid
def fredholm_det(V, lam, grid=None, branch=1, rule="product"):
    """
    ``det(I + M)`` with the log accumulated from pivots

    ``branch=+1`` gives D₊ and its entire continuation, ``branch=−1`` gives D₋. When the direct kernel
    overflows, D₋ in the upper half-plane is obtained as ``D₊·S`` and D₊ in the lower half-plane as
    ``conj(D₋(λ̄))``.
    """
    point = SpectralPoint(lam)
    if V.is_zero:
        return DeterminantSample(point, 0j, grid.dim)
    try:
        return BirmanSchwinger(V, point, grid, branch, rule).determinant()
    except _KernelOverflow:
        upper_half = point.lambda_.imag >= 0
        if upper_half == (branch > 0):
            raise
    logger.debug("direct kernel overflows at λ = %s, using the rank-one route", point.lambda_)
    mirror = point if upper_half else point.conjugate()
    plus = BirmanSchwinger(V, mirror, grid, 1, rule)
    sample = plus.determinant()
    log_det = sample.log_det + _log1p_exp(plus.log_s_minus_one())
    if not upper_half:
        log_det = log_det.conjugate()
    return DeterminantSample(point, log_det, grid.dim, sample.condition_estimate, sample.singular or log_det.real == -np.inf)


def converged_det(V, lam, tol=1e-8, start=DEFAULT_NODES, max_nodes=8 * DEFAULT_NODES, branch=1):
    """ Doubles the grid until two successive determinants agree to ``tol`` """
    grid = NystromGrid.for_potential(V, n=start)
    previous = fredholm_det(V, lam, grid, branch)
    while grid.dim < max_nodes:
        grid = grid.refined()
        current = fredholm_det(V, lam, grid, branch)
        if abs(current.det_value - previous.det_value) <= tol * max(1.0, abs(current.det_value)):
            return current
        previous = current
    raise AccuracyError(
        "Determinant did not stabilise under grid doubling",
        achieved=abs(current.det_value - previous.det_value),
        requested=tol,
    )


@_inject_grid
def y_operator(V, lam, grid=None):
    if V.is_zero:
        return np.zeros((grid.dim, grid.dim), dtype=complex)
    return BirmanSchwinger(V, lam, grid).y_operator()
