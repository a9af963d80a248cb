import math
import logging
from functools import partial

import numpy as np

from .asympt import AsymptoticConstants
from .config import SolverConfig
from .determinant import NystromGrid
from .excs import ConfigError
from .roots import ModelParams, solve_model_root, solve_resonance
from .smatrix import forbidden_domain_scan
from .utils import _Dict, _normalize_family


logger = logging.getLogger(__name__)


def _indices(n_range):
    if isinstance(n_range, tuple):
        low, high = n_range
        return list(range(low, high + 1))
    return list(n_range)


class _BaseSolver:
    """
    Serves both the sync and async solvers
    Holds the potential, grid and solver settings and prepares per-task callables without running them
    """

    IS_ASYNC = None

    def __init__(self, potential, grid=None, solver=None, consts=None):
        """
        Arguments:

            potential (Potential)

            grid (NystromGrid): defaults to ``NystromGrid.for_potential(potential)``

            solver (SolverConfig): Newton tolerances, restarts, regime start and mode

            consts (AsymptoticConstants): derived from the potential when it satisfies Condition C
        """
        self.potential = potential
        self.grid = grid if grid is not None else NystromGrid.for_potential(potential)
        self.solver = solver if solver is not None else SolverConfig()
        errors = self.solver.errors()
        if errors:
            raise ConfigError("Invalid solver settings", fields=errors)
        self._consts = consts

    @classmethod
    def from_config(cls, config):
        """ Builds a solver from a validated ``RunConfig`` """
        potential = config.potential.build()
        return cls(potential, grid=config.grid.build(potential), solver=config.solver)

    @property
    def consts(self):
        if self._consts is None:
            self._consts = AsymptoticConstants.from_potential(self.potential, r=self.solver.r)
        return self._consts

    def _newton_kwargs(self):
        return dict(
            tol=self.solver.tolerance,
            max_iterations=self.solver.max_iterations,
            max_restarts=self.solver.max_restarts,
            backoff_interval=self.solver.backoff_factor,
        )

    def _prep_resonance(self, n, family=1, mode=None):
        logger.debug("resonance task n=%d family=%s", n, family)
        return partial(
            solve_resonance,
            self.potential,
            n,
            family=_normalize_family(family),
            mode=mode or self.solver.mode,
            grid=self.grid,
            consts=self.consts,
            **self._newton_kwargs()
        )

    def _prep_resonances(self, n_range, family=1, mode=None):
        if self.potential.is_zero:
            return []
        return [self._prep_resonance(n, family, mode) for n in _indices(n_range)]

    def _prep_model_root(self, params, n, family=1):
        logger.debug("model root task n=%d family=%s", n, family)
        kwargs = self._newton_kwargs()
        kwargs["tol"] = min(kwargs["tol"], 1e-12)
        return partial(solve_model_root, params, n, family=_normalize_family(family), **kwargs)

    def _prep_model_roots(self, params, n_range, family=1):
        if not isinstance(params, ModelParams):
            raise ConfigError("Model roots need ModelParams", fields={"params": type(params).__name__})
        return [self._prep_model_root(params, n, family) for n in _indices(n_range)]

    def _prep_scan_cell(self, phi_range, r_range):
        logger.debug("scan cell phi=%s r=%s", phi_range, r_range)
        return partial(forbidden_domain_scan, self.potential, phi_range, r_range, n_points=1, grid=self.grid)

    def _prep_scan(self, sector, radii, n_points=4):
        """ One task per polar cell, row major in phi then r """
        n_phi, n_r = (n_points, n_points) if isinstance(n_points, int) else n_points
        phis = np.linspace(sector[0], sector[1], n_phi + 1)
        rs = np.geomspace(radii[0], radii[1], n_r + 1)
        return [
            self._prep_scan_cell((float(phi0), float(phi1)), (float(r0), float(r1)))
            for phi0, phi1 in zip(phis[:-1], phis[1:])
            for r0, r1 in zip(rs[:-1], rs[1:])
        ]

    @staticmethod
    def _merge_scan(sector, radii, reports):
        cells = [cell for report in reports for cell in report.cells]
        return _Dict(
            sector=tuple(sector),
            radii=tuple(radii),
            cells=cells,
            winding_cells=sum(1 for cell in cells if cell.winding != 0),
            min_log_abs_s=min(cell.min_log_abs_s for cell in cells),
            max_log_abs_s=max(cell.max_log_abs_s for cell in cells),
            max_log_bound_ratio=max((cell.max_log_bound_ratio for cell in cells), default=-math.inf),
        )
