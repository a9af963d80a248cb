import logging

from .base_solver import _BaseSolver


logger = logging.getLogger(__name__)


class Solver(_BaseSolver):
    """
    Synchronous solver: runs every prepared task inline, in order

    Arguments:

        potential (starkres.potential.Potential)

        grid (starkres.determinant.NystromGrid)

        solver (starkres.config.SolverConfig)

    Examples:

        ::

            solver = Solver(Potential(c_star=1.0, p=0.75))
            records = solver.resonances((10, 60), family="+")
    """

    IS_ASYNC = False

    def _run(self, tasks):
        return [task() for task in tasks]

    def resonances(self, n_range, family=1, mode=None):
        """ ``find_resonances`` over ``n_range`` with the solver's grid and settings """
        return self._run(self._prep_resonances(n_range, family, mode))

    def model_roots(self, params, n_range, family=1):
        return self._run(self._prep_model_roots(params, n_range, family))

    def scan_sector(self, sector, radii, n_points=4):
        """ ``forbidden_domain_scan`` cell by cell """
        return self._merge_scan(sector, radii, self._run(self._prep_scan(sector, radii, n_points)))
