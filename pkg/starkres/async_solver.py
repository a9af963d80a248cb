import os
import logging
import asyncio
from concurrent.futures import ThreadPoolExecutor

from .base_solver import _BaseSolver
from .config import THREADS_ENV
from .excs import ConfigError


logger = logging.getLogger(__name__)


class AsyncSolver(_BaseSolver):
    """
    Asynchronous solver: prepared tasks run on a thread pool and are collected with ``asyncio.gather``

    Results always come back in task order, whatever the completion order.

    Arguments:

        potential (starkres.potential.Potential)

        grid (starkres.determinant.NystromGrid)

        solver (starkres.config.SolverConfig)

        threads (int):

            * Worker count

            * Default: ``STARK_THREADS``, else one per CPU
    """

    IS_ASYNC = True

    def __init__(self, potential, grid=None, solver=None, threads=None, consts=None):
        super(AsyncSolver, self).__init__(potential, grid=grid, solver=solver, consts=consts)
        self.threads = threads if threads is not None else self._threads_from_env()
        self._executor = None

    @classmethod
    def from_config(cls, config):
        potential = config.potential.build()
        return cls(potential, grid=config.grid.build(potential), solver=config.solver, threads=config.threads)

    @staticmethod
    def _threads_from_env():
        value = os.environ.get(THREADS_ENV)
        if not value:
            return None
        try:
            return int(value)
        except ValueError:
            raise ConfigError("Invalid environment variable", fields={THREADS_ENV: repr(value)})

    @property
    def executor(self):
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self.threads)
        return self._executor

    def close(self):
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    async def _run(self, tasks, return_exceptions=False):
        loop = asyncio.get_event_loop()
        futures = [loop.run_in_executor(self.executor, task) for task in tasks]
        return list(await asyncio.gather(*futures, return_exceptions=return_exceptions))

    async def resonances(self, n_range, family=1, mode=None):
        return await self._run(self._prep_resonances(n_range, family, mode))

    async def model_roots(self, params, n_range, family=1):
        return await self._run(self._prep_model_roots(params, n_range, family))

    async def scan_sector(self, sector, radii, n_points=4):
        reports = await self._run(self._prep_scan(sector, radii, n_points))
        return self._merge_scan(sector, radii, reports)

    async def gather(self, *coros, return_exceptions=False):
        """
        Runs several solver calls concurrently on the shared pool

        Examples:

            ::

                solver = AsyncSolver(V)
                plus, minus = await solver.gather(
                    solver.resonances((10, 60), family="+"),
                    solver.resonances((10, 60), family="-"),
                )

        Arguments:

            return_exceptions (bool):
                passed to `asyncio.gather`: https://docs.python.org/3/library/asyncio-task.html#asyncio.gather
        """
        return list(await asyncio.gather(*coros, return_exceptions=return_exceptions))

    def gather_now(self, *coros, return_exceptions=False):
        """
        same as ``async def AsyncSolver.gather`` but can be called synchronously.
        Only works if there's no loop running. Use the ``gather`` method if you have one already running.
        """
        try:
            # Python 3.7+
            return asyncio.run(self.gather(*coros, return_exceptions=return_exceptions))
        except AttributeError:  # Python 3.6 has no asyncio.run
            loop = asyncio.get_event_loop()
            return loop.run_until_complete(self.gather(*coros, return_exceptions=return_exceptions))
