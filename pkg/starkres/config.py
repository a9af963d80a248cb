import os
import sys

try:
    import ujson as json
except:  # noqa: E722
    import json
import pickle
import logging

from .excs import ConfigError
from .potential import Potential, SmoothPart
from .utils import _hash_dict


logger = logging.getLogger(__name__)

DEFAULT_FILENAME_BASE = "starkres_"
THREADS_ENV = "STARK_THREADS"
COMMANDS = ("resonances", "model-roots", "scan-sector", "condition-c", "count", "selftest", "replay")


class _Config:
    """
    Base of the configuration models

    Subclasses list their attributes in ``_fields``; ``_nested`` maps attribute names to ``_Config``
    subclasses stored as nested JSON objects.
    """

    _fields = ()
    _nested = {}

    def __init__(self, *args, **kwargs):
        raise TypeError("_Config class shouldn't initiate attrs")

    def pickle(self, path=None, name=None):
        """
        Pickles the configuration

        Arguments:

            path (str): directory to store the pickle in. Defaults to the working directory

            name (str): name of the file
        """
        path = os.path.join(path or os.getcwd(), name or DEFAULT_FILENAME_BASE + self.__class__.__name__ + "_pickle")
        with open(path, "wb") as config_file:
            pickle.dump(self, config_file, pickle.HIGHEST_PROTOCOL)

    @classmethod
    def unpickle(cls, path=None, name=None):
        path = os.path.join(path or os.getcwd(), name or DEFAULT_FILENAME_BASE + cls.__name__ + "_pickle")
        with open(path, "rb") as config_file:
            return pickle.load(config_file)

    def save_as_json(self, path=None, name=None):
        """
        Saves the configuration as a JSON file

        Arguments:

            path (str): directory to save the file in. Defaults to the working directory

            name (str): name of the file
        """
        path = os.path.join(path or os.getcwd(), name or DEFAULT_FILENAME_BASE + self.__class__.__name__ + ".json")
        with open(path, "w") as outfile:
            if "ujson" in sys.modules:
                json.dump(self.to_dict(), outfile)
            else:
                json.dump(self.to_dict(), outfile, default=str, indent=2, sort_keys=True)
        return path

    def load_from_json(self, path=None, name=None):
        """
        Updates the configuration from a JSON file

        Arguments:

            path (str): directory the file is located in, or the file itself when ``name`` is None and it is a file
        """
        if path is not None and name is None and os.path.isfile(path):
            full_path = path
        else:
            full_path = os.path.join(path or os.getcwd(), name or DEFAULT_FILENAME_BASE + self.__class__.__name__ + ".json")
        try:
            with open(full_path, "r") as infile:
                dct = json.load(infile)
        except (OSError, ValueError) as e:
            raise ConfigError("Could not read configuration file", fields={"path": "{}: {}".format(full_path, e)})
        self.update(dct)
        return self

    def update(self, dct):
        if not isinstance(dct, dict):
            raise ConfigError("Configuration must be a JSON object", fields={self.__class__.__name__: type(dct).__name__})
        unknown = [key for key in dct if key not in self._fields]
        if unknown:
            raise ConfigError("Unknown configuration fields", fields={key: "unknown" for key in unknown})
        for key, value in dct.items():
            nested = self._nested.get(key)
            if nested is not None and isinstance(value, dict):
                getattr(self, key).update(value)
            else:
                setattr(self, key, value)
        return self

    def to_dict(self):
        out = {}
        for key in self._fields:
            value = getattr(self, key)
            out[key] = value.to_dict() if isinstance(value, _Config) else value
        return out

    @classmethod
    def from_dict(cls, dct):
        return cls().update(dct or {})

    def __getitem__(self, key):
        if key not in self._fields:
            raise KeyError(key)
        return getattr(self, key)

    def __setitem__(self, key, value):
        if key not in self._fields:
            raise KeyError(key)
        setattr(self, key, value)

    def get(self, key, default=None):
        if key not in self._fields:
            return default
        return getattr(self, key)

    def __eq__(self, other):
        return isinstance(other, self.__class__) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return "{}({})".format(self.__class__.__name__, self.to_dict())

    def errors(self, prefix=""):
        """ Maps dotted field paths to messages; empty when valid """
        return {}


def _prefixed(prefix, errors):
    return {prefix + key: value for key, value in errors.items()}


class PotentialConfig(_Config):
    """
    Arguments:

        gamma (float), c_star (float), p (float), nu (float): see ``Potential``

        smooth_part (dict): ``{"kind": "zero"}``, ``{"kind": "polynomial", "coefficients": [...]}`` or
            ``{"kind": "table", "x": [...], "values": [...], "order": k}``
    """

    _fields = ("gamma", "c_star", "p", "nu", "smooth_part")

    def __init__(self, gamma=1.0, c_star=0.0, p=0.75, nu=None, smooth_part=None):
        self.gamma = gamma
        self.c_star = c_star
        self.p = p
        self.nu = nu
        self.smooth_part = smooth_part if smooth_part is not None else {"kind": "zero"}

    def errors(self, prefix="potential."):
        try:
            self.build()
        except ConfigError as e:
            return _prefixed(prefix, e.fields)
        except (TypeError, ValueError) as e:
            return {prefix.rstrip("."): str(e)}
        return {}

    def build(self):
        return Potential(
            gamma=float(self.gamma),
            c_star=float(self.c_star),
            p=float(self.p),
            smooth_part=SmoothPart.from_dict(self.smooth_part),
            nu=None if self.nu is None else float(self.nu),
        )


class GridConfig(_Config):
    """
    Arguments:

        nodes (int): Nyström node count

        grading (str): "uniform", "geometric" or None to follow the potential

        ratio (float): geometric shrink factor

        rule (str): "product" or "nystrom"
    """

    _fields = ("nodes", "grading", "ratio", "rule")

    def __init__(self, nodes=160, grading=None, ratio=0.1, rule="product"):
        self.nodes = nodes
        self.grading = grading
        self.ratio = ratio
        self.rule = rule

    def errors(self, prefix="grid."):
        from .determinant import GRADINGS, RULES

        errors = {}
        if not isinstance(self.nodes, int) or self.nodes < 16:
            errors["nodes"] = "must be an integer ≥ 16, got {!r}".format(self.nodes)
        if self.grading is not None and self.grading not in GRADINGS:
            errors["grading"] = "must be one of {}".format(GRADINGS)
        if not (isinstance(self.ratio, (int, float)) and 0 < self.ratio < 1):
            errors["ratio"] = "must lie in (0, 1)"
        if self.rule not in RULES:
            errors["rule"] = "must be one of {}".format(RULES)
        return _prefixed(prefix, errors)

    def build(self, V):
        from .determinant import NystromGrid

        if self.grading is None:
            return NystromGrid.for_potential(V, n=self.nodes, ratio=self.ratio)
        return NystromGrid.build(V.gamma, self.nodes, self.grading, self.ratio)


class SolverConfig(_Config):
    """
    Arguments:

        tolerance (float): Newton residual tolerance

        max_iterations (int), max_restarts (int): Newton limits; restarts go through ``backoff``

        backoff_factor (float): wait between restarts in seconds, 0 for CPU bound work

        r (int): first index of the asymptotic regime, None to derive it

        mode (str): "born" or "full"    """

    _fields = ("tolerance", "max_iterations", "max_restarts", "backoff_factor", "r", "mode")

    def __init__(self, tolerance=1e-10, max_iterations=50, max_restarts=4, backoff_factor=0.0, r=None, mode="born"):
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.max_restarts = max_restarts
        self.backoff_factor = backoff_factor
        self.r = r
        self.mode = mode

    def errors(self, prefix="solver."):
        errors = {}
        if not (isinstance(self.tolerance, (int, float)) and 0 < self.tolerance < 1):
            errors["tolerance"] = "must lie in (0, 1)"
        for key in ("max_iterations", "max_restarts"):
            value = getattr(self, key)
            if not isinstance(value, int) or value < 1:
                errors[key] = "must be a positive integer"
        if not (isinstance(self.backoff_factor, (int, float)) and self.backoff_factor >= 0):
            errors["backoff_factor"] = "must be nonnegative"
        if self.r is not None and (not isinstance(self.r, int) or self.r < 1):
            errors["r"] = "must be a positive integer"
        if self.mode not in ("born", "full", "full-determinant"):
            errors["mode"] = "must be 'born' or 'full'"
        return _prefixed(prefix, errors)


class RunConfig(_Config):
    """
    A complete, reproducible run

    Arguments:

        potential (PotentialConfig), grid (GridConfig), solver (SolverConfig)

        task (dict): ``{"command": ..., **parameters}``

        output (str): path prefix of the artifacts (``.csv``, ``.manifest.json``, ``.plotdata``)

        seed (int): seed of the pseudo-random samples drawn by ``selftest``

        threads (int): worker count, None for one worker per CPU

    Examples:

        ::

            config = RunConfig().load_from_json("ref.json")
            config.validate()
    """

    _fields = ("potential", "grid", "solver", "task", "output", "seed", "threads")
    _nested = {"potential": PotentialConfig, "grid": GridConfig, "solver": SolverConfig}

    def __init__(self, potential=None, grid=None, solver=None, task=None, output="starkres_run", seed=0, threads=None):
        self.potential = potential if potential is not None else PotentialConfig()
        self.grid = grid if grid is not None else GridConfig()
        self.solver = solver if solver is not None else SolverConfig()
        self.task = task if task is not None else {}
        self.output = output
        self.seed = seed
        self.threads = threads

    @classmethod
    def from_dict(cls, dct):
        dct = dict(dct or {})
        config = cls()
        for key, model in cls._nested.items():
            if key in dct:
                setattr(config, key, model.from_dict(dct.pop(key)))
        return config.update(dct)

    def load_from_env(self):
        """ ``STARK_THREADS`` overrides ``threads`` """
        value = os.environ.get(THREADS_ENV)
        if value:
            try:
                self.threads = int(value)
            except ValueError:
                raise ConfigError("Invalid environment variable", fields={THREADS_ENV: repr(value)})
        return self

    def errors(self, prefix=""):
        errors = {}
        for key in self._nested:
            errors.update(getattr(self, key).errors())
        command = self.task.get("command") if isinstance(self.task, dict) else None
        if command is not None and command not in COMMANDS:
            errors["task.command"] = "must be one of {}".format(COMMANDS)
        if self.threads is not None and (not isinstance(self.threads, int) or self.threads < 1):
            errors["threads"] = "must be a positive integer"
        if not isinstance(self.seed, int):
            errors["seed"] = "must be an integer"
        if not isinstance(self.output, str) or not self.output:
            errors["output"] = "must be a non-empty path prefix"
        return errors

    def validate(self):
        """ Raises one ConfigError listing every invalid field """
        errors = self.errors()
        if errors:
            raise ConfigError("Invalid run configuration", fields=errors)
        return self

    def config_hash(self):
        """ SHA-256 of the canonical JSON of the configuration """
        return _hash_dict(self.to_dict())
