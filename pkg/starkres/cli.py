"""
Command line front-end: ``starkres <command> [options]``.

Every run is described by a ``RunConfig``; the arguments only fill in its task and
overrides, so a run can be repeated exactly from the manifest it writes.
"""
import os
import sys
import time
import math
import cmath
import logging
import platform
import argparse

try:
    import ujson as json
except:  # noqa: E722
    import json

import numpy as np
import scipy

from .__version__ import __version__
from .airy import airy_eval, airy_maclaurin
from .asympt import (
    compare_model_roots,
    compare_sequences,
    counting_prediction,
    imaginary_part_law,
    predicted_model_root,
    zworski_count,
)
from .async_solver import AsyncSolver
from .config import RunConfig
from .determinant import fredholm_det
from .excs import AccuracyError, ConfigError, ConvergenceError, FitError, StarkError
from .potential import Potential, condition_c_fit, fourier_half
from .roots import ModelParams, Perturbation, model_census
from .smatrix import log_s, s_matrix
from .branchcut import minus_ik_power
from .sync_solver import Solver
from .utils import _format_float, _normalize_family, _parse_complex, _parse_range


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

RESONANCE_COLUMNS = ("n", "family", "re_lambda", "im_lambda", "residual", "multiplicity", "pred_re", "pred_im", "abs_err")
MODEL_ROOT_COLUMNS = ("n", "family", "re_z", "im_z", "residual", "pred_re", "pred_im", "abs_err", "k_scaled", "flag")
SCAN_COLUMNS = ("re_center", "im_center", "log_abs_s", "min_log_abs_s", "max_log_abs_s", "max_log_bound_ratio", "winding")
CONDITION_C_COLUMNS = ("k", "re_transform", "im_transform", "re_scaled", "im_scaled")
COUNT_COLUMNS = ("r", "census", "predicted", "zworski", "relative_deviation")
SELFTEST_COLUMNS = ("check", "value", "tolerance", "passed")

_TASK_DEFAULTS = {
    "resonances": {"family": "plus", "n": "10..60", "mode": None},
    "model-roots": {"b": 0.5, "zstar": "0+0i", "n": "20..200", "family": "plus", "g_coefficient": None, "g_exponent": -0.5},
    "scan-sector": {"phi": "2.2..3.14", "r": "30..120", "cells": 4},
    "condition-c": {"k": "10..1000", "points": 20, "arg": 1.5707963267948966},
    "count": {"r": "50..200", "steps": 4},
    "selftest": {"samples": 200},
}


class _Result:
    """ What a command produced: CSV rows, plot data, a summary for the manifest and an exit status """

    def __init__(self, columns, rows, plotdata=None, summary=None, status=EXIT_OK):
        self.columns = columns
        self.rows = rows
        self.plotdata = plotdata or []
        self.summary = summary or {}
        self.status = status


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    return str(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else str(obj)
    return obj


def _family_name(family):
    return "plus" if family > 0 else "minus"


def _task(config, command):
    task = dict(_TASK_DEFAULTS.get(command, {}))
    task.update({k: v for k, v in config.task.items() if v is not None})
    return task


def _solver_for(config):
    if config.threads == 1:
        return Solver.from_config(config)
    return AsyncSolver.from_config(config)


def _run_solver(solver, method, *args):
    """ Runs a solver call on either solver flavour """
    result = getattr(solver, method)(*args)
    if isinstance(solver, AsyncSolver):
        try:
            (result,) = solver.gather_now(result)
        finally:
            solver.close()
    return result


def _cmd_resonances(config):
    task = _task(config, "resonances")
    family = _normalize_family(task["family"])
    n_range = _parse_range(str(task["n"]))
    solver = _solver_for(config)
    if not solver.potential.is_zero:
        solver.potential.require_condition_c()
    records = _run_solver(solver, "resonances", n_range, family, task["mode"])
    rows = [
        (
            r.n,
            _family_name(r.family),
            r.lambda_n.real,
            r.lambda_n.imag,
            r.residual,
            r.multiplicity,
            r.prediction.real,
            r.prediction.imag,
            r.abs_error,
        )
        for r in records
    ]
    converged = [r for r in records if r.converged]
    summary = {"records": len(records), "converged": len(converged)}
    if len(converged) >= 10:
        comparison = compare_sequences(converged)
        law = imaginary_part_law(converged)
        summary.update(
            exponent=comparison.exponent,
            constant=comparison.constant,
            rel_exponent=comparison.rel_exponent,
            im_law_lower=law.lower,
            im_law_upper=law.upper,
        )
    status = EXIT_OK if len(converged) == len(records) else EXIT_NUMERICAL
    return _Result(RESONANCE_COLUMNS, rows, [(r.n, r.abs_error) for r in records], summary, status)


def _model_params(task):
    perturbation = None
    if task.get("g_coefficient") is not None:
        perturbation = Perturbation(_parse_complex(task["g_coefficient"]), float(task["g_exponent"]))
    return ModelParams(float(task["b"]), _parse_complex(task["zstar"]), perturbation)


def _cmd_model_roots(config):
    task = _task(config, "model-roots")
    params = _model_params(task)
    family = _normalize_family(task["family"])
    roots = _run_solver(_solver_for(config), "model_roots", params, _parse_range(str(task["n"])), family)
    rows, plotdata = [], []
    for root in roots:
        predicted = predicted_model_root(params, root.n, root.family)
        error = abs(root.z - predicted)
        scaled = error * root.n ** 2 / math.log(root.n) ** 2
        rows.append(
            (root.n, _family_name(root.family), root.z.real, root.z.imag, root.residual, predicted.real, predicted.imag, error, scaled, root.flag)
        )
        plotdata.append((root.n, scaled))
    summary = {"roots": len(roots), "converged": sum(1 for root in roots if root.converged)}
    if len(roots) >= 10 and params.perturbation is None:
        comparison = compare_model_roots(roots, params)
        summary.update(k_min=comparison.k_min, k_max=comparison.k_max, k_variation=comparison.k_variation)
    status = EXIT_OK if all(root.converged for root in roots) else EXIT_NUMERICAL
    return _Result(MODEL_ROOT_COLUMNS, rows, plotdata, summary, status)


def _cmd_scan_sector(config):
    task = _task(config, "scan-sector")
    sector = _parse_range(str(task["phi"]), float)
    radii = _parse_range(str(task["r"]), float)
    report = _run_solver(_solver_for(config), "scan_sector", sector, radii, int(task["cells"]))
    rows = [
        (
            cell.center.real,
            cell.center.imag,
            cell.log_abs_s,
            cell.min_log_abs_s,
            cell.max_log_abs_s,
            cell.max_log_bound_ratio,
            cell.winding,
        )
        for cell in report.cells
    ]
    print("{} winding cells".format(report.winding_cells))
    summary = {
        "winding_cells": report.winding_cells,
        "min_log_abs_s": report.min_log_abs_s,
        "max_log_abs_s": report.max_log_abs_s,
        "max_log_bound_ratio": report.max_log_bound_ratio,
    }
    plotdata = [(abs(cell.center), cell.log_abs_s) for cell in report.cells]
    return _Result(SCAN_COLUMNS, rows, plotdata, summary)


def _cmd_condition_c(config):
    task = _task(config, "condition-c")
    low, high = _parse_range(str(task["k"]), float)
    V = config.potential.build()
    direction = cmath.exp(1j * float(task["arg"]))
    ks = np.geomspace(low, high, int(task["points"])) * direction
    fit = condition_c_fit(V, ks)
    rows, plotdata = [], []
    for k in ks:
        transform = fourier_half(V, k)
        scaled = transform * minus_ik_power(2 * k, V.p)
        rows.append((abs(k), transform.real, transform.imag, scaled.real, scaled.imag))
        plotdata.append((abs(k), abs(scaled - fit.c_p_estimate)))
    summary = {
        "c_p_estimate": fit.c_p_estimate,
        "c_p_declared": V.c_p,
        "remainder_exponent": fit.remainder_exponent,
        "effective_p": fit.effective_p,
        "satisfied": fit.satisfied,
    }
    return _Result(CONDITION_C_COLUMNS, rows, plotdata, summary)


def _cmd_count(config):
    task = _task(config, "count")
    low, high = _parse_range(str(task["r"]), float)
    solver = Solver.from_config(config)
    consts = solver.consts
    params = ModelParams.from_constants(consts)
    radii = np.linspace(low, high, int(task["steps"])) if high > low else np.array([low])
    census = model_census(params, (4.0 / 3.0) * radii.max() ** 1.5)
    moduli = [(0.75 * abs(root.z)) ** (2.0 / 3.0) for root in census.roots]
    rows, plotdata = [], []
    for r in radii:
        count = sum(1 for modulus in moduli if modulus <= r)
        predicted = counting_prediction(r)
        rows.append((r, count, predicted, zworski_count(r, solver.potential.gamma), count / predicted - 1))
        plotdata.append((r, count))
    summary = {"max_relative_deviation": max(abs(row[4]) for row in rows)}
    return _Result(COUNT_COLUMNS, rows, plotdata, summary)


def _selftest_checks(config):
    task = _task(config, "selftest")
    rng = np.random.RandomState(config.seed)
    samples = int(task["samples"])
    z = 5 * np.sqrt(rng.uniform(0, 1, samples)) * np.exp(2j * np.pi * rng.uniform(0, 1, samples))

    value = airy_eval(z)
    scale = np.exp(value.scale_exponent)
    oracle = airy_maclaurin(z)
    # relative to the size of the (Ai, Bi) pair: the series cancels where Ai decays
    sizes = (np.abs(oracle[0]) + np.abs(oracle[2]), np.abs(oracle[1]) + np.abs(oracle[3]))
    airy_error = max(
        float(np.max(np.abs(v * scale - o) / sizes[i % 2]))
        for i, (v, o) in enumerate(zip((value.ai, value.aip, value.bi, value.bip), oracle))
    )
    yield "airy_vs_series", airy_error, 1e-10

    wronskian = value.ai * value.bip - value.aip * value.bi
    size = np.abs(value.ai * value.bip) + np.abs(value.aip * value.bi)
    yield "scaled_wronskian", float(np.max(np.abs(wronskian - np.exp(-2 * value.scale_exponent) / math.pi) / size)), 1e-10

    yield "zero_potential_det", abs(fredholm_det(Potential(), 3 + 1j).det_value - 1), 0.0

    V = config.potential.build()
    if V.is_zero:
        return
    grid = config.grid.build(V)
    yield "unitarity_real_axis", abs(log_s(V, 5.0, grid=grid).real), 1e-8

    lam = 4 - 1j
    plus = fredholm_det(V, lam, grid=grid, branch=1).det_value
    minus = fredholm_det(V, lam.conjugate(), grid=grid, branch=-1).det_value
    yield "conjugate_symmetry", abs(plus - minus.conjugate()) / max(abs(plus), 1e-300), 1e-10

    sample = s_matrix(V, 3 + 1j, grid=grid)
    yield "representation_consistency", abs(sample.s_stationary - sample.s_det_ratio), 1e-6


def _cmd_selftest(config):
    rows = []
    for name, value, tolerance in _selftest_checks(config):
        passed = value <= tolerance
        rows.append((name, value, tolerance, passed))
        logger.info("selftest %s: %s (tolerance %s)", name, value, tolerance)
    failed = [row[0] for row in rows if not row[3]]
    status = EXIT_OK if not failed else EXIT_NUMERICAL
    return _Result(SELFTEST_COLUMNS, rows, summary={"failed": failed}, status=status)


COMMANDS = {
    "resonances": _cmd_resonances,
    "model-roots": _cmd_model_roots,
    "scan-sector": _cmd_scan_sector,
    "condition-c": _cmd_condition_c,
    "count": _cmd_count,
    "selftest": _cmd_selftest,
}


def write_csv(path, columns, rows):
    with open(path, "w") as outfile:
        outfile.write(",".join(columns) + "\n")
        for row in rows:
            outfile.write(",".join(_cell(value) for value in row) + "\n")


def write_plotdata(path, pairs):
    with open(path, "w") as outfile:
        for x, y in pairs:
            outfile.write("{} {}\n".format(_format_float(float(x)), _format_float(float(y))))


def write_manifest(path, config, argv, wall_time, result):
    manifest = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "argv": list(argv),
        "wall_time": wall_time,
        "versions": {
            "starkres": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "exit_status": result.status,
        "summary": result.summary,
    }
    with open(path, "w") as outfile:
        json.dump(_jsonable(manifest), outfile, indent=2, sort_keys=True)


def execute(config, argv=()):
    """
    Runs the task described by a validated config and writes its artifacts

    Returns:

        int: exit status
    """
    command = config.task.get("command")
    if command not in COMMANDS:
        raise ConfigError("Unknown command", fields={"task.command": repr(command)})
    directory = os.path.dirname(config.output)
    if directory:
        os.makedirs(directory, exist_ok=True)

    started = time.time()
    result = COMMANDS[command](config)
    wall_time = time.time() - started

    write_csv(config.output + ".csv", result.columns, result.rows)
    if result.plotdata:
        write_plotdata(config.output + ".plotdata", result.plotdata)
    write_manifest(config.output + ".manifest.json", config, argv, wall_time, result)
    logger.info("%s finished in %.2fs with status %d", command, wall_time, result.status)
    return result.status


def build_parser():
    parser = argparse.ArgumentParser(prog="starkres", description="Resonances of the Stark operator with a compactly supported potential")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--output", help="path prefix of the .csv, .manifest.json and .plotdata files")
    common.add_argument("--threads", type=int, help="worker count, overrides STARK_THREADS and the config")
    common.add_argument("--seed", type=int)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")

    subparsers = parser.add_subparsers(dest="command")

    resonances = subparsers.add_parser("resonances", parents=[common], help="resonances against their asymptotics")
    resonances.add_argument("--family", choices=("plus", "minus", "+", "-"))
    resonances.add_argument("--n", type=str, help="index range, e.g. 10..60")
    resonances.add_argument("--mode", choices=("born", "full"))

    model = subparsers.add_parser("model-roots", parents=[common], help="model equation roots against their prediction")
    model.add_argument("--b", type=float)
    model.add_argument("--zstar", help="complex, e.g. 1+1i")
    model.add_argument("--n", type=str)
    model.add_argument("--family", choices=("plus", "minus", "+", "-"))
    model.add_argument("--g-coefficient", dest="g_coefficient", help="coefficient of the perturbation c·z^e")
    model.add_argument("--g-exponent", dest="g_exponent", type=float)

    scan = subparsers.add_parser("scan-sector", parents=[common], help="argument principle census of S on a sector")
    scan.add_argument("--phi", type=str, help="argument range, e.g. 2.2..3.14")
    scan.add_argument("--r", type=str, help="radius range, e.g. 30..120")
    scan.add_argument("--cells", type=int)

    condition = subparsers.add_parser("condition-c", parents=[common], help="fit of the transform asymptotics")
    condition.add_argument("--k", type=str, help="|k| range, log spaced")
    condition.add_argument("--points", type=int)
    condition.add_argument("--arg", type=float, help="arg k")

    count = subparsers.add_parser("count", parents=[common], help="root census against the counting law")
    count.add_argument("--r", type=str)
    count.add_argument("--steps", type=int)

    selftest = subparsers.add_parser("selftest", parents=[common], help="invariant checks")
    selftest.add_argument("--samples", type=int)

    replay = subparsers.add_parser("replay", parents=[common], help="re-execute a run from its manifest")
    replay.add_argument("--manifest", required=True)
    return parser


_TASK_KEYS = ("family", "n", "mode", "b", "zstar", "g_coefficient", "g_exponent", "phi", "r", "cells", "k", "points", "arg", "steps", "samples")


def _configure_logging(args):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _load_config(args):
    if args.command == "replay":
        try:
            with open(args.manifest) as infile:
                manifest = json.load(infile)
        except (OSError, ValueError) as e:
            raise ConfigError("Could not read manifest", fields={"manifest": str(e)})
        config = RunConfig.from_dict(manifest.get("config"))
    else:
        config = RunConfig()
        if args.config:
            config.load_from_json(args.config)
        config.task = dict(config.task or {})
        if config.task.get("command") not in (None, args.command):
            logger.info("config task %r replaced by %r", config.task.get("command"), args.command)
            config.task = {}
        config.task["command"] = args.command
        for key in _TASK_KEYS:
            value = getattr(args, key, None)
            if value is not None:
                config.task[key] = value
        config.load_from_env()
    if args.threads is not None:
        config.threads = args.threads
    if args.output is not None:
        config.output = args.output
    if args.seed is not None:
        config.seed = args.seed
    return config.validate()


def run_command(argv=None):
    """
    Parses ``argv`` and runs the command

    Returns:

        int: 0 on success, 1 on a configuration error, 2 on numerical non-convergence
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG
    _configure_logging(args)
    try:
        config = _load_config(args)
        return execute(config, argv)
    except ConfigError as e:
        print("configuration error: {}".format(e.msg), file=sys.stderr)
        for field, message in sorted(e.fields.items()):
            print("  {}: {}".format(field, message), file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, AccuracyError, FitError) as e:
        print("numerical failure: {}".format(e.msg), file=sys.stderr)
        return EXIT_NUMERICAL
    except StarkError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_CONFIG


def main():
    sys.exit(run_command())
