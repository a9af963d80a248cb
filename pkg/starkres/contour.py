"""
Argument principle on piecewise smooth loops.

The phase of ``f`` is followed along each segment with adaptive bisection until
no step turns by more than ``MAX_PHASE_STEP``. Functions may be given in log
form (``log f``), which keeps the phase available where ``|f|`` overflows.
"""
import math
import logging

import numpy as np

from .excs import AccuracyError, BoundaryZeroError
from .utils import _wrap_phase


logger = logging.getLogger(__name__)

MAX_PHASE_STEP = math.pi / 4
INITIAL_SAMPLES = 9
MAX_SAMPLES = 1 << 14
ZERO_THRESHOLD = 1e-12
MIN_PARAMETER_STEP = 1e-10


def line_segment(start, end):
    start, end = complex(start), complex(end)
    return lambda t: start + (end - start) * np.asarray(t, dtype=float)


def arc_segment(radius, phi_start, phi_end):
    return lambda t: radius * np.exp(1j * (phi_start + (phi_end - phi_start) * np.asarray(t, dtype=float)))


def rectangle_loop(x0, x1, y0, y1):
    """ Counter-clockwise boundary of ``[x0, x1] × [y0, y1]`` """
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    return [line_segment(a, b) for a, b in zip(corners, corners[1:] + corners[:1])]


def polar_cell_loop(r0, r1, phi0, phi1):
    """ Counter-clockwise boundary of the annular cell ``r ∈ [r0, r1], arg ∈ [phi0, phi1]`` """
    return [
        line_segment(r0 * np.exp(1j * phi0), r1 * np.exp(1j * phi0)),
        arc_segment(r1, phi0, phi1),
        line_segment(r1 * np.exp(1j * phi1), r0 * np.exp(1j * phi1)),
        arc_segment(r0, phi1, phi0),
    ]


class SegmentTrace:
    """ Samples of ``f`` along one segment: parameters, points, values and the accumulated phase change """

    __slots__ = ("t", "points", "values", "phase_change")

    def __init__(self, t, points, values, phase_change):
        self.t = t
        self.points = points
        self.values = values
        self.phase_change = phase_change


def _phase_and_size(values, log):
    if log:
        return values.imag, values.real
    with np.errstate(divide="ignore"):
        return np.angle(values), np.log(np.abs(values))


def track_segment(f, path, log=False, threshold=ZERO_THRESHOLD, max_step=MAX_PHASE_STEP):
    """
    Follows the phase of ``f`` along ``path(t)``, ``t ∈ [0, 1]``

    Arguments:

        f (callable): vectorised over complex arrays; returns ``f`` or, with ``log=True``, ``log f``

        threshold (float): ``|f|`` below this on the path raises BoundaryZeroError

    Raises:

        BoundaryZeroError: ``|f|`` falls below ``threshold``, or a phase jump survives refinement down to
        ``MIN_PARAMETER_STEP``, which for analytic ``f`` means a zero on the path
    """
    t = np.linspace(0.0, 1.0, INITIAL_SAMPLES)
    points = path(t)
    values = np.asarray(f(points), dtype=complex)
    while True:
        phase, log_size = _phase_and_size(values, log)
        smallest = int(np.argmin(log_size))
        if log_size[smallest] < math.log(threshold):
            raise _boundary_zero(points, smallest)
        steps = _wrap_phase(np.diff(phase))
        coarse = np.abs(steps) > max_step
        if not np.any(coarse):
            break
        if np.any(np.diff(t)[coarse] < MIN_PARAMETER_STEP):
            stuck = int(np.flatnonzero(coarse & (np.diff(t) < MIN_PARAMETER_STEP))[0])
            raise _boundary_zero(points, stuck)
        if t.size >= MAX_SAMPLES:
            raise AccuracyError("Phase tracking did not resolve the segment", achieved=float(np.max(np.abs(steps))), requested=max_step)
        midpoints = 0.5 * (t[:-1][coarse] + t[1:][coarse])
        new_points = path(midpoints)
        new_values = np.asarray(f(new_points), dtype=complex)
        t = np.concatenate([t, midpoints])
        order = np.argsort(t, kind="mergesort")
        t = t[order]
        points = np.concatenate([points, new_points])[order]
        values = np.concatenate([values, new_values])[order]
    return SegmentTrace(t, points, values, float(np.sum(steps)))


def _boundary_zero(points, index):
    spacing = np.abs(np.diff(points)).max() if points.size > 1 else 1.0
    return BoundaryZeroError(
        "Function vanishes on the contour",
        point=complex(points[index]),
        suggested_shift=complex(0.5 * spacing, 0.5 * spacing),
    )


def winding_number(f, loop, log=False, threshold=ZERO_THRESHOLD):
    """
    Number of zeros minus poles of ``f`` inside ``loop``

    Returns:

        tuple: (winding, list of SegmentTrace)
    """
    traces = [track_segment(f, segment, log=log, threshold=threshold) for segment in loop]
    total = sum(trace.phase_change for trace in traces) / (2 * math.pi)
    winding = int(round(total))
    if abs(total - winding) > 0.25:
        raise AccuracyError("Winding number is not close to an integer", achieved=total)
    return winding, traces
