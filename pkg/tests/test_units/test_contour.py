import math

import numpy as np
import pytest

from starkres.contour import (
    arc_segment,
    line_segment,
    polar_cell_loop,
    rectangle_loop,
    track_segment,
    winding_number,
)
from starkres.excs import BoundaryZeroError, DomainError


SQUARE = rectangle_loop(0.0, 2.0, 0.0, 2.0)


def test_line_segment_endpoints():
    path = line_segment(1 + 1j, 3 - 1j)
    assert path(0.0) == 1 + 1j
    assert path(1.0) == 3 - 1j
    assert np.allclose(path(np.array([0.5])), [2 + 0j])


def test_arc_segment_endpoints():
    path = arc_segment(2.0, 0.0, math.pi)
    assert path(0.0) == pytest.approx(2.0)
    assert path(1.0) == pytest.approx(-2.0)


def test_rectangle_loop_is_closed():
    for segment, following in zip(SQUARE, SQUARE[1:] + SQUARE[:1]):
        assert segment(1.0) == following(0.0)


def test_simple_zero_inside():
    winding, traces = winding_number(lambda z: z - (1 + 1j), SQUARE)
    assert winding == 1
    assert len(traces) == 4


def test_double_zero_and_pole():
    assert winding_number(lambda z: (z - (1 + 1j)) ** 2, SQUARE)[0] == 2
    assert winding_number(lambda z: 1 / (z - (1 + 1j)), SQUARE)[0] == -1


def test_zero_outside():
    assert winding_number(lambda z: z - (5 + 1j), SQUARE)[0] == 0


def test_log_form_matches_direct_form():
    def log_f(z):
        return np.log(z - (0.5 + 0.5j)) + 2 * np.log(z - (1.5 + 1.2j))

    assert winding_number(log_f, SQUARE, log=True)[0] == 3


def test_log_form_keeps_phase_where_the_value_overflows():
    # e^{900}(z − 1 − i) has a finite log but no finite value
    def log_f(z):
        return 900 + np.log(z - (1 + 1j))

    assert winding_number(log_f, SQUARE, log=True)[0] == 1


def test_fast_rotation_is_refined():
    trace = track_segment(lambda z: np.exp(40j * z), line_segment(0, 1))
    assert trace.phase_change == pytest.approx(40.0, rel=1e-12)
    assert trace.t.size > 9


def test_polar_cell_winding():
    center = 10 * np.exp(1j * 2.5)
    loop = polar_cell_loop(9.0, 11.0, 2.4, 2.6)
    assert winding_number(lambda z: z - center, loop)[0] == 1
    assert winding_number(lambda z: z - 20, loop)[0] == 0


def test_zero_on_a_sample_raises():
    loop = rectangle_loop(1.0, 2.0, -1.0, 1.0)
    with pytest.raises(BoundaryZeroError) as excinfo:
        winding_number(lambda z: z - 1, loop)
    assert excinfo.value.point == pytest.approx(1 + 0j)
    assert excinfo.value.suggested_shift != 0


def test_zero_between_samples_raises():
    loop = rectangle_loop(1.0, 2.0, -1.0, 1.0)
    with pytest.raises(BoundaryZeroError) as excinfo:
        winding_number(lambda z: z - (1 + 0.3j), loop)
    assert isinstance(excinfo.value, DomainError)
    assert abs(excinfo.value.point - (1 + 0.3j)) < 1e-6
