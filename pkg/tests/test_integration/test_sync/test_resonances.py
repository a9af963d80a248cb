import math

import numpy as np
import pytest

from starkres import NystromGrid, Potential, fredholm_det, s_matrix
from starkres.asympt import AsymptoticConstants, imaginary_part_law
from starkres.roots import ModelParams, solve_model_root, solve_resonance


def test_born_resonances_converge(born_records):
    assert [record.n for record in born_records] == list(range(10, 61))
    assert all(record.converged for record in born_records)
    assert all(record.multiplicity == 1 for record in born_records)
    assert all(record.lambda_n.imag > 0 for record in born_records)


def test_born_resonances_pin_the_resonance_constant(vanishing_end_potential):
    # V = x^{-1/4} − x vanishes at γ, so its born roots settle onto the model roots of z*
    consts = AsymptoticConstants.from_potential(vanishing_end_potential)
    params = ModelParams.from_constants(consts)
    # 2^b more in the denominator of the log: the constant written with 3^b instead of 6^b
    shifted = ModelParams(params.b, params.z_star - 1j * params.b * math.log(2))
    nears = []
    for n in (300, 600, 1200):
        record = solve_resonance(vanishing_end_potential, n, consts=consts, check_multiplicity=False)
        assert record.converged
        near = abs(record.z_n - solve_model_root(params, n).z)
        far = abs(record.z_n - solve_model_root(shifted, n).z)
        assert near < 0.5 * far
        nears.append(near)
    assert max(nears) <= 0.15
    assert nears[-1] <= 0.1


def test_imaginary_parts_follow_their_law(born_records):
    law = imaginary_part_law(born_records)
    assert 0.05 <= law.lower <= law.upper <= 5


def test_full_and_born_resonances_merge_for_weak_potentials():
    V = Potential(gamma=1.0, c_star=0.1, p=0.75)
    grid = NystromGrid.for_potential(V)
    diffs = []
    for n in (20, 60, 180):
        full = solve_resonance(V, n, mode="full", grid=grid, check_multiplicity=False)
        born = solve_resonance(V, n, mode="born", check_multiplicity=False)
        assert full.converged and born.converged
        diff = abs(full.lambda_n - born.lambda_n)
        assert diff <= 0.01 * abs(full.lambda_n)
        diffs.append(diff)
    assert diffs[-1] < 0.5 * diffs[0]


def test_first_determinant_zeros_survive_grid_doubling(singular_potential, singular_grid, reference_consts):
    fine_grid = singular_grid.refined()
    # the first five zeros inside the asymptotic regime
    for n in range(reference_consts.r, reference_consts.r + 5):
        coarse = solve_resonance(singular_potential, n, mode="full", grid=singular_grid, check_multiplicity=False)
        fine = solve_resonance(singular_potential, n, mode="full", grid=fine_grid, check_multiplicity=False)
        assert coarse.converged and fine.converged
        assert abs(coarse.lambda_n - fine.lambda_n) <= 1e-6 * abs(fine.lambda_n)


def test_resonances_are_conjugate_zeros_of_the_outgoing_determinant(singular_potential, singular_grid):
    for n in (10, 12, 15):
        record = solve_resonance(singular_potential, n, mode="full", grid=singular_grid, check_multiplicity=False)
        lam = record.lambda_n
        at_mirror = fredholm_det(singular_potential, lam.conjugate(), singular_grid, branch=1).log_det.real
        at_resonance = fredholm_det(singular_potential, lam, singular_grid, branch=1).log_det.real
        assert at_mirror - at_resonance <= math.log(1e-6)


def test_singular_determinant_is_stable_under_doubling(singular_potential, singular_grid):
    for lam in (5 + 2j, 20 + 1j):
        coarse = fredholm_det(singular_potential, lam, singular_grid).det_value
        fine = fredholm_det(singular_potential, lam, singular_grid.refined()).det_value
        assert abs(coarse - fine) <= 1e-5 * max(1.0, abs(fine))


def test_smooth_determinant_is_stable_under_doubling(smooth_potential, smooth_grid):
    for lam in (3 + 1j, 15 + 0.5j, 25j):
        coarse = fredholm_det(smooth_potential, lam, smooth_grid).det_value
        fine = fredholm_det(smooth_potential, lam, smooth_grid.refined()).det_value
        assert abs(coarse - fine) <= 1e-8 * max(1.0, abs(fine))


@pytest.mark.parametrize("lam", np.linspace(-20.0, 100.0, 25))
def test_s_matrix_is_unitary_on_the_real_axis(smooth_potential, smooth_grid, lam):
    assert abs(s_matrix(smooth_potential, lam, grid=smooth_grid).s_det_ratio) == pytest.approx(1.0, abs=1e-7)
