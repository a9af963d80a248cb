import cmath
import math

import pytest

from starkres.asympt import predicted_model_root
from starkres.excs import ConfigError, DomainError, _NewtonStalled
from starkres.roots import (
    ModelParams,
    Perturbation,
    brute_force_roots,
    f_model,
    find_resonances,
    log_f_model,
    map_lambda_z,
    map_z_lambda,
    model_census,
    model_roots,
    solve_model_root,
    solve_resonance,
)


LAMBDAS = (4 + 1j, 2j, -3 + 0.5j, 10.0, -5.0, 1 + 2j)


def test_map_lambda_z_at_one():
    assert map_lambda_z(1.0) == pytest.approx(4 / 3)


def test_map_round_trip_minus_family():
    for lam in LAMBDAS:
        assert map_z_lambda(map_lambda_z(lam), family=-1) == pytest.approx(lam, rel=1e-12)


def test_map_round_trip_plus_family():
    for lam in LAMBDAS:
        if cmath.phase(lam) < 2 * math.pi / 3:
            assert map_z_lambda(map_lambda_z(lam), family="+") == pytest.approx(lam, rel=1e-12)


def test_map_rejects_zero():
    with pytest.raises(DomainError):
        map_z_lambda(0)


def test_model_params_validation():
    with pytest.raises(ConfigError):
        ModelParams(1.5, 0)
    with pytest.raises(ConfigError):
        Perturbation(1.0, -1.5)


def test_log_f_model_on_the_real_axis():
    params = ModelParams(0.5, 0)
    value = log_f_model(2 * math.pi, params)
    assert value.real == pytest.approx(-0.5 * math.log(2 * math.pi))
    assert value.imag == pytest.approx(-2 * math.pi)


def test_log_f_model_rejects_zero():
    with pytest.raises(DomainError):
        log_f_model(0, ModelParams(0.5, 0))


def test_prediction_improves_with_n(model_params):
    distances = [abs(f_model(predicted_model_root(model_params, n), model_params) - 1) for n in (10, 20, 40)]
    assert all(later < earlier for earlier, later in zip(distances, distances[1:]))


def test_solve_model_root_near_prediction():
    params = ModelParams(0.5, 0)
    root = solve_model_root(params, 50)
    assert root.converged
    assert root.flag is None
    assert abs(root.z - predicted_model_root(params, 50)) <= 6e-3
    assert root.residual <= 1e-11


def test_solve_model_root_independent_of_seed():
    params = ModelParams(0.5, 0)
    seeded = solve_model_root(params, 50, seed=predicted_model_root(params, 50) + 0.5)
    assert abs(seeded.z - solve_model_root(params, 50).z) <= 1e-10


def test_solve_model_root_minus_family(model_params):
    root = solve_model_root(model_params, 20, family="-")
    assert root.family == -1
    assert root.z.real < 0
    assert abs(root.z - predicted_model_root(model_params, 20, -1)) <= 0.05


def test_model_roots_range(model_params):
    roots = model_roots(model_params, (10, 14))
    assert [root.n for root in roots] == [10, 11, 12, 13, 14]
    assert all(root.converged for root in roots)


def test_perturbation_shifts_roots_like_its_size():
    plain = ModelParams(0.4, 1)
    perturbed = ModelParams(0.4, 1, Perturbation(1.0, -0.5))
    for n in (100, 400):
        shift = abs(solve_model_root(perturbed, n).z - solve_model_root(plain, n).z)
        assert shift * math.sqrt(2 * math.pi * n) == pytest.approx(1.0, abs=0.1)


def test_basin_escape_is_flagged(mocker, model_params):
    far = predicted_model_root(model_params, 30) + 5
    mocker.patch("starkres.roots._restarting_newton", return_value=(far, 0j, True))
    root = solve_model_root(model_params, 30)
    assert "basin_escape" in root.flag


def test_stalled_newton_is_restarted_then_flagged(mocker, model_params):
    stalled = _NewtonStalled("Newton did not converge", iterations=50, residual=1.0, last_iterate=190 + 3j)
    newton = mocker.patch("starkres.roots._newton", side_effect=stalled)
    root = solve_model_root(model_params, 30, max_restarts=4)
    assert newton.call_count == 4
    assert not root.converged
    assert "not_converged" in root.flag


def test_brute_force_simple_root_on_the_first_cut():
    roots = brute_force_roots(lambda z: z - (3 + 4j), (0.0, 6.0, 0.0, 6.0))
    assert len(roots) == 1
    assert roots[0].multiplicity == 1
    assert abs(roots[0].z - (3 + 4j)) <= 1e-10


def test_brute_force_double_root():
    roots = brute_force_roots(lambda z: (z - (1 + 1j)) ** 2 * (z - 4), (0.0, 5.0, -1.0, 3.0))
    assert [root.multiplicity for root in roots] == [2, 1]
    assert abs(roots[0].z - (1 + 1j)) <= 1e-6
    assert abs(roots[1].z - 4) <= 1e-10


def test_brute_force_rejects_degenerate_region():
    with pytest.raises(DomainError):
        brute_force_roots(lambda z: z, (1.0, 1.0, 0.0, 1.0))


def test_brute_force_matches_newton(model_params):
    roots = brute_force_roots(lambda z: f_model(z, model_params) - 1, (50.0, 120.0, 0.0, 6.0))
    expected = [root.z for root in model_roots(model_params, (1, 30)) if 50 < root.z.real < 120]
    assert len(roots) == len(expected) == 11
    for found, newton in zip(roots, expected):
        assert abs(found.z - newton) <= 1e-10


def test_model_census_finds_newton_roots(model_params):
    census = model_census(model_params, 40.0)
    assert census.plus >= 6
    assert census.minus >= 6
    assert census.total == census.plus + census.minus
    for family in (1, -1):
        for n in range(3, 7):
            z = solve_model_root(model_params, n, family=family).z
            assert min(abs(root.z - z) for root in census.roots) <= 1e-8


def test_model_census_needs_room(model_params):
    with pytest.raises(DomainError):
        model_census(model_params, 0.5)


def test_zero_potential_has_no_resonances(zero_potential):
    assert find_resonances(zero_potential, (10, 20)) == []


def test_born_resonance(singular_potential, reference_consts):
    record = solve_resonance(singular_potential, 10, consts=reference_consts)
    assert record.converged
    assert record.family == 1
    assert record.residual <= 1e-9
    assert record.multiplicity == 1
    assert record.abs_error <= 0.15 * abs(record.lambda_n)
    assert record.lambda_n.imag > 0


def test_full_resonance(singular_potential, reference_consts):
    record = solve_resonance(singular_potential, 10, mode="full-determinant", consts=reference_consts, check_multiplicity=False)
    assert record.converged
    assert record.multiplicity is None
    assert record.residual <= 1e-9


def test_resonance_mode_is_checked(singular_potential):
    with pytest.raises(ConfigError):
        solve_resonance(singular_potential, 10, mode="exact")


def test_resonances_need_a_singular_potential(smooth_potential):
    with pytest.raises(ConfigError):
        find_resonances(smooth_potential, (10, 11))
