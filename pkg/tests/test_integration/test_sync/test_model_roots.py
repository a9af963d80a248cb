import math

import pytest

from starkres import ModelParams, Perturbation, brute_force_roots, counting_prediction, f_model, model_census, model_roots
from starkres.asympt import compare_model_roots
from starkres.utils import _fit_power_law


def test_model_roots_follow_the_prediction(model_params):
    roots = model_roots(model_params, (20, 500))
    assert all(root.converged and root.flag is None for root in roots)
    comparison = compare_model_roots(roots, model_params)
    assert comparison.k_variation < 2


@pytest.mark.parametrize("window", [(20, 40), (120, 130), (250, 260), (490, 500)])
def test_model_roots_are_refound_by_the_argument_principle(model_params, window):
    roots = model_roots(model_params, window)
    y_max = max(root.z.imag for root in roots) + 2
    # strip edges halfway between consecutive roots
    x0 = 0.5 * (roots[0].z.real + roots[0].z.real - 2 * math.pi)
    x1 = 0.5 * (roots[-1].z.real + roots[-1].z.real + 2 * math.pi)
    found = brute_force_roots(lambda z: f_model(z, model_params) - 1, (x0, x1, 0.0, y_max))
    assert len(found) == len(roots)
    for located, root in zip(found, roots):
        assert located.multiplicity == 1
        assert abs(located.z - root.z) <= 1e-9 * max(1.0, abs(root.z))


def test_perturbed_roots_move_like_the_perturbation(model_params):
    perturbed = ModelParams(model_params.b, model_params.z_star, Perturbation(1.0, -0.5))
    ns = list(range(20, 501, 20))
    deviations = []
    for root in model_roots(perturbed, ns):
        x = 2 * math.pi * root.n
        unperturbed = complex(x, model_params.b * math.log(x)) + model_params.z_star
        deviations.append(abs(root.z - unperturbed))
    exponent = _fit_power_law(ns, deviations)[0]
    assert exponent == pytest.approx(-0.5, abs=0.1)
    assert max(d * math.sqrt(n) for d, n in zip(deviations, ns)) <= 1.0


@pytest.mark.parametrize("radius", [50.0, 100.0])
def test_census_follows_the_counting_law(reference_consts, radius):
    params = ModelParams.from_constants(reference_consts)
    census = model_census(params, (4 / 3) * radius ** 1.5)
    count = sum(root.multiplicity for root in census.roots if (0.75 * abs(root.z)) ** (2 / 3) <= radius)
    assert abs(count / counting_prediction(radius) - 1) <= 0.02
