import math

import numpy as np
import pytest

from inlslab.errors import ValidationError
from inlslab.params import ModelParams, critical_index, sphere_surface


def test_critical_index_values():
    assert critical_index(ModelParams(3, 1.0, 0.0)) == pytest.approx(0.5, abs=1e-15)
    assert critical_index(ModelParams(2, 1.0, 0.5)) == pytest.approx(0.25, abs=1e-15)


@pytest.mark.parametrize("ndim,b", [(1, 0.0), (2, 0.5), (3, 0.9)])
def test_critical_index_vanishes_at_mass_critical_power(ndim, b):
    sigma = (2.0 - b) / ndim
    p = ModelParams(ndim, sigma, b)
    assert critical_index(p) == pytest.approx(0.0, abs=1e-15)
    assert p.is_mass_critical
    assert not p.supercritical


def test_critical_index_monotone_in_sigma_and_b():
    # increasing in sigma; also increasing in b since s = N/2 - (2-b)/(2 sigma)
    sigmas = np.linspace(0.2, 3.0, 25)
    vals = [critical_index(ModelParams(2, s, 0.5)) for s in sigmas]
    assert np.all(np.diff(vals) > 0)
    bs = np.linspace(0.0, 1.9, 25)
    vals_b = [critical_index(ModelParams(2, 1.0, b)) for b in bs]
    assert np.all(np.diff(vals_b) > 0)


def test_supercritical_flag():
    assert ModelParams(2, 1.0, 0.5).supercritical  # sigma_c = 0.75
    assert not ModelParams(2, 0.5, 0.5).supercritical
    assert ModelParams(1, 3.0, 0.5).supercritical


def test_parameter_validation():
    with pytest.raises(ValidationError):
        ModelParams(3, 1.0, 2.5)  # b >= min(2, N)
    with pytest.raises(ValidationError):
        ModelParams(1, 1.0, 1.0)  # b >= min(2, 1)
    with pytest.raises(ValidationError):
        ModelParams(2, 1.0, -0.1)
    with pytest.raises(ValidationError):
        ModelParams(3, 1.6, 0.5)  # sigma >= (2-b)/(N-2) = 1.5
    with pytest.raises(ValidationError):
        ModelParams(3, -1.0, 0.5)
    # oracle mode b = 0 and the open window for N <= 2 are admitted
    ModelParams(1, 5.0, 0.0)
    ModelParams(2, 8.0, 1.5)


def test_exponents():
    p = ModelParams(1, 3.0, 0.5)
    assert p.grad_exponent == pytest.approx(3.5)
    assert p.mass_exponent == pytest.approx(8.0 - 3.5)
    assert p.sigma_critical == pytest.approx(1.5)
    assert math.isinf(p.sigma_max)
    assert ModelParams(3, 0.3, 0.5).sigma_max == pytest.approx(1.5)


def test_sphere_surface_low_dimensions():
    assert sphere_surface(1) == pytest.approx(2.0, rel=1e-15)
    assert sphere_surface(2) == pytest.approx(2.0 * math.pi, rel=1e-15)
    assert sphere_surface(3) == pytest.approx(4.0 * math.pi, rel=1e-15)
