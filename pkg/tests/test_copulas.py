import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from copulagraph import copulas as cp
from copulagraph.copulas import C_MINUS, C_PLUS, PI, CopulaSpec, Family
from copulagraph.errors import DomainError

ARCH_SPECS = [cp.clayton(-1.0), cp.clayton(-0.5), cp.clayton(0.3), cp.clayton(1.0), cp.clayton(8.0),
              cp.frank(-20.0), cp.frank(-5.0), cp.frank(0.5), cp.frank(5.0), cp.frank(30.0),
              cp.gumbel(1.0), cp.gumbel(1.5), cp.gumbel(3.0), cp.gumbel(10.0),
              cp.joe(1.0), cp.joe(2.0), cp.joe(5.0), cp.joe(12.0)]
ALL_SPECS = ARCH_SPECS + [PI, C_PLUS, C_MINUS]
DENSITY_SPECS = [s for s in ARCH_SPECS if s.theta != -1.0]


# -- validate ---------------------------------------------------------------

def test_gumbel_below_one_rejected():
    with pytest.raises(DomainError) as exc:
        cp.gumbel(0.5)
    assert exc.value.family == "gumbel"
    assert exc.value.theta == 0.5


def test_gumbel_boundary_accepted():
    assert cp.validate(cp.gumbel(1.0)).theta == 1.0


def test_independence_ignores_theta():
    spec = CopulaSpec(Family.INDEPENDENCE, 123.0)
    assert cp.validate(spec) is spec
    assert spec.theta is None


@pytest.mark.parametrize("family, theta", [
    ("clayton", -1.5), ("clayton", 0.0), ("frank", 0.0), ("joe", 0.99),
    ("gumbel", math.inf), ("frank", math.nan), ("clayton", None),
])
def test_out_of_domain(family, theta):
    with pytest.raises(DomainError):
        CopulaSpec(Family(family), theta)


@pytest.mark.parametrize("family, theta", [
    ("clayton", -1.0), ("clayton", 1e-12), ("frank", -1000.0), ("joe", 1.0), ("gumbel", 50.0),
])
def test_in_domain(family, theta):
    CopulaSpec(Family(family), theta)


# -- generator --------------------------------------------------------------

def test_generator_values():
    assert cp.generator(cp.clayton(1.0), 0.5) == pytest.approx(1.0, abs=1e-15)
    assert cp.generator(cp.gumbel(2.0), math.exp(-1.0)) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("spec", ARCH_SPECS, ids=str)
def test_generator_vanishes_at_one(spec):
    assert cp.generator(spec, 1.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("spec", ARCH_SPECS, ids=str)
def test_generator_strictly_decreasing(spec):
    t = np.linspace(0.001, 1.0, 400)
    phi = cp.generator(spec, t)
    assert np.all(np.diff(phi) < 0)


def test_generator_rejected_for_fundamental():
    for spec in (PI, C_PLUS, C_MINUS):
        with pytest.raises(DomainError):
            cp.generator(spec, 0.5)


def test_pseudo_inverse_values():
    assert cp.generator_pseudo_inverse(cp.clayton(1.0), 1.0) == pytest.approx(0.5, abs=1e-15)
    spec = cp.frank(5.0)
    assert cp.generator_pseudo_inverse(spec, cp.generator(spec, 0.3)) == pytest.approx(0.3, abs=1e-12)


@pytest.mark.parametrize("spec", ARCH_SPECS, ids=str)
def test_pseudo_inverse_of_zero_is_one(spec):
    assert cp.generator_pseudo_inverse(spec, 0.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("spec", ARCH_SPECS, ids=str)
def test_generator_round_trip(spec):
    t = np.linspace(0.01, 1.0, 200)
    back = cp.generator_pseudo_inverse(spec, cp.generator(spec, t))
    np.testing.assert_allclose(back, t, atol=1e-10, rtol=0)


def test_pseudo_inverse_zero_beyond_phi_zero():
    spec = cp.clayton(-0.5)
    phi0 = cp.generator_at_zero(spec)
    assert phi0 == pytest.approx(2.0)
    assert cp.generator_pseudo_inverse(spec, phi0 + 0.1) == 0.0
    assert cp.generator_pseudo_inverse(spec, 10.0) == 0.0
    assert cp.generator_at_zero(cp.gumbel(2.0)) == math.inf


@pytest.mark.parametrize("spec", ARCH_SPECS, ids=str)
def test_generator_derivatives_by_finite_differences(spec):
    t = np.linspace(0.2, 0.8, 7)
    h = 1e-5
    d1 = (cp.generator(spec, t + h) - cp.generator(spec, t - h)) / (2 * h)
    d2 = (cp.generator_derivative(spec, t + h) - cp.generator_derivative(spec, t - h)) / (2 * h)
    np.testing.assert_allclose(cp.generator_derivative(spec, t), d1, rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(cp.generator_second_derivative(spec, t), d2, rtol=1e-6, atol=1e-6)


# -- cdf --------------------------------------------------------------------

def test_cdf_examples():
    assert cp.cdf(PI, 0.5, 0.5) == 0.25
    assert cp.cdf(cp.clayton(1.0), 0.5, 0.5) == pytest.approx(1 / 3, abs=1e-15)
    assert cp.cdf(cp.gumbel(1.0), 0.3, 0.7) == pytest.approx(0.21, abs=1e-15)
    assert cp.cdf(C_MINUS, 0.4, 0.4) == 0.0


@pytest.mark.parametrize("spec", ARCH_SPECS, ids=str)
def test_cdf_is_archimedean_composition(spec):
    u, v = np.meshgrid(np.linspace(0.05, 0.95, 9), np.linspace(0.05, 0.95, 9))
    direct = cp.generator_pseudo_inverse(spec, cp.generator(spec, u) + cp.generator(spec, v))
    np.testing.assert_allclose(cp.cdf(spec, u, v), direct, atol=1e-12)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_frechet_hoeffding_bounds(spec):
    g = np.linspace(0, 1, 51)
    u, v = np.meshgrid(g, g)
    C = cp.cdf(spec, u, v)
    assert np.all(C >= np.maximum(u + v - 1, 0) - 1e-15)
    assert np.all(C <= np.minimum(u, v) + 1e-15)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_uniform_margins(spec):
    g = np.linspace(0, 1, 101)
    np.testing.assert_allclose(cp.cdf(spec, g, 1.0), g, atol=1e-12)
    np.testing.assert_allclose(cp.cdf(spec, 1.0, g), g, atol=1e-12)
    np.testing.assert_allclose(cp.cdf(spec, g, 0.0), 0.0, atol=1e-12)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_cdf_symmetric(spec):
    rng = np.random.default_rng(1)
    u, v = rng.random(1000), rng.random(1000)
    assert np.array_equal(cp.cdf(spec, u, v), cp.cdf(spec, v, u))


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_two_increasing(spec):
    rng = np.random.default_rng(7)
    a = np.sort(rng.random((1000, 2)), axis=1)
    b = np.sort(rng.random((1000, 2)), axis=1)
    u1, u2 = a[:, 0], a[:, 1]
    v1, v2 = b[:, 0], b[:, 1]
    vol = cp.cdf(spec, u2, v2) - cp.cdf(spec, u2, v1) - cp.cdf(spec, u1, v2) + cp.cdf(spec, u1, v1)
    assert vol.min() >= -1e-12


@settings(max_examples=200, deadline=None)
@given(theta=st.floats(1.0, 40.0), u=st.floats(0.0, 1.0), v=st.floats(0.0, 1.0),
       family=st.sampled_from(["gumbel", "joe"]))
def test_bounds_property_upper_families(theta, u, v, family):
    C = cp.cdf(CopulaSpec(Family(family), theta), u, v)
    assert max(u + v - 1, 0) - 1e-12 <= C <= min(u, v) + 1e-12


@settings(max_examples=200, deadline=None)
@given(theta=st.floats(-60.0, 60.0).filter(lambda t: abs(t) > 1e-3),
       u=st.floats(0.0, 1.0), v=st.floats(0.0, 1.0))
def test_bounds_property_frank(theta, u, v):
    C = cp.cdf(cp.frank(theta), u, v)
    assert max(u + v - 1, 0) - 1e-12 <= C <= min(u, v) + 1e-12


def test_independence_limits():
    u, v = np.meshgrid(np.linspace(0, 1, 11), np.linspace(0, 1, 11))
    for spec in (cp.clayton(1e-9), cp.frank(-1e-9), cp.clayton(1e-6), cp.frank(1e-6)):
        np.testing.assert_allclose(cp.cdf(spec, u, v), u * v, atol=1e-6)
    assert cp.clayton(1e-9).effective_family is Family.INDEPENDENCE
    assert cp.gumbel(1.0).effective_family is Family.INDEPENDENCE


def test_frank_extreme_negative_theta_is_stable():
    spec = cp.frank(-800.0)
    g = np.linspace(0, 1, 21)
    np.testing.assert_allclose(cp.cdf(spec, g, 1.0), g, atol=1e-12)
    u, v = np.meshgrid(g, g)
    C = cp.cdf(spec, u, v)
    assert np.all(np.isfinite(C))
    # essentially the countermonotone bound
    np.testing.assert_allclose(C, np.maximum(u + v - 1, 0), atol=1e-2)


def test_clayton_minus_one_is_countermonotone():
    u, v = np.meshgrid(np.linspace(0, 1, 21), np.linspace(0, 1, 21))
    np.testing.assert_allclose(cp.cdf(cp.clayton(-1.0), u, v), np.maximum(u + v - 1, 0), atol=1e-14)


# -- density ----------------------------------------------------------------

def test_density_examples():
    assert cp.density(PI, 0.2, 0.9) == 1.0
    assert cp.density(cp.clayton(1.0), 0.5, 0.5) == pytest.approx(32 / 27, rel=1e-14)
    with pytest.raises(DomainError):
        cp.density(C_PLUS, 0.3, 0.3)
    with pytest.raises(DomainError):
        cp.density(C_MINUS, 0.3, 0.3)


@pytest.mark.parametrize("spec", DENSITY_SPECS, ids=str)
def test_density_matches_mixed_difference(spec):
    h = 1e-4
    g = np.linspace(0.1, 0.9, 9)
    u, v = np.meshgrid(g, g)
    num = (cp.cdf(spec, u + h, v + h) - cp.cdf(spec, u + h, v - h)
           - cp.cdf(spec, u - h, v + h) + cp.cdf(spec, u - h, v - h)) / (4 * h * h)
    c = cp.density(spec, u, v)
    # skip points where a Clayton support boundary passes through the stencil
    np.testing.assert_allclose(c, num, atol=1e-4, rtol=1e-4)


@pytest.mark.parametrize("spec", DENSITY_SPECS, ids=str)
def test_density_matches_generator_formula(spec):
    g = np.linspace(0.1, 0.9, 9)
    u, v = np.meshgrid(g, g)
    C = cp.cdf(spec, u, v)
    with np.errstate(all="ignore"):
        via_gen = (-cp.generator_second_derivative(spec, C) * cp.generator_derivative(spec, u)
                   * cp.generator_derivative(spec, v) / cp.generator_derivative(spec, C) ** 3)
    ok = C > 0
    np.testing.assert_allclose(cp.density(spec, u, v)[ok], via_gen[ok], rtol=1e-8)


@pytest.mark.parametrize("spec", DENSITY_SPECS + [PI], ids=str)
def test_density_symmetric_and_nonnegative(spec):
    rng = np.random.default_rng(3)
    u, v = rng.random(2000), rng.random(2000)
    c = cp.density(spec, u, v)
    assert np.array_equal(c, cp.density(spec, v, u))
    assert np.all(c >= 0) and np.all(np.isfinite(c))


@pytest.mark.parametrize("spec", [cp.clayton(-0.5), cp.clayton(2.0), cp.frank(-5.0), cp.frank(5.0),
                                  cp.gumbel(2.0), cp.joe(3.0)], ids=str)
@pytest.mark.parametrize("u", [0.1, 0.5, 0.9])
def test_density_has_uniform_marginal(spec, u):
    # adaptive quadrature, independent of the package's Gauss-Legendre grid
    val, _ = integrate.quad(lambda v: cp.density(spec, u, v), 0, 1, epsabs=1e-11, limit=200)
    assert val == pytest.approx(1.0, abs=1e-6)


def test_density_boundary_is_zero_for_gumbel_and_joe():
    for spec in (cp.gumbel(3.0), cp.joe(3.0)):
        for u, v in [(0.0, 0.5), (1.0, 0.5), (0.5, 1.0), (1.0, 1.0), (0.0, 0.0)]:
            assert cp.density(spec, u, v) == 0.0


def test_clayton_negative_density_vanishes_outside_support():
    spec = cp.clayton(-0.5)
    # u^0.5 + v^0.5 - 1 <= 0 at (0.2, 0.2)
    assert cp.density(spec, 0.2, 0.2) == 0.0
    assert cp.density(spec, 0.8, 0.8) > 0.0
