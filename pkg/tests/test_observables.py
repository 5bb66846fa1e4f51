import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfed.dos import RAW_PER_REDUCED
from qfed.observables import (C_UM_PER_S, effective_temperature, energy_density, field_observables,
                              observables_at, photon_number_directional,
                              photon_number_directional_full, photon_number_total, poynting)
from qfed.stack import Layer, LayerStack, bose_einstein

from conftest import cavity_stack


def two_temperature_medium(n, t_left, t_right):
    return LayerStack((Layer(n, None, t_left), Layer(n, None, t_right)))


@pytest.mark.parametrize("n", [1.5 + 0.2j, 2.5 + 0.4j])
def test_two_temperature_interface_oracle(n):
    # same index on both sides: the weights of each half follow from the uniform G
    E, x = 0.05, 0.0
    s = two_temperature_medium(n, 400.0, 150.0)
    e1, e2 = bose_einstein(E, 400.0), bose_einstein(E, 150.0)
    a = n.real ** 2 / abs(n) ** 2
    obs = field_observables(s, E, x)
    assert obs.n_total == pytest.approx(0.5 * (e1 + e2), rel=1e-9)
    assert obs.n_plus == pytest.approx(0.5 * ((1 + a) * e1 + (1 - a) * e2), rel=1e-9)
    assert obs.n_minus == pytest.approx(0.5 * ((1 - a) * e1 + (1 + a) * e2), rel=1e-9)
    rho_raw = RAW_PER_REDUCED * n.real / 2
    expected_s = E * C_UM_PER_S / n.real * 0.5 * rho_raw * a * (e1 - e2)
    assert obs.poynting == pytest.approx(expected_s, rel=1e-9)


@pytest.mark.parametrize("T", [0.0, 77.0, 300.0, 1500.0])
def test_equilibrium_fixed_point(T):
    s = cavity_stack(temps=(T, T, T))
    xs = np.linspace(-20, 30, 51)
    for E in (0.02, 0.046, 0.1):
        o = observables_at(s, E, xs)
        be = bose_einstein(E, T)
        for n in (o.n_total, o.n_plus, o.n_minus):
            np.testing.assert_allclose(n, be, rtol=1e-12, atol=1e-300)
        scale = E * (C_UM_PER_S / 1.0) * o.ldos * (be + 0.5)
        assert np.all(np.abs(o.poynting) <= 1e-12 * scale)
        np.testing.assert_allclose(o.t_eff_total, T, rtol=1e-10)


def test_fig2_profile_bounds_and_averaging():
    s = cavity_stack()
    o = observables_at(s, 0.046, np.linspace(-40, 50, 91))
    lo, hi = bose_einstein(0.046, 100), bose_einstein(0.046, 300)
    for n in (o.n_total, o.n_plus, o.n_minus):
        assert np.all(n >= lo - 1e-12) and np.all(n <= hi + 1e-12)
    np.testing.assert_allclose(o.n_total, 0.5 * (o.n_plus + o.n_minus), rtol=1e-12)
    # net flow runs from the hot left side to the cold right side
    assert np.all(o.poynting > 0)


def test_fig2_asymptotes():
    s = cavity_stack()
    deep_left = field_observables(s, 0.046, -60.0)
    assert deep_left.n_plus == pytest.approx(0.203, abs=1e-3)
    assert deep_left.n_minus == pytest.approx(0.203, abs=1e-3)
    assert photon_number_directional(s, 0.046, 60.0, +1) == pytest.approx(0.00483, abs=1e-3)


def test_scalar_helpers_agree_with_bulk():
    s = cavity_stack()
    o = field_observables(s, 0.09, 4.0)
    assert photon_number_total(s, 0.09, 4.0) == pytest.approx(o.n_total, rel=1e-14)
    assert photon_number_directional(s, 0.09, 4.0, -1) == pytest.approx(o.n_minus, rel=1e-14)
    assert photon_number_directional_full(s, 0.09, 4.0, 1) == pytest.approx(o.n_plus, rel=1e-9)
    s4, s6 = poynting(s, 0.09, 4.0)
    assert s6 == pytest.approx(s4, rel=1e-9)
    u, u_dir = energy_density(s, 0.09, 4.0)
    assert u_dir == pytest.approx(u, rel=1e-12)
    assert u == pytest.approx(0.09 * o.ldos * (o.n_total + 0.5), rel=1e-14)
    with pytest.raises(ValueError):
        photon_number_directional(s, 0.09, 4.0, 2)


def test_poynting_is_divergence_free_in_lossless_layer():
    s = LayerStack((Layer(2.0 + 0.3j, None, 300), Layer(1.4, 6.0, 0), Layer(1.7 + 0.5j, None, 50)))
    o = observables_at(s, 0.08, np.linspace(0.5, 5.5, 11))
    np.testing.assert_allclose(o.poynting, o.poynting[0], rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(E=st.floats(1e-3, 2.0), T=st.floats(1.0, 5000.0))
def test_effective_temperature_inverts_bose_einstein(E, T):
    n = bose_einstein(E, T)
    if n > 1e-300:
        assert effective_temperature(E, n) == pytest.approx(T, rel=1e-9)


def test_effective_temperature_edge_cases():
    assert effective_temperature(0.05, 0.0) == 0.0
    np.testing.assert_array_equal(effective_temperature(0.05, np.array([0.0, 0.0])), [0.0, 0.0])
    with pytest.raises(ValueError):
        effective_temperature(0.05, -0.1)
    with pytest.raises(ValueError):
        effective_temperature(0.05, np.array([0.1, -0.1]))


def test_errors_are_reported_and_small():
    o = observables_at(cavity_stack(), 0.1, np.linspace(-5, 15, 9))
    for key, err in o.errors.items():
        assert np.all(err >= 0), key
        assert np.all(np.isfinite(err)), key
    assert np.all(o.errors["ldos"] <= 1e-7 * o.ldos)
