import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from torusqubit.potential import (
    PotentialParams,
    sample_profile,
    v_bare,
    v_electric,
    v_magnetic,
    v_total,
)

from oracles import E_CHARGE_SI, ELECTRON_MASS_SI, HBAR_SI

ANGSTROM = 1e-10

# Hand evaluation done before coding, fig3a geometry, theta=pi, m=0:
# bracket = -R^2/4 - r(R-r)/2, value = hbar^2/(2 m* r^2 (R-r)^2) * bracket
V_BARE_AT_PI_FIG3A = -1.6404330930234536e-23  # J
# e * hbar * B / m* at B = 0.45 T with m* = 0.3 m0
ZEEMAN_SPLIT_045T = 2.78220302180394e-23  # J


def _params(geom, **kwargs):
    return PotentialParams(geom=geom, **kwargs)


class TestVBare:
    def test_value_at_pi_fig3a(self, fig3a_geom):
        r, R = fig3a_geom.r_minor, fig3a_geom.R_major
        mstar = 0.3 * ELECTRON_MASS_SI
        bracket = -(R**2) / 4.0 - r * (R - r) / 2.0
        oracle = HBAR_SI**2 / (2.0 * mstar * r**2 * (R - r) ** 2) * bracket
        value = v_bare(math.pi, _params(fig3a_geom))
        assert value == pytest.approx(oracle, rel=1e-13)
        assert value == pytest.approx(V_BARE_AT_PI_FIG3A, rel=1e-13)

    @given(theta=st.floats(0.0, 2.0 * math.pi))
    def test_even_about_zero(self, fig3a_geom, theta):
        params = _params(fig3a_geom, m_orbital=2)
        assert v_bare(theta, params) == pytest.approx(
            v_bare(2.0 * math.pi - theta, params), rel=1e-12, abs=1e-40
        )

    def test_m_enters_squared(self, fig3a_geom):
        theta = np.linspace(0, 2 * np.pi, 17)
        plus = v_bare(theta, _params(fig3a_geom, m_orbital=1))
        minus = v_bare(theta, _params(fig3a_geom, m_orbital=-1))
        np.testing.assert_array_equal(plus, minus)


class TestVElectric:
    def test_zero_at_nodes(self, fig3a_geom):
        params = _params(fig3a_geom, E_static=100.0)
        assert v_electric(0.0, params) == 0.0
        assert abs(v_electric(math.pi, params)) < 1e-40

    def test_direct_product_at_quarter_turn(self, fig3a_geom):
        params = _params(fig3a_geom, E_static=100.0)
        oracle = -E_CHARGE_SI * 100.0 * 3.5e-8
        assert v_electric(math.pi / 2, params) == pytest.approx(oracle, rel=1e-14)

    @given(theta=st.floats(0.0, 2.0 * math.pi))
    def test_odd_symmetry(self, fig3a_geom, theta):
        params = _params(fig3a_geom, E_static=250.0)
        scale = E_CHARGE_SI * 250.0 * fig3a_geom.r_minor
        assert v_electric(theta, params) == pytest.approx(
            -v_electric(2.0 * math.pi - theta, params), rel=1e-12, abs=scale * 1e-12
        )


class TestVMagnetic:
    def test_zero_field(self, fig3a_geom):
        theta = np.linspace(0, 2 * np.pi, 33)
        for m in (-2, 0, 3):
            np.testing.assert_array_equal(
                v_magnetic(theta, _params(fig3a_geom, m_orbital=m)), np.zeros_like(theta)
            )

    def test_positive_for_m0(self, fig3a_geom):
        theta = np.linspace(0, 2 * np.pi, 64)
        values = v_magnetic(theta, _params(fig3a_geom, B=0.2))
        assert np.all(values > 0)

    def test_degeneracy_lifting_term(self, fig3a_geom):
        theta = np.linspace(0, 2 * np.pi, 16)
        plus = v_magnetic(theta, _params(fig3a_geom, B=0.45, m_orbital=1))
        minus = v_magnetic(theta, _params(fig3a_geom, B=0.45, m_orbital=-1))
        split = minus - plus
        oracle = E_CHARGE_SI * HBAR_SI * 0.45 / (0.3 * ELECTRON_MASS_SI)
        np.testing.assert_allclose(split, oracle, rtol=1e-13)
        assert oracle == pytest.approx(ZEEMAN_SPLIT_045T, rel=1e-13)


class TestVTotal:
    def test_sum_of_terms_at_random_angles(self, fig3a_geom):
        rng = np.random.default_rng(7)
        params = _params(fig3a_geom, B=0.3, E_static=50.0, m_orbital=1)
        for theta in rng.uniform(0, 2 * np.pi, size=7):
            total = v_total(theta, params)
            parts = (
                v_bare(theta, params) + v_electric(theta, params) + v_magnetic(theta, params)
            )
            assert total == pytest.approx(parts, rel=1e-14)

    def test_symmetric_profile_without_electric_field(self, fig3a_geom):
        profile = sample_profile(_params(fig3a_geom, B=0.45), 256)
        values = profile.values
        # theta -> 2pi - theta maps grid index i -> n - i (mod n)
        np.testing.assert_allclose(values[1:], values[1:][::-1], rtol=1e-12, atol=1e-15)

    def test_two_pi_periodicity(self, fig3a_geom):
        params = _params(fig3a_geom, B=0.3, E_static=80.0, m_orbital=2)
        theta = np.linspace(0.1, 6.2, 23)
        a = v_total(theta, params)
        b = v_total(theta + 2 * np.pi, params)
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_minimum_at_pi_for_fig3_geometries(self, fig3a_geom, fig3b_geom):
        for geom in (fig3a_geom, fig3b_geom):
            for B in (0.0, 0.45, 1.0):
                profile = sample_profile(_params(geom, B=B), 1024)
                argmin = int(np.argmin(profile.values))
                assert profile.theta_grid[argmin] == pytest.approx(math.pi, abs=1e-9)

    def test_m_degeneracy_at_zero_field(self, fig3a_geom):
        theta = np.linspace(0, 2 * np.pi, 64)
        for m in (1, 2, 5):
            plus = v_total(theta, _params(fig3a_geom, m_orbital=m))
            minus = v_total(theta, _params(fig3a_geom, m_orbital=-m))
            np.testing.assert_array_equal(plus, minus)


class TestProfile:
    def test_grid_shape(self, fig3a_geom):
        profile = sample_profile(_params(fig3a_geom), 128)
        assert len(profile.theta_grid) == 128
        assert profile.theta_grid[0] == 0.0
        assert profile.theta_grid[-1] < 2 * np.pi
        step = 2 * np.pi / 128
        np.testing.assert_allclose(np.diff(profile.theta_grid), step, rtol=1e-12)

    def test_too_few_points_rejected(self, fig3a_geom):
        with pytest.raises(ValueError):
            sample_profile(_params(fig3a_geom), 8)

    def test_csv_round_trip(self, fig3a_geom):
        profile = sample_profile(_params(fig3a_geom, B=0.45, E_static=10.0), 64)
        text = profile.to_csv()
        lines = text.strip().splitlines()
        assert lines[0].startswith("# internal units: energy_scale_J=")
        assert lines[1] == "theta,V_bare,V_E,V_B,V_total"
        assert len(lines) == 2 + 64
        first = [float(x) for x in lines[2].split(",")]
        assert first[0] == 0.0
        assert first[4] == pytest.approx(first[1] + first[2] + first[3], rel=1e-14)
