import math

import numpy as np
import pytest

from pnes.errors import ExtrapolationError, ValidationError
from pnes.meanfield import (
    PumpProfile,
    closed_form,
    closed_form_trajectory,
    integrate_model,
    tau_of_t,
    twb_x_from_tau,
)
from pnes.observables import expect_pair_amplitude, expect_total_number
from pnes.states import min_dimension_twb, twb


def gaussian_with_area(area, width, center=0.0):
    return PumpProfile.gaussian(area / (math.sqrt(2 * math.pi) * width), center, width)


class TestPumpProfile:
    def test_rectangular_amplitude(self):
        p = PumpProfile.rectangular(2.0, 1.5)
        assert p.amplitude(-0.1) == 0.0
        assert p.amplitude(0.7) == 2.0
        assert p.amplitude(1.6) == 0.0

    def test_sampled_interpolates(self):
        p = PumpProfile.sampled([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        assert p.amplitude(0.5) == pytest.approx(1.0)
        assert p.amplitude(-3.0) == 0.0

    def test_sampled_extrapolation_error(self):
        p = PumpProfile.sampled([0.0, 1.0], [0.0, 1.0])
        with pytest.raises(ExtrapolationError):
            p.amplitude(1.5)

    def test_sampled_requires_increasing_times(self):
        with pytest.raises(ValidationError):
            PumpProfile.sampled([0.0, 0.0, 1.0], [1.0, 1.0, 1.0])

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValidationError):
            PumpProfile.rectangular(1.0, -2.0)
        with pytest.raises(ValidationError):
            PumpProfile.gaussian(1.0, 0.0, 0.0)
        with pytest.raises(ValidationError):
            PumpProfile.constant(float("inf"))


class TestTauOfT:
    def test_rectangular_piecewise(self):
        p = PumpProfile.rectangular(1.0, 2.0)
        chi = 0.1
        assert tau_of_t(p, chi, -1.0) == 0.0
        assert tau_of_t(p, chi, 0.75) == pytest.approx(chi * 1.0 * 0.75, abs=1e-15)
        assert tau_of_t(p, chi, 2.0) == pytest.approx(0.2, abs=1e-15)
        assert tau_of_t(p, chi, 5.0) == pytest.approx(0.2, abs=1e-15)

    def test_constant_ramp(self):
        p = PumpProfile.constant(2.0)
        assert tau_of_t(p, 0.5, -1.0) == 0.0
        assert tau_of_t(p, 0.5, 3.0) == pytest.approx(3.0)

    def test_gaussian_total_area(self):
        p = gaussian_with_area(2.0, 0.3, center=1.0)
        assert tau_of_t(p, 1.0, 10.0) == pytest.approx(2.0, abs=1e-11)

    def test_gaussian_half_area_at_center(self):
        p = gaussian_with_area(2.0, 0.5, center=0.0)
        assert tau_of_t(p, 1.0, 0.0) == pytest.approx(1.0, abs=1e-11)

    def test_sampled_triangle(self):
        p = PumpProfile.sampled([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        assert tau_of_t(p, 1.0, 2.0) == pytest.approx(2.0, abs=1e-11)

    def test_far_past_is_zero(self):
        for p in (PumpProfile.rectangular(1.0, 1.0), gaussian_with_area(1.0, 0.2)):
            assert tau_of_t(p, 1.0, -1e6) == 0.0


class TestClosedForm:
    def test_zero(self):
        assert closed_form(0.0) == (0.0, 0.0)

    def test_reference_point(self):
        lam, n = closed_form(0.5)
        assert lam == pytest.approx(math.sinh(0.5) * math.cosh(0.5))
        assert lam == pytest.approx(0.587600, abs=1e-6)
        assert n == pytest.approx(0.543081, abs=1e-6)

    def test_first_integral_identity(self):
        for tau in np.linspace(-2.0, 2.0, 41):
            lam, n = closed_form(tau)
            assert n == pytest.approx(math.sqrt(1 + 4 * lam * lam) - 1, abs=1e-10)


class TestIntegrateModel:
    def test_zero_coupling(self):
        p = PumpProfile.rectangular(1.0, 1.0)
        traj = integrate_model(p, 0.0, np.linspace(-0.5, 2.0, 20))
        assert np.all(traj.Lambda == 0)
        assert np.all(traj.N == 0)

    def test_matches_closed_form_rectangular(self):
        p = PumpProfile.rectangular(1.0, 2.0)
        grid = np.linspace(-0.25, 2.5, 56)
        ode = integrate_model(p, 0.1, grid)
        cf = closed_form_trajectory(p, 0.1, grid)
        assert np.max(np.abs(ode.Lambda - cf.Lambda)) < 1e-8
        assert np.max(np.abs(ode.N - cf.N)) < 1e-8
        assert ode.Lambda[-1] == pytest.approx(closed_form(0.2)[0], abs=1e-8)

    def test_matches_closed_form_gaussian(self):
        p = gaussian_with_area(1.5, 0.4, center=1.0)
        grid = np.linspace(-4.0, 5.0, 80)
        ode = integrate_model(p, 1.0, grid)
        cf = closed_form_trajectory(p, 1.0, grid)
        assert np.max(np.abs(ode.Lambda - cf.Lambda)) < 1e-8
        assert np.max(np.abs(ode.N - cf.N)) < 1e-8

    def test_endpoint_depends_only_on_area(self):
        grid = np.linspace(-9.0, 11.0, 200)
        narrow = integrate_model(gaussian_with_area(1.2, 0.2, 1.0), 1.0, grid)
        wide = integrate_model(gaussian_with_area(1.2, 0.8, 1.0), 1.0, grid)
        assert narrow.Lambda[-1] == pytest.approx(wide.Lambda[-1], abs=1e-8)
        assert narrow.N[-1] == pytest.approx(wide.N[-1], abs=1e-8)

    def test_first_integral_along_trajectory(self):
        p = PumpProfile.rectangular(1.0, 2.0)
        traj = integrate_model(p, 0.8, np.linspace(-0.2, 2.4, 66))
        resid = (traj.N + 1) ** 2 - 4 * traj.Lambda**2 - 1
        assert np.max(np.abs(resid)) < 1e-10

    def test_requires_vanishing_start(self):
        p = PumpProfile.rectangular(1.0, 2.0)
        with pytest.raises(ValidationError, match="vanish"):
            integrate_model(p, 0.1, np.linspace(0.5, 2.0, 10))
        integrate_model(p, 0.1, np.linspace(0.5, 2.0, 10), assume_zero_initial=True)

    def test_rejects_unsorted_grid(self):
        p = PumpProfile.rectangular(1.0, 2.0)
        with pytest.raises(ValidationError):
            integrate_model(p, 0.1, np.array([0.0, -1.0, 1.0]), assume_zero_initial=True)


class TestTwbEmbedding:
    def test_zero(self):
        assert twb_x_from_tau(0.0) == 0.0

    def test_reference_value(self):
        assert twb_x_from_tau(0.5) == pytest.approx(0.462117, abs=1e-6)

    @pytest.mark.parametrize("tau", [0.25, 0.5, 1.0])
    def test_twb_state_realizes_model_solution(self, tau):
        x = twb_x_from_tau(tau)
        d = min_dimension_twb(x) + 4
        s = twb(x, d)
        lam, n = closed_form(tau)
        assert expect_pair_amplitude(s).real == pytest.approx(lam, abs=1e-10)
        assert expect_total_number(s) == pytest.approx(n, abs=1e-10)
