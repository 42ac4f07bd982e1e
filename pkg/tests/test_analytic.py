"""Closed-form lattice model against independent oracles."""

import numpy as np
import pytest
from scipy.stats import skew

import tdskit as tk
from tdskit.analytic import SeriesSolution, dft, dft_series

from conftest import config_kirchheim


def trapezoid_dft(mat, protocol, t, panels=1_000_000):
    """Brute-force oracle: huge-panel trapezoid of D_L over time."""
    tau = np.linspace(0.0, t, panels + 1)
    D = tk.diffusivity(mat, tk.temperature_at(protocol, tau))
    return np.trapezoid(D, tau)


class TestDft:
    def test_against_trapezoid_oracle(self):
        mat, protocol = config_kirchheim()
        t = 1e5
        ref = trapezoid_dft(mat, protocol, t)
        assert dft(protocol, mat, t) == pytest.approx(ref, rel=1e-8)

    def test_rest_segment_is_linear(self):
        mat, protocol = config_kirchheim()
        protocol = tk.TestProtocol(L=protocol.L, phi=protocol.phi,
                                   t_rest=5000.0, T_min=protocol.T_min,
                                   T_max=protocol.T_max)
        D0 = tk.diffusivity(mat, protocol.T_min)
        assert dft(protocol, mat, 2500.0) == pytest.approx(2500.0 * D0)

    def test_series_cumulative(self):
        mat, protocol = config_kirchheim()
        t = np.linspace(0.0, 2e5, 40)
        series = dft_series(protocol, mat, t)
        assert np.all(np.diff(series) > 0)
        assert series[-1] == pytest.approx(dft(protocol, mat, t[-1]),
                                           rel=1e-9)

    def test_negative_time_rejected(self):
        mat, protocol = config_kirchheim()
        with pytest.raises(ValueError):
            dft(protocol, mat, -1.0)


class TestSeriesSolution:
    def test_boundary_values_vanish(self):
        mat, protocol = config_kirchheim()
        sol = SeriesSolution(mat, protocol, n_terms=400)
        t = 0.3 * protocol.t_end
        assert abs(sol.concentration(protocol.L / 2, t)) < 1e-9 * mat.C_L0
        assert abs(sol.concentration(-protocol.L / 2, t)) < 1e-9 * mat.C_L0

    def test_even_symmetry(self):
        mat, protocol = config_kirchheim()
        sol = SeriesSolution(mat, protocol, n_terms=200)
        x = 0.17 * protocol.L
        t = 0.4 * protocol.t_end
        assert sol.concentration(x, t) == pytest.approx(
            sol.concentration(-x, t), rel=1e-12)

    def test_initial_average_equals_C0(self):
        mat, protocol = config_kirchheim()
        sol = SeriesSolution(mat, protocol, n_terms=800)
        avg0 = sol.average_concentration(0.0)[0]
        # the truncation tail at t=0 decays like 1/n_terms
        assert avg0 == pytest.approx(mat.C_L0, rel=1e-3)

    def test_truncation_monotone(self):
        mat, protocol = config_kirchheim()
        ref = SeriesSolution(mat, protocol, n_terms=800).spectrum()
        dists = []
        for n in (1, 3, 10):
            s = SeriesSolution(mat, protocol, n_terms=n).spectrum()
            dists.append(np.max(np.abs(s.deltaC_total - ref.deltaC_total)))
        assert dists[0] > dists[1] > dists[2]

    def test_spectrum_conserves_mass(self):
        mat, protocol = config_kirchheim()
        spec = tk.lattice_spectrum(mat, protocol)
        released = spec.total_desorbed()
        assert released == pytest.approx(mat.C_L0, rel=5e-3)

    def test_not_gaussian(self):
        # the lattice curve is skewed; a Gaussian fit would misread it
        mat, protocol = config_kirchheim()
        spec = tk.lattice_spectrum(mat, protocol)
        w = spec.deltaC_total[2:]
        T = spec.T[2:]
        mean = np.average(T, weights=w)
        sd = np.sqrt(np.average((T - mean) ** 2, weights=w))
        third = np.average((T - mean) ** 3, weights=w) / sd**3
        assert abs(third) > 0.1

    def test_rate_termwise_matches_spectrum_midrun(self):
        # away from t=0 the term-wise derivative and the differenced
        # average agree
        mat, protocol = config_kirchheim()
        sol = SeriesSolution(mat, protocol, n_terms=800)
        spec = sol.spectrum()
        k = len(spec.t) // 2
        pointwise = sol.rate_termwise(spec.t[k])[0]
        assert spec.deltaC_total[k] == pytest.approx(pointwise, rel=1e-3)

    def test_flux_consistent_with_rate(self):
        mat, protocol = config_kirchheim()
        sol = SeriesSolution(mat, protocol, n_terms=800)
        spec = sol.spectrum()
        k = len(spec.t) // 2
        # both faces desorb: deltaC * L/2 equals the per-face flux
        assert spec.flux[k] == pytest.approx(
            sol.boundary_flux(spec.t[k]), rel=1e-3)

    def test_skewness_helper_agrees(self):
        # cross-check the hand-rolled moment with scipy on resampled data
        rng = np.random.default_rng(0)
        x = rng.gamma(2.0, size=2000)
        mean = x.mean()
        sd = x.std()
        third = np.mean((x - mean) ** 3) / sd**3
        assert third == pytest.approx(skew(x), rel=1e-9)
