"""Closed-form lattice-only (no traps) desorption model.

Separation of variables gives the concentration as a Fourier cosine
series whose time dependence enters through the integrated diffusivity
D_ft(t).  Besides being a user-selectable model, this is the
verification oracle for the numerical solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .constants import R
from .core import MaterialParams, NumericsConfig, TestProtocol, diffusivity, temperature_at
from .spectrum import DesorptionSpectrum, rate_from_average

__all__ = ["SeriesSolution", "dft", "dft_series", "lattice_spectrum"]

_QUAD_EPSREL = 1e-10


def _ramp_integral(mat: MaterialParams, phi: float, T_a: float, T_b: float) -> float:
    """(1/phi) * integral of D_L over [T_a, T_b]."""
    if T_b <= T_a:
        return 0.0
    val, _ = quad(
        lambda T: mat.D_0 * np.exp(-mat.E_L / (R * T)),
        T_a,
        T_b,
        epsrel=_QUAD_EPSREL,
        epsabs=0.0,
        limit=200,
    )
    return val / phi


def dft(protocol: TestProtocol, mat: MaterialParams, t: float) -> float:
    """Time-integrated diffusivity D_ft(t) = int_0^t D_L(T(tau)) dtau [m^2].

    The isothermal rest segment contributes D_L(T_min)*min(t, t_rest)
    exactly; the ramp segment is integrated over temperature by
    adaptive quadrature.
    """
    if t < 0:
        raise ValueError("time must be >= 0")
    D0 = diffusivity(mat, protocol.T_min)
    rest = D0 * min(t, protocol.t_rest)
    T_t = temperature_at(protocol, t)
    return rest + _ramp_integral(mat, protocol.phi, protocol.T_min, T_t)


def dft_series(protocol: TestProtocol, mat: MaterialParams, t: np.ndarray) -> np.ndarray:
    """D_ft evaluated cumulatively on an increasing time grid."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(np.diff(t) < 0):
        raise ValueError("time grid must be non-negative and sorted")
    D0 = diffusivity(mat, protocol.T_min)
    rest = D0 * np.minimum(t, protocol.t_rest)
    T = temperature_at(protocol, t)
    ramp = np.zeros_like(t)
    acc, T_prev = 0.0, protocol.T_min
    for i, T_i in enumerate(T):
        acc += _ramp_integral(mat, protocol.phi, T_prev, T_i)
        ramp[i] = acc
        T_prev = T_i
    return rest + ramp


@dataclass(frozen=True)
class SeriesSolution:
    """Truncated series solution of the trap-free desorption problem."""

    mat: MaterialParams
    protocol: TestProtocol
    n_terms: int = 800

    def __post_init__(self):
        if self.n_terms < 1:
            raise ValueError("n_terms must be >= 1")

    def _modes(self):
        n = np.arange(self.n_terms)
        return 2 * n + 1, (-1.0) ** n

    def concentration(self, x, t: float):
        """Lattice concentration C_L(x, t) [mol/m^3].

        Vanishes identically at x = +-L/2 and is even in x.
        """
        L = self.protocol.L
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > L / 2 + 1e-12 * L):
            raise ValueError("x outside the slab [-L/2, L/2]")
        m, sign = self._modes()
        decay = np.exp(-(np.pi**2) * m**2 * dft(self.protocol, self.mat, t) / L**2)
        coeff = 4.0 * self.mat.C_L0 / np.pi * sign / m * decay
        out = coeff @ np.cos(np.outer(m, np.pi * x / L))
        return out if out.ndim else float(out)

    def average_concentration(self, t) -> np.ndarray:
        """Spatially averaged concentration over the slab [mol/m^3]."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        m, _ = self._modes()
        Dft = dft_series(self.protocol, self.mat, t)
        decay = np.exp(-(np.pi**2) * np.outer(m**2, Dft) / self.protocol.L**2)
        return 8.0 * self.mat.C_L0 / np.pi**2 * (decay.T @ (1.0 / m**2))

    def rate_termwise(self, t) -> np.ndarray:
        """Pointwise desorption rate from the term-wise time derivative.

        Each mode decays with rate pi^2 m^2 D_L(T(t))/L^2.  Exact for
        the truncated series at t > 0, but divergent in the term count
        at t = 0 (the instantaneous boundary jump), so the reported
        spectrum uses conservative differencing of the averaged
        concentration instead.
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        L = self.protocol.L
        m, _ = self._modes()
        Dft = dft_series(self.protocol, self.mat, t)
        D_L = diffusivity(self.mat, temperature_at(self.protocol, t))
        decay = np.exp(-(np.pi**2) * np.outer(m**2, Dft) / L**2)
        return 8.0 * self.mat.C_L0 / L**2 * D_L * decay.sum(axis=0)

    def spectrum(self, numerics: NumericsConfig | None = None) -> DesorptionSpectrum:
        """Desorption rate series on the output grid.

        The averaged concentration is evaluated exactly from the series
        and differenced with the same conservative stencil used for the
        numerical solvers, so all models share one spectrum convention
        and the trapezoid area equals the desorbed mass.
        """
        numerics = numerics or NumericsConfig()
        L = self.protocol.L
        t = np.linspace(0.0, self.protocol.t_end, numerics.n_temperature_evals)
        T = temperature_at(self.protocol, t)
        m, _ = self._modes()
        Dft = dft_series(self.protocol, self.mat, t)
        D_L = diffusivity(self.mat, T)
        decay = np.exp(-(np.pi**2) * np.outer(m**2, Dft) / L**2)
        avg = 8.0 * self.mat.C_L0 / np.pi**2 * (decay.T @ (1.0 / m**2))
        deltaC = rate_from_average(avg, t)
        flux = deltaC * L / 2.0
        return DesorptionSpectrum(
            T=T,
            t=t,
            deltaC_total=deltaC,
            deltaC_lattice=deltaC,
            deltaC_traps=(),
            flux=flux,
            model="lattice",
            protocol=self.protocol,
        )

    def boundary_flux(self, t: float) -> float:
        """Outflow flux magnitude at x = +L/2, from the series gradient."""
        L = self.protocol.L
        m, _ = self._modes()
        decay = np.exp(-(np.pi**2) * m**2 * dft(self.protocol, self.mat, t) / L**2)
        D_L = diffusivity(self.mat, temperature_at(self.protocol, t))
        return float(4.0 * self.mat.C_L0 / L * D_L * decay.sum())


def lattice_spectrum(
    mat: MaterialParams,
    protocol: TestProtocol,
    numerics: NumericsConfig | None = None,
    n_terms: int | None = None,
) -> DesorptionSpectrum:
    """Convenience wrapper building a SeriesSolution and its spectrum."""
    numerics = numerics or NumericsConfig()
    sol = SeriesSolution(mat, protocol, n_terms or numerics.series_terms)
    return sol.spectrum(numerics)
