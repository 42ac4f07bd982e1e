"""Domain types and elementary physics of hydrogen transport in metals.

All temperatures are kelvin, energies J/mol, lengths m, densities sites/m^3
and concentrations mol/m^3 unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .constants import MAX_TRAPS, N_A, R

__all__ = [
    "MaterialParams",
    "TrapSpec",
    "TestProtocol",
    "NumericsConfig",
    "diffusivity",
    "temperature_at",
    "ramp_rate_at",
    "sieverts_concentration",
    "lattice_site_density",
    "equilibrium_constant",
    "oriani_trap_occupancy",
]


@dataclass(frozen=True)
class MaterialParams:
    """Lattice transport and bookkeeping constants of the host metal.

    Parameters
    ----------
    E_L : float
        Activation energy for lattice diffusion [J/mol].
    D_0 : float
        Pre-exponential diffusion factor [m^2/s].
    M_M : float
        Molar mass [g/mol].
    rho_M : float
        Mass density [g/cm^3].
    N_L : float
        Lattice (NILS) site density [sites/m^3].
    C_L0 : float
        Initial lattice hydrogen concentration [mol/m^3].
    """

    E_L: float
    D_0: float
    M_M: float
    rho_M: float
    N_L: float
    C_L0: float

    def __post_init__(self):
        if self.E_L < 0:
            raise ValueError("E_L must be >= 0")
        for name in ("D_0", "M_M", "rho_M", "N_L"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.C_L0 < 0:
            raise ValueError("C_L0 must be >= 0")
        if self.theta_L0 >= 1.0:
            raise ValueError(
                "initial lattice occupancy C_L0*N_A/N_L must be below 1, "
                f"got {self.theta_L0:g}"
            )

    @property
    def theta_L0(self) -> float:
        """Initial lattice site occupancy fraction [-]."""
        return self.C_L0 * N_A / self.N_L


@dataclass(frozen=True)
class TrapSpec:
    """One trap type: density, energies and attempt frequencies.

    ``delta_H`` is the (negative) binding energy and must equal
    ``E_t - E_d``.  ``theta_T0`` optionally overrides the initial trap
    occupancy; when ``None`` the solvers start from local equilibrium
    with the lattice at the initial temperature.
    """

    N_T: float
    delta_H: float
    E_t: float
    E_d: float
    nu_t: float = 1.0e13
    nu_d: float = 1.0e13
    theta_T0: float | None = None

    def __post_init__(self):
        if self.N_T <= 0:
            raise ValueError("N_T must be > 0")
        if self.delta_H >= 0:
            raise ValueError("delta_H must be negative (binding)")
        if self.nu_t <= 0 or self.nu_d <= 0:
            raise ValueError("attempt frequencies must be > 0")
        if self.E_t < 0 or self.E_d < 0:
            raise ValueError("activation energies must be >= 0")
        resid = abs(self.delta_H - (self.E_t - self.E_d))
        if resid > 1e-6 * max(1.0, abs(self.delta_H)):
            raise ValueError(
                f"delta_H = E_t - E_d violated: {self.delta_H} vs "
                f"{self.E_t - self.E_d}"
            )
        if self.theta_T0 is not None and not 0.0 <= self.theta_T0 <= 1.0:
            raise ValueError("theta_T0 must lie in [0, 1]")

    @classmethod
    def from_binding_energy(
        cls,
        N_T: float,
        delta_H: float,
        E_t: float = 0.0,
        nu: float = 1.0e13,
        theta_T0: float | None = None,
    ) -> "TrapSpec":
        """Build a trap from its binding energy.

        ``E_t`` conventionally defaults to the lattice activation energy
        of the host material; ``E_d`` follows from ``E_t - delta_H``.
        """
        return cls(
            N_T=N_T,
            delta_H=delta_H,
            E_t=E_t,
            E_d=E_t - delta_H,
            nu_t=nu,
            nu_d=nu,
            theta_T0=theta_T0,
        )

    def with_binding_energy(self, delta_H: float) -> "TrapSpec":
        """Return a copy with a new binding energy, keeping E_t fixed."""
        return replace(self, delta_H=delta_H, E_d=self.E_t - delta_H)


def validate_traps(traps) -> tuple:
    traps = tuple(traps)
    if len(traps) > MAX_TRAPS:
        raise ValueError(f"at most {MAX_TRAPS} trap types supported")
    return traps


@dataclass(frozen=True)
class TestProtocol:
    """Specimen geometry and temperature programme of a desorption test."""

    L: float
    phi: float
    t_rest: float = 0.0
    T_min: float = 293.0
    T_max: float = 800.0

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("L must be > 0")
        if self.phi <= 0:
            raise ValueError("phi must be > 0")
        if self.t_rest < 0:
            raise ValueError("t_rest must be >= 0")
        if not self.T_max > self.T_min > 0:
            raise ValueError("need T_max > T_min > 0")

    @property
    def t_end(self) -> float:
        """Total test duration: rest segment plus the full ramp [s]."""
        return self.t_rest + (self.T_max - self.T_min) / self.phi


@dataclass(frozen=True)
class NumericsConfig:
    """Discretisation and integrator settings."""

    n_temperature_evals: int = 200
    n_elements: int = 100
    rel_tol: float = 1e-6
    abs_tol: float = 1e-10
    series_terms: int = 800

    def __post_init__(self):
        if self.n_temperature_evals < 2:
            raise ValueError("n_temperature_evals must be >= 2")
        if self.n_elements < 4 or self.n_elements % 2:
            raise ValueError("n_elements must be even and >= 4")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.series_terms < 1:
            raise ValueError("series_terms must be >= 1")


def diffusivity(mat: MaterialParams, T):
    """Arrhenius lattice diffusion coefficient D_0*exp(-E_L/(R*T)) [m^2/s]."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise ValueError("temperature must be > 0 K")
    out = mat.D_0 * np.exp(-mat.E_L / (R * T))
    return out if out.ndim else float(out)


def temperature_at(protocol: TestProtocol, t):
    """Temperature of the schedule at time ``t`` [K].

    Constant at ``T_min`` during the rest segment, then a linear ramp
    at rate ``phi``.  The simulation end (where T reaches ``T_max``)
    is not enforced here.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("time must be >= 0")
    out = protocol.T_min + protocol.phi * np.maximum(t - protocol.t_rest, 0.0)
    return out if out.ndim else float(out)


def ramp_rate_at(protocol: TestProtocol, t):
    """dT/dt of the schedule: 0 while resting, phi while ramping [K/s]."""
    t = np.asarray(t, dtype=float)
    out = np.where(t >= protocol.t_rest, protocol.phi, 0.0)
    return out if out.ndim else float(out)


def sieverts_concentration(S: float, p_H2: float) -> float:
    """Equilibrium lattice concentration S*sqrt(p_H2) [mol/m^3].

    ``S`` is the solubility [mol/(m^3 sqrt(MPa))] and ``p_H2`` the
    hydrogen gas pressure [MPa].
    """
    if S < 0 or p_H2 < 0:
        raise ValueError("solubility and pressure must be >= 0")
    return S * np.sqrt(p_H2)


def lattice_site_density(beta: float, rho_M: float, M_M: float) -> float:
    """NILS density beta*N_A*rho_M/M_M [sites/m^3].

    ``beta`` is the number of interstitial sites per lattice atom,
    ``rho_M`` the density [g/cm^3], ``M_M`` the molar mass [g/mol].
    Convenience helper only; solvers take N_L as a direct input.
    """
    if beta <= 0 or rho_M <= 0 or M_M <= 0:
        raise ValueError("all inputs must be > 0")
    rho_kg_m3 = rho_M * 1e3
    M_kg_mol = M_M * 1e-3
    return beta * N_A * rho_kg_m3 / M_kg_mol


def equilibrium_constant(delta_H: float, T):
    """Trap/lattice equilibrium constant exp(-delta_H/(R*T)) [-]."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise ValueError("temperature must be > 0 K")
    out = np.exp(-delta_H / (R * T))
    return out if out.ndim else float(out)


def oriani_trap_occupancy(theta_L, K_T):
    """Equilibrium trap occupancy for lattice occupancy ``theta_L``.

    Solves theta_T/(1-theta_T) = K_T*theta_L/(1-theta_L); the result is
    always in [0, 1).
    """
    theta_L = np.asarray(theta_L, dtype=float)
    if np.any(theta_L < 0) or np.any(theta_L >= 1):
        raise ValueError("theta_L must lie in [0, 1)")
    r = K_T * theta_L / (1.0 - theta_L)
    out = r / (1.0 + r)
    return out if out.ndim else float(out)
