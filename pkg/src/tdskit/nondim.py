"""Non-dimensionalization of the transport problem.

Reference scales: temperature T0 (= T_min), length L, diffusivity D_0,
energy R*T0 and site density N_L.  Space maps to x/L and time to
t*D_0/L^2; frequencies scale as nu*L^2/D_0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constants import R
from .core import MaterialParams, TestProtocol, TrapSpec, validate_traps

__all__ = ["NondimParams", "nondimensionalize", "dimensionalize"]


@dataclass(frozen=True)
class TrapBar:
    """Non-dimensional parameters of one trap type."""

    delta_H_bar: float
    N_T_bar: float
    E_t_bar: float
    E_d_bar: float
    nu_t_bar: float
    nu_d_bar: float
    theta_T0: float | None = None


@dataclass(frozen=True)
class NondimParams:
    """Dimensionless problem parameters plus the reference scales.

    The reference scales (T0, L, D_0, N_L and the bookkeeping-only
    M_M/rho_M/C_L0) are retained so that ``dimensionalize`` is an exact
    inverse of ``nondimensionalize``.
    """

    phi_bar: float
    E_L_bar: float
    theta_L0: float
    t_rest_bar: float
    T_max_bar: float
    traps: tuple[TrapBar, ...] = field(default_factory=tuple)
    # reference scales
    T0: float = 1.0
    L: float = 1.0
    D_0: float = 1.0
    N_L: float = 1.0
    M_M: float = 1.0
    rho_M: float = 1.0


def nondimensionalize(
    mat: MaterialParams, traps, protocol: TestProtocol
) -> NondimParams:
    """Map a dimensional problem onto its dimensionless parameters."""
    traps = validate_traps(traps)
    T0 = protocol.T_min
    L, D0 = protocol.L, mat.D_0
    RT0 = R * T0
    freq_scale = L * L / D0
    trap_bars = tuple(
        TrapBar(
            delta_H_bar=tr.delta_H / RT0,
            N_T_bar=tr.N_T / mat.N_L,
            E_t_bar=tr.E_t / RT0,
            E_d_bar=tr.E_d / RT0,
            nu_t_bar=tr.nu_t * freq_scale,
            nu_d_bar=tr.nu_d * freq_scale,
            theta_T0=tr.theta_T0,
        )
        for tr in traps
    )
    return NondimParams(
        phi_bar=protocol.phi * L * L / (T0 * D0),
        E_L_bar=mat.E_L / RT0,
        theta_L0=mat.theta_L0,
        t_rest_bar=protocol.t_rest * D0 / (L * L),
        T_max_bar=protocol.T_max / T0,
        traps=trap_bars,
        T0=T0,
        L=L,
        D_0=D0,
        N_L=mat.N_L,
        M_M=mat.M_M,
        rho_M=mat.rho_M,
    )


def dimensionalize(
    p: NondimParams,
) -> tuple[MaterialParams, tuple[TrapSpec, ...], TestProtocol]:
    """Exact inverse of :func:`nondimensionalize`."""
    from .constants import N_A

    T0, L, D0 = p.T0, p.L, p.D_0
    RT0 = R * T0
    freq_scale = L * L / D0
    mat = MaterialParams(
        E_L=p.E_L_bar * RT0,
        D_0=D0,
        M_M=p.M_M,
        rho_M=p.rho_M,
        N_L=p.N_L,
        C_L0=p.theta_L0 * p.N_L / N_A,
    )
    traps = tuple(
        TrapSpec(
            N_T=tb.N_T_bar * p.N_L,
            delta_H=tb.delta_H_bar * RT0,
            E_t=tb.E_t_bar * RT0,
            E_d=tb.E_d_bar * RT0,
            nu_t=tb.nu_t_bar / freq_scale,
            nu_d=tb.nu_d_bar / freq_scale,
            theta_T0=tb.theta_T0,
        )
        for tb in p.traps
    )
    protocol = TestProtocol(
        L=L,
        phi=p.phi_bar * T0 * D0 / (L * L),
        t_rest=p.t_rest_bar * L * L / D0,
        T_min=T0,
        T_max=p.T_max_bar * T0,
    )
    return mat, traps, protocol
