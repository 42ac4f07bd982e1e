"""Equilibrium-trapping (single reduced PDE) desorption solver.

Trap and lattice populations are assumed locally equilibrated, which
folds all trap kinetics into an occupancy-dependent capacity factor and
a heating-rate source term, leaving one nonlinear diffusion PDE in the
lattice occupancy.  Solved by method of lines on a uniform grid with
adaptive stiff (LSODA) integration in non-dimensional variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .constants import N_A, R
from .core import (
    MaterialParams,
    NumericsConfig,
    TestProtocol,
    TrapSpec,
    oriani_trap_occupancy,
    validate_traps,
)
from .errors import SolverError
from .nondim import nondimensionalize
from .result import SimulationResult

__all__ = ["OrianiProblem", "solve_oriani"]

# Occupancies may under/overshoot by integrator noise; clamp up to this
# amount, fail beyond it.
_CLAMP_TOL = 1e-2


@dataclass(frozen=True)
class OrianiProblem:
    """Forward problem for the equilibrium-trapping model.

    Trap kinetic fields (E_t, E_d, nu) are validated by TrapSpec but
    unused here; only N_T and delta_H enter.
    """

    mat: MaterialParams
    traps: tuple[TrapSpec, ...] = field(default_factory=tuple)
    protocol: TestProtocol | None = None
    numerics: NumericsConfig = field(default_factory=NumericsConfig)

    def __post_init__(self):
        object.__setattr__(self, "traps", validate_traps(self.traps))
        if self.protocol is None:
            raise ValueError("protocol is required")


def _clamp(theta: np.ndarray, lo: float, hi: float, what: str) -> np.ndarray:
    low, high = theta.min(), theta.max()
    if low < lo - _CLAMP_TOL or high > hi + _CLAMP_TOL:
        raise SolverError(
            f"{what} escaped [{lo}, {hi}]: range [{low:.3e}, {high:.3e}]"
        )
    return np.clip(theta, lo, hi)


def solve_oriani(p: OrianiProblem) -> SimulationResult:
    """Integrate the reduced equilibrium PDE and return dimensional fields."""
    mat, protocol, numerics = p.mat, p.protocol, p.numerics
    nd = nondimensionalize(mat, p.traps, protocol)
    theta_L0 = nd.theta_L0

    n_nodes = numerics.n_elements + 1
    dxb = 1.0 / numerics.n_elements
    inv_dx2 = 1.0 / dxb**2

    t_end_bar = protocol.t_end * mat.D_0 / protocol.L**2
    t_rest_bar = nd.t_rest_bar
    phi_bar = nd.phi_bar
    E_L_bar = nd.E_L_bar
    dH_bar = np.array([tb.delta_H_bar for tb in nd.traps])
    NT_bar = np.array([tb.N_T_bar for tb in nd.traps])
    has_traps = len(nd.traps) > 0

    def rhs(tb, th):
        Tb = 1.0 + phi_bar * max(tb - t_rest_bar, 0.0)
        Tdot = phi_bar if tb >= t_rest_bar else 0.0
        Db = np.exp(-E_L_bar / Tb)
        dth = np.zeros_like(th)
        lap = (th[:-2] - 2.0 * th[1:-1] + th[2:]) * inv_dx2
        if has_traps:
            u = th[1:-1]
            K = np.exp(-dH_bar / Tb)
            denom = (1.0 + np.outer(K - 1.0, u)) ** 2
            cap = 1.0 + (NT_bar[:, None] * K[:, None] / denom).sum(axis=0)
            if Tdot:
                heat = (
                    (K * NT_bar * dH_bar)[:, None]
                    * (u - u * u)
                    / (Tb * Tb * denom)
                ).sum(axis=0) * Tdot
            else:
                heat = 0.0
            dth[1:-1] = (Db * lap - heat) / cap
        else:
            dth[1:-1] = Db * lap
        return dth

    th0 = np.full(n_nodes, theta_L0)
    th0[0] = th0[-1] = 0.0
    t_eval_bar = np.linspace(0.0, t_end_bar, numerics.n_temperature_evals)

    sol = solve_ivp(
        rhs,
        (0.0, t_end_bar),
        th0,
        method="LSODA",
        t_eval=t_eval_bar,
        rtol=numerics.rel_tol,
        atol=numerics.abs_tol,
        lband=1,
        uband=1,
    )
    if not sol.success:
        raise SolverError(f"stiff integration failed: {sol.message}")

    theta = sol.y.T  # (nt, nx)
    # the t=0 frame reports the uniform pre-test state (the boundary
    # value jumps to 0 only for t > 0)
    theta[0, :] = theta_L0
    theta = _clamp(theta, 0.0, 1.0, "lattice occupancy")

    t = t_eval_bar * protocol.L**2 / mat.D_0
    T = protocol.T_min + protocol.phi * np.maximum(t - protocol.t_rest, 0.0)
    C_L = theta * mat.N_L / N_A

    C_T = []
    for tr in p.traps:
        K = np.exp(-tr.delta_H / (R * T))[:, None]
        theta_T = oriani_trap_occupancy(theta, K)
        C_T.append(theta_T * tr.N_T / N_A)

    x = np.linspace(-protocol.L / 2, protocol.L / 2, n_nodes)
    return SimulationResult(
        x=x,
        t=t,
        T=T,
        C_L=C_L,
        C_T=tuple(C_T),
        model="oriani",
        mat=mat,
        traps=p.traps,
        protocol=protocol,
    )
