"""Kinetic trapping solver: diffusion PDE coupled to per-trap rate ODEs.

Each node carries the lattice occupancy plus one trap occupancy per
trap type, integrated as a single monolithic stiff system (capture and
release rates at Debye-scale attempt frequencies make operator
splitting impractical).  The state is interleaved node-wise so the
Jacobian stays banded.
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
    equilibrium_constant,
    oriani_trap_occupancy,
    validate_traps,
)
from .errors import SolverError
from .nondim import nondimensionalize
from .oriani import _clamp
from .result import SimulationResult

__all__ = [
    "McNabbFosterProblem",
    "initial_trap_occupancy",
    "rate_constants",
    "solve_mcnabb_foster",
]

# Warn threshold for the N_T << N_L reduction of the kinetic equation.
_DENSITY_RATIO_WARN = 0.05


@dataclass(frozen=True)
class McNabbFosterProblem:
    """Forward problem for the kinetic trapping model.

    An empty trap list degenerates to pure numerical lattice diffusion
    (the "no sink term" configuration).
    """

    mat: MaterialParams
    traps: tuple[TrapSpec, ...] = field(default_factory=tuple)
    protocol: TestProtocol | None = None
    numerics: NumericsConfig = field(default_factory=NumericsConfig)

    def __post_init__(self):
        object.__setattr__(self, "traps", validate_traps(self.traps))
        if self.protocol is None:
            raise ValueError("protocol is required")


def initial_trap_occupancy(trap: TrapSpec, mat: MaterialParams, T0: float) -> float:
    """Starting trap occupancy: explicit override, else equilibrium at T0."""
    if trap.theta_T0 is not None:
        return trap.theta_T0
    K = equilibrium_constant(trap.delta_H, T0)
    return oriani_trap_occupancy(mat.theta_L0, K)


def rate_constants(trap: TrapSpec, T):
    """Capture and release rate constants (k, p) at temperature T [1/s]."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise ValueError("temperature must be > 0 K")
    k = trap.nu_t * np.exp(-trap.E_t / (R * T))
    pr = trap.nu_d * np.exp(-trap.E_d / (R * T))
    if k.ndim:
        return k, pr
    return float(k), float(pr)


def solve_mcnabb_foster(p: McNabbFosterProblem) -> SimulationResult:
    """Integrate the coupled diffusion/trap-kinetics system."""
    mat, protocol, numerics = p.mat, p.protocol, p.numerics
    nd = nondimensionalize(mat, p.traps, protocol)
    theta_L0 = nd.theta_L0
    n_traps = len(p.traps)

    for tr in p.traps:
        if tr.N_T / mat.N_L > _DENSITY_RATIO_WARN:
            import warnings

            warnings.warn(
                f"N_T/N_L = {tr.N_T / mat.N_L:.3g} is large; the reduced "
                "kinetic equation assumes sparse traps",
                stacklevel=2,
            )

    n_nodes = numerics.n_elements + 1
    width = 1 + n_traps
    dxb = 1.0 / numerics.n_elements
    inv_dx2 = 1.0 / dxb**2

    t_end_bar = protocol.t_end * mat.D_0 / protocol.L**2
    t_rest_bar = nd.t_rest_bar
    phi_bar = nd.phi_bar
    E_L_bar = nd.E_L_bar
    T0 = protocol.T_min
    Et_bar = np.array([tb.E_t_bar for tb in nd.traps])
    Ed_bar = np.array([tb.E_d_bar for tb in nd.traps])
    nut_bar = np.array([tb.nu_t_bar for tb in nd.traps])
    nud_bar = np.array([tb.nu_d_bar for tb in nd.traps])
    NT_bar = np.array([tb.N_T_bar for tb in nd.traps])

    def rhs(tb, y):
        Tb = 1.0 + phi_bar * max(tb - t_rest_bar, 0.0)
        Db = np.exp(-E_L_bar / Tb)
        Y = y.reshape(n_nodes, width)
        th = Y[:, 0]
        dY = np.zeros_like(Y)
        lap = (th[:-2] - 2.0 * th[1:-1] + th[2:]) * inv_dx2
        if n_traps:
            w = Y[:, 1:]
            kb = nut_bar * np.exp(-Et_bar / Tb)
            pb = nud_bar * np.exp(-Ed_bar / Tb)
            thc = th[:, None]
            dw = kb * thc * (1.0 - w) - pb * w * (1.0 - thc)
            dY[:, 1:] = dw
            dY[1:-1, 0] = Db * lap - (NT_bar * dw[1:-1, :]).sum(axis=1)
        else:
            dY[1:-1, 0] = Db * lap
        return dY.ravel()

    y0 = np.zeros((n_nodes, width))
    y0[:, 0] = theta_L0
    y0[0, 0] = y0[-1, 0] = 0.0
    theta_T0 = [initial_trap_occupancy(tr, mat, T0) for tr in p.traps]
    for i, th0 in enumerate(theta_T0):
        y0[:, 1 + i] = th0

    t_eval_bar = np.linspace(0.0, t_end_bar, numerics.n_temperature_evals)
    sol = solve_ivp(
        rhs,
        (0.0, t_end_bar),
        y0.ravel(),
        method="LSODA",
        t_eval=t_eval_bar,
        rtol=numerics.rel_tol,
        atol=numerics.abs_tol,
        lband=width,
        uband=width,
    )
    if not sol.success:
        raise SolverError(f"stiff integration failed: {sol.message}")

    Y = sol.y.T.reshape(len(t_eval_bar), n_nodes, width)
    theta = Y[:, :, 0]
    theta[0, :] = theta_L0  # uniform pre-test state at t=0
    theta = _clamp(theta, 0.0, 1.0, "lattice occupancy")

    t = t_eval_bar * protocol.L**2 / mat.D_0
    T = protocol.T_min + protocol.phi * np.maximum(t - protocol.t_rest, 0.0)
    C_L = theta * mat.N_L / N_A

    C_T = []
    for i, tr in enumerate(p.traps):
        w = _clamp(Y[:, :, 1 + i], 0.0, 1.0, f"trap {i + 1} occupancy")
        C_T.append(w * tr.N_T / N_A)

    x = np.linspace(-protocol.L / 2, protocol.L / 2, n_nodes)
    return SimulationResult(
        x=x,
        t=t,
        T=T,
        C_L=C_L,
        C_T=tuple(C_T),
        model="mcnabb-foster",
        mat=mat,
        traps=p.traps,
        protocol=protocol,
    )
