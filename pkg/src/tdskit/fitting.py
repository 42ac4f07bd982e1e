"""Inverse calibration of trap parameters by particle swarm optimization.

The search space is the (delta_H, N_T) pair of every trap, with N_T
handled in log10 because the admissible range spans seven decades.
Trapping energy stays pinned to the lattice activation energy and the
attempt frequencies are taken from the nominal traps, so only the
thermodynamics of each trap is inferred.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .constants import N_A
from .core import TrapSpec, equilibrium_constant, temperature_at
from .errors import SolverError, TdskitError
from .mcnabb_foster import McNabbFosterProblem, solve_mcnabb_foster
from .oriani import OrianiProblem, solve_oriani
from .postprocess import desorption_rate
from .spectrum import DesorptionSpectrum, ExperimentalSpectrum

__all__ = [
    "FitProblem",
    "FitResult",
    "PsoOptions",
    "make_bounds",
    "objective",
    "run_pso",
    "solve_initial_concentration",
]

# Global search box: binding enthalpy in J/mol, trap density as a
# fraction of the lattice site density.
GLOBAL_DELTA_H_BOUNDS = (-150.0e3, -15.0e3)
GLOBAL_NT_FRACTION_BOUNDS = (1e-8, 1e-1)

_PENALTY_FACTOR = 1e6


@dataclass(frozen=True)
class PsoOptions:
    """Swarm size, termination and update coefficients."""

    max_iterations: int = 150
    population: int = 400
    tolerance: float = 1e-11
    stall_window: int = 20
    seed: int = 0
    inertia: float = 0.7298
    cognitive: float = 1.4962
    social: float = 1.4962
    workers: int = 1

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class FitProblem:
    """An experimental spectrum plus the forward model to calibrate.

    The traps on the base problem act as nominal values: they seed the
    local bounds and supply the fixed kinetic fields (E_t, attempt
    frequencies) of every candidate.
    """

    base: OrianiProblem | McNabbFosterProblem
    exp: ExperimentalSpectrum
    bounds_mode: str = "global"
    update_CL0: bool = False

    def __post_init__(self):
        if self.bounds_mode not in ("global", "local"):
            raise ValueError("bounds_mode must be 'global' or 'local'")
        if not self.base.traps:
            raise ValueError("the base problem must carry at least one trap")
        if self.bounds_mode == "local":
            for tr in self.base.traps:
                if not (np.isfinite(tr.delta_H) and tr.delta_H != 0 and tr.N_T > 0):
                    raise ValueError("local bounds need finite nonzero nominals")

    @property
    def n_traps(self) -> int:
        return len(self.base.traps)


@dataclass(frozen=True)
class FitResult:
    """Best candidate found, its spectrum, and the convergence trace."""

    traps: tuple[TrapSpec, ...]
    best_f: float
    C_L0: float
    spectrum: DesorptionSpectrum
    iterations: np.ndarray
    f_counts: np.ndarray
    best_f_trace: np.ndarray
    mean_f_trace: np.ndarray
    stall_counts: np.ndarray
    termination: str

    def trap_areas(self) -> tuple[float, ...]:
        """Desorbed amount attributed to each trap [mol/m^3]."""
        return tuple(
            float(np.trapezoid(d, self.spectrum.t)) for d in self.spectrum.deltaC_traps
        )


def make_bounds(mode: str, nominal: tuple[TrapSpec, ...], N_L: float) -> np.ndarray:
    """Per-parameter [lo, hi] box, shape (2*n_traps, 2).

    Rows alternate (delta_H [J/mol], log10 N_T [sites/m^3]) per trap.
    Global mode ignores the nominal values; local mode brackets each at
    80-120 % of its magnitude, preserving the sign of delta_H.
    """
    rows = []
    if mode == "global":
        lo_nt, hi_nt = (np.log10(f * N_L) for f in GLOBAL_NT_FRACTION_BOUNDS)
        for _ in nominal:
            rows.append(GLOBAL_DELTA_H_BOUNDS)
            rows.append((lo_nt, hi_nt))
    elif mode == "local":
        for tr in nominal:
            if tr.delta_H == 0 or tr.N_T <= 0:
                raise ValueError("local bounds need nonzero nominal values")
            dh = sorted((0.8 * tr.delta_H, 1.2 * tr.delta_H))
            rows.append(tuple(dh))
            rows.append((np.log10(0.8 * tr.N_T), np.log10(1.2 * tr.N_T)))
    else:
        raise ValueError("mode must be 'global' or 'local'")
    return np.asarray(rows, dtype=float)


def solve_initial_concentration(
    traps: tuple[TrapSpec, ...], N_L: float, C_exp: float, T0: float
) -> float:
    """Initial lattice concentration consistent with a measured total.

    Splits ``C_exp`` between the lattice and equilibrated traps by
    solving C_L0 + sum N_T K C_L0 / (N_L + C_L0 (K - 1)) = C_exp for
    C_L0; the left side is strictly increasing so the root in
    (0, C_exp] is unique.
    """
    if C_exp < 0:
        raise ValueError("C_exp must be >= 0")
    if C_exp == 0.0 or not traps:
        return C_exp
    K = np.array([equilibrium_constant(tr.delta_H, T0) for tr in traps])
    NT = np.array([tr.N_T / N_A for tr in traps])

    def g(C):
        return C + float(np.sum(NT * K * C / (N_L / N_A + C * (K - 1.0)))) - C_exp

    if g(C_exp) <= 0:
        return C_exp
    try:
        return brentq(g, 0.0, C_exp, rtol=1e-12, maxiter=200)
    except ValueError as e:
        raise TdskitError(f"no feasible initial concentration: {e}") from e


def _decode(z: np.ndarray, base_traps: tuple[TrapSpec, ...]) -> tuple[TrapSpec, ...]:
    """Candidate vector -> trap list, keeping nominal kinetic fields."""
    out = []
    for i, tr in enumerate(base_traps):
        delta_H = float(z[2 * i])
        N_T = float(10.0 ** z[2 * i + 1])
        out.append(
            replace(tr, delta_H=delta_H, N_T=N_T, E_d=tr.E_t - delta_H, theta_T0=None)
        )
    return tuple(out)


def _forward(problem, traps: tuple[TrapSpec, ...], C_L0: float | None):
    mat = problem.mat if C_L0 is None else replace(problem.mat, C_L0=C_L0)
    kwargs = dict(
        mat=mat, traps=traps, protocol=problem.protocol, numerics=problem.numerics
    )
    if isinstance(problem, McNabbFosterProblem):
        return solve_mcnabb_foster(McNabbFosterProblem(**kwargs))
    return solve_oriani(OrianiProblem(**kwargs))


def _model_on_experiment(spec: DesorptionSpectrum, T_exp: np.ndarray) -> np.ndarray:
    """Model rate interpolated at the experimental temperatures.

    Only the ramp segment maps one-to-one between t and T; points
    outside the simulated range count as zero model output.
    """
    ramp = np.flatnonzero(np.diff(spec.T) > 0)
    i0 = ramp[0] if len(ramp) else 0
    return np.interp(T_exp, spec.T[i0:], spec.deltaC_total[i0:], left=0.0, right=0.0)


def objective(
    candidate: tuple[TrapSpec, ...],
    problem: FitProblem,
    C_L0: float | None = None,
) -> float:
    """Root-mean-square misfit of the forward model [mol/(m^3 s)].

    Solver failures return a large finite penalty so a swarm exploring
    extreme corners of the box keeps moving.
    """
    try:
        r = _forward(problem.base, candidate, C_L0)
    except SolverError:
        return _PENALTY_FACTOR * float(np.max(problem.exp.deltaC))
    spec = desorption_rate(r)
    model = _model_on_experiment(spec, problem.exp.T)
    return float(np.sqrt(np.mean((problem.exp.deltaC - model) ** 2)))


def _evaluate(z: np.ndarray, problem: FitProblem, T0: float):
    traps = _decode(z, problem.base.traps)
    C_L0 = None
    if problem.update_CL0:
        C_exp = problem.exp.total_content(problem.base.protocol.phi)
        C_L0 = solve_initial_concentration(traps, problem.base.mat.N_L, C_exp, T0)
    return objective(traps, problem, C_L0), C_L0


def run_pso(
    problem: FitProblem,
    opts: PsoOptions | None = None,
    progress=None,
) -> FitResult:
    """Minimize the spectrum misfit over the trap-parameter box.

    Standard inertia-weight particle swarm; deterministic for a fixed
    seed because all random draws come from one generator in a fixed
    order and evaluations are pure (the optional thread pool only
    parallelizes them, the reduction order never changes).

    ``progress``, when given, is called after every iteration with
    (iteration, f_count, best_f, mean_f, stall_count, best_traps).
    """
    opts = opts or PsoOptions()
    bounds = make_bounds(problem.bounds_mode, problem.base.traps, problem.base.mat.N_L)
    lo, hi = bounds[:, 0], bounds[:, 1]
    span = hi - lo
    dim = len(bounds)
    pop = opts.population
    T0 = temperature_at(problem.base.protocol, 0.0)

    rng = np.random.default_rng(opts.seed)
    x = lo + span * rng.random((pop, dim))
    v = span * (rng.random((pop, dim)) - 0.5)

    if opts.workers > 1:
        # LSODA is not re-entrant, so parallel evaluations need
        # separate processes; map preserves order, keeping the
        # reduction deterministic.
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial

        pool = ProcessPoolExecutor(max_workers=opts.workers)

        def evaluate_all(xs):
            res = pool.map(partial(_evaluate, problem=problem, T0=T0), xs)
            return np.array([fc for fc, _ in res])

    else:
        pool = None

        def evaluate_all(xs):
            return np.array([_evaluate(z, problem, T0)[0] for z in xs])

    penalty = _PENALTY_FACTOR * float(np.max(problem.exp.deltaC))
    try:
        f = evaluate_all(x)
        if np.all(f >= penalty):
            raise SolverError("every initial candidate failed to solve")
        f_count = pop
        p_best_x, p_best_f = x.copy(), f.copy()
        g = int(np.argmin(f))
        g_best_x, g_best_f = x[g].copy(), float(f[g])

        trace = {k: [] for k in ("it", "fc", "best", "mean", "stall")}
        stall = 0
        termination = "max_iterations"
        for it in range(1, opts.max_iterations + 1):
            r1 = rng.random((pop, dim))
            r2 = rng.random((pop, dim))
            v = (
                opts.inertia * v
                + opts.cognitive * r1 * (p_best_x - x)
                + opts.social * r2 * (g_best_x - x)
            )
            np.clip(v, -span, span, out=v)
            x = np.clip(x + v, lo, hi)

            f = evaluate_all(x)
            f_count += pop
            if np.all(f >= penalty):
                raise SolverError(f"every candidate failed at iteration {it}")

            improved = f < p_best_f
            p_best_x[improved] = x[improved]
            p_best_f[improved] = f[improved]
            g = int(np.argmin(p_best_f))
            new_best = float(p_best_f[g])
            if g_best_f - new_best > opts.tolerance:
                stall = 0
            else:
                stall += 1
            if new_best < g_best_f:
                g_best_f, g_best_x = new_best, p_best_x[g].copy()

            trace["it"].append(it)
            trace["fc"].append(f_count)
            trace["best"].append(g_best_f)
            trace["mean"].append(float(np.mean(f)))
            trace["stall"].append(stall)
            if progress is not None:
                progress(
                    it, f_count, g_best_f, trace["mean"][-1], stall,
                    _decode(g_best_x, problem.base.traps),
                )
            if stall >= opts.stall_window:
                termination = "stall"
                break
    finally:
        if pool is not None:
            pool.shutdown()

    best_traps = _decode(g_best_x, problem.base.traps)
    best_f, C_L0 = _evaluate(g_best_x, problem, T0)
    if C_L0 is None:
        C_L0 = problem.base.mat.C_L0
    spec = desorption_rate(
        _forward(problem.base, best_traps, C_L0 if problem.update_CL0 else None)
    )
    return FitResult(
        traps=best_traps,
        best_f=g_best_f,
        C_L0=C_L0,
        spectrum=spec,
        iterations=np.array(trace["it"]),
        f_counts=np.array(trace["fc"]),
        best_f_trace=np.array(trace["best"]),
        mean_f_trace=np.array(trace["mean"]),
        stall_counts=np.array(trace["stall"]),
        termination=termination,
    )
