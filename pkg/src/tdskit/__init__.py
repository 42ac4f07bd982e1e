"""tdskit: simulation and inverse calibration of thermal desorption tests."""

from .analytic import SeriesSolution, dft, dft_series, lattice_spectrum
from .constants import M_H, MAX_TRAPS, N_A, R
from .core import (
    MaterialParams,
    NumericsConfig,
    TestProtocol,
    TrapSpec,
    diffusivity,
    equilibrium_constant,
    lattice_site_density,
    oriani_trap_occupancy,
    ramp_rate_at,
    sieverts_concentration,
    temperature_at,
)
from .errors import DataFormatError, SolverError, TdskitError
from .fitting import (
    FitProblem,
    FitResult,
    PsoOptions,
    make_bounds,
    objective,
    run_pso,
    solve_initial_concentration,
)
from .mcnabb_foster import (
    McNabbFosterProblem,
    initial_trap_occupancy,
    rate_constants,
    solve_mcnabb_foster,
)
from .nondim import NondimParams, dimensionalize, nondimensionalize
from .oriani import OrianiProblem, solve_oriani
from .project import (
    Project,
    export_spectrum,
    load_experiment,
    load_project,
    save_project,
)
from .postprocess import (
    boundary_flux,
    desorption_rate,
    inventory,
    mass_balance_residual,
)
from .result import SimulationResult
from .spectrum import DesorptionSpectrum, ExperimentalSpectrum
from .units import UnitError, convert

__version__ = "0.1.0"
