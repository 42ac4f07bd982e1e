// Domain types mirroring the service's project schema. The UI never
// computes physics; these shapes only carry numbers between the form
// and the service.

export interface Material {
  E_L: number; // lattice activation energy [J/mol]
  D_0: number; // pre-exponential diffusivity [m2/s]
  M_M: number; // molar mass of the metal [g/mol]
  rho_M: number; // mass density [g/cm3]
  N_L: number; // lattice site density [1/m3]
  C_L0: number; // initial lattice hydrogen [mol/m3]
}

export interface Trap {
  N_T: number; // trap site density [1/m3]
  delta_H: number; // binding enthalpy, negative [J/mol]
  E_t: number; // trapping activation energy [J/mol]
  E_d: number; // detrapping activation energy [J/mol]
  nu_t: number; // trapping attempt frequency [1/s]
  nu_d: number; // detrapping attempt frequency [1/s]
  theta_T0?: number; // optional initial occupancy override
}

export interface Protocol {
  L: number; // slab thickness [m]
  phi: number; // heating rate [K/s]
  t_rest: number; // resting time before the ramp [s]
  T_min: number; // start temperature [K]
  T_max: number; // end temperature [K]
}

export interface Numerics {
  n_temperature_evals: number;
  n_elements: number;
  rel_tol: number;
  abs_tol: number;
  series_terms: number;
}

export type ModelName = "lattice" | "oriani" | "mcnabb-foster";

export interface Experiment {
  T: number[]; // [K]
  deltaC: number[]; // [mol/m3/s]
  source: string;
}

export interface Spectrum {
  model: string;
  T: number[]; // [K]
  t: number[]; // [s]
  deltaC_total: number[]; // [mol/m3/s]
  deltaC_lattice: number[];
  deltaC_traps: number[][];
  flux?: number[]; // [mol/m2/s]
  protocol?: Protocol;
}

export interface TracePoint {
  iteration: number;
  f_count: number;
  best_f: number;
  mean_f: number;
  stall: number;
}

export interface FitResult {
  traps: Trap[];
  best_f: number; // [mol/m3/s]
  C_L0: number; // [mol/m3]
  termination: string;
  spectrum: Spectrum;
  trace: {
    iteration: number[];
    f_count: number[];
    best_f: number[];
    mean_f: number[];
    stall: number[];
  };
}

export interface Project {
  material: Material;
  protocol: Protocol;
  numerics: Numerics;
  traps: Trap[];
  models: ModelName[];
  display_units: Record<string, string>;
  experiment?: Experiment;
  fit?: FitResult;
}

export type JobStatus = "queued" | "running" | "done" | "failed" | "cancelled";

export type FitEvent =
  | ({ type: "iteration" } & TracePoint)
  | { type: "status"; status: JobStatus; error?: string };

export interface Overlay {
  model: string;
  spectrum: Spectrum;
  visible: boolean;
}
