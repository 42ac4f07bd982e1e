// Session state for the single-page app: one project under edit,
// optional experimental overlay, simulation overlays and the fit
// console. All physics numbers come from the service; this module
// only moves them around.

import { FitConsole } from "./trace";
import { projectToPayload } from "./payload";
import { validateProject, type FieldError } from "./validate";
import type { Experiment, Overlay, Project, Spectrum, Trap } from "./types";

export function defaultProject(): Project {
  return {
    // bcc iron defaults; the service accepts any consistent set
    material: {
      E_L: 5690,
      D_0: 7.23e-8,
      M_M: 55.847,
      rho_M: 7.8474,
      N_L: 5.1e29,
      C_L0: 0.06,
    },
    protocol: { L: 1e-3, phi: 0.5, t_rest: 0, T_min: 293, T_max: 900 },
    numerics: {
      n_temperature_evals: 200,
      n_elements: 100,
      rel_tol: 1e-6,
      abs_tol: 1e-10,
      series_terms: 800,
    },
    traps: [],
    models: ["oriani"],
    display_units: {},
  };
}

export function defaultTrap(E_L: number): Trap {
  const delta_H = -40e3;
  return {
    N_T: 1e24,
    delta_H,
    E_t: E_L,
    E_d: E_L - delta_H,
    nu_t: 1e13,
    nu_d: 1e13,
  };
}

export class SessionState {
  project: Project = defaultProject();
  overlays: Overlay[] = [];
  activeJobId: string | null = null;
  fitConsole = new FitConsole();

  get errors(): FieldError[] {
    return validateProject(this.project);
  }

  /** Submission gate: simulate/fit buttons stay disabled while edits
   * violate an invariant. */
  get canSubmit(): boolean {
    return this.errors.length === 0;
  }

  toProjectPayload(): Record<string, unknown> {
    return projectToPayload(this.project);
  }

  addTrap(): void {
    this.project.traps.push(defaultTrap(this.project.material.E_L));
  }

  removeTrap(index: number): void {
    this.project.traps.splice(index, 1);
  }

  setExperiment(experiment: Experiment): void {
    this.project.experiment = experiment;
  }

  addOverlay(spectrum: Spectrum): void {
    this.overlays.push({ model: spectrum.model, spectrum, visible: true });
  }

  clearOverlays(): void {
    this.overlays = [];
  }

  startFit(jobId: string): void {
    this.activeJobId = jobId;
    this.fitConsole = new FitConsole();
  }

  /** Copy a finished fit's traps back into the editable panel. */
  applyFit(traps: Trap[], C_L0: number): void {
    this.project.traps = traps.map((t) => ({ ...t }));
    this.project.material.C_L0 = C_L0;
  }
}
