// Inline validation mirroring the service's type invariants, so bad
// edits are caught before a request is built. The service re-checks
// everything; this is purely for immediate feedback.

import type { Material, Numerics, Project, Protocol, Trap } from "./types";

export interface FieldError {
  field: string;
  message: string;
}

const AVOGADRO = 6.02214e23;
export const MAX_TRAPS = 6;

function positive(
  errors: FieldError[],
  prefix: string,
  fields: Record<string, number>,
): void {
  for (const [name, value] of Object.entries(fields)) {
    if (!Number.isFinite(value) || value <= 0) {
      errors.push({ field: `${prefix}.${name}`, message: "must be > 0" });
    }
  }
}

export function validateMaterial(m: Material): FieldError[] {
  const errors: FieldError[] = [];
  positive(errors, "material", {
    D_0: m.D_0,
    M_M: m.M_M,
    rho_M: m.rho_M,
    N_L: m.N_L,
  });
  if (!Number.isFinite(m.E_L) || m.E_L < 0) {
    errors.push({ field: "material.E_L", message: "must be >= 0" });
  }
  if (!Number.isFinite(m.C_L0) || m.C_L0 < 0) {
    errors.push({ field: "material.C_L0", message: "must be >= 0" });
  }
  if ((m.C_L0 * AVOGADRO) / m.N_L >= 1) {
    errors.push({
      field: "material.C_L0",
      message: "initial content would overfill the lattice",
    });
  }
  return errors;
}

export function validateTrap(t: Trap, index: number): FieldError[] {
  const errors: FieldError[] = [];
  const prefix = `traps[${index}]`;
  positive(errors, prefix, { N_T: t.N_T, nu_t: t.nu_t, nu_d: t.nu_d });
  if (!Number.isFinite(t.delta_H) || t.delta_H >= 0) {
    errors.push({
      field: `${prefix}.delta_H`,
      message: "binding enthalpy must be negative",
    });
  }
  if (!Number.isFinite(t.E_t) || t.E_t < 0) {
    errors.push({ field: `${prefix}.E_t`, message: "must be >= 0" });
  }
  const expected = t.E_t - t.delta_H;
  if (Math.abs(t.E_d - expected) > 1e-6 * Math.max(1, Math.abs(expected))) {
    errors.push({
      field: `${prefix}.E_d`,
      message: `must equal E_t - delta_H = ${expected}`,
    });
  }
  if (
    t.theta_T0 !== undefined &&
    (!Number.isFinite(t.theta_T0) || t.theta_T0 < 0 || t.theta_T0 > 1)
  ) {
    errors.push({
      field: `${prefix}.theta_T0`,
      message: "occupancy must lie in [0, 1]",
    });
  }
  return errors;
}

export function validateProtocol(p: Protocol): FieldError[] {
  const errors: FieldError[] = [];
  positive(errors, "protocol", { L: p.L, phi: p.phi, T_min: p.T_min });
  if (!Number.isFinite(p.t_rest) || p.t_rest < 0) {
    errors.push({ field: "protocol.t_rest", message: "must be >= 0" });
  }
  if (!(p.T_max > p.T_min)) {
    errors.push({
      field: "protocol.T_max",
      message: "end temperature must exceed the start temperature",
    });
  }
  return errors;
}

export function validateNumerics(n: Numerics): FieldError[] {
  const errors: FieldError[] = [];
  if (!Number.isInteger(n.n_elements) || n.n_elements < 4 || n.n_elements % 2) {
    errors.push({
      field: "numerics.n_elements",
      message: "must be an even integer >= 4",
    });
  }
  if (!Number.isInteger(n.n_temperature_evals) || n.n_temperature_evals < 2) {
    errors.push({
      field: "numerics.n_temperature_evals",
      message: "must be an integer >= 2",
    });
  }
  positive(errors, "numerics", { rel_tol: n.rel_tol, abs_tol: n.abs_tol });
  if (!Number.isInteger(n.series_terms) || n.series_terms < 1) {
    errors.push({
      field: "numerics.series_terms",
      message: "must be an integer >= 1",
    });
  }
  return errors;
}

export function validateProject(p: Project): FieldError[] {
  const errors = [
    ...validateMaterial(p.material),
    ...validateProtocol(p.protocol),
    ...validateNumerics(p.numerics),
    ...p.traps.flatMap(validateTrap),
  ];
  if (p.traps.length > MAX_TRAPS) {
    errors.push({
      field: "traps",
      message: `at most ${MAX_TRAPS} trap types are supported`,
    });
  }
  if (p.models.length === 0) {
    errors.push({ field: "models", message: "select at least one model" });
  }
  return errors;
}
