// Serializer for the service's wire format. Every physical scalar
// travels as { value, unit }; reading converts compatible units to
// the canonical one, writing always emits canonical units, so a
// parsed payload re-serializes to an equivalent document.

import type {
  Experiment,
  FitResult,
  Material,
  ModelName,
  Numerics,
  Project,
  Protocol,
  Spectrum,
  Trap,
} from "./types";

export class PayloadError extends Error {}

export const SCHEMA_VERSION = 1;

interface Quantity {
  value: number | number[];
  unit: string;
}

// unit -> [family, scale, offset]; x_canonical = x * scale + offset
const UNITS: Record<string, [string, number, number]> = {
  K: ["temperature", 1, 0],
  C: ["temperature", 1, 273.15],
  m: ["length", 1, 0],
  mm: ["length", 1e-3, 0],
  cm: ["length", 1e-2, 0],
  s: ["time", 1, 0],
  min: ["time", 60, 0],
  h: ["time", 3600, 0],
  "J/mol": ["molar-energy", 1, 0],
  "kJ/mol": ["molar-energy", 1e3, 0],
  "m2/s": ["diffusivity", 1, 0],
  "mm2/s": ["diffusivity", 1e-6, 0],
  "g/mol": ["molar-mass", 1, 0],
  "g/cm3": ["mass-density", 1, 0],
  "1/m3": ["site-density", 1, 0],
  "1/s": ["frequency", 1, 0],
  "mol/m3": ["concentration", 1, 0],
  "mol/cm3": ["concentration", 1e6, 0],
  "mol/m3/s": ["rate", 1, 0],
  "mol/cm3/s": ["rate", 1e6, 0],
  "mol/m2/s": ["flux", 1, 0],
  "mol/cm2/s": ["flux", 1e4, 0],
  "K/s": ["ramp", 1, 0],
  "K/min": ["ramp", 1 / 60, 0],
  "-": ["dimensionless", 1, 0],
};

function toCanonical(q: unknown, unit: string, where: string): number | number[] {
  if (typeof q !== "object" || q === null || !("value" in q) || !("unit" in q)) {
    throw new PayloadError(`${where}: expected { value, unit }`);
  }
  const { value, unit: got } = q as Quantity;
  if (got !== unit) {
    const from = UNITS[got];
    const to = UNITS[unit];
    if (!from || !to || from[0] !== to[0]) {
      throw new PayloadError(`${where}: expected unit '${unit}', got '${got}'`);
    }
    const scale = from[1] / to[1];
    const offset = (from[2] - to[2]) / to[1];
    return Array.isArray(value)
      ? value.map((v) => v * scale + offset)
      : value * scale + offset;
  }
  return value;
}

function scalar(q: unknown, unit: string, where: string): number {
  const v = toCanonical(q, unit, where);
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new PayloadError(`${where}: expected a finite number`);
  }
  return v;
}

function series(q: unknown, unit: string, where: string): number[] {
  const v = toCanonical(q, unit, where);
  if (!Array.isArray(v)) {
    throw new PayloadError(`${where}: expected an array`);
  }
  return v;
}

function quantity(value: number | number[], unit: string): Quantity {
  return { value, unit };
}

function node(raw: unknown, where: string): Record<string, unknown> {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new PayloadError(`${where}: expected an object`);
  }
  return raw as Record<string, unknown>;
}

export function materialFromPayload(raw: unknown): Material {
  const n = node(raw, "material");
  return {
    E_L: scalar(n.E_L, "J/mol", "material.E_L"),
    D_0: scalar(n.D_0, "m2/s", "material.D_0"),
    M_M: scalar(n.M_M, "g/mol", "material.M_M"),
    rho_M: scalar(n.rho_M, "g/cm3", "material.rho_M"),
    N_L: scalar(n.N_L, "1/m3", "material.N_L"),
    C_L0: scalar(n.C_L0, "mol/m3", "material.C_L0"),
  };
}

export function materialToPayload(m: Material): Record<string, Quantity> {
  return {
    E_L: quantity(m.E_L, "J/mol"),
    D_0: quantity(m.D_0, "m2/s"),
    M_M: quantity(m.M_M, "g/mol"),
    rho_M: quantity(m.rho_M, "g/cm3"),
    N_L: quantity(m.N_L, "1/m3"),
    C_L0: quantity(m.C_L0, "mol/m3"),
  };
}

export function trapFromPayload(raw: unknown, where = "trap"): Trap {
  const n = node(raw, where);
  const trap: Trap = {
    N_T: scalar(n.N_T, "1/m3", `${where}.N_T`),
    delta_H: scalar(n.delta_H, "J/mol", `${where}.delta_H`),
    E_t: scalar(n.E_t, "J/mol", `${where}.E_t`),
    E_d: scalar(n.E_d, "J/mol", `${where}.E_d`),
    nu_t: scalar(n.nu_t, "1/s", `${where}.nu_t`),
    nu_d: scalar(n.nu_d, "1/s", `${where}.nu_d`),
  };
  if (n.theta_T0 !== undefined) {
    trap.theta_T0 = scalar(n.theta_T0, "-", `${where}.theta_T0`);
  }
  return trap;
}

export function trapToPayload(t: Trap): Record<string, Quantity> {
  const out: Record<string, Quantity> = {
    N_T: quantity(t.N_T, "1/m3"),
    delta_H: quantity(t.delta_H, "J/mol"),
    E_t: quantity(t.E_t, "J/mol"),
    E_d: quantity(t.E_d, "J/mol"),
    nu_t: quantity(t.nu_t, "1/s"),
    nu_d: quantity(t.nu_d, "1/s"),
  };
  if (t.theta_T0 !== undefined) {
    out.theta_T0 = quantity(t.theta_T0, "-");
  }
  return out;
}

export function protocolFromPayload(raw: unknown): Protocol {
  const n = node(raw, "protocol");
  return {
    L: scalar(n.L, "m", "protocol.L"),
    phi: scalar(n.phi, "K/s", "protocol.phi"),
    t_rest: scalar(n.t_rest, "s", "protocol.t_rest"),
    T_min: scalar(n.T_min, "K", "protocol.T_min"),
    T_max: scalar(n.T_max, "K", "protocol.T_max"),
  };
}

export function protocolToPayload(p: Protocol): Record<string, Quantity> {
  return {
    L: quantity(p.L, "m"),
    phi: quantity(p.phi, "K/s"),
    t_rest: quantity(p.t_rest, "s"),
    T_min: quantity(p.T_min, "K"),
    T_max: quantity(p.T_max, "K"),
  };
}

export function numericsFromPayload(raw: unknown): Numerics {
  const n = node(raw, "numerics");
  for (const key of [
    "n_temperature_evals",
    "n_elements",
    "rel_tol",
    "abs_tol",
    "series_terms",
  ]) {
    if (typeof n[key] !== "number") {
      throw new PayloadError(`numerics.${key}: expected a number`);
    }
  }
  return n as unknown as Numerics;
}

export function experimentFromPayload(raw: unknown): Experiment {
  const n = node(raw, "experiment");
  return {
    T: series(n.T, "K", "experiment.T"),
    deltaC: series(n.deltaC, "mol/m3/s", "experiment.deltaC"),
    source: typeof n.source === "string" ? n.source : "",
  };
}

export function experimentToPayload(e: Experiment): Record<string, unknown> {
  return {
    T: quantity(e.T, "K"),
    deltaC: quantity(e.deltaC, "mol/m3/s"),
    source: e.source,
  };
}

export function spectrumFromPayload(raw: unknown): Spectrum {
  const n = node(raw, "spectrum");
  const spec: Spectrum = {
    model: typeof n.model === "string" ? n.model : "",
    T: series(n.T, "K", "spectrum.T"),
    t: series(n.t, "s", "spectrum.t"),
    deltaC_total: series(n.deltaC_total, "mol/m3/s", "spectrum.deltaC_total"),
    deltaC_lattice: series(
      n.deltaC_lattice,
      "mol/m3/s",
      "spectrum.deltaC_lattice",
    ),
    deltaC_traps: Array.isArray(n.deltaC_traps)
      ? n.deltaC_traps.map((d, i) =>
          series(d, "mol/m3/s", `spectrum.deltaC_traps[${i}]`),
        )
      : [],
  };
  if (n.flux !== undefined) {
    spec.flux = series(n.flux, "mol/m2/s", "spectrum.flux");
  }
  if (n.protocol !== undefined) {
    spec.protocol = protocolFromPayload(n.protocol);
  }
  return spec;
}

export function spectrumToPayload(s: Spectrum): Record<string, unknown> {
  const out: Record<string, unknown> = {
    model: s.model,
    T: quantity(s.T, "K"),
    t: quantity(s.t, "s"),
    deltaC_total: quantity(s.deltaC_total, "mol/m3/s"),
    deltaC_lattice: quantity(s.deltaC_lattice, "mol/m3/s"),
    deltaC_traps: s.deltaC_traps.map((d) => quantity(d, "mol/m3/s")),
  };
  if (s.flux !== undefined) {
    out.flux = quantity(s.flux, "mol/m2/s");
  }
  if (s.protocol !== undefined) {
    out.protocol = protocolToPayload(s.protocol);
  }
  return out;
}

export function fitResultFromPayload(raw: unknown): FitResult {
  const n = node(raw, "fit");
  const trace = node(n.trace, "fit.trace");
  const list = (key: string): number[] => {
    const v = trace[key];
    if (!Array.isArray(v)) {
      throw new PayloadError(`fit.trace.${key}: expected an array`);
    }
    return v as number[];
  };
  return {
    traps: Array.isArray(n.traps)
      ? n.traps.map((t, i) => trapFromPayload(t, `fit.traps[${i}]`))
      : [],
    best_f: scalar(n.best_f, "mol/m3/s", "fit.best_f"),
    C_L0: scalar(n.C_L0, "mol/m3", "fit.C_L0"),
    termination: typeof n.termination === "string" ? n.termination : "",
    spectrum: spectrumFromPayload(n.spectrum),
    trace: {
      iteration: list("iteration"),
      f_count: list("f_count"),
      best_f: list("best_f"),
      mean_f: list("mean_f"),
      stall: list("stall"),
    },
  };
}

export function fitResultToPayload(f: FitResult): Record<string, unknown> {
  return {
    traps: f.traps.map(trapToPayload),
    best_f: quantity(f.best_f, "mol/m3/s"),
    C_L0: quantity(f.C_L0, "mol/m3"),
    termination: f.termination,
    spectrum: spectrumToPayload(f.spectrum),
    trace: { ...f.trace },
  };
}

export function projectFromPayload(raw: unknown): Project {
  const n = node(raw, "project");
  if (n.schema !== SCHEMA_VERSION) {
    throw new PayloadError(
      `unsupported project schema ${String(n.schema)}; this UI speaks ${SCHEMA_VERSION}`,
    );
  }
  const project: Project = {
    material: materialFromPayload(n.material),
    protocol: protocolFromPayload(n.protocol),
    numerics: numericsFromPayload(n.numerics),
    traps: Array.isArray(n.traps)
      ? n.traps.map((t, i) => trapFromPayload(t, `traps[${i}]`))
      : [],
    models: (Array.isArray(n.models) ? n.models : ["oriani"]) as ModelName[],
    display_units:
      typeof n.display_units === "object" && n.display_units !== null
        ? (n.display_units as Record<string, string>)
        : {},
  };
  if (n.experiment !== undefined) {
    project.experiment = experimentFromPayload(n.experiment);
  }
  if (n.fit !== undefined) {
    project.fit = fitResultFromPayload(n.fit);
  }
  return project;
}

export function projectToPayload(p: Project): Record<string, unknown> {
  const out: Record<string, unknown> = {
    schema: SCHEMA_VERSION,
    material: materialToPayload(p.material),
    protocol: protocolToPayload(p.protocol),
    numerics: { ...p.numerics },
    traps: p.traps.map(trapToPayload),
    models: [...p.models],
    display_units: { ...p.display_units },
  };
  if (p.experiment !== undefined) {
    out.experiment = experimentToPayload(p.experiment);
  }
  if (p.fit !== undefined) {
    out.fit = fitResultToPayload(p.fit);
  }
  return out;
}
