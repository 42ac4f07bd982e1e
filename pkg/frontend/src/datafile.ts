// Parser for two-column experimental files (temperature, desorption
// rate or flux). Mirrors the service's ingestion rules: '#' comments,
// comma or whitespace separators, rows sorted by temperature.

import type { Experiment } from "./types";

export class DataFileError extends Error {}

export interface ParseOptions {
  columnKind?: "deltaC" | "flux";
  temperatureUnit?: "K" | "C";
  /** slab thickness [m], required to convert a flux column via 2J/L */
  thickness?: number;
  source?: string;
}

export function parseExperiment(
  text: string,
  options: ParseOptions = {},
): Experiment {
  const {
    columnKind = "deltaC",
    temperatureUnit = "K",
    thickness,
    source = "",
  } = options;
  const rows: Array<[number, number]> = [];
  text.split(/\r?\n/).forEach((raw, index) => {
    const line = raw.trim();
    if (line.length === 0 || line.startsWith("#")) {
      return;
    }
    const parts = line.split(/[,\s]+/).filter((p) => p.length > 0);
    if (parts.length < 2) {
      throw new DataFileError(`line ${index + 1}: expected two columns`);
    }
    const T = Number(parts[0]);
    const v = Number(parts[1]);
    if (!Number.isFinite(T) || !Number.isFinite(v)) {
      throw new DataFileError(`line ${index + 1}: non-numeric value`);
    }
    rows.push([T, v]);
  });
  if (rows.length < 4) {
    throw new DataFileError(`need at least 4 data rows, got ${rows.length}`);
  }

  rows.sort((a, b) => a[0] - b[0]);
  let T = rows.map((r) => r[0]);
  let deltaC = rows.map((r) => r[1]);
  if (temperatureUnit === "C") {
    T = T.map((v) => v + 273.15);
  }
  if (columnKind === "flux") {
    if (thickness === undefined || thickness <= 0) {
      throw new DataFileError("flux input needs the slab thickness");
    }
    // symmetric desorption from both faces
    deltaC = deltaC.map((v) => (2 * v) / thickness);
  }
  for (let i = 1; i < T.length; i++) {
    if (T[i] === T[i - 1]) {
      throw new DataFileError(
        `duplicate temperature ${T[i]}; average repeats before loading`,
      );
    }
  }
  return { T, deltaC, source };
}
