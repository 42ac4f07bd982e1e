// DOM wiring for the single-page app: parameter panels on the left,
// spectrum chart and fit console on the right. All numbers rendered
// here came back from the service.

import { ServiceClient } from "./client";
import { parseExperiment } from "./datafile";
import { SessionState } from "./state";
import { isMonotoneNonIncreasing, tracePolyline } from "./trace";
import type { Spectrum } from "./types";

const CHART_W = 640;
const CHART_H = 360;
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

const state = new SessionState();
const client = new ServiceClient("");

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

function numberField(
  label: string,
  value: number,
  onChange: (v: number) => void,
): HTMLElement {
  const wrap = el("label", { class: "field" }, label);
  const input = el("input", { type: "text", value: String(value) });
  input.addEventListener("input", () => {
    onChange(Number(input.value));
    refresh();
  });
  wrap.appendChild(input);
  return wrap;
}

function spectrumPolyline(spec: Spectrum, yMax: number): string {
  const T = spec.T;
  const lo = Math.min(...T);
  const hi = Math.max(...T);
  return spec.deltaC_total
    .map((v, i) => {
      const x = ((T[i] - lo) / (hi - lo || 1)) * CHART_W;
      const y = CHART_H - (v / (yMax || 1)) * CHART_H;
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
}

function renderChart(): void {
  const svg = document.getElementById("chart");
  if (!svg) {
    return;
  }
  svg.innerHTML = "";
  const visible = state.overlays.filter((o) => o.visible);
  const yMax = Math.max(
    1e-300,
    ...visible.flatMap((o) => o.spectrum.deltaC_total),
  );
  visible.forEach((overlay, i) => {
    const line = document.createElementNS(
      "http://www.w3.org/2000/svg",
      "polyline",
    );
    line.setAttribute("points", spectrumPolyline(overlay.spectrum, yMax));
    line.setAttribute("fill", "none");
    line.setAttribute("stroke", COLORS[i % COLORS.length]);
    svg.appendChild(line);
  });
}

function renderFitConsole(): void {
  const svg = document.getElementById("trace");
  const label = document.getElementById("trace-status");
  if (!svg || !label) {
    return;
  }
  const fit = state.fitConsole;
  svg.innerHTML = "";
  const line = document.createElementNS(
    "http://www.w3.org/2000/svg",
    "polyline",
  );
  line.setAttribute("points", tracePolyline(fit.bestF, CHART_W, 120));
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#d62728");
  svg.appendChild(line);
  const best = fit.bestF[fit.bestF.length - 1];
  label.textContent =
    `${fit.status}; ${fit.points.length} iterations` +
    (best !== undefined ? `, best f ${best.toExponential(3)}` : "") +
    (isMonotoneNonIncreasing(fit.bestF) ? "" : " (non-monotone trace?)");
}

function renderErrors(): void {
  const list = document.getElementById("errors");
  if (!list) {
    return;
  }
  list.innerHTML = "";
  for (const err of state.errors) {
    list.appendChild(el("li", {}, `${err.field}: ${err.message}`));
  }
  for (const id of ["run-simulate", "run-fit"]) {
    const button = document.getElementById(id) as HTMLButtonElement | null;
    if (button) {
      button.disabled = !state.canSubmit;
    }
  }
}

function renderForm(): void {
  const panel = document.getElementById("parameters");
  if (!panel) {
    return;
  }
  panel.innerHTML = "";
  const { material, protocol, traps } = state.project;

  panel.appendChild(el("h3", {}, "Material"));
  for (const key of Object.keys(material) as Array<keyof typeof material>) {
    panel.appendChild(
      numberField(key, material[key], (v) => {
        material[key] = v;
      }),
    );
  }

  panel.appendChild(el("h3", {}, "Test protocol"));
  for (const key of Object.keys(protocol) as Array<keyof typeof protocol>) {
    panel.appendChild(
      numberField(key, protocol[key], (v) => {
        protocol[key] = v;
      }),
    );
  }

  panel.appendChild(el("h3", {}, `Hydrogen traps (${traps.length})`));
  traps.forEach((trap, i) => {
    const box = el("fieldset");
    box.appendChild(el("legend", {}, `trap ${i + 1}`));
    box.appendChild(
      numberField("delta_H [J/mol]", trap.delta_H, (v) => {
        trap.delta_H = v;
        trap.E_d = trap.E_t - v;
      }),
    );
    box.appendChild(
      numberField("N_T [1/m3]", trap.N_T, (v) => {
        trap.N_T = v;
      }),
    );
    const remove = el("button", { type: "button" }, "remove");
    remove.addEventListener("click", () => {
      state.removeTrap(i);
      renderForm();
      refresh();
    });
    box.appendChild(remove);
    panel.appendChild(box);
  });
}

function refresh(): void {
  renderErrors();
  renderChart();
  renderFitConsole();
}

async function runSimulate(): Promise<void> {
  state.clearOverlays();
  const spectra = await client.simulate(state.project);
  spectra.forEach((s) => state.addOverlay(s));
  refresh();
}

async function runFit(): Promise<void> {
  const id = await client.startFit(state.project, { bounds_mode: "global" });
  state.startFit(id);
  refresh();
  await client.streamFitEvents(id, (event) => {
    state.fitConsole.push(event);
    renderFitConsole();
  });
  if (state.fitConsole.status === "done") {
    const status = await client.fitStatus(id);
    if (status.result) {
      state.applyFit(status.result.traps, status.result.C_L0);
      renderForm();
    }
  }
  refresh();
}

export function mount(): void {
  renderForm();
  refresh();
  document.getElementById("add-trap")?.addEventListener("click", () => {
    state.addTrap();
    renderForm();
    refresh();
  });
  document
    .getElementById("run-simulate")
    ?.addEventListener("click", () => void runSimulate());
  document
    .getElementById("run-fit")
    ?.addEventListener("click", () => void runFit());
  document.getElementById("cancel-fit")?.addEventListener("click", () => {
    if (state.activeJobId) {
      void client.cancelFit(state.activeJobId);
    }
  });
  const upload = document.getElementById("experiment") as HTMLInputElement;
  upload?.addEventListener("change", async () => {
    const file = upload.files?.[0];
    if (file) {
      state.setExperiment(
        parseExperiment(await file.text(), { source: file.name }),
      );
      refresh();
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("parameters")) {
  mount();
}
