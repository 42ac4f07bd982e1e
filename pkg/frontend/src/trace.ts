// Fit console model: folds the event stream into a convergence trace
// and renders it as an SVG polyline. The best-f series is clamped to
// its running minimum, so the rendered curve is monotone even if a
// replayed stream arrives out of order.

import type { FitEvent, JobStatus, TracePoint } from "./types";

export class FitConsole {
  readonly points: TracePoint[] = [];
  status: JobStatus = "queued";
  error?: string;

  push(event: FitEvent): void {
    if (event.type === "status") {
      this.status = event.status;
      if (event.error !== undefined) {
        this.error = event.error;
      }
      return;
    }
    this.status = "running";
    const previous = this.points[this.points.length - 1];
    this.points.push({
      iteration: event.iteration,
      f_count: event.f_count,
      mean_f: event.mean_f,
      stall: event.stall,
      // running minimum; the optimizer never loses its best candidate
      best_f: previous ? Math.min(previous.best_f, event.best_f) : event.best_f,
    });
  }

  get bestF(): number[] {
    return this.points.map((p) => p.best_f);
  }

  get finished(): boolean {
    return ["done", "failed", "cancelled"].includes(this.status);
  }
}

/**
 * Polyline points for an SVG convergence chart, log-scaled in f.
 *
 * x spans iterations left to right; y grows downward (SVG), so the
 * best-f curve descends visually as the fit improves.
 */
export function tracePolyline(
  bestF: number[],
  width: number,
  height: number,
): string {
  if (bestF.length === 0) {
    return "";
  }
  const floor = 1e-300;
  const logs = bestF.map((f) => Math.log10(Math.max(f, floor)));
  const lo = Math.min(...logs);
  const hi = Math.max(...logs);
  const span = hi - lo || 1;
  const dx = bestF.length > 1 ? width / (bestF.length - 1) : 0;
  return logs
    .map((value, i) => {
      const x = i * dx;
      const y = ((hi - value) / span) * height;
      return `${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
}

/** True when the series never increases, within floating-point zero. */
export function isMonotoneNonIncreasing(series: number[]): boolean {
  return series.every((v, i) => i === 0 || v <= series[i - 1]);
}
