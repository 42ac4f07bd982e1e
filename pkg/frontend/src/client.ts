// Thin HTTP client for the local simulation service. The fetch
// implementation is injectable so tests can run against a mock.

import {
  fitResultFromPayload,
  projectToPayload,
  spectrumFromPayload,
} from "./payload";
import type {
  FitEvent,
  FitResult,
  JobStatus,
  Project,
  Spectrum,
  TracePoint,
} from "./types";

export class ServiceError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface FitOptions {
  model?: "oriani" | "mcnabb-foster";
  bounds_mode?: "global" | "local";
  update_CL0?: boolean;
  max_iterations?: number;
  population?: number;
  tolerance?: number;
  seed?: number;
}

export interface FitStatus {
  id: string;
  status: JobStatus;
  trace: TracePoint[];
  result?: FitResult;
  error?: string;
}

type Fetch = typeof fetch;

async function body(response: Response): Promise<unknown> {
  const data: unknown = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof data === "object" && data !== null && "error" in data
        ? String((data as { error: unknown }).error)
        : response.statusText;
    throw new ServiceError(response.status, detail);
  }
  return data;
}

export class ServiceClient {
  constructor(
    private readonly baseUrl = "",
    private readonly fetchImpl: Fetch = fetch,
  ) {}

  private async post(path: string, payload: unknown): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return body(response);
  }

  async health(): Promise<{ status: string; version: string }> {
    const response = await this.fetchImpl(`${this.baseUrl}/health`);
    return (await body(response)) as { status: string; version: string };
  }

  async simulate(project: Project, models?: string[]): Promise<Spectrum[]> {
    const payload: Record<string, unknown> = {
      project: projectToPayload(project),
    };
    if (models) {
      payload.models = models;
    }
    const data = (await this.post("/simulate", payload)) as {
      spectra: unknown[];
    };
    return data.spectra.map(spectrumFromPayload);
  }

  async startFit(project: Project, options: FitOptions = {}): Promise<string> {
    const data = (await this.post("/fit", {
      project: projectToPayload(project),
      options,
    })) as { id: string };
    return data.id;
  }

  async fitStatus(id: string): Promise<FitStatus> {
    const response = await this.fetchImpl(`${this.baseUrl}/fit/${id}`);
    const data = (await body(response)) as Record<string, unknown>;
    const status: FitStatus = {
      id: String(data.id),
      status: data.status as JobStatus,
      trace: (data.trace ?? []) as TracePoint[],
    };
    if (data.result !== undefined) {
      status.result = fitResultFromPayload(data.result);
    }
    if (data.error !== undefined) {
      status.error = String(data.error);
    }
    return status;
  }

  async cancelFit(id: string): Promise<JobStatus> {
    const response = await this.fetchImpl(`${this.baseUrl}/fit/${id}`, {
      method: "DELETE",
    });
    const data = (await body(response)) as { status: JobStatus };
    return data.status;
  }

  /** Subscribe to the fit's server-sent event stream. */
  async streamFitEvents(
    id: string,
    onEvent: (event: FitEvent) => void,
  ): Promise<void> {
    const response = await this.fetchImpl(`${this.baseUrl}/fit/${id}/events`);
    if (!response.ok || response.body === null) {
      throw new ServiceError(response.status, "event stream unavailable");
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser(onEvent);
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        break;
      }
      parser.feed(decoder.decode(value, { stream: true }));
    }
    parser.flush();
  }
}

/** Incremental parser for a `data: {json}\n\n` event stream. */
export class SseParser {
  private buffer = "";

  constructor(private readonly onEvent: (event: FitEvent) => void) {}

  feed(chunk: string): void {
    this.buffer += chunk;
    let split;
    while ((split = this.buffer.indexOf("\n\n")) >= 0) {
      const block = this.buffer.slice(0, split);
      this.buffer = this.buffer.slice(split + 2);
      this.dispatch(block);
    }
  }

  flush(): void {
    if (this.buffer.trim().length > 0) {
      this.dispatch(this.buffer);
      this.buffer = "";
    }
  }

  private dispatch(block: string): void {
    const data = block
      .split("\n")
      .filter((line) => line.startsWith("data:"))
      .map((line) => line.slice("data:".length).trim())
      .join("\n");
    if (data.length > 0) {
      this.onEvent(JSON.parse(data) as FitEvent);
    }
  }
}
