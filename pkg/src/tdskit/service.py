"""Local HTTP service exposing simulation and fitting to the UI.

JSON in, JSON out; fits run on a single background worker so at most
one optimization occupies the solver at a time (further requests
queue).  Iteration progress is recorded per job and also published as
a server-sent event stream.
"""

from __future__ import annotations

import itertools
import json
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI
from fastapi.responses import JSONResponse, StreamingResponse

from . import __version__
from .analytic import lattice_spectrum
from .errors import DataFormatError, SolverError
from .fitting import FitProblem, PsoOptions, run_pso
from .mcnabb_foster import McNabbFosterProblem, solve_mcnabb_foster
from .oriani import OrianiProblem, solve_oriani
from .postprocess import desorption_rate
from .project import (
    Project,
    _experiment_from,
    _fit_payload,
    project_from_payload,
    spectrum_to_payload,
)

__all__ = ["create_app"]

_SSE_POLL_S = 0.05


class _Cancelled(Exception):
    pass


@dataclass
class _Job:
    id: str
    status: str = "queued"  # queued | running | done | failed | cancelled
    events: list = field(default_factory=list)
    result: dict | None = None
    error: str | None = None
    cancel_requested: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


def _simulate_project(project: Project, models) -> list[dict]:
    out = []
    for name in models:
        if name == "lattice":
            spec = lattice_spectrum(project.material, project.protocol,
                                    project.numerics)
        else:
            kwargs = dict(mat=project.material, traps=project.traps,
                          protocol=project.protocol, numerics=project.numerics)
            if name == "mcnabb-foster":
                r = solve_mcnabb_foster(McNabbFosterProblem(**kwargs))
            elif name == "oriani":
                r = solve_oriani(OrianiProblem(**kwargs))
            else:
                raise DataFormatError(f"unknown model {name!r}")
            spec = desorption_rate(r)
        out.append(spectrum_to_payload(spec))
    return out


def _fit_problem_from(body: dict):
    project = project_from_payload(body["project"])
    exp = project.experiment
    if "data" in body:
        exp = _experiment_from(body["data"])
    if exp is None:
        raise DataFormatError("fit request carries no experimental data")
    options = body.get("options", {})
    model = options.pop("model", "oriani")
    kwargs = dict(mat=project.material, traps=project.traps,
                  protocol=project.protocol, numerics=project.numerics)
    if model == "mcnabb-foster":
        base = McNabbFosterProblem(**kwargs)
    elif model == "oriani":
        base = OrianiProblem(**kwargs)
    else:
        raise DataFormatError("fit model must be 'oriani' or 'mcnabb-foster'")
    problem = FitProblem(
        base=base,
        exp=exp,
        bounds_mode=options.pop("bounds_mode", "global"),
        update_CL0=options.pop("update_CL0", False),
    )
    try:
        opts = PsoOptions(**options)
    except TypeError as e:
        raise DataFormatError(f"options: {e}") from None
    return problem, opts


def create_app() -> FastAPI:
    """Build the service application with its own job registry."""
    app = FastAPI(title="tdskit service", version=__version__)
    jobs: dict[str, _Job] = {}
    jobs_lock = threading.Lock()
    fit_queue: queue.Queue = queue.Queue()

    def worker():
        while True:
            job, problem, opts = fit_queue.get()
            with job.lock:
                if job.cancel_requested:
                    job.status = "cancelled"
                    job.events.append({"type": "status", "status": "cancelled"})
                    continue
                job.status = "running"

            def progress(it, fc, best, mean, stall, _traps):
                job.events.append({
                    "type": "iteration",
                    "iteration": int(it),
                    "f_count": int(fc),
                    "best_f": float(best),
                    "mean_f": float(mean),
                    "stall": int(stall),
                })
                if job.cancel_requested:
                    raise _Cancelled

            try:
                result = run_pso(problem, opts, progress=progress)
            except _Cancelled:
                job.status = "cancelled"
                job.events.append({"type": "status", "status": "cancelled"})
            except (SolverError, DataFormatError, ValueError) as e:
                job.status = "failed"
                job.error = str(e)
                job.events.append({"type": "status", "status": "failed",
                                   "error": job.error})
            else:
                job.result = _fit_payload(result)
                job.status = "done"
                job.events.append({"type": "status", "status": "done"})

    threading.Thread(target=worker, daemon=True).start()

    def error(status: int, message: str):
        return JSONResponse(status_code=status, content={"error": message})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/simulate")
    def simulate(body: dict):
        try:
            project = project_from_payload(body["project"])
            models = body.get("models", list(project.models))
            spectra = _simulate_project(project, models)
        except KeyError as e:
            return error(422, f"missing field {e}")
        except (DataFormatError, ValueError) as e:
            return error(422, str(e))
        except SolverError as e:
            return error(500, f"solver failure: {e}")
        return {"spectra": spectra}

    @app.post("/fit")
    def start_fit(body: dict):
        try:
            problem, opts = _fit_problem_from(body)
        except KeyError as e:
            return error(422, f"missing field {e}")
        except (DataFormatError, ValueError) as e:
            return error(422, str(e))
        job = _Job(id=uuid.uuid4().hex)
        with jobs_lock:
            jobs[job.id] = job
        fit_queue.put((job, problem, opts))
        return JSONResponse(status_code=202, content={"id": job.id,
                                                      "status": job.status})

    def get_job(job_id: str) -> _Job | None:
        with jobs_lock:
            return jobs.get(job_id)

    @app.get("/fit/{job_id}")
    def fit_status(job_id: str):
        job = get_job(job_id)
        if job is None:
            return error(404, f"no such fit job {job_id!r}")
        trace = [e for e in job.events if e["type"] == "iteration"]
        body = {"id": job.id, "status": job.status, "trace": trace}
        if job.result is not None:
            body["result"] = job.result
        if job.error is not None:
            body["error"] = job.error
        return body

    @app.delete("/fit/{job_id}")
    def cancel_fit(job_id: str):
        job = get_job(job_id)
        if job is None:
            return error(404, f"no such fit job {job_id!r}")
        with job.lock:
            job.cancel_requested = True
            if job.status == "queued":
                job.status = "cancelled"
                job.events.append({"type": "status", "status": "cancelled"})
        return {"id": job.id, "status": job.status}

    @app.get("/fit/{job_id}/events")
    def fit_events(job_id: str):
        job = get_job(job_id)
        if job is None:
            return error(404, f"no such fit job {job_id!r}")

        def stream():
            for i in itertools.count():
                while i >= len(job.events):
                    if job.status in ("done", "failed", "cancelled") and i >= len(
                        job.events
                    ):
                        return
                    time.sleep(_SSE_POLL_S)
                yield f"data: {json.dumps(job.events[i])}\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
