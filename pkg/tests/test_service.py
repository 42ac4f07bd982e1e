"""HTTP service: simulation endpoint and the fit job lifecycle."""

import dataclasses
import json
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

import tdskit as tk
from tdskit.project import project_to_payload
from tdskit.service import create_app

from conftest import config_martensitic


def build_payload(with_experiment=True):
    mat, protocol = config_martensitic()
    protocol = dataclasses.replace(protocol, t_rest=0.0)
    numerics = tk.NumericsConfig(n_elements=50, n_temperature_evals=60)
    truth = (tk.TrapSpec.from_binding_energy(N_T=5.19e24, delta_H=-53.1e3,
                                             E_t=mat.E_L),)
    exp = None
    if with_experiment:
        spec = tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
            mat=mat, traps=truth, protocol=protocol, numerics=numerics)))
        exp = tk.ExperimentalSpectrum(T=spec.T[2:],
                                      deltaC=spec.deltaC_total[2:])
    nominal = (tk.TrapSpec.from_binding_energy(N_T=1e25, delta_H=-50e3,
                                               E_t=mat.E_L),)
    project = tk.Project(material=mat, protocol=protocol, numerics=numerics,
                         traps=nominal, experiment=exp)
    return project_to_payload(project)


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def wait_for(client, job_id, states=("done", "failed", "cancelled"),
             timeout=120.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        r = client.get(f"/fit/{job_id}")
        assert r.status_code == 200
        body = r.json()
        if body["status"] in states:
            return body
        time.sleep(0.1)
    raise AssertionError(f"job {job_id} did not reach {states}")


class TestHealth:
    def test_ok(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok"
        assert body["version"] == tk.__version__


class TestSimulate:
    def test_runs_requested_models(self, client):
        r = client.post("/simulate", json={
            "project": build_payload(with_experiment=False),
            "models": ["lattice", "oriani"],
        })
        assert r.status_code == 200
        spectra = r.json()["spectra"]
        assert [s["model"] for s in spectra] == ["lattice", "oriani"]
        for s in spectra:
            total = np.asarray(s["deltaC_total"]["value"])
            assert len(total) == len(s["T"]["value"])
            assert total[2:].max() > 0
        # the trapped model desorbs more than the bare lattice
        lat = np.asarray(spectra[0]["deltaC_total"]["value"])
        ori = np.asarray(spectra[1]["deltaC_total"]["value"])
        t = np.asarray(spectra[1]["t"]["value"])
        assert np.trapezoid(ori, t) > np.trapezoid(lat, t)

    def test_missing_project(self, client):
        r = client.post("/simulate", json={"models": ["lattice"]})
        assert r.status_code == 422

    def test_malformed_project(self, client):
        r = client.post("/simulate", json={"project": {"schema": 42}})
        assert r.status_code == 422
        assert "schema" in r.json()["error"]

    def test_unknown_model(self, client):
        r = client.post("/simulate", json={
            "project": build_payload(with_experiment=False),
            "models": ["gaussian"],
        })
        assert r.status_code == 422


class TestFitLifecycle:
    def test_full_run(self, client):
        r = client.post("/fit", json={
            "project": build_payload(),
            "options": {"population": 6, "max_iterations": 3, "seed": 0},
        })
        assert r.status_code == 202
        job_id = r.json()["id"]

        body = wait_for(client, job_id)
        assert body["status"] == "done"
        assert len(body["trace"]) == 3
        best = [e["best_f"] for e in body["trace"]]
        assert all(a >= b for a, b in zip(best, best[1:]))
        result = body["result"]
        assert len(result["traps"]) == 1
        assert result["best_f"]["value"] == pytest.approx(best[-1])

        # the event stream replays every recorded event, then closes
        with client.stream("GET", f"/fit/{job_id}/events") as s:
            events = [json.loads(line[len("data: "):])
                      for line in s.iter_lines() if line.startswith("data: ")]
        assert [e["type"] for e in events] == ["iteration"] * 3 + ["status"]
        assert events[-1]["status"] == "done"

        r = client.delete(f"/fit/{job_id}")
        assert r.status_code == 200

    def test_cancel_running(self, client):
        r = client.post("/fit", json={
            "project": build_payload(),
            "options": {"population": 20, "max_iterations": 200, "seed": 1},
        })
        job_id = r.json()["id"]
        r = client.delete(f"/fit/{job_id}")
        assert r.status_code == 200
        body = wait_for(client, job_id)
        assert body["status"] == "cancelled"
        assert len(body["trace"]) < 200

    def test_missing_data_rejected(self, client):
        r = client.post("/fit", json={
            "project": build_payload(with_experiment=False),
        })
        assert r.status_code == 422
        assert "data" in r.json()["error"]

    def test_bad_option_rejected(self, client):
        r = client.post("/fit", json={
            "project": build_payload(),
            "options": {"swarmify": True},
        })
        assert r.status_code == 422

    def test_unknown_job(self, client):
        assert client.get("/fit/deadbeef").status_code == 404
        assert client.delete("/fit/deadbeef").status_code == 404
        assert client.get("/fit/deadbeef/events").status_code == 404
