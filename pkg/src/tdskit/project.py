"""Project persistence, experimental data ingestion and CSV export.

Projects are versioned JSON with an explicit unit annotation on every
physical field, so a file is interpretable without this code.  The
same payload dictionaries double as the HTTP service's wire format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .core import MaterialParams, NumericsConfig, TestProtocol, TrapSpec
from .errors import DataFormatError
from .fitting import FitResult
from .spectrum import DesorptionSpectrum, ExperimentalSpectrum
from .units import convert, family_of

__all__ = [
    "Project",
    "SCHEMA_VERSION",
    "export_spectrum",
    "load_experiment",
    "load_project",
    "project_from_payload",
    "project_to_payload",
    "save_project",
    "spectrum_to_payload",
]

SCHEMA_VERSION = 1

MODELS = ("lattice", "oriani", "mcnabb-foster")


@dataclass(frozen=True)
class Project:
    """One desorption study: inputs, model choices and optional data."""

    material: MaterialParams
    protocol: TestProtocol
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    traps: tuple[TrapSpec, ...] = ()
    models: tuple[str, ...] = ("oriani",)
    display_units: dict = field(default_factory=dict)
    experiment: ExperimentalSpectrum | None = None
    fit: FitResult | None = None

    def __post_init__(self):
        for m in self.models:
            if m not in MODELS:
                raise ValueError(f"unknown model {m!r}; expected one of {MODELS}")
        object.__setattr__(self, "traps", tuple(self.traps))
        object.__setattr__(self, "models", tuple(self.models))


def _q(value, unit):
    return {"value": value, "unit": unit}


def _read_q(node, expected_unit, where, mat=None):
    """Read a unit-annotated scalar, converting within the unit family."""
    try:
        value, unit = node["value"], node["unit"]
    except (TypeError, KeyError):
        raise DataFormatError(f"{where}: expected {{value, unit}}") from None
    if unit == expected_unit:
        return float(value)
    try:
        if family_of(unit) == family_of(expected_unit):
            return float(convert(value, unit, expected_unit, mat=mat))
    except Exception:
        pass
    raise DataFormatError(f"{where}: expected unit {expected_unit!r}, got {unit!r}")


def _material_payload(m: MaterialParams) -> dict:
    return {
        "E_L": _q(m.E_L, "J/mol"),
        "D_0": _q(m.D_0, "m2/s"),
        "M_M": _q(m.M_M, "g/mol"),
        "rho_M": _q(m.rho_M, "g/cm3"),
        "N_L": _q(m.N_L, "1/m3"),
        "C_L0": _q(m.C_L0, "mol/m3"),
    }


def _material_from(node: dict) -> MaterialParams:
    units = {
        "E_L": "J/mol", "D_0": "m2/s", "M_M": "g/mol",
        "rho_M": "g/cm3", "N_L": "1/m3", "C_L0": "mol/m3",
    }
    try:
        kw = {k: _read_q(node[k], u, f"material.{k}") for k, u in units.items()}
    except KeyError as e:
        raise DataFormatError(f"material: missing field {e}") from None
    return MaterialParams(**kw)


def _trap_payload(t: TrapSpec) -> dict:
    out = {
        "N_T": _q(t.N_T, "1/m3"),
        "delta_H": _q(t.delta_H, "J/mol"),
        "E_t": _q(t.E_t, "J/mol"),
        "E_d": _q(t.E_d, "J/mol"),
        "nu_t": _q(t.nu_t, "1/s"),
        "nu_d": _q(t.nu_d, "1/s"),
    }
    if t.theta_T0 is not None:
        out["theta_T0"] = _q(t.theta_T0, "-")
    return out


def _trap_from(node: dict, i: int) -> TrapSpec:
    units = {
        "N_T": "1/m3", "delta_H": "J/mol", "E_t": "J/mol",
        "E_d": "J/mol", "nu_t": "1/s", "nu_d": "1/s",
    }
    try:
        kw = {k: _read_q(node[k], u, f"traps[{i}].{k}") for k, u in units.items()}
    except KeyError as e:
        raise DataFormatError(f"traps[{i}]: missing field {e}") from None
    if "theta_T0" in node:
        kw["theta_T0"] = _read_q(node["theta_T0"], "-", f"traps[{i}].theta_T0")
    return TrapSpec(**kw)


def _protocol_payload(p: TestProtocol) -> dict:
    return {
        "L": _q(p.L, "m"),
        "phi": _q(p.phi, "K/s"),
        "t_rest": _q(p.t_rest, "s"),
        "T_min": _q(p.T_min, "K"),
        "T_max": _q(p.T_max, "K"),
    }


def _protocol_from(node: dict) -> TestProtocol:
    units = {"L": "m", "phi": "K/s", "t_rest": "s", "T_min": "K", "T_max": "K"}
    try:
        kw = {k: _read_q(node[k], u, f"protocol.{k}") for k, u in units.items()}
    except KeyError as e:
        raise DataFormatError(f"protocol: missing field {e}") from None
    return TestProtocol(**kw)


def _numerics_payload(n: NumericsConfig) -> dict:
    return {
        "n_temperature_evals": n.n_temperature_evals,
        "n_elements": n.n_elements,
        "rel_tol": n.rel_tol,
        "abs_tol": n.abs_tol,
        "series_terms": n.series_terms,
    }


def _numerics_from(node: dict) -> NumericsConfig:
    try:
        return NumericsConfig(**node)
    except TypeError as e:
        raise DataFormatError(f"numerics: {e}") from None


def _experiment_payload(e: ExperimentalSpectrum) -> dict:
    return {
        "T": _q(list(e.T), "K"),
        "deltaC": _q(list(e.deltaC), "mol/m3/s"),
        "source": e.source,
    }


def _experiment_from(node: dict) -> ExperimentalSpectrum:
    try:
        return ExperimentalSpectrum(
            T=np.asarray(node["T"]["value"], dtype=float),
            deltaC=np.asarray(node["deltaC"]["value"], dtype=float),
            source=node.get("source", ""),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"experiment: {e}") from None


def spectrum_to_payload(s: DesorptionSpectrum) -> dict:
    """Wire/persistence form of a simulated spectrum."""
    out = {
        "model": s.model,
        "T": _q(list(s.T), "K"),
        "t": _q(list(s.t), "s"),
        "deltaC_total": _q(list(s.deltaC_total), "mol/m3/s"),
        "deltaC_lattice": _q(list(s.deltaC_lattice), "mol/m3/s"),
        "deltaC_traps": [_q(list(d), "mol/m3/s") for d in s.deltaC_traps],
    }
    if s.flux is not None:
        out["flux"] = _q(list(s.flux), "mol/m2/s")
    if s.protocol is not None:
        out["protocol"] = _protocol_payload(s.protocol)
    return out


def _spectrum_from(node: dict) -> DesorptionSpectrum:
    try:
        return DesorptionSpectrum(
            T=np.asarray(node["T"]["value"], dtype=float),
            t=np.asarray(node["t"]["value"], dtype=float),
            deltaC_total=np.asarray(node["deltaC_total"]["value"], dtype=float),
            deltaC_lattice=np.asarray(node["deltaC_lattice"]["value"], dtype=float),
            deltaC_traps=tuple(
                np.asarray(d["value"], dtype=float) for d in node.get("deltaC_traps", [])
            ),
            flux=(
                np.asarray(node["flux"]["value"], dtype=float)
                if "flux" in node else None
            ),
            model=node.get("model", ""),
            protocol=_protocol_from(node["protocol"]) if "protocol" in node else None,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"spectrum: {e}") from None


def _fit_payload(f: FitResult) -> dict:
    return {
        "traps": [_trap_payload(t) for t in f.traps],
        "best_f": _q(f.best_f, "mol/m3/s"),
        "C_L0": _q(f.C_L0, "mol/m3"),
        "termination": f.termination,
        "spectrum": spectrum_to_payload(f.spectrum),
        "trace": {
            "iteration": list(int(i) for i in f.iterations),
            "f_count": list(int(i) for i in f.f_counts),
            "best_f": list(float(v) for v in f.best_f_trace),
            "mean_f": list(float(v) for v in f.mean_f_trace),
            "stall": list(int(i) for i in f.stall_counts),
        },
    }


def _fit_from(node: dict) -> FitResult:
    try:
        tr = node["trace"]
        return FitResult(
            traps=tuple(_trap_from(t, i) for i, t in enumerate(node["traps"])),
            best_f=_read_q(node["best_f"], "mol/m3/s", "fit.best_f"),
            C_L0=_read_q(node["C_L0"], "mol/m3", "fit.C_L0"),
            spectrum=_spectrum_from(node["spectrum"]),
            iterations=np.asarray(tr["iteration"], dtype=int),
            f_counts=np.asarray(tr["f_count"], dtype=int),
            best_f_trace=np.asarray(tr["best_f"], dtype=float),
            mean_f_trace=np.asarray(tr["mean_f"], dtype=float),
            stall_counts=np.asarray(tr["stall"], dtype=int),
            termination=node["termination"],
        )
    except KeyError as e:
        raise DataFormatError(f"fit: missing field {e}") from None


def project_to_payload(p: Project) -> dict:
    out = {
        "schema": SCHEMA_VERSION,
        "material": _material_payload(p.material),
        "protocol": _protocol_payload(p.protocol),
        "numerics": _numerics_payload(p.numerics),
        "traps": [_trap_payload(t) for t in p.traps],
        "models": list(p.models),
        "display_units": dict(p.display_units),
    }
    if p.experiment is not None:
        out["experiment"] = _experiment_payload(p.experiment)
    if p.fit is not None:
        out["fit"] = _fit_payload(p.fit)
    return out


def project_from_payload(node: dict) -> Project:
    if not isinstance(node, dict):
        raise DataFormatError("project payload must be a JSON object")
    version = node.get("schema")
    if version != SCHEMA_VERSION:
        raise DataFormatError(
            f"unsupported project schema {version!r}; this build reads {SCHEMA_VERSION}"
        )
    for key in ("material", "protocol"):
        if key not in node:
            raise DataFormatError(f"project: missing section {key!r}")
    try:
        return Project(
            material=_material_from(node["material"]),
            protocol=_protocol_from(node["protocol"]),
            numerics=_numerics_from(node.get("numerics", {})),
            traps=tuple(
                _trap_from(t, i) for i, t in enumerate(node.get("traps", []))
            ),
            models=tuple(node.get("models", ("oriani",))),
            display_units=dict(node.get("display_units", {})),
            experiment=(
                _experiment_from(node["experiment"]) if "experiment" in node else None
            ),
            fit=_fit_from(node["fit"]) if "fit" in node else None,
        )
    except ValueError as e:
        raise DataFormatError(str(e)) from None


def save_project(p: Project, path) -> None:
    """Write a project as versioned, unit-annotated JSON."""
    with open(path, "w") as fh:
        json.dump(project_to_payload(p), fh, indent=2)
        fh.write("\n")


def load_project(path) -> Project:
    """Read a project written by save_project."""
    try:
        with open(path) as fh:
            node = json.load(fh)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: invalid JSON ({e})") from None
    return project_from_payload(node)


def load_experiment(
    path,
    column2_kind: str = "deltaC",
    units: tuple[str, str] = ("K", "mol/m3/s"),
    mat: MaterialParams | None = None,
    protocol: TestProtocol | None = None,
) -> ExperimentalSpectrum:
    """Parse a two-column temperature/desorption text file.

    Accepts comma or whitespace separators and '#' comment lines.
    ``column2_kind`` selects whether the second column is a desorption
    rate ("deltaC") or a surface flux ("flux"); flux is converted to a
    rate via 2*J/L assuming symmetric desorption from both faces, which
    needs the protocol for L.  Rows are sorted by temperature and
    duplicate temperatures averaged.
    """
    if column2_kind not in ("deltaC", "flux"):
        raise ValueError("column2_kind must be 'deltaC' or 'flux'")
    temp_unit, value_unit = units
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            if len(parts) < 2:
                raise DataFormatError(f"{path}:{lineno}: expected two columns")
            try:
                T, v = float(parts[0]), float(parts[1])
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: non-numeric value in {line!r}"
                ) from None
            if not (np.isfinite(T) and np.isfinite(v)):
                raise DataFormatError(f"{path}:{lineno}: non-finite value")
            rows.append((T, v))
    if len(rows) < 4:
        raise DataFormatError(f"{path}: need at least 4 data rows, got {len(rows)}")

    T = convert(np.array([r[0] for r in rows]), temp_unit, "K")
    v = np.array([r[1] for r in rows])
    if column2_kind == "flux":
        v = convert(v, value_unit, "mol/m2/s", mat=mat)
        if protocol is None:
            raise ValueError("flux input needs the protocol for the thickness L")
        v = 2.0 * v / protocol.L
    else:
        v = convert(v, value_unit, "mol/m3/s", mat=mat)

    order = np.argsort(T, kind="stable")
    T, v = T[order], v[order]
    uniq, inverse, counts = np.unique(T, return_inverse=True, return_counts=True)
    if len(uniq) < len(T):
        summed = np.zeros(len(uniq))
        np.add.at(summed, inverse, v)
        T, v = uniq, summed / counts
    return ExperimentalSpectrum(T=T, deltaC=v, source=str(path))


def export_spectrum(
    spec: DesorptionSpectrum | ExperimentalSpectrum,
    path,
    units: tuple[str, str] = ("K", "mol/m3/s"),
    mat: MaterialParams | None = None,
) -> None:
    """Write a spectrum as CSV, reloadable by load_experiment.

    Temperature comes first, then the desorption-rate columns (total,
    lattice, per trap) and the flux when available.  Numbers carry 12
    decimal digits of mantissa so round trips are lossless at parse
    precision.
    """
    temp_unit, value_unit = units
    T = convert(np.asarray(spec.T), "K", temp_unit)
    if isinstance(spec, ExperimentalSpectrum):
        cols = [("deltaC", convert(spec.deltaC, "mol/m3/s", value_unit, mat=mat))]
    else:
        cols = [
            ("deltaC_total", convert(spec.deltaC_total, "mol/m3/s", value_unit, mat=mat)),
            ("deltaC_CL", convert(spec.deltaC_lattice, "mol/m3/s", value_unit, mat=mat)),
        ]
        for i, d in enumerate(spec.deltaC_traps, start=1):
            cols.append((f"deltaC_CT{i}", convert(d, "mol/m3/s", value_unit, mat=mat)))
        if spec.flux is not None:
            cols.append(("flux", np.asarray(spec.flux)))
    header = [f"T [{temp_unit}]"] + [
        f"{name} [{'mol/m2/s' if name == 'flux' else value_unit}]"
        for name, _ in cols
    ]
    with open(path, "w") as fh:
        fh.write("# " + ",".join(header) + "\n")
        for i in range(len(T)):
            vals = [T[i]] + [c[i] for _, c in cols]
            fh.write(",".join(f"{v:.12e}" for v in vals) + "\n")
