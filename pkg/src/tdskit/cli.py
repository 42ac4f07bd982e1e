"""Command-line front end: simulate, fit, convert, serve.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 solver
failure; each failure path prints a one-line diagnostic on stderr.
"""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from .analytic import lattice_spectrum
from .errors import DataFormatError, SolverError
from .fitting import FitProblem, PsoOptions, run_pso
from .mcnabb_foster import McNabbFosterProblem, solve_mcnabb_foster
from .oriani import OrianiProblem, solve_oriani
from .postprocess import desorption_rate
from .project import (
    MODELS,
    Project,
    export_spectrum,
    load_experiment,
    load_project,
    save_project,
)
from .units import UnitError, convert

_MODEL_ALIASES = {"mf": "mcnabb-foster", "mcnabb-foster": "mcnabb-foster",
                  "oriani": "oriani", "lattice": "lattice"}


def _run_model(project: Project, model: str):
    mat, prot, num = project.material, project.protocol, project.numerics
    if model == "lattice":
        return lattice_spectrum(mat, prot, num)
    if model == "oriani":
        r = solve_oriani(OrianiProblem(mat=mat, traps=project.traps,
                                       protocol=prot, numerics=num))
    else:
        r = solve_mcnabb_foster(McNabbFosterProblem(mat=mat, traps=project.traps,
                                                    protocol=prot, numerics=num))
    return desorption_rate(r)


@click.group()
def cli():
    """Thermal desorption simulation and trap-parameter inference."""


@cli.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--model", "models", multiple=True,
              type=click.Choice(sorted(_MODEL_ALIASES)),
              help="Model(s) to run; defaults to the project's selection.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="Output CSV; the model name is appended when several run.")
def simulate(project_path, models, out_path):
    """Run forward simulations and export spectra as CSV."""
    project = load_project(project_path)
    names = [_MODEL_ALIASES[m] for m in models] if models else list(project.models)
    base = Path(out_path) if out_path else Path(project_path).with_suffix("")
    for name in names:
        spec = _run_model(project, name)
        if len(names) == 1 and out_path:
            dest = base
        else:
            dest = base.with_name(f"{base.stem}_{name}.csv")
        export_spectrum(spec, dest, mat=project.material)
        click.echo(f"{name}: peak {spec.peak_rate:.6g} mol/(m3 s) -> {dest}")


@cli.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--col2", type=click.Choice(["deltaC", "flux"]), default="deltaC")
@click.option("--units", default="K,mol/m3/s",
              help="Temperature and value units of the data file, comma separated.")
@click.option("--bounds", type=click.Choice(["global", "local"]), default="global")
@click.option("--update-cl0", is_flag=True, default=False)
@click.option("--model", type=click.Choice(sorted(_MODEL_ALIASES)), default="oriani")
@click.option("--seed", type=int, default=0)
@click.option("--iters", type=int, default=150)
@click.option("--pop", type=int, default=400)
@click.option("--tol", type=float, default=1e-11)
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="Fitted project path; defaults to <project>_fitted.json.")
def fit(project_path, data_path, col2, units, bounds, update_cl0, model,
        seed, iters, pop, tol, out_path):
    """Calibrate trap parameters against an experimental spectrum."""
    project = load_project(project_path)
    unit_pair = tuple(u.strip() for u in units.split(","))
    if len(unit_pair) != 2:
        raise click.UsageError("--units expects 'temp_unit,value_unit'")
    exp = load_experiment(data_path, col2, unit_pair,
                          mat=project.material, protocol=project.protocol)
    if not project.traps:
        raise DataFormatError("the project defines no traps to calibrate")

    kwargs = dict(mat=project.material, traps=project.traps,
                  protocol=project.protocol, numerics=project.numerics)
    name = _MODEL_ALIASES[model]
    if name == "lattice":
        raise click.UsageError("fitting needs a trap model (oriani or mf)")
    base = (McNabbFosterProblem(**kwargs) if name == "mcnabb-foster"
            else OrianiProblem(**kwargs))
    problem = FitProblem(base=base, exp=exp, bounds_mode=bounds,
                         update_CL0=update_cl0)
    opts = PsoOptions(max_iterations=iters, population=pop, tolerance=tol,
                      seed=seed)

    def progress(it, fc, best, mean, stall, _traps):
        click.echo(f"iter {it:4d}  f-count {fc:7d}  best {best:.6e}  "
                   f"mean {mean:.6e}  stall {stall}")

    result = run_pso(problem, opts, progress=progress)

    dest = Path(out_path) if out_path else Path(project_path).with_name(
        Path(project_path).stem + "_fitted.json")
    fitted_mat = replace(project.material, C_L0=result.C_L0)
    save_project(replace(project, material=fitted_mat, traps=result.traps,
                         experiment=exp, fit=result), dest)
    trace_dest = dest.with_suffix(".trace.csv")
    with open(trace_dest, "w") as fh:
        fh.write("# iteration,f_count,best_f,mean_f,stall\n")
        for row in zip(result.iterations, result.f_counts,
                       result.best_f_trace, result.mean_f_trace,
                       result.stall_counts):
            fh.write(f"{row[0]},{row[1]},{row[2]:.12e},{row[3]:.12e},{row[4]}\n")
    click.echo(f"best f {result.best_f:.6e} ({result.termination}) -> {dest}")
    for i, tr in enumerate(result.traps, start=1):
        click.echo(f"trap {i}: delta_H {tr.delta_H / 1e3:.3f} kJ/mol, "
                   f"N_T {tr.N_T:.4e} 1/m3")


@cli.command()
@click.option("--in", "in_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--from", "from_unit", required=True)
@click.option("--to", "to_unit", required=True)
@click.option("--project", "project_path", type=click.Path(exists=True, dir_okay=False),
              help="Supplies material data for wt-ppm conversions.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
def convert_cmd(in_path, from_unit, to_unit, project_path, out_path):
    """Convert the value column of a two-column data file."""
    mat = load_project(project_path).material if project_path else None
    rows = []
    with open(in_path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except (IndexError, ValueError):
                raise DataFormatError(
                    f"{in_path}:{lineno}: expected two numeric columns"
                ) from None
    values = convert(np.array([r[1] for r in rows]), from_unit, to_unit, mat=mat)
    lines = [f"{T:.12e},{v:.12e}" for (T, _), v in zip(rows, values)]
    text = f"# T,value [{to_unit}]\n" + "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        click.echo(text, nl=False)


cli.add_command(convert_cmd, name="convert")


@cli.command()
@click.option("--port", type=int, default=8787)
@click.option("--host", default="127.0.0.1")
def serve(port, host):
    """Run the local HTTP service for the companion UI."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="info")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except click.ClickException as e:
        click.echo(f"error: {e.format_message()}", err=True)
        sys.exit(1)
    except (DataFormatError, UnitError) as e:
        click.echo(f"data error: {e}", err=True)
        sys.exit(2)
    except SolverError as e:
        click.echo(f"solver error: {e}", err=True)
        sys.exit(3)
    return 0


if __name__ == "__main__":
    sys.exit(main())
