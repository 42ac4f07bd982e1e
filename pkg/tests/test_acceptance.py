"""Acceptance criteria for the primary component.

One test per criterion; each prints a single PASS/FAIL line with the
measured figure of merit next to its tolerance.
"""

import dataclasses
import time

import numpy as np
import pytest

import tdskit as tk
from tdskit.analytic import SeriesSolution

from conftest import (
    config_drexler,
    config_kirchheim,
    config_legrand,
    config_martensitic,
    config_nu_sweep,
    config_raina,
    local_maxima,
    martensitic_truth_traps,
    raina_nondim_flux,
)


def report(num, ok, detail):
    print(f"\n[criterion {num:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def ramp_peak(spec, T_min):
    mask = spec.T > T_min
    k = np.flatnonzero(mask)[np.argmax(spec.deltaC_total[mask])]
    return spec.T[k], spec.deltaC_total[k]


@pytest.fixture(scope="module")
def kirchheim_mf_run():
    mat, protocol = config_kirchheim()
    return tk.solve_mcnabb_foster(tk.McNabbFosterProblem(
        mat=mat, traps=(), protocol=protocol))


@pytest.fixture(scope="module")
def raina_run():
    mat, traps, protocol = config_raina(t_rest=0.0)
    return tk.solve_oriani(tk.OrianiProblem(
        mat=mat, traps=traps, protocol=protocol))


@pytest.fixture(scope="module")
def legrand_run():
    mat, traps, protocol = config_legrand()
    return tk.solve_mcnabb_foster(tk.McNabbFosterProblem(
        mat=mat, traps=traps, protocol=protocol))


@pytest.fixture(scope="module")
def drexler_run():
    mat, traps, protocol = config_drexler()
    return tk.solve_oriani(tk.OrianiProblem(
        mat=mat, traps=traps, protocol=protocol))


def test_c01_lattice_oracle_equivalence(kirchheim_mf_run):
    t0 = time.perf_counter()
    mat, protocol = config_kirchheim()
    spec_ana = tk.lattice_spectrum(mat, protocol)
    spec_num = tk.desorption_rate(kirchheim_mf_run)
    err = np.max(np.abs(spec_num.deltaC_total - spec_ana.deltaC_total))
    rel = err / spec_ana.peak_rate
    dt = time.perf_counter() - t0
    report(1, rel < 0.01 and dt < 30.0,
           f"trap-free solver vs series max err {rel:.2e} of peak "
           f"(tol 1e-2), {dt:.1f} s (budget 30 s)")


def test_c02_series_truncation_monotone():
    mat, protocol = config_kirchheim()
    ref = SeriesSolution(mat, protocol, n_terms=800).spectrum()
    dists = [
        np.max(np.abs(SeriesSolution(mat, protocol, n_terms=n).spectrum()
                      .deltaC_total - ref.deltaC_total))
        for n in (1, 3, 10)
    ]
    ok = dists[0] > dists[1] > dists[2]
    report(2, ok,
           "truncation error vs 800 terms decreases monotonically: "
           + " > ".join(f"{d:.3e}" for d in dists))


def test_c03_rest_time_spike_attenuation(raina_run):
    spec0 = tk.desorption_rate(raina_run)
    peaks = local_maxima(spec0.flux)
    mat, _, protocol = config_raina(t_rest=0.0)
    single_peak = len(peaks) == 1 and spec0.T[peaks[0]] / protocol.T_min > 1.2

    initial = []
    for t_rest in (0.0, 5.0, 20.0, 50.0):
        mat, traps, protocol = config_raina(t_rest=t_rest)
        spec = tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
            mat=mat, traps=traps, protocol=protocol)))
        J = raina_nondim_flux(spec, mat)
        initial.append(float(np.interp(t_rest + 0.5, spec.t, J)))
    decreasing = all(a > b for a, b in zip(initial, initial[1:]))
    report(3, single_peak and decreasing,
           "initial flux decreases with rest time "
           f"({', '.join(f'{v:.3f}' for v in initial)}) and the t_rest=0 "
           "curve keeps a single trap peak after the spike")


def test_c04_single_trap_conservation(legrand_run):
    mat, traps, protocol = config_legrand()
    spec = tk.desorption_rate(legrand_run)
    trapped = np.trapezoid(spec.deltaC_traps[0], spec.t)
    target = traps[0].N_T / tk.N_A
    mass_ok = abs(trapped / target - 1.0) < 0.01
    mask = spec.T > protocol.T_min
    T_lat = spec.T[mask][np.argmax(spec.deltaC_lattice[mask])]
    T_trap = spec.T[mask][np.argmax(spec.deltaC_traps[0][mask])]
    report(4, mass_ok and T_lat < T_trap,
           f"trapped desorption {trapped:.4f} vs N_T/N_A {target:.4f} "
           f"mol/m3 (tol 1 %), lattice peak {T_lat:.0f} K before trapped "
           f"peak {T_trap:.0f} K")


def test_c05_two_trap_structure(drexler_run):
    spec = tk.desorption_rate(drexler_run)
    peaks = local_maxima(spec.deltaC_total)
    hi = peaks[-1] if peaks else 0
    share = spec.deltaC_traps[1][hi] / spec.deltaC_total[hi]
    resid = tk.mass_balance_residual(drexler_run)
    ok = len(peaks) == 2 and share > 0.9 and resid < 5e-3
    report(5, ok,
           f"{len(peaks)} local maxima (expect 2), deep trap owns "
           f"{share:.1%} of the high-T peak, mass residual {resid:.2e} "
           "(tol 5e-3)")


def test_c06_equilibrium_limit_of_kinetic_model():
    t0 = time.perf_counter()
    numerics = tk.NumericsConfig(n_elements=600)
    mat, traps, protocol = config_nu_sweep(1e8)
    ref = tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
        mat=mat, traps=traps, protocol=protocol, numerics=numerics)))
    dists = {}
    for nu in (1e4, 1e6, 1e8, 1e10):
        mat, traps, protocol = config_nu_sweep(nu)
        spec = tk.desorption_rate(tk.solve_mcnabb_foster(
            tk.McNabbFosterProblem(mat=mat, traps=traps, protocol=protocol,
                                   numerics=numerics)))
        dists[nu] = float(np.max(
            np.abs(spec.deltaC_total - ref.deltaC_total)[2:])
            / ref.peak_rate)
    dt = time.perf_counter() - t0
    vals = list(dists.values())
    ok = (dists[1e8] < 0.02 and dists[1e10] < 0.02 and dists[1e4] > 0.05
          and all(a >= b for a, b in zip(vals, vals[1:])) and dt < 120.0)
    report(6, ok,
           "kinetic-model distance to the equilibrium model "
           + ", ".join(f"nu=1e{int(np.log10(k))}: {v:.4f}"
                       for k, v in dists.items())
           + f" of peak (tols: <0.02 at 1e8/1e10, >0.05 at 1e4), "
           f"{dt:.0f} s (budget 120 s)")


def test_c07_mass_conservation_everywhere(kirchheim_mf_run, raina_run,
                                          legrand_run, drexler_run):
    residuals = {
        "trap-free": tk.mass_balance_residual(kirchheim_mf_run),
        "rest-time": tk.mass_balance_residual(raina_run),
        "kinetic single trap": tk.mass_balance_residual(legrand_run),
        "two traps": tk.mass_balance_residual(drexler_run),
    }
    ok = all(r < 5e-3 for r in residuals.values())
    report(7, ok,
           "mass balance residuals "
           + ", ".join(f"{k}: {v:.2e}" for k, v in residuals.items())
           + " (tol 5e-3 each)")


def test_c08_parametric_trends():
    mat, protocol = config_martensitic()

    def run(delta_H, N_T):
        trap = tk.TrapSpec.from_binding_energy(N_T=N_T, delta_H=delta_H,
                                               E_t=mat.E_L)
        return tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
            mat=mat, traps=(trap,), protocol=protocol)))

    peak_T = [ramp_peak(run(dh, 5.19e24), protocol.T_min)[0]
              for dh in (-50e3, -70e3, -90e3)]
    deeper_later = peak_T[0] < peak_T[1] < peak_T[2]

    peak_h = [ramp_peak(run(-50e3, 5.19e24 * f), protocol.T_min)[1]
              for f in (1.0, 0.1, 0.01)]
    sparser_lower = peak_h[0] > peak_h[1] > peak_h[2]

    report(8, deeper_later and sparser_lower,
           "peak temperature rises with trap depth ("
           + " < ".join(f"{T:.0f} K" for T in peak_T)
           + ") and peak height falls with trap density ("
           + " > ".join(f"{h:.2e}" for h in peak_h) + ")")


def test_c09_initial_concentration_insensitivity():
    # compared over the trap-release segment; the early-ramp lattice
    # transient scales with C_L0 by construction and below ~2e-2 mol/m3
    # the traps no longer start saturated, which is the regime the
    # source study itself flags as deviating
    mat, protocol = config_martensitic()
    traps = martensitic_truth_traps()

    def run(C_L0):
        m = dataclasses.replace(mat, C_L0=C_L0)
        return tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
            mat=m, traps=traps, protocol=protocol)))

    specs = {c: run(c) for c in (6e-2, 6e-1, 6.0)}
    mask = specs[6e-2].T >= 390.0
    worst = 0.0
    vals = list(specs.values())
    for i, a in enumerate(vals):
        for b in vals[i + 1:]:
            pk = max(a.deltaC_total[mask].max(), b.deltaC_total[mask].max())
            worst = max(worst, float(np.max(
                np.abs(a.deltaC_total - b.deltaC_total)[mask]) / pk))

    depleted = run(6e-4)
    pk = specs[6e-2].deltaC_total[mask].max()
    dev = float(np.max(np.abs(depleted.deltaC_total
                              - specs[6e-2].deltaC_total)[mask]) / pk)
    report(9, worst < 0.02 and dev > 0.10,
           f"spectra for C_L0 in [6e-2, 6] mol/m3 differ by {worst:.4f} "
           f"of peak (tol 0.02); depleted C_L0=6e-4 deviates by {dev:.2f} "
           "(expect > 0.10)")


def _match_traps(recovered, truth):
    """Pair each truth trap with the recovered trap nearest in delta_H."""
    rec = list(recovered)
    pairs = []
    for tr in truth:
        j = int(np.argmin([abs(r.delta_H - tr.delta_H) for r in rec]))
        pairs.append((tr, rec.pop(j)))
    return pairs


def test_c10_synthetic_fit_round_trip():
    t0 = time.perf_counter()
    mat, protocol = config_martensitic()
    protocol = dataclasses.replace(protocol, t_rest=0.0)
    truth = martensitic_truth_traps()
    spec = tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
        mat=mat, traps=truth, protocol=protocol)))
    exp = tk.ExperimentalSpectrum(T=spec.T[2:], deltaC=spec.deltaC_total[2:])
    nominal = (
        tk.TrapSpec.from_binding_energy(N_T=1e24, delta_H=-40e3,
                                        E_t=mat.E_L),
        tk.TrapSpec.from_binding_energy(N_T=1e24, delta_H=-80e3,
                                        E_t=mat.E_L),
    )
    problem = tk.FitProblem(
        base=tk.OrianiProblem(mat=mat, traps=nominal, protocol=protocol),
        exp=exp)

    # Multi-start global search: the objective has a deceptive local
    # minimum where the deep trap's shoulder is absorbed by a large
    # shallow trap, so single swarms land there for some seeds. Seeds
    # that reach the global basin recover the truth to machine
    # precision; the multi-start winner is the lowest objective.
    results = [
        tk.run_pso(problem, tk.PsoOptions(max_iterations=150, population=100,
                                          stall_window=25, tolerance=1e-10,
                                          seed=seed))
        for seed in range(5)
    ]
    best = min(results, key=lambda r: r.best_f)
    n_tight = sum(
        all(abs(rec.delta_H - tr.delta_H) <= 2e3
            and abs(rec.N_T / tr.N_T - 1.0) <= 0.10
            for tr, rec in _match_traps(res.traps, truth))
        for res in results
    )
    ok = all(
        abs(rec.delta_H - tr.delta_H) <= 2e3
        and abs(rec.N_T / tr.N_T - 1.0) <= 0.10
        for tr, rec in _match_traps(best.traps, truth)
    )
    dt = time.perf_counter() - t0
    report(10, ok and n_tight >= 2,
           f"multi-start best of 5 seeds recovers both traps within "
           f"+-2 kJ/mol and +-10 % density (best f {best.best_f:.1e}; "
           f"{n_tight}/5 seeds land in the global basin, need >= 2), "
           f"{dt:.0f} s")


def test_c11_fit_determinism():
    mat, protocol = config_martensitic()
    protocol = dataclasses.replace(protocol, t_rest=0.0)
    numerics = tk.NumericsConfig(n_elements=50, n_temperature_evals=60)
    truth = (tk.TrapSpec.from_binding_energy(N_T=5.19e24, delta_H=-53.1e3,
                                             E_t=mat.E_L),)
    spec = tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
        mat=mat, traps=truth, protocol=protocol, numerics=numerics)))
    exp = tk.ExperimentalSpectrum(T=spec.T[2:], deltaC=spec.deltaC_total[2:])
    nominal = (tk.TrapSpec.from_binding_energy(N_T=1e25, delta_H=-50e3,
                                               E_t=mat.E_L),)
    problem = tk.FitProblem(base=tk.OrianiProblem(
        mat=mat, traps=nominal, protocol=protocol, numerics=numerics),
        exp=exp)

    results = [
        tk.run_pso(problem, tk.PsoOptions(max_iterations=6, population=8,
                                          seed=42, workers=w))
        for w in (1, 1, 2)
    ]
    a, b, c = results
    identical = all(
        np.array_equal(a.best_f_trace, r.best_f_trace)
        and np.array_equal(r.mean_f_trace, a.mean_f_trace)
        and r.traps == a.traps and r.best_f == a.best_f
        for r in (b, c)
    )
    report(11, identical,
           "same seed gives bitwise-identical traces across repeat runs "
           "and across 1-worker vs 2-worker evaluation")


def test_c12_concentration_split_degenerate_identity():
    values = [3.14, 1e-9, 870.0]
    exact = all(
        tk.solve_initial_concentration((), 5.1e29, v, 293.0) == v
        for v in values
    )
    report(12, exact,
           "with zero traps the measured total passes through unchanged "
           f"for C_exp in {values}")


def test_c13_forward_solve_speed():
    timings = {}
    mat, traps, protocol = config_drexler()
    t0 = time.perf_counter()
    tk.solve_oriani(tk.OrianiProblem(mat=mat, traps=traps,
                                     protocol=protocol))
    timings["equilibrium, 2 traps"] = time.perf_counter() - t0

    mat, traps, protocol = config_legrand()
    t0 = time.perf_counter()
    tk.solve_mcnabb_foster(tk.McNabbFosterProblem(
        mat=mat, traps=traps, protocol=protocol))
    timings["kinetic, 1 trap"] = time.perf_counter() - t0

    ok = all(v < 10.0 for v in timings.values())
    report(13, ok,
           "forward solves at default numerics: "
           + ", ".join(f"{k} {v:.2f} s" for k, v in timings.items())
           + " (budget 10 s each)")
