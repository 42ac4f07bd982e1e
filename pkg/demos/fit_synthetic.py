"""Recovering trap parameters from a spectrum by particle swarm.

The forward model generates a single-trap spectrum with known binding
enthalpy and density; the swarm then searches the global (delta_H,
N_T) box using only that curve. With a clean synthetic target the
optimum should land on the generating parameters.
"""

import numpy as np

import tdskit as tk

mat = tk.MaterialParams(E_L=5690.0, D_0=7.23e-8, M_M=55.847,
                        rho_M=7.8474, N_L=5.1e29, C_L0=0.06)
protocol = tk.TestProtocol(L=0.0063, phi=0.055, t_rest=0.0,
                           T_min=293.0, T_max=893.0)

truth = tk.TrapSpec.from_binding_energy(N_T=5.19e24, delta_H=-53.1e3,
                                        E_t=mat.E_L)
spec = tk.desorption_rate(tk.solve_oriani(tk.OrianiProblem(
    mat=mat, traps=(truth,), protocol=protocol)))

# pretend the ramp portion is a measured data set
exp = tk.ExperimentalSpectrum(T=spec.T[2:], deltaC=spec.deltaC_total[2:],
                              source="synthetic")

# the nominal trap only seeds the fixed kinetic fields; delta_H and
# N_T are searched over the global box
nominal = tk.TrapSpec.from_binding_energy(N_T=1e24, delta_H=-40e3,
                                          E_t=mat.E_L)
problem = tk.FitProblem(
    base=tk.OrianiProblem(mat=mat, traps=(nominal,), protocol=protocol),
    exp=exp,
)


def progress(it, f_count, best, mean, stall, traps):
    if it % 5 == 0:
        print(f"  iter {it:3d}  best {best:.3e}  mean {mean:.3e}  "
              f"stall {stall:2d}  dH {traps[0].delta_H / 1e3:7.2f} kJ/mol")


print("swarm search over the global (delta_H, log10 N_T) box ...")
result = tk.run_pso(problem, tk.PsoOptions(max_iterations=60,
                                           population=40, seed=0),
                    progress=progress)

print()
print(f"terminated by {result.termination}, "
      f"misfit {result.best_f:.3e} mol/(m3 s)")
print(f"recovered delta_H {result.traps[0].delta_H / 1e3:.2f} kJ/mol "
      f"(truth {truth.delta_H / 1e3:.2f})")
print(f"recovered N_T {result.traps[0].N_T:.3e} 1/m3 "
      f"(truth {truth.N_T:.3e})")
areas = result.trap_areas()
print(f"trap accounts for {areas[0]:.3f} mol/m3 of "
      f"{np.trapezoid(result.spectrum.deltaC_total, result.spectrum.t):.3f} "
      "desorbed")
