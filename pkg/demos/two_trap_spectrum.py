"""Two trap families produce two desorption peaks.

A bcc iron slab carries a shallow, dense trap (-30 kJ/mol) and a deep,
sparse one (-70 kJ/mol). Under the equilibrium-trapping model each
family releases its hydrogen over a distinct temperature window, so
the spectrum shows two maxima; the per-trap decomposition tells which
trap owns which peak.
"""

import numpy as np

import tdskit as tk

mat = tk.MaterialParams(E_L=5.63e3, D_0=0.133e-6, M_M=55.847,
                        rho_M=7.8474, N_L=1.2291e29, C_L0=0.1)
traps = (
    tk.TrapSpec(N_T=6.0221e25, delta_H=-30e3, E_t=5.63e3, E_d=35.63e3),
    tk.TrapSpec(N_T=6.0221e24, delta_H=-70e3, E_t=5.63e3, E_d=75.63e3),
)
protocol = tk.TestProtocol(L=1e-3, phi=2.0, t_rest=0.0,
                           T_min=293.0, T_max=873.0)

result = tk.solve_oriani(tk.OrianiProblem(mat=mat, traps=traps,
                                          protocol=protocol))
spec = tk.desorption_rate(result)

# skip the first frames: the instantaneous boundary drop at t=0 shows
# up as a differencing spike there
ramp = slice(2, None)
k1 = 2 + np.argmax(spec.deltaC_traps[0][ramp])
k2 = 2 + np.argmax(spec.deltaC_traps[1][ramp])
print(f"shallow trap peak: {spec.T[k1]:6.1f} K, "
      f"{spec.deltaC_traps[0][k1]:.3e} mol/(m3 s)")
print(f"deep trap peak:    {spec.T[k2]:6.1f} K, "
      f"{spec.deltaC_traps[1][k2]:.3e} mol/(m3 s)")

# each trap must desorb exactly what it held at the start
C_L, C_T, total0 = tk.inventory(result, 0.0)
for i, d in enumerate(spec.deltaC_traps):
    released = np.trapezoid(d, spec.t)
    print(f"trap {i + 1}: released {released:.4f} mol/m3, "
          f"held initially {C_T[i]:.4f} mol/m3")
print(f"mass balance residual: {tk.mass_balance_residual(result):.2e}")

tk.export_spectrum(spec, "two_trap_spectrum.csv", mat=mat)
print("wrote two_trap_spectrum.csv "
      "(T, total, lattice and per-trap rates, flux)")
