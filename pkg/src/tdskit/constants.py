"""Physical constants shared across the package."""

#: Universal gas constant [J/(mol K)]
R = 8.31446

#: Avogadro's number [1/mol]
N_A = 6.02214e23

#: Molar mass of atomic hydrogen [g/mol], used for wt-ppm conversions
M_H = 1.008

#: Hard limit on the number of trap types handled per material
MAX_TRAPS = 6
