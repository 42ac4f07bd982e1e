"""Space-time solution container shared by the PDE solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import MaterialParams, TestProtocol, TrapSpec

__all__ = ["SimulationResult"]


@dataclass(frozen=True)
class SimulationResult:
    """Fields of one forward simulation.

    ``C_L`` has shape (n_times, n_nodes); each entry of ``C_T`` matches.
    Concentrations are mol/m^3 on the symmetric grid x in [-L/2, L/2].
    """

    x: np.ndarray
    t: np.ndarray
    T: np.ndarray
    C_L: np.ndarray
    C_T: tuple = field(default_factory=tuple)
    model: str = ""
    mat: MaterialParams | None = None
    traps: tuple[TrapSpec, ...] = field(default_factory=tuple)
    protocol: TestProtocol | None = None

    def __post_init__(self):
        nt, nx = self.C_L.shape
        if len(self.t) != nt or len(self.x) != nx or len(self.T) != nt:
            raise ValueError("inconsistent grid shapes")
        for C in self.C_T:
            if C.shape != (nt, nx):
                raise ValueError("trap field shape mismatch")

    @property
    def n_nodes(self) -> int:
        return self.C_L.shape[1]

    def total_field(self) -> np.ndarray:
        """Total hydrogen concentration C_L + sum(C_T)."""
        out = self.C_L.copy()
        for C in self.C_T:
            out += C
        return out
