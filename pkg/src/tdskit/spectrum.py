"""Desorption spectrum containers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import TestProtocol

__all__ = ["DesorptionSpectrum", "ExperimentalSpectrum", "rate_from_average"]


def rate_from_average(avg: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Desorption rate from an averaged-concentration series.

    Central differences inside, first-order one-sided at the two ends.
    With this stencil the trapezoid integral of the rate telescopes
    exactly to avg[0] - avg[-1], so the reported spectrum conserves the
    desorbed mass even when the initial boundary layer is unresolved by
    the output grid.
    """
    out = np.empty_like(avg)
    out[1:-1] = (avg[:-2] - avg[2:]) / (t[2:] - t[:-2])
    out[0] = (avg[0] - avg[1]) / (t[1] - t[0])
    out[-1] = (avg[-2] - avg[-1]) / (t[-1] - t[-2])
    return out


@dataclass(frozen=True)
class DesorptionSpectrum:
    """Desorption-rate and flux series of one simulated test.

    All series share the output grid length.  ``deltaC_total`` equals
    ``deltaC_lattice`` plus the per-trap contributions pointwise.
    Rates are mol/(m^3 s), flux mol/(m^2 s), reported positive for
    outgassing.
    """

    T: np.ndarray
    t: np.ndarray
    deltaC_total: np.ndarray
    deltaC_lattice: np.ndarray
    deltaC_traps: tuple = field(default_factory=tuple)
    flux: np.ndarray | None = None
    model: str = ""
    protocol: TestProtocol | None = None

    def __post_init__(self):
        n = len(self.T)
        series = [self.t, self.deltaC_total, self.deltaC_lattice, *self.deltaC_traps]
        if self.flux is not None:
            series.append(self.flux)
        if any(len(s) != n for s in series):
            raise ValueError("all spectrum series must share one length")

    @property
    def peak_rate(self) -> float:
        return float(np.max(self.deltaC_total))

    def total_desorbed(self) -> float:
        """Time integral of the total desorption rate [mol/m^3]."""
        return float(np.trapezoid(self.deltaC_total, self.t))


@dataclass(frozen=True)
class ExperimentalSpectrum:
    """Measured desorption-rate curve in internal units (K, mol/(m^3 s))."""

    T: np.ndarray
    deltaC: np.ndarray
    source: str = ""

    def __post_init__(self):
        T = np.asarray(self.T, dtype=float)
        dC = np.asarray(self.deltaC, dtype=float)
        if len(T) != len(dC) or len(T) < 4:
            raise ValueError("need >= 4 samples of equal length")
        if not np.all(np.isfinite(T)) or not np.all(np.isfinite(dC)):
            raise ValueError("experimental series must be finite")
        if np.any(np.diff(T) <= 0):
            raise ValueError("temperatures must be strictly increasing")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "deltaC", dC)

    def total_content(self, phi: float) -> float:
        """Area under the curve in time: total hydrogen [mol/m^3].

        ``phi`` converts the temperature axis to time (ramp segment
        only; any egress during resting is not represented in the
        measured curve).
        """
        return float(np.trapezoid(self.deltaC, self.T) / phi)
