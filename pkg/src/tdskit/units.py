"""Unit conversions for flux, hydrogen content, desorption rate and temperature.

Internal units are K, mol/m^3, mol/(m^3 s) and mol/(m^2 s).  wt-ppm
variants need the host material for its density, since weight fractions
are relative to the metal mass.
"""

from __future__ import annotations

import numpy as np

from .constants import M_H
from .core import MaterialParams

__all__ = ["UnitError", "FAMILIES", "family_of", "convert"]


class UnitError(ValueError):
    """Raised for unknown units or cross-family conversion attempts."""


# Factors express: value[unit] = factor * value[internal unit].
# wt-ppm factors depend on the material and are handled separately.
_CONTENT = {"mol/m3": 1.0, "mol/cm3": 1e-6, "wppm": None}
_RATE = {"mol/m3/s": 1.0, "mol/cm3/s": 1e-6, "wppm/s": None}
_FLUX = {"mol/m2/s": 1.0, "mol/cm2/s": 1e-4, "wppm_m/s": None}
_TEMPERATURE = {"K": None, "C": None}
_TIME = {"s": 1.0}

FAMILIES = {
    "content": _CONTENT,
    "rate": _RATE,
    "flux": _FLUX,
    "temperature": _TEMPERATURE,
    "time": _TIME,
}

_ALIASES = {
    "mol/(m3 s)": "mol/m3/s",
    "mol/(cm3 s)": "mol/cm3/s",
    "mol/(m2 s)": "mol/m2/s",
    "mol/(cm2 s)": "mol/cm2/s",
    "wppm m/s": "wppm_m/s",
    "wppm_s": "wppm/s",
    "mol_m3_s": "mol/m3/s",
    "mol_cm3_s": "mol/cm3/s",
    "mol_m2_s": "mol/m2/s",
    "mol_cm2_s": "mol/cm2/s",
    "wppm*m/s": "wppm_m/s",
    "degC": "C",
    "celsius": "C",
    "kelvin": "K",
}


def _canonical(unit: str) -> str:
    u = unit.strip()
    return _ALIASES.get(u, u)


def family_of(unit: str) -> str:
    u = _canonical(unit)
    for name, table in FAMILIES.items():
        if u in table:
            return name
    raise UnitError(f"unknown unit {unit!r}")


def _wppm_factor(mat: MaterialParams) -> float:
    # 1 mol/m^3 of H equals M_H [g/m^3]; relative to the metal mass
    # rho_M [g/cm^3] = rho_M*1e6 [g/m^3], times 1e6 for ppm.
    return M_H / mat.rho_M


def convert(value, from_unit: str, to_unit: str, mat: MaterialParams | None = None):
    """Convert ``value`` between two units of the same family.

    ``mat`` is required for any wt-ppm based unit.  Identity conversions
    return the input unchanged.  Temperature converts affinely (K/C);
    all other families are pure scale factors.
    """
    fu, tu = _canonical(from_unit), _canonical(to_unit)
    ffam, tfam = family_of(fu), family_of(tu)
    if ffam != tfam:
        raise UnitError(f"cannot convert {from_unit!r} ({ffam}) to {to_unit!r} ({tfam})")
    if fu == tu:
        return value

    if ffam == "temperature":
        v = np.asarray(value, dtype=float)
        out = v + 273.15 if fu == "C" else v - 273.15
        return out if out.ndim else float(out)

    table = FAMILIES[ffam]

    def factor(unit: str) -> float:
        f = table[unit]
        if f is None:
            if mat is None:
                raise UnitError(f"unit {unit!r} requires material parameters")
            return _wppm_factor(mat)
        return f

    v = np.asarray(value, dtype=float)
    out = v * (factor(tu) / factor(fu))
    return out if out.ndim else float(out)
