"""Physical constants, internal unit system, and the shared device/field types.

Every downstream module works in an internal unit system tied to the device
geometry: energies in units of hbar^2 / (2 m* r^2), lengths in units of the
minor radius r, times in units of hbar / energy_scale.  This keeps matrix
entries O(1) instead of O(1e-23 J) and makes the dimensionless field
parameters explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# CODATA 2018 values (SI).  Frozen on purpose: reproducibility of derived
# numbers beats configurability for this artifact.
HBAR = 1.054571817e-34  # reduced Planck constant [J s]
E_CHARGE = 1.602176634e-19  # elementary charge [C], exact
ELECTRON_MASS = 9.1093837015e-31  # electron rest mass [kg]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants used by the model, all strictly positive."""

    hbar: float = HBAR
    electron_charge: float = E_CHARGE
    electron_rest_mass: float = ELECTRON_MASS

    def __post_init__(self) -> None:
        for name in ("hbar", "electron_charge", "electron_rest_mass"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and strictly positive")


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class TorusGeometry:
    """Nanotorus geometry: minor radius, major radius, effective-mass ratio.

    The torus must be non-self-intersecting (0 < r_minor < R_major).  The
    effective mass of the confined electron is effective_mass_ratio * m0.
    """

    r_minor: float  # tube radius [m]
    R_major: float  # ring radius [m]
    effective_mass_ratio: float = 0.3

    def __post_init__(self) -> None:
        if not (math.isfinite(self.r_minor) and math.isfinite(self.R_major)):
            raise ValueError("radii must be finite")
        if not 0.0 < self.r_minor < self.R_major:
            raise ValueError(
                f"need 0 < r_minor < R_major, got r={self.r_minor!r}, R={self.R_major!r}"
            )
        if not (math.isfinite(self.effective_mass_ratio) and self.effective_mass_ratio > 0):
            raise ValueError("effective_mass_ratio must be finite and positive")

    @property
    def effective_mass(self) -> float:
        """m* in kg."""
        return self.effective_mass_ratio * ELECTRON_MASS

    @property
    def aspect_ratio(self) -> float:
        """R/r, the only geometric parameter entering dimensionless formulas."""
        return self.R_major / self.r_minor


@dataclass(frozen=True)
class FieldConfig:
    """External control fields: static B plus an oscillating drive field.

    phi is normalized into [0, 2*pi) at construction.
    """

    B: float = 0.0  # static magnetic flux density [T]
    E0: float = 0.0  # drive field amplitude [V/m]
    omega_rf: float = 0.0  # drive angular frequency [rad/s]
    phi: float = 0.0  # drive phase [rad]

    def __post_init__(self) -> None:
        for name in ("B", "E0", "omega_rf", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.B < 0:
            raise ValueError("B must be non-negative")
        if self.E0 < 0:
            raise ValueError("E0 must be non-negative")
        object.__setattr__(self, "phi", self.phi % TWO_PI)


def energy_scale_of(geom: TorusGeometry) -> float:
    """Kinetic energy scale hbar^2 / (2 m* r^2) in joules."""
    return HBAR**2 / (2.0 * geom.effective_mass * geom.r_minor**2)


@dataclass(frozen=True)
class UnitSystem:
    """Conversion between SI and the geometry-tied internal units.

    Internal quantities are dimensionless multiples of the scales below.
    Round trips are exact to relative 1e-14 (they are single multiplications).
    """

    energy_scale: float  # [J]
    length_scale: float  # [m]
    time_scale: float  # [s]

    _KINDS = ("energy", "length", "time", "angular_frequency")

    def __post_init__(self) -> None:
        for name in ("energy_scale", "length_scale", "time_scale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive")

    @classmethod
    def for_geometry(cls, geom: TorusGeometry) -> "UnitSystem":
        u = energy_scale_of(geom)
        return cls(energy_scale=u, length_scale=geom.r_minor, time_scale=HBAR / u)

    def _scale(self, kind: str) -> float:
        if kind == "energy":
            return self.energy_scale
        if kind == "length":
            return self.length_scale
        if kind == "time":
            return self.time_scale
        if kind == "angular_frequency":
            return 1.0 / self.time_scale
        raise ValueError(f"unknown quantity kind {kind!r}; expected one of {self._KINDS}")

    def to_internal(self, value: float, kind: str = "energy") -> float:
        if not math.isfinite(value):
            raise ValueError("cannot convert non-finite value")
        return value / self._scale(kind)

    def from_internal(self, value: float, kind: str = "energy") -> float:
        if not math.isfinite(value):
            raise ValueError("cannot convert non-finite value")
        return value * self._scale(kind)


def magnetic_parameter(geom: TorusGeometry, B: float) -> float:
    """Dimensionless magnetic field strength b = e B r^2 / (2 hbar).

    It is the natural scale on which the field reshapes the confinement:
    the paramagnetic level shift is -2*m*b and the diamagnetic confinement
    b^2 (R/r + cos(theta))^2, both in internal energy units.
    """
    if B < 0:
        raise ValueError("B must be non-negative")
    return E_CHARGE * B * geom.r_minor**2 / (2.0 * HBAR)


def electric_parameter(geom: TorusGeometry, E_static: float) -> float:
    """Dimensionless drive strength f = e E r / energy_scale."""
    return E_CHARGE * E_static * geom.r_minor / energy_scale_of(geom)


# Dimension vectors (mass, length, time, charge) for the symbolic
# consistency check below.  Only the handful of quantities the artifact
# manipulates are needed; this is not a units library.
_DIMENSIONS = {
    "hbar": (1, 2, -1, 0),
    "charge": (0, 0, 0, 1),
    "length": (0, 1, 0, 0),
    "mass": (1, 0, 0, 0),
    "magnetic_field": (1, 0, -1, -1),  # T = kg / (C s)
}


def _dim_combine(*terms: tuple[tuple[int, int, int, int], int]) -> tuple[int, int, int, int]:
    out = [0, 0, 0, 0]
    for dim, power in terms:
        for i in range(4):
            out[i] += dim[i] * power
    return tuple(out)  # type: ignore[return-value]


def dipole_dimension_check(geom: TorusGeometry, B: float) -> bool:
    """Verify the dipole-coupling chain is dimensionally consistent.

    Checks, through the dimension vectors above, that (i) both terms under
    the square root defining the well stiffness beta carry (kg m/s)^2,
    (ii) hbar / (r |beta|) is dimensionless, and (iii) e*r carries C*m.
    The result is value-independent; B enters only through its dimension.
    """
    if B < 0:
        raise ValueError("B must be non-negative")
    hbar = _DIMENSIONS["hbar"]
    charge = _DIMENSIONS["charge"]
    length = _DIMENSIONS["length"]
    bfield = _DIMENSIONS["magnetic_field"]

    # beta^2 candidates: r * hbar^2 / L^3   and   r * e^2 B^2 * L
    beta_sq_curv = _dim_combine((length, 1), (hbar, 2), (length, -3))
    beta_sq_mag = _dim_combine((length, 1), (charge, 2), (bfield, 2), (length, 1))
    if beta_sq_curv != beta_sq_mag:
        return False
    if any(v % 2 for v in beta_sq_curv):
        return False  # beta itself would not have integer dimensions
    beta = tuple(v // 2 for v in beta_sq_curv)

    ratio = _dim_combine((hbar, 1), (length, -1), (beta, -1))
    if ratio != (0, 0, 0, 0):
        return False

    dipole = _dim_combine((charge, 1), (length, 1))
    return dipole == (0, 1, 0, 1)
