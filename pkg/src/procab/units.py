"""Gaussian-cgs constants, photon-mass unit conversions, reference bounds.

The photon mass is carried in two currencies: the inverse range m_gamma in
1/cm (the reciprocal of the Yukawa screening length of the fields) and the
rest mass m_ph in grams.  They are related by

    m_gamma = m_ph * c / hbar,      lambda_Compton = 2*pi / m_gamma.

All constants are fixed here, in one table, and every tolerance in the test
suite assumes exactly these values.  Reproducibility is preferred over the
last CODATA digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Constants:
    """Fixed cgs constant table (version `CONSTANTS_VERSION`)."""

    hbar: float          # erg s
    h: float             # erg s, = 2*pi*hbar
    c: float             # cm/s
    bohr_radius: float   # cm
    electron_charge: float  # statC
    year_seconds: float  # s


CONSTANTS_VERSION = "cgs-fixed-1"

CONSTANTS = Constants(
    hbar=1.0546e-27,
    h=2.0 * math.pi * 1.0546e-27,
    c=2.9979e10,
    bohr_radius=5.292e-9,
    electron_charge=4.8032e-10,
    year_seconds=3.156e7,
)

# Convenience aliases used throughout the package.
HBAR = CONSTANTS.hbar
H = CONSTANTS.h
C = CONSTANTS.c
BOHR_RADIUS = CONSTANTS.bohr_radius
ELECTRON_CHARGE = CONSTANTS.electron_charge
YEAR_SECONDS = CONSTANTS.year_seconds
HBAR_C = HBAR * C  # erg cm


@dataclass(frozen=True)
class InverseRange:
    """Photon mass as an inverse range m_gamma, in 1/cm.

    value = 0 is the massless limit and is accepted as a distinguished
    branch by every field and phase operation.
    """

    value: float

    def __post_init__(self):
        if not (self.value >= 0.0):
            raise ValueError(f"inverse range must be >= 0, got {self.value}")

    @classmethod
    def from_range_cm(cls, range_cm):
        """Build from the range m_gamma^-1 in cm (e.g. 1.4e7)."""
        if not (range_cm > 0.0):
            raise ValueError(f"range must be > 0 cm, got {range_cm}")
        return cls(1.0 / range_cm)

    @property
    def range_cm(self):
        """m_gamma^-1 in cm; inf in the massless limit."""
        return math.inf if self.value == 0.0 else 1.0 / self.value

    @property
    def compton_wavelength_cm(self):
        """lambda_C = 2*pi/m_gamma; inf in the massless limit."""
        return math.inf if self.value == 0.0 else 2.0 * math.pi / self.value


@dataclass(frozen=True)
class MassGrams:
    """Photon rest mass in grams."""

    value: float

    def __post_init__(self):
        if not (self.value >= 0.0):
            raise ValueError(f"mass must be >= 0, got {self.value}")


def inverse_range_value(m) -> float:
    """Coerce an InverseRange or a bare float (1/cm) to a float m_gamma."""
    mv = m.value if isinstance(m, InverseRange) else float(m)
    if not (mv >= 0.0):
        raise ValueError(f"inverse range must be >= 0, got {mv}")
    return mv


def to_grams(m) -> MassGrams:
    """Convert inverse range m_gamma (1/cm) to rest mass: m_ph = hbar*m_gamma/c."""
    return MassGrams(HBAR * inverse_range_value(m) / C)


def to_inverse_cm(m) -> InverseRange:
    """Convert rest mass (g) to inverse range: m_gamma = m_ph*c/hbar."""
    mv = m.value if isinstance(m, MassGrams) else float(m)
    if not (mv >= 0.0):
        raise ValueError(f"mass must be >= 0, got {mv}")
    return InverseRange(mv * C / HBAR)


def uncertainty_mass(delta_t_seconds) -> MassGrams:
    """Mass scale below which no effect is resolvable over a time delta_t.

    m_ph = h / (delta_t * c^2); with delta_t the age of the universe
    (~1e10 yr) this is the ~1e-65 g floor of any conceivable bound.
    """
    dt = float(delta_t_seconds)
    if not (dt > 0.0):
        raise ValueError(f"delta_t must be > 0 s, got {dt}")
    return MassGrams(H / (dt * C * C))


@dataclass(frozen=True)
class ReferenceBound:
    """A published lower bound on m_gamma^-1, stored as quoted (rounded)."""

    label: str
    inverse_range: InverseRange
    mass: MassGrams
    source: str

    @property
    def range_cm(self):
        return self.inverse_range.range_cm


_REFERENCE_BOUNDS = (
    ReferenceBound(
        label="coulomb",
        inverse_range=InverseRange.from_range_cm(3e9),
        mass=MassGrams(1.2e-47),
        source="Williams, Faller and Hill (1971), laboratory Coulomb-law test",
    ),
    ReferenceBound(
        label="geomagnetic",
        inverse_range=InverseRange.from_range_cm(5e10),
        mass=MassGrams(7.0e-49),
        source="Davis, Goldhaber and Nieto (1975), planetary magnetic field survey",
    ),
    ReferenceBound(
        label="toroid",
        inverse_range=InverseRange.from_range_cm(1.66e13),
        mass=MassGrams(2.1e-51),
        source="Luo, Tu, Hu and Luan (2003), magnetized toroid in the cosmic vector potential",
    ),
    ReferenceBound(
        label="bd",
        inverse_range=InverseRange.from_range_cm(1.4e7),
        mass=MassGrams(2.5e-45),
        source="Boulware and Deser (1989), table-top Aharonov-Bohm threshold",
    ),
)


def reference_bounds():
    """The four catalogued bounds: coulomb, geomagnetic, toroid, bd."""
    return list(_REFERENCE_BOUNDS)


def find_bound(label) -> ReferenceBound:
    """Look up a catalogued bound by (case-insensitive) label."""
    key = label.strip().lower()
    for bound in _REFERENCE_BOUNDS:
        if bound.label == key:
            return bound
    raise KeyError(f"no reference bound labelled {label!r}")
