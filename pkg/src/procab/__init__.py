"""Screened-solenoid magnetostatics for a massive photon, the resulting
corrections to Aharonov-Bohm-type quantum phases, and the inversion of
measurement precision into photon-mass bounds.  Gaussian-cgs units
throughout: cm, gauss, statC; the photon mass lives in two currencies,
inverse range m_gamma (1/cm) and rest mass (g)."""

from .bounds import (
    BD_REFERENCE,
    BDReference,
    BoundResult,
    PrecisionSpec,
    compare_pm_q,
    compare_tkachuk,
    invert_bound,
)
from .deflection import DeflectionResult, deflect, electron_probe, transverse_impulse
from .errors import (
    BracketError,
    ConfigError,
    DomainError,
    OracleConvergenceError,
    QuadratureError,
    ValidityWindowError,
)
from .field import (
    FieldProfile,
    SolenoidSpec,
    a_phi,
    b_total,
    delta_b,
    delta_b_asymptotic,
    field_profile,
    ode_oracle,
    pi_kernel,
    pi_kernel_quadrature,
)
from .phases import (
    LineIntegralResult,
    PathSpec,
    PhasePair,
    PhaseResult,
    ProbeSpec,
    ab_closed,
    line_integral_oracle,
    open_path_pm_q,
    tkachuk,
)
from .units import (
    CONSTANTS,
    CONSTANTS_VERSION,
    InverseRange,
    MassGrams,
    ReferenceBound,
    reference_bounds,
    to_grams,
    to_inverse_cm,
    uncertainty_mass,
)

__version__ = "0.1.0"

__all__ = [
    "BD_REFERENCE", "BDReference", "BoundResult", "PrecisionSpec",
    "compare_pm_q", "compare_tkachuk", "invert_bound",
    "DeflectionResult", "deflect", "electron_probe", "transverse_impulse",
    "BracketError", "ConfigError", "DomainError", "OracleConvergenceError",
    "QuadratureError", "ValidityWindowError",
    "FieldProfile", "SolenoidSpec", "a_phi", "b_total", "delta_b",
    "delta_b_asymptotic", "field_profile", "ode_oracle", "pi_kernel",
    "pi_kernel_quadrature",
    "LineIntegralResult", "PathSpec", "PhasePair", "PhaseResult", "ProbeSpec",
    "ab_closed", "line_integral_oracle", "open_path_pm_q", "tkachuk",
    "CONSTANTS", "CONSTANTS_VERSION", "InverseRange", "MassGrams",
    "ReferenceBound", "reference_bounds", "to_grams", "to_inverse_cm",
    "uncertainty_mass",
    "__version__",
]
