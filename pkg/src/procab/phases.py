"""Quantum phases of the Aharonov-Bohm family and their photon-mass corrections.

Three effects share the screened-solenoid field machinery:

* closed-loop AB phase of a charged particle encircling the solenoid,
* the Tkachuk phase of a neutral electric dipole circling the z-linearly
  magnetized solenoid (its radial equation reduces to the same screened
  problem), and
* the open-path phase difference of a coherent superposition of opposite
  charge states +q/-q traveling on one side of the solenoid.

Every effect is computed two ways.  The ``exact_quadrature`` method
integrates the exact screened field/potential (flux of the field correction
for closed loops, tangential line integral of A_phi for the open path) and
carries a physical sign: the correction phase is *negative* for positive
phi0 because screening always removes flux.  The ``asymptotic`` method
evaluates the standard leading-logarithm forms, which are conventionally
written as magnitudes:

    closed loop:  |dphi|/phi0 = (1/2) (m rho)^2 ln(2/(m rho)),  m*rho < 0.1
    open path:    dphi/phi0 = -(4/pi) m^2 x y ln(m sqrt(x^2+y^2)/2)

The open-path asymptotic ratio is reproduced verbatim from its published
form.  Note its normalization: the observable is the *relative* phase
between the +q and -q beams, which doubles both phi0 and dphi of a single
beam (constant ``SUPERPOSITION_DOUBLING``, which cancels in the ratio); on
top of that the published coefficient carries one further factor 2 relative
to the single-beam line integral that the numeric oracle reports.  That
normalization is flagged, not asserted: tests pin the functional form
(m^2 times the slowly varying log) and the oracle's internal consistency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import field as field_mod
from .errors import QuadratureError, ValidityWindowError
from .units import ELECTRON_CHARGE, HBAR_C, inverse_range_value

__all__ = [
    "ProbeSpec",
    "PathSpec",
    "PhaseResult",
    "PhasePair",
    "LineIntegralResult",
    "ab_closed",
    "tkachuk",
    "open_path_pm_q",
    "line_integral_oracle",
    "closed_loop_ratio_asymptotic",
    "SUPERPOSITION_DOUBLING",
    "MIN_ASPECT_RATIO",
]

# Relative phase between the +q and -q beams is twice the single-beam phase.
# Kept as a named convention constant; it cancels in dphi/phi0.
SUPERPOSITION_DOUBLING = 2.0

# Operational form of the open-path requirement "half-length >> offset".
MIN_ASPECT_RATIO = 3.0

PROBE_KINDS = ("charge", "electric_dipole", "magnetic_dipole")


@dataclass(frozen=True)
class ProbeSpec:
    """The interfering particle: a charge or a dipole, plus beam kinematics."""

    kind: str
    charge_statc: float | None = None
    dipole_statc_cm: float | None = None
    speed_cm_s: float | None = None
    momentum_g_cm_s: float | None = None
    de_broglie_cm: float | None = None

    def __post_init__(self):
        if self.kind not in PROBE_KINDS:
            raise ValueError(f"unknown probe kind {self.kind!r}")
        if self.kind == "charge":
            if self.charge_statc is None or not self.charge_statc > 0.0:
                raise ValueError("charge probes require charge_statc > 0")
        if self.kind == "electric_dipole":
            if self.dipole_statc_cm is None or not self.dipole_statc_cm > 0.0:
                raise ValueError("dipole probes require dipole_statc_cm > 0")
        from .units import C
        if self.speed_cm_s is not None and not (0.0 < self.speed_cm_s < C):
            raise ValueError("probe speed must satisfy 0 < v < c")

    @classmethod
    def charge(cls, charge_statc=ELECTRON_CHARGE, **kinematics):
        return cls(kind="charge", charge_statc=charge_statc, **kinematics)

    @classmethod
    def electric_dipole(cls, dipole_statc_cm, **kinematics):
        return cls(kind="electric_dipole", dipole_statc_cm=dipole_statc_cm, **kinematics)


@dataclass(frozen=True)
class PathSpec:
    """Integration contour in the z = 0 plane.

    Either a closed loop of radius rho around the solenoid axis, or a
    straight open segment from (-x, y) to (+x, y) with half-length x and
    perpendicular offset y.
    """

    shape: str
    radius_cm: float | None = None
    half_length_cm: float | None = None
    offset_cm: float | None = None

    def __post_init__(self):
        if self.shape == "closed_loop":
            if self.radius_cm is None or not self.radius_cm > 0.0:
                raise ValueError("closed loop requires radius_cm > 0")
        elif self.shape == "open_segment":
            ok = (self.half_length_cm is not None and self.half_length_cm > 0.0
                  and self.offset_cm is not None and self.offset_cm > 0.0)
            if not ok:
                raise ValueError("open segment requires half_length_cm > 0 and offset_cm > 0")
        else:
            raise ValueError(f"unknown path shape {self.shape!r}")

    @classmethod
    def closed_loop(cls, radius_cm):
        return cls(shape="closed_loop", radius_cm=radius_cm)

    @classmethod
    def open_segment(cls, half_length_cm, offset_cm):
        return cls(shape="open_segment", half_length_cm=half_length_cm,
                   offset_cm=offset_cm)

    @property
    def aspect_ok(self):
        """True when the open segment satisfies x >= 3y."""
        if self.shape != "open_segment":
            return True
        return self.half_length_cm >= MIN_ASPECT_RATIO * self.offset_cm

    @property
    def diagonal_cm(self):
        """sqrt(x^2 + y^2) for an open segment."""
        if self.shape != "open_segment":
            raise ValueError("diagonal is defined for open segments")
        return float(np.hypot(self.half_length_cm, self.offset_cm))


@dataclass(frozen=True)
class PhaseResult:
    """Zero-mass phase, its mass correction, and their ratio.

    Constructed from (phi0, delta_phi); the ratio is derived so that
    ratio * phi0 == delta_phi holds to machine precision by construction.
    """

    phi0_rad: float
    delta_phi_rad: float
    ratio: float
    method: str
    validity_flags: tuple = ()

    @classmethod
    def build(cls, phi0_rad, delta_phi_rad, method, validity_flags=()):
        ratio = delta_phi_rad / phi0_rad if phi0_rad != 0.0 else 0.0
        return cls(phi0_rad=float(phi0_rad), delta_phi_rad=float(delta_phi_rad),
                   ratio=float(ratio), method=method,
                   validity_flags=tuple(validity_flags))

    def to_json_dict(self):
        return {
            "phi0_rad": self.phi0_rad,
            "delta_phi_rad": self.delta_phi_rad,
            "ratio": self.ratio,
            "method": self.method,
            "validity_flags": list(self.validity_flags),
        }


@dataclass(frozen=True)
class PhasePair:
    """Both computation routes for one effect; asymptotic may be None when
    the requested mass lies outside the leading-log validity window."""

    asymptotic: PhaseResult | None
    exact: PhaseResult


def closed_loop_ratio_asymptotic(m_rho):
    """Leading-log closed-loop ratio (1/2) (m rho)^2 ln(2/(m rho)).

    Shared verbatim by the charged-loop and dipole effects; written as a
    magnitude, the exact correction being negative.
    """
    x = np.asarray(m_rho, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    out = np.where(x > 0.0, 0.5 * safe**2 * np.log(2.0 / safe), 0.0)
    return float(out) if np.ndim(m_rho) == 0 else out


def _require_loop(solenoid, path):
    if path.shape != "closed_loop":
        raise ValueError("this effect requires a closed_loop path")
    if path.radius_cm <= solenoid.radius_cm:
        raise ValueError(
            f"loop radius {path.radius_cm} must exceed the solenoid radius "
            f"{solenoid.radius_cm} (loop must enclose the solenoid)"
        )


def _delta_flux(solenoid, m, rho, rel_tol=1e-11):
    """Flux of the mass correction dB through the coaxial disc of radius rho.

    Quadrature of the cancellation-safe integrand; split at the bore.  This
    is the independent route against the Stokes closed form 2 pi rho dA.
    """
    a = solenoid.radius_cm

    def integrand(r):
        return field_mod.delta_b(r, solenoid, m) * 2.0 * np.pi * r

    scale = abs(solenoid.massless_flux)
    val_in, _ = integrate.quad(integrand, 0.0, a, epsabs=rel_tol * scale,
                               epsrel=rel_tol, limit=200)
    mv = inverse_range_value(m)
    step = 2.0 / mv if mv > 0.0 else rho - a
    total = val_in
    left = a
    while left < rho:
        right = min(rho, left + step)
        val, _ = integrate.quad(integrand, left, right, epsabs=rel_tol * scale,
                                epsrel=rel_tol, limit=200)
        total += val
        left = right
    return total


def _asym_window_check(mv, length, require):
    """Window m*L < 0.1 for the leading-log forms; returns flags or raises."""
    if mv * length < field_mod.ASYMPTOTIC_WINDOW:
        return ()
    if require:
        raise ValidityWindowError(
            f"m*L = {mv * length:.4g} outside the asymptotic window "
            f"(< {field_mod.ASYMPTOTIC_WINDOW})"
        )
    return None


def ab_closed(probe, solenoid, loop, m, require_asymptotic=False):
    """Closed-loop AB phase of a charge encircling the screened solenoid.

    phi0 = (q/hbar c) pi a^2 j.  The exact correction is (q/hbar c) times
    the flux of dB through the loop (negative: screening removes flux); the
    asymptotic route is the leading-log magnitude form, returned only for
    m*rho inside the validity window (None otherwise, or raise when
    ``require_asymptotic``).
    """
    if probe.kind != "charge":
        raise ValueError("ab_closed requires a charge probe")
    _require_loop(solenoid, loop)
    mv = inverse_range_value(m)
    rho = loop.radius_cm
    q_over = probe.charge_statc / HBAR_C
    phi0 = q_over * solenoid.massless_flux

    if mv == 0.0:
        zero = PhaseResult.build(phi0, 0.0, "exact_quadrature")
        zero_a = PhaseResult.build(phi0, 0.0, "asymptotic")
        return PhasePair(asymptotic=zero_a, exact=zero)

    exact = PhaseResult.build(
        phi0, q_over * _delta_flux(solenoid, m, rho), "exact_quadrature")

    flags = _asym_window_check(mv, rho, require_asymptotic)
    if flags is None:
        return PhasePair(asymptotic=None, exact=exact)
    ratio = closed_loop_ratio_asymptotic(mv * rho)
    asym = PhaseResult.build(phi0, ratio * phi0, "asymptotic", flags)
    return PhasePair(asymptotic=asym, exact=exact)


def tkachuk(probe, solenoid, loop, m, require_asymptotic=False):
    """Dipole phase around the z-linearly magnetized solenoid.

    phi0 = 4 pi d mu_bar / (hbar c); the radial problem reduces to the
    charged-loop one, so the asymptotic ratio is the identical function of
    m*rho.  The exact route integrates the exterior correction kernel over
    the annulus between the bore and the loop,
    ratio = (1/(2 mu_bar)) int_a^rho m^2 Pi(rho') rho' drho'.
    """
    if probe.kind != "electric_dipole":
        raise ValueError("tkachuk requires an electric_dipole probe")
    _require_loop(solenoid, loop)
    mv = inverse_range_value(m)
    rho = loop.radius_cm
    mu_bar = solenoid.mu_bar
    phi0 = 4.0 * np.pi * probe.dipole_statc_cm * mu_bar / HBAR_C

    if mv == 0.0:
        return PhasePair(
            asymptotic=PhaseResult.build(phi0, 0.0, "asymptotic"),
            exact=PhaseResult.build(phi0, 0.0, "exact_quadrature"),
        )

    def kernel(r):
        # m^2 Pi = dB in the exterior region
        return field_mod.delta_b(r, solenoid, m) * r

    step = 2.0 / mv
    total = 0.0
    left = solenoid.radius_cm
    while left < rho:
        right = min(rho, left + step)
        val, _ = integrate.quad(kernel, left, right, epsabs=1e-13 * mu_bar,
                                epsrel=1e-11, limit=200)
        total += val
        left = right
    exact = PhaseResult.build(phi0, phi0 * total / (2.0 * mu_bar), "exact_quadrature")

    flags = _asym_window_check(mv, rho, require_asymptotic)
    if flags is None:
        return PhasePair(asymptotic=None, exact=exact)
    ratio = closed_loop_ratio_asymptotic(mv * rho)
    asym = PhaseResult.build(phi0, ratio * phi0, "asymptotic", flags)
    return PhasePair(asymptotic=asym, exact=exact)


@dataclass(frozen=True)
class LineIntegralResult:
    """Tangential line integrals of A_phi along an open segment, per (q/hbar c).

    Units gauss cm^2 (multiply by q/hbar c for radians).  ``correction`` is
    the massive-minus-massless difference computed from the cancellation-safe
    potential correction, with its quadrature error estimate.
    """

    massless: float
    massive: float
    correction: float
    correction_abserr: float


def _segment_quad(func, half_length, decay_scale, rel_tol=1e-11):
    """Integrate an even integrand over [-x, x] as 2*int_0^x, chunked on the
    decay scale so adaptive subdivision cannot miss the exponential tail."""
    x = half_length
    step = min(decay_scale, x) if decay_scale > 0.0 else x
    total = 0.0
    err = 0.0
    left = 0.0
    while left < x:
        right = min(x, left + step)
        val, e = integrate.quad(func, left, right, epsabs=0.0, epsrel=rel_tol,
                                limit=300)
        total += val
        err += e
        left = right
    return 2.0 * total, 2.0 * err


def line_integral_oracle(path, solenoid, m, rel_tol=1e-11):
    """Adaptive-quadrature oracle for the open-path line integrals.

    Integrates the tangential component A_phi * (-y/rho) along the segment
    for the massless and massive potentials; their difference (evaluated
    through the stable potential-correction kernel, not by subtracting the
    two integrals) is the mass correction.  The correction is negative
    relative to phi0's sign: the screened potential is smaller in magnitude
    than the massless one everywhere on the path.
    """
    if path.shape != "open_segment":
        raise ValueError("line_integral_oracle requires an open_segment path")
    if path.offset_cm <= solenoid.radius_cm:
        raise ValueError("open segment must pass outside the solenoid (y > a)")
    mv = inverse_range_value(m)
    x, y = path.half_length_cm, path.offset_cm

    def massless(t):
        rho = np.hypot(t, y)
        return field_mod.massless_a_phi(rho, solenoid) * (-y / rho)

    base, base_err = _segment_quad(massless, x, decay_scale=10.0 * y, rel_tol=rel_tol)

    if mv == 0.0:
        return LineIntegralResult(massless=base, massive=base, correction=0.0,
                                  correction_abserr=0.0)

    def corr(t):
        rho = np.hypot(t, y)
        return field_mod.a_phi_correction(rho, solenoid, m) * (-y / rho)

    decay = min(2.0 / mv, 10.0 * y)
    delta, delta_err = _segment_quad(corr, x, decay_scale=decay, rel_tol=rel_tol)
    if delta != 0.0 and delta_err > 1e-8 * abs(delta):
        raise QuadratureError(
            f"line-integral correction quadrature error {delta_err:.3g} exceeds "
            f"1e-8 relative ({abs(delta):.3g})"
        )
    return LineIntegralResult(massless=base, massive=base + delta,
                              correction=delta, correction_abserr=delta_err)


def open_path_pm_q(probe, solenoid, path, m):
    """Phase difference for the +q/-q coherent superposition on an open path.

    The exact route multiplies the numeric line integrals by (q/hbar c):
    single-beam values, phi0 = (q/hbar c) * int_C A(m=0).dl (the x >> y limit
    of which is -(q/hbar c)(pi/2) a^2 j) and the correction of the same sign
    convention.  The asymptotic route reports the published leading-log ratio

        dphi/phi0 = -(4/pi) m^2 x y ln(m sqrt(x^2+y^2)/2)

    against the idealized phi0 = -(q/hbar c)(pi/2) a^2 j.  When the segment
    violates x >= 3y the asymptotic result is advisory (flagged), never
    withheld; the numeric method is always returned.
    """
    if probe.kind != "charge":
        raise ValueError("open_path_pm_q requires a charge probe")
    if path.shape != "open_segment":
        raise ValueError("open_path_pm_q requires an open_segment path")
    if path.offset_cm <= solenoid.radius_cm:
        raise ValueError("open segment must pass outside the solenoid (y > a)")
    mv = inverse_range_value(m)
    x, y = path.half_length_cm, path.offset_cm
    q_over = probe.charge_statc / HBAR_C
    a, j = solenoid.radius_cm, solenoid.interior_field_gauss

    flags = []
    if not path.aspect_ok:
        flags.append("advisory_aspect_ratio")

    oracle = line_integral_oracle(path, solenoid, m)
    exact = PhaseResult.build(q_over * oracle.massless, q_over * oracle.correction,
                              "exact_quadrature", flags)

    phi0_ideal = -q_over * (np.pi / 2.0) * a * a * j
    if mv == 0.0:
        asym = PhaseResult.build(phi0_ideal, 0.0, "asymptotic", flags)
        return PhasePair(asymptotic=asym, exact=exact)

    diag = path.diagonal_cm
    window_flags = flags + (["advisory_outside_window"]
                            if mv * diag >= field_mod.ASYMPTOTIC_WINDOW else [])
    ratio = -(4.0 / np.pi) * mv * mv * x * y * np.log(mv * diag / 2.0)
    asym = PhaseResult.build(phi0_ideal, ratio * phi0_ideal, "asymptotic",
                             window_flags)
    return PhasePair(asymptotic=asym, exact=exact)
