"""Classical bending of a charged beam by the solenoid's leakage field.

A finite photon mass lets the return flux dB leak outside the bore; a beam
passing beside the solenoid picks up a transverse Lorentz impulse

    dp_perp = (q/c) integral dB dl        (v dt = dl along the path)

from which the angular deflection alpha = dp_perp / p, the displacement at a
detector delta_s = alpha L, and the equivalent double-slit fringe phase
2 pi delta_s / (lambda L / slit) follow.  The classical displacement reading
is meaningful only while dp_perp * delta_s stays above Planck's constant
(Heisenberg flag).

Documented default beam for the reference check, chosen here (not quoted
values): 50 keV electrons, detector at 100 cm, slit separation 1e-4 cm, and
a straight path of half-length 300 cm at the reference loop offset of 10 cm
(path lengths of a few metres are within the stated reach of open-path
interferometry).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from . import field as field_mod
from .phases import PathSpec, ProbeSpec
from .units import C, H, inverse_range_value

__all__ = [
    "DeflectionResult",
    "transverse_impulse",
    "deflect",
    "electron_probe",
    "ELECTRON_MASS_G",
    "DEFAULT_BEAM_KEV",
    "DEFAULT_DETECTOR_CM",
    "DEFAULT_SLIT_CM",
    "DEFAULT_HALF_LENGTH_CM",
]

ELECTRON_MASS_G = 9.1094e-28
KEV_ERG = 1.6022e-9

DEFAULT_BEAM_KEV = 50.0
DEFAULT_DETECTOR_CM = 100.0
DEFAULT_SLIT_CM = 1e-4
DEFAULT_HALF_LENGTH_CM = 300.0


def electron_probe(kinetic_energy_kev=DEFAULT_BEAM_KEV):
    """Electron beam probe with relativistic momentum and de Broglie wavelength."""
    e_kin = kinetic_energy_kev * KEV_ERG
    rest = ELECTRON_MASS_G * C * C
    pc = math.sqrt(e_kin * (e_kin + 2.0 * rest))
    p = pc / C
    v = pc * C / (e_kin + rest)
    return ProbeSpec.charge(momentum_g_cm_s=p, de_broglie_cm=H / p, speed_cm_s=v)


@dataclass(frozen=True)
class DeflectionResult:
    """Leakage-field deflection figures for one beam pass."""

    delta_p_perp: float        # g cm/s
    alpha_rad: float           # delta_p_perp / p
    delta_s_perp_cm: float     # alpha * detector distance
    equivalent_phase_rad: float
    heisenberg_product: float  # |delta_p_perp * delta_s_perp|, erg s
    heisenberg_ok: bool        # product >= h: classical reading meaningful

    def to_json_dict(self):
        return {
            "delta_p_perp_g_cm_s": self.delta_p_perp,
            "alpha_rad": self.alpha_rad,
            "delta_s_perp_cm": self.delta_s_perp_cm,
            "equivalent_phase_rad": self.equivalent_phase_rad,
            "heisenberg_product_erg_s": self.heisenberg_product,
            "heisenberg_ok": self.heisenberg_ok,
        }


def transverse_impulse(probe, solenoid, path, m, rel_tol=1e-11):
    """Lorentz impulse (q/c) int dB dl along the straight open segment.

    The exterior correction is negative (return flux), so the impulse sign
    is -sign(q j) for the canonical geometry.  m = 0 gives exactly zero.
    """
    if probe.kind != "charge":
        raise ValueError("transverse_impulse requires a charge probe")
    if path.shape != "open_segment":
        raise ValueError("transverse_impulse requires an open_segment path")
    if path.offset_cm <= solenoid.radius_cm:
        raise ValueError("path must stay outside the solenoid (y > a)")
    mv = inverse_range_value(m)
    if mv == 0.0:
        return 0.0
    x, y = path.half_length_cm, path.offset_cm

    def integrand(t):
        return field_mod.delta_b(math.hypot(t, y), solenoid, m)

    step = min(2.0 / mv, 10.0 * y)
    total = 0.0
    left = 0.0
    while left < x:
        right = min(x, left + step)
        val, _ = integrate.quad(integrand, left, right, epsabs=0.0,
                                epsrel=rel_tol, limit=300)
        total += val
        left = right
    return (probe.charge_statc / C) * 2.0 * total


def deflect(probe, solenoid, path, m, detector_distance_cm=DEFAULT_DETECTOR_CM,
            slit_separation_cm=DEFAULT_SLIT_CM):
    """Full deflection report: impulse, angle, displacement, fringe phase.

    Requires the probe to carry momentum and de Broglie wavelength (use
    ``electron_probe``).  The fringe spacing is lambda * L / slit, so the
    equivalent phase reduces to 2 pi dp_perp slit / h, independent of beam
    energy.
    """
    if probe.momentum_g_cm_s is None or probe.de_broglie_cm is None:
        raise ValueError("deflect requires probe momentum and de Broglie wavelength")
    if not detector_distance_cm > 0.0:
        raise ValueError("detector distance must be > 0")
    if not slit_separation_cm > 0.0:
        raise ValueError("slit separation must be > 0")
    dp = transverse_impulse(probe, solenoid, path, m)
    alpha = dp / probe.momentum_g_cm_s
    ds = alpha * detector_distance_cm
    fringe = probe.de_broglie_cm * detector_distance_cm / slit_separation_cm
    phase = 2.0 * math.pi * ds / fringe
    product = abs(dp * ds)
    return DeflectionResult(
        delta_p_perp=dp,
        alpha_rad=alpha,
        delta_s_perp_cm=ds,
        equivalent_phase_rad=phase,
        heisenberg_product=product,
        heisenberg_ok=bool(product >= H),
    )


def default_reference_path(offset_cm=10.0, half_length_cm=DEFAULT_HALF_LENGTH_CM):
    """The documented default beam path beside the reference solenoid."""
    return PathSpec.open_segment(half_length_cm=half_length_cm, offset_cm=offset_cm)
