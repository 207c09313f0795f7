import math

import numpy as np
import pytest

from procab import field, phases
from procab.errors import ValidityWindowError
from procab.field import SolenoidSpec
from procab.phases import PathSpec, ProbeSpec, closed_loop_ratio_asymptotic
from procab.units import BOHR_RADIUS, ELECTRON_CHARGE, HBAR_C


def rel(a, b):
    return abs(a - b) / abs(b)


J_BD = 3476.2123396963907   # interior field of the reference solenoid
BD_SOL = SolenoidSpec(radius_cm=0.1, interior_field_gauss=J_BD)
LOOP10 = PathSpec.closed_loop(10.0)
CHARGE = ProbeSpec.charge()


# --- closed-loop charge -------------------------------------------------

def test_ab_asymptotic_ratio_at_mrho_1e3():
    pair = phases.ab_closed(CHARGE, BD_SOL, LOOP10, 1e-4)   # m rho = 1e-3
    assert rel(pair.asymptotic.ratio, 3.80045e-6) < 0.01
    # exact route agrees within the dropped Euler-Mascheroni offset
    assert rel(abs(pair.exact.ratio), pair.asymptotic.ratio) < 0.15
    assert pair.exact.ratio < 0.0   # screening removes flux


def test_ab_massless():
    pair = phases.ab_closed(CHARGE, BD_SOL, LOOP10, 0.0)
    expected_phi0 = (ELECTRON_CHARGE / HBAR_C) * math.pi * 0.1**2 * J_BD
    assert rel(pair.exact.phi0_rad, expected_phi0) < 1e-12
    assert pair.exact.delta_phi_rad == 0.0
    assert pair.asymptotic.delta_phi_rad == 0.0


def test_ab_requires_enclosing_loop():
    with pytest.raises(ValueError):
        phases.ab_closed(CHARGE, BD_SOL, PathSpec.closed_loop(0.05), 1e-4)


def test_ab_asymptotic_window():
    pair = phases.ab_closed(CHARGE, BD_SOL, LOOP10, 0.05)   # m rho = 0.5
    assert pair.asymptotic is None
    assert pair.exact is not None
    with pytest.raises(ValidityWindowError):
        phases.ab_closed(CHARGE, BD_SOL, LOOP10, 0.05, require_asymptotic=True)


def test_phase_result_internal_consistency():
    for m in (0.0, 1e-6, 1e-4, 1e-3):
        pair = phases.ab_closed(CHARGE, BD_SOL, LOOP10, m)
        for res in (pair.exact, pair.asymptotic):
            if res is None:
                continue
            assert abs(res.ratio * res.phi0_rad - res.delta_phi_rad) \
                <= 1e-12 * max(abs(res.delta_phi_rad), 1e-300)


def test_ratio_monotone_in_mass():
    ms = np.geomspace(1e-6, 9e-3, 12)   # m rho up to 0.09
    asym, exact = [], []
    for m in ms:
        pair = phases.ab_closed(CHARGE, BD_SOL, LOOP10, m)
        asym.append(pair.asymptotic.ratio)
        exact.append(abs(pair.exact.ratio))
    assert all(b > a for a, b in zip(asym, asym[1:]))
    assert all(b > a for a, b in zip(exact, exact[1:]))


def test_delta_phi_vanishes_continuously():
    small = phases.ab_closed(CHARGE, BD_SOL, LOOP10, 1e-9).exact.delta_phi_rad
    tiny = phases.ab_closed(CHARGE, BD_SOL, LOOP10, 1e-10).exact.delta_phi_rad
    assert abs(tiny) < abs(small) < 1e-3


# --- dipole (magnetized solenoid) ----------------------------------------

MU_AB = J_BD * 0.1**2 / 4.0
TK_SOL = SolenoidSpec.tkachuk(radius_cm=0.1, magnetization_gauss_cm=MU_AB / 1.0,
                              tkachuk_length_cm=1.0)
DIPOLE = ProbeSpec.electric_dipole(ELECTRON_CHARGE * BOHR_RADIUS)


def test_tkachuk_ratio_identical_to_closed_loop():
    m_rhos = np.geomspace(1e-6, 0.09, 20)
    for m_rho in m_rhos:
        m = m_rho / 10.0
        tk = phases.tkachuk(DIPOLE, TK_SOL, LOOP10, m).asymptotic.ratio
        ab = phases.ab_closed(CHARGE, BD_SOL, LOOP10, m).asymptotic.ratio
        assert abs(tk - ab) <= 1e-12 * ab


def test_tkachuk_phi0_scales_as_a0_over_l():
    tk = phases.tkachuk(DIPOLE, TK_SOL, LOOP10, 0.0)
    ab = phases.ab_closed(CHARGE, BD_SOL, LOOP10, 0.0)
    # d = e a0 and mu_bar = mu_AB / l give phi0 ratio = a0 / l
    assert rel(tk.exact.phi0_rad / ab.exact.phi0_rad, BOHR_RADIUS / 1.0) < 1e-12


def test_tkachuk_massless():
    pair = phases.tkachuk(DIPOLE, TK_SOL, LOOP10, 0.0)
    assert pair.exact.delta_phi_rad == 0.0


def test_tkachuk_exact_close_to_asymptotic():
    pair = phases.tkachuk(DIPOLE, TK_SOL, LOOP10, 1e-4)
    assert rel(abs(pair.exact.ratio), pair.asymptotic.ratio) < 0.15


# --- open path +q/-q ------------------------------------------------------

BIG_SOL = SolenoidSpec(radius_cm=500.0, interior_field_gauss=J_BD)
SEGMENT = PathSpec.open_segment(half_length_cm=3000.0, offset_cm=800.0)


def test_pm_q_massless_phi0():
    pair = phases.open_path_pm_q(CHARGE, BIG_SOL, SEGMENT, 0.0)
    q_over = ELECTRON_CHARGE / HBAR_C
    ideal = -q_over * (math.pi / 2.0) * 500.0**2 * J_BD
    assert rel(pair.asymptotic.phi0_rad, ideal) < 1e-12
    arctan = -q_over * 500.0**2 * J_BD * math.atan(3000.0 / 800.0)
    assert rel(pair.exact.phi0_rad, arctan) < 1e-10
    assert pair.exact.delta_phi_rad == 0.0


def test_pm_q_long_segment_approaches_ideal():
    path = PathSpec.open_segment(half_length_cm=100.0 * 5.0, offset_cm=5.0)
    pair = phases.open_path_pm_q(CHARGE, SolenoidSpec(1.0, 1.0), path, 0.0)
    assert rel(pair.exact.phi0_rad, pair.asymptotic.phi0_rad) < 0.02


def test_pm_q_published_ratio_form():
    # frozen arithmetic of the leading-log ratio at range 2e13 cm
    pair = phases.open_path_pm_q(CHARGE, BIG_SOL, SEGMENT, 5e-14)
    assert rel(pair.asymptotic.ratio, 1.7783987145614522e-19) < 1e-10
    diag = SEGMENT.diagonal_cm
    by_hand = -(4.0 / math.pi) * (5e-14)**2 * 3000.0 * 800.0 \
        * math.log(5e-14 * diag / 2.0)
    assert rel(pair.asymptotic.ratio, by_hand) < 1e-12


def test_pm_q_aspect_ratio_advisory():
    narrow = PathSpec.open_segment(half_length_cm=1000.0, offset_cm=800.0)
    pair = phases.open_path_pm_q(CHARGE, BIG_SOL, narrow, 1e-9)
    assert "advisory_aspect_ratio" in pair.asymptotic.validity_flags
    assert pair.exact is not None   # numeric method always returned
    wide = phases.open_path_pm_q(CHARGE, BIG_SOL, SEGMENT, 1e-9)
    assert "advisory_aspect_ratio" not in wide.asymptotic.validity_flags


def test_pm_q_scaling_slopes():
    # numeric correction fits m^2 within the leading-log drift; the analytic
    # ratio shares the exponent (flagged normalization NOT compared)
    diag = SEGMENT.diagonal_cm
    ms = np.geomspace(1e-5 / diag, 1e-3 / diag, 9)
    num, asym = [], []
    for m in ms:
        pair = phases.open_path_pm_q(CHARGE, BIG_SOL, SEGMENT, m)
        num.append(abs(pair.exact.delta_phi_rad))
        asym.append(abs(pair.asymptotic.delta_phi_rad))
    slope_num = np.polyfit(np.log(ms), np.log(num), 1)[0]
    slope_asym = np.polyfit(np.log(ms), np.log(asym), 1)[0]
    assert 1.9 <= slope_num <= 2.1
    assert abs(slope_num - slope_asym) < 0.1


def test_probe_and_path_validation():
    with pytest.raises(ValueError):
        ProbeSpec(kind="charge")                      # missing charge
    with pytest.raises(ValueError):
        ProbeSpec(kind="electric_dipole")             # missing dipole
    with pytest.raises(ValueError):
        ProbeSpec(kind="wibble", charge_statc=1.0)
    with pytest.raises(ValueError):
        ProbeSpec.charge(speed_cm_s=1e11)             # v >= c
    with pytest.raises(ValueError):
        PathSpec.closed_loop(-1.0)
    with pytest.raises(ValueError):
        PathSpec.open_segment(half_length_cm=1.0, offset_cm=0.0)
    with pytest.raises(ValueError):
        phases.open_path_pm_q(CHARGE, BIG_SOL, LOOP10, 1e-9)
    with pytest.raises(ValueError):
        phases.ab_closed(DIPOLE, BD_SOL, LOOP10, 1e-4)
    with pytest.raises(ValueError):
        phases.tkachuk(CHARGE, TK_SOL, LOOP10, 1e-4)


def test_closed_loop_ratio_asymptotic_vectorized():
    scalar = closed_loop_ratio_asymptotic(1e-3)
    array = closed_loop_ratio_asymptotic(np.array([1e-3, 2e-3]))
    assert scalar == pytest.approx(0.5e-6 * math.log(2000.0), rel=1e-12)
    assert array[0] == pytest.approx(scalar, rel=1e-14)
    assert closed_loop_ratio_asymptotic(0.0) == 0.0
