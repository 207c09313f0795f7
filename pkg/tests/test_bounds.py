import math

import numpy as np
import pytest

from procab import bounds, field, phases
from procab.bounds import BD_REFERENCE, PrecisionSpec, compare_pm_q, compare_tkachuk, invert_bound
from procab.errors import BracketError
from procab.field import SolenoidSpec
from procab.phases import PathSpec, ProbeSpec
from procab.units import BOHR_RADIUS, ELECTRON_CHARGE, to_grams


def rel(a, b):
    return abs(a - b) / abs(b)


CHARGE = ProbeSpec.charge()


def test_precision_spec():
    prec = PrecisionSpec(1e-3)
    assert rel(prec.threshold_rad, 2.0 * math.pi * 1e-3) < 1e-15
    with pytest.raises(ValueError):
        PrecisionSpec(0.0)
    with pytest.raises(ValueError):
        PrecisionSpec(1.0)


def test_bd_reference_consistency():
    assert rel(to_grams(BD_REFERENCE.m_gamma).value, BD_REFERENCE.mass_g) < 0.05
    assert rel(BD_REFERENCE.phi0_ab, 1.66e9) < 0.01


def test_bd_closure_recovers_published_range():
    res = invert_bound("ab_closed", CHARGE, BD_REFERENCE.solenoid(),
                       PathSpec.closed_loop(BD_REFERENCE.rho_cm),
                       PrecisionSpec(1e-3), method="asymptotic")
    assert rel(res.inverse_range_cm, 1.4e7) < 0.005
    assert rel(res.inverse_range_cm, 1.4e7) < 1e-3
    # unit currencies stay mutually consistent
    assert rel(to_grams(res.m_gamma).value, res.mass.value) < 1e-12
    assert rel(res.ratio_vs_bd, res.inverse_range_cm / 1.4e7) < 1e-12


@pytest.mark.parametrize("effect", ["ab_closed", "tkachuk", "pm_q"])
def test_forward_inverse_closure_randomized(effect):
    rng = np.random.default_rng(20240811)
    for _ in range(3):
        a = rng.uniform(0.05, 2.0)
        j = rng.uniform(100.0, 5000.0)
        if effect == "pm_q":
            y = a * rng.uniform(3.0, 30.0)
            x = y * rng.uniform(3.0, 12.0)
            path = PathSpec.open_segment(half_length_cm=x, offset_cm=y)
            length = path.diagonal_cm
            solenoid = SolenoidSpec(radius_cm=a, interior_field_gauss=j)
            probe = CHARGE
        else:
            rho = a * rng.uniform(5.0, 50.0)
            path = PathSpec.closed_loop(rho)
            length = rho
            if effect == "tkachuk":
                solenoid = SolenoidSpec.tkachuk(
                    radius_cm=a, magnetization_gauss_cm=j * a * a / 4.0,
                    tkachuk_length_cm=1.0)
                probe = ProbeSpec.electric_dipole(ELECTRON_CHARGE * BOHR_RADIUS)
            else:
                solenoid = SolenoidSpec(radius_cm=a, interior_field_gauss=j)
                probe = CHARGE
        m0 = rng.uniform(0.01, 0.8) * 0.1 / length
        forward = abs(bounds._phase_fn(effect, probe, solenoid, path,
                                       "asymptotic")(m0))
        eps = forward / (2.0 * math.pi)
        if not 0.0 < eps < 1.0:
            continue
        res = invert_bound(effect, probe, solenoid, path, PrecisionSpec(eps),
                           method="asymptotic")
        assert rel(res.m_gamma.value, m0) < 1e-6


def test_weaker_precision_weaker_bound():
    sol = BD_REFERENCE.solenoid()
    loop = PathSpec.closed_loop(10.0)
    tight = invert_bound("ab_closed", CHARGE, sol, loop, PrecisionSpec(1e-4))
    loose = invert_bound("ab_closed", CHARGE, sol, loop, PrecisionSpec(1e-3))
    assert loose.m_gamma.value > tight.m_gamma.value


def test_exact_fallback_when_window_cannot_reach():
    weak = SolenoidSpec(radius_cm=1.0, interior_field_gauss=1e-6)
    loop = PathSpec.closed_loop(10.0)
    with pytest.raises(BracketError) as err:
        invert_bound("ab_closed", CHARGE, weak, loop, PrecisionSpec(0.5),
                     method="asymptotic")
    assert err.value.ceiling == pytest.approx(0.01, rel=1e-6)
    res = invert_bound("ab_closed", CHARGE, weak, loop, PrecisionSpec(0.5),
                       method="auto")
    assert res.method == "exact_quadrature"
    forward = phases.ab_closed(CHARGE, weak, loop, res.m_gamma).exact.delta_phi_rad
    assert rel(abs(forward), math.pi) < 1e-6


def test_bound_unreachable_error():
    hopeless = SolenoidSpec(radius_cm=1.0, interior_field_gauss=1e-9)
    loop = PathSpec.closed_loop(10.0)
    with pytest.raises(BracketError):
        invert_bound("ab_closed", CHARGE, hopeless, loop, PrecisionSpec(0.5),
                     method="auto")


def test_neglected_log_diagnostic_reported():
    res = invert_bound("ab_closed", CHARGE, BD_REFERENCE.solenoid(),
                       PathSpec.closed_loop(10.0), PrecisionSpec(1e-3))
    assert 0.0 < res.diagnostics["neglected_log_correction"] < 0.05


def test_compare_tkachuk():
    got = compare_tkachuk(ELECTRON_CHARGE * BOHR_RADIUS, 1.0)
    assert rel(got, 7.27e-5) < 0.01
    assert 0.5e-4 <= got <= 2e-4            # within factor 2 of 1e-4
    quadrupled = compare_tkachuk(ELECTRON_CHARGE * BOHR_RADIUS, 4.0)
    assert rel(quadrupled, got / 2.0) < 1e-12
    with pytest.raises(ValueError):
        compare_tkachuk(-1.0, 1.0)


def test_compare_pm_q_reproduces_reference_numbers():
    sol = SolenoidSpec(radius_cm=500.0, interior_field_gauss=3476.2123396963907)
    path = PathSpec.open_segment(half_length_cm=300.0 * 10.0, offset_cm=80.0 * 10.0)
    res = compare_pm_q(sol, path)
    assert rel(res.ratio_vs_bd, 1.24e6) < 0.01
    assert 1.5e13 <= res.inverse_range_cm <= 2.5e13
    assert rel(res.mass.value, 2e-51) < 0.25
    assert rel(res.ratio_vs_bd, math.sqrt((8.0 / math.pi) * 2.5e7 * 24000.0)) < 1e-12


def test_compare_pm_q_degenerate_self_comparison():
    # a = a_BD and x*y = rho_BD^2 collapse the bracket to exactly 8/pi
    sol = SolenoidSpec(radius_cm=BD_REFERENCE.a_cm,
                       interior_field_gauss=BD_REFERENCE.interior_field_gauss)
    path = PathSpec.open_segment(half_length_cm=20.0, offset_cm=5.0)   # x y = 100
    res = compare_pm_q(sol, path)
    assert res.diagnostics["bracket"] * math.pi / 8.0 == pytest.approx(1.0, rel=1e-14)


def test_compare_pm_q_current_ratio_explicit():
    sol = SolenoidSpec(radius_cm=500.0, interior_field_gauss=1.0)
    path = PathSpec.open_segment(half_length_cm=3000.0, offset_cm=800.0)
    base = compare_pm_q(sol, path, current_ratio=1.0)
    double = compare_pm_q(sol, path, current_ratio=2.0)
    assert rel(double.ratio_vs_bd, base.ratio_vs_bd * math.sqrt(2.0)) < 1e-12


def test_bound_csv_row_columns():
    res = invert_bound("ab_closed", CHARGE, BD_REFERENCE.solenoid(),
                       PathSpec.closed_loop(10.0), PrecisionSpec(1e-3))
    row = res.to_csv_row()
    assert tuple(row) == bounds.BoundResult.CSV_COLUMNS
    assert float(row["m_gamma_inv_cm"]) == pytest.approx(1.4e7, rel=0.005)
