import math

import numpy as np
import pytest

from procab import units
from procab.units import InverseRange, MassGrams, to_grams, to_inverse_cm, uncertainty_mass


def rel(a, b):
    return abs(a - b) / abs(b)


def test_constants_h_is_2pi_hbar():
    assert rel(units.CONSTANTS.h, 2.0 * math.pi * units.CONSTANTS.hbar) < 1e-12


@pytest.mark.parametrize("m_gamma", np.geomspace(1e-20, 1e5, 11))
def test_round_trip_inverse_pair(m_gamma):
    back = to_inverse_cm(to_grams(InverseRange(m_gamma)))
    assert rel(back.value, m_gamma) < 1e-12


def test_round_trip_on_grams_side():
    mass = MassGrams(1e-48)
    back = to_grams(to_inverse_cm(mass))
    assert rel(back.value, 1e-48) < 1e-12


def test_massless_limit_maps_to_zero():
    assert to_grams(InverseRange(0.0)).value == 0.0
    assert to_inverse_cm(MassGrams(0.0)).value == 0.0


def test_to_grams_published_values():
    # range 1.66e13 cm <-> 2.1e-51 g (rounded in the literature)
    got = to_grams(InverseRange.from_range_cm(1.66e13)).value
    assert rel(got, 2.1191540905943396e-51) < 1e-12   # frozen arithmetic
    assert rel(got, 2.1e-51) < 0.03
    # range 1.4e7 cm <-> 2.5e-45 g
    got = to_grams(InverseRange.from_range_cm(1.4e7)).value
    assert rel(got, 2.5127112788475744e-45) < 1e-12
    assert rel(got, 2.5e-45) < 0.03


def test_to_inverse_cm_published_value():
    got = to_inverse_cm(2.1e-51).range_cm
    assert rel(got, 1.67e13) < 0.01


def test_to_grams_strictly_increasing():
    ms = np.geomspace(1e-15, 1e-5, 30)
    gr = [to_grams(InverseRange(m)).value for m in ms]
    assert all(b > a for a, b in zip(gr, gr[1:]))


def test_uncertainty_mass_age_of_universe():
    got = uncertainty_mass(1e10 * units.YEAR_SECONDS).value
    assert rel(got, 2.3361265035731294e-65) < 1e-12   # frozen arithmetic
    assert rel(got, 2.3e-65) < 0.05
    assert 1e-66 < got < 1e-64


def test_uncertainty_mass_inverse_proportional():
    m1 = uncertainty_mass(1e17).value
    m2 = uncertainty_mass(2e17).value
    assert rel(m2, m1 / 2.0) < 1e-12


def test_uncertainty_mass_rejects_nonpositive():
    with pytest.raises(ValueError):
        uncertainty_mass(0.0)
    with pytest.raises(ValueError):
        uncertainty_mass(-1.0)


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        InverseRange(-1.0)
    with pytest.raises(ValueError):
        MassGrams(-1.0)


def test_reference_bounds_catalogue():
    bounds = units.reference_bounds()
    assert len(bounds) == 4
    assert units.find_bound("toroid").range_cm == 1.66e13
    assert units.find_bound("geomagnetic").range_cm == 5e10
    assert units.find_bound("bd").range_cm == 1.4e7
    assert units.find_bound("coulomb").range_cm == 3e9
    with pytest.raises(KeyError):
        units.find_bound("nope")


def test_reference_bounds_pairs_consistent():
    for bound in units.reference_bounds():
        recomputed = to_grams(bound.inverse_range).value
        assert rel(recomputed, bound.mass.value) < 0.05, bound.label


def test_compton_wavelength():
    m = InverseRange(0.1)
    assert rel(m.compton_wavelength_cm, 2.0 * math.pi / 0.1) < 1e-12
    assert InverseRange(0.0).compton_wavelength_cm == math.inf
