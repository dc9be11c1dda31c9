import math

import pytest
from hypothesis import given, strategies as st

from ncqm.constants import (
    DEFAULT_CONSTANTS,
    Constants,
    ParticlePair,
    blow_force_coordinate,
    blow_force_momentum,
    compton_length,
    delta12,
    load_constants,
)
from ncqm.errors import DomainError

C = DEFAULT_CONSTANTS
masses = st.floats(min_value=1e3, max_value=1e12, allow_nan=False)


def test_electron_compton_length():
    assert compton_length(C.electron_rest_energy) == pytest.approx(3.86e-11, rel=2e-3)


def test_proton_compton_length():
    assert compton_length(C.mass("proton")) == pytest.approx(2.10e-14, rel=2e-3)


def test_compton_length_scaling():
    m = C.electron_rest_energy
    assert compton_length(2 * m) == pytest.approx(compton_length(m) / 2, rel=1e-15)


@pytest.mark.parametrize("mass", [0.0, -1.0])
def test_compton_length_rejects_nonpositive(mass):
    with pytest.raises(DomainError):
        compton_length(mass)


def test_delta12_heavy_partner():
    pair = ParticlePair(C.electron_rest_energy, math.inf)
    assert delta12(pair) == pytest.approx(compton_length(C.electron_rest_energy), rel=1e-15)


def test_delta12_equal_masses():
    m = C.mass("proton")
    pair = ParticlePair(m, m)
    assert delta12(pair) == pytest.approx(compton_length(pair.mu) / math.sqrt(2), rel=1e-14)


def test_delta12_quadrature_form():
    pair = ParticlePair.named("electron", "proton")
    le = compton_length(pair.m1)
    lp = compton_length(pair.m2)
    assert delta12(pair) == pytest.approx(math.hypot(le, lp), rel=1e-14)


def test_blow_force_electron():
    assert blow_force_coordinate(compton_length(C.electron_rest_energy)) == pytest.approx(6.62e9, rel=2e-3)


def test_blow_force_proton():
    # the quoted figure was evaluated with the Compton length rounded to 2.10e-14 cm
    assert blow_force_coordinate(compton_length(C.mass("proton"))) == pytest.approx(2.24e16, rel=1e-2)
    assert blow_force_coordinate(2.10e-14) == pytest.approx(2.24e16, rel=2e-3)


def test_blow_force_scaling():
    assert blow_force_coordinate(2e-11) == pytest.approx(blow_force_coordinate(1e-11) / 4, rel=1e-15)
    assert blow_force_momentum(2.0) == pytest.approx(4 * blow_force_momentum(1.0), rel=1e-15)
    assert blow_force_momentum(1e-300) == pytest.approx(0.0, abs=1e-200)


def test_blow_force_chain_at_compton_length():
    m_mev = C.electron_rest_energy / 1e6
    assert blow_force_momentum(m_mev / 2) == pytest.approx(
        blow_force_coordinate(compton_length(C.electron_rest_energy)), rel=1e-14
    )


@given(st.floats(min_value=1e-16, max_value=1e-6))
def test_blow_force_chain_closes(dx):
    dp = C.hbar_c_mev_cm / (2 * dx)
    assert blow_force_coordinate(dx) * dx == pytest.approx(blow_force_momentum(dp) * dx, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1e-10])
def test_blow_forces_reject_nonpositive(bad):
    with pytest.raises(DomainError):
        blow_force_coordinate(bad)
    with pytest.raises(DomainError):
        blow_force_momentum(bad)


@given(masses, masses)
def test_pair_invariants(m1, m2):
    pair = ParticlePair(m1, m2)
    assert 1 / pair.mu == pytest.approx(1 / m1 + 1 / m2, rel=1e-12)
    assert 0 < pair.ratio <= 0.25
    assert delta12(pair) == pytest.approx(delta12(ParticlePair(m2, m1)), rel=1e-14)
    assert delta12(pair) <= compton_length(pair.mu) * (1 + 1e-15)


def test_ratio_quarter_only_for_equal_masses():
    assert ParticlePair(5.0, 5.0).ratio == pytest.approx(0.25, rel=1e-15)
    assert ParticlePair(5.0, 5.1).ratio < 0.25


def test_with_ratio_roundtrip():
    for r in (0.0, 0.01, 0.1, 0.25):
        pair = ParticlePair.with_ratio(r, 2.0)
        assert pair.mu == pytest.approx(2.0, rel=1e-12)
        assert pair.ratio == pytest.approx(r, abs=1e-12)


def test_default_constants_values():
    assert C.alpha == 7.2973525693e-3
    assert C.electron_rest_energy == 510998.95
    assert C.hbar_c == 197.3269804


@pytest.mark.parametrize("field,value", [("alpha", 1.5), ("alpha", -1.0), ("hbar_c", 0.0)])
def test_constants_validation(field, value):
    kwargs = {field: value}
    with pytest.raises(DomainError):
        Constants(**kwargs)


def test_load_constants_override(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[constants]\nalpha = 0.0072973525664\n\n[masses]\nmuon = 105658375.5\n")
    c = load_constants(path)
    assert c.alpha == 0.0072973525664
    assert c.mass("muon") == 105658375.5
    assert c.mass("proton") == C.mass("proton")
    assert c.electron_rest_energy == C.electron_rest_energy
