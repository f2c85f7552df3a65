import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oement.model import (
    RawCouplings,
    SystemParams,
    canonicalize,
    cooperativity,
    dynamic_matrix,
    normalize_phase,
    raw_dynamic_matrix,
    reference_params,
    sweet_spot,
    thermal_occupancy,
)


def test_reference_values(ref):
    assert (ref.kappa_a, ref.kappa_c, ref.kappa_d, ref.gamma_m) == (2.0, 3.0, 3.0, 0.01)
    assert (ref.g_a, ref.g_c, ref.g_x, ref.g_d_mag) == (1.5, 2.0, 1.5, 2.0)
    assert ref.phi == pytest.approx(math.pi / 2)


def test_reference_recomputes_derived_couplings():
    p = reference_params(kappa_c=2.0, kappa_d=5.0)
    assert p.g_x == pytest.approx(math.sqrt(10) / 2)
    assert p.g_d_mag == pytest.approx(2 * math.sqrt(2.5))


@pytest.mark.parametrize(
    "field, value",
    [("kappa_a", 0.0), ("kappa_c", -1.0), ("gamma_m", -0.1), ("g_a", -1.0), ("n_th", -2.0), ("g_c", math.nan)],
)
def test_validation_names_field(ref, field, value):
    with pytest.raises(ValueError, match=field):
        ref.with_(**{field: value})


def test_validation_rejects_non_numbers(ref):
    with pytest.raises(ValueError, match="g_x"):
        ref.with_(g_x="1.5")


@pytest.mark.parametrize(
    "phi, expected",
    [(0.0, 0.0), (3 * math.pi / 2, -math.pi / 2), (-math.pi, math.pi), (math.pi, math.pi), (5 * math.pi, math.pi)],
)
def test_normalize_phase(phi, expected):
    assert normalize_phase(phi) == pytest.approx(expected, abs=1e-12)


@given(st.floats(min_value=-100, max_value=100))
def test_normalize_phase_range(phi):
    out = normalize_phase(phi)
    assert -math.pi < out <= math.pi
    assert math.cos(out) == pytest.approx(math.cos(phi), abs=1e-9)
    assert math.sin(out) == pytest.approx(math.sin(phi), abs=1e-9)


def test_phi_is_normalized_on_construction(ref):
    assert ref.with_(phi=3 * math.pi / 2).phi == pytest.approx(-math.pi / 2)


def test_dynamic_matrix_entries(ref):
    m = dynamic_matrix(ref)
    assert m[0, 0] == -1.0 and m[1, 1] == -0.005
    assert m[0, 1] == 1.5j and m[1, 0] == -1.5j
    assert m[2, 3] == -1.5j and m[3, 2] == -1.5j
    # G_d = 2i at phi = pi/2: -i G_d = 2 and -i G_d^* = -2
    assert m[3, 1] == pytest.approx(2.0)
    assert m[1, 3] == pytest.approx(-2.0)


def test_cooperativity(ref):
    assert cooperativity(ref, "a") == pytest.approx(4.5)
    assert cooperativity(ref, "c") == pytest.approx(16 / 3)
    assert cooperativity(ref, "d") == pytest.approx(16 / 3)
    with pytest.raises(ValueError):
        cooperativity(ref, "b")


@pytest.mark.parametrize("branch, phi", [("plus", math.pi / 2), ("minus", -math.pi / 2)])
def test_sweet_spot_conditions(branch, phi):
    p = sweet_spot(reference_params(phi=0.3, kappa_c=2.0, kappa_d=5.0, g_x=0.7, g_d_mag=0.1), branch)
    assert p.phi == pytest.approx(phi)
    assert p.g_x == pytest.approx(math.sqrt(10) / 2)
    assert cooperativity(p, "c") == pytest.approx(cooperativity(p, "d"))


def test_sweet_spot_bad_branch(ref):
    with pytest.raises(ValueError):
        sweet_spot(ref, "sideways")


def test_thermal_occupancy_high_temperature_limit():
    # kT/hf - 1/2 + hf/(12 kT) for hf << kT
    x = 6.62607015e-34 * 100e6 / (1.380649e-23 * 0.02)
    assert thermal_occupancy(100.0, 0.02) == pytest.approx(1 / x - 0.5 + x / 12, rel=1e-4)
    assert thermal_occupancy(100.0, 0.02) == pytest.approx(3.687, abs=1e-3)


def test_thermal_occupancy_zero_temperature_limit():
    assert thermal_occupancy(1e4, 1e-6) == 0.0
    with pytest.raises(ValueError):
        thermal_occupancy(1.0, 0.0)


def test_gauge_example():
    raw = RawCouplings(
        g_a=1.5,
        g_c=2.0 * np.exp(0.2j),
        g_d=2.0 * np.exp(0.3j),
        g_x=1.5 * np.exp(0.4j),
    )
    p, phases = canonicalize(raw, 2.0, 3.0, 3.0, 0.01)
    assert p.phi == pytest.approx(0.5)
    # M_raw = U M U^dagger with U = diag(exp(i theta)) on (a^dagger, b, c, d)
    theta = np.array([-phases["a"], phases["b"], phases["c"], phases["d"]])
    u = np.diag(np.exp(1j * theta))
    m_raw = raw_dynamic_matrix(raw, 2.0, 3.0, 3.0, 0.01)
    assert np.allclose(u.conj().T @ m_raw @ u, dynamic_matrix(p), atol=1e-14)


def test_params_are_frozen(ref):
    with pytest.raises(AttributeError):
        ref.g_a = 1.0  # type: ignore[misc]


def test_g_d_property(ref):
    assert ref.g_d == pytest.approx(2j)
    assert isinstance(ref, SystemParams)
