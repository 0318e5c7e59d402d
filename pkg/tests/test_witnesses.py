import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonadd import analytic, fock
from photonadd.errors import InvalidParameter, UndefinedWitness
from photonadd.witnesses import (
    DEFINED_THRESHOLD,
    MomentSet,
    mandel_q,
    optimal_phase,
    q1_opt,
    q1_phase,
    q2,
    sign,
    zeta,
)


def ms_of(rho, m):
    return fock.moment_set(rho, m)


def coherent(alpha):
    return fock.coherent_state(alpha).to_density()


def number_state(n, dim=12):
    return fock.fock_state(n, fock.TruncationPolicy(dim)).to_density()


def sacs(alpha):
    return fock.photon_add(fock.coherent_state(alpha, fock.TruncationPolicy.for_coherent(alpha, extra=1)))


# -- MomentSet --------------------------------------------------------------------


def test_moment_set_rejects_negative_commutator():
    with pytest.raises(InvalidParameter):
        MomentSet(m=1, a_m=0, a2m=0, n_m=2.0, n_2m=0, anti_m=1.0)


def test_moment_set_rejects_negative_moment():
    with pytest.raises(InvalidParameter):
        MomentSet(m=1, a_m=0, a2m=0, n_m=-1.0, n_2m=0, anti_m=1.0)


def test_moment_set_rejects_order_zero():
    with pytest.raises(InvalidParameter):
        MomentSet(m=0, a_m=0, a2m=0, n_m=1, n_2m=1, anti_m=1)


# -- zeta ---------------------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3])
def test_zeta_vanishes_for_coherent_and_vacuum(m):
    assert abs(zeta(ms_of(coherent(1.4), m))) < 1e-10
    assert zeta(ms_of(number_state(0), m)) == 0


def test_zeta_sacs_matches_closed_form():
    p = analytic.SacsParams(2.0)
    closed = analytic.sacs_moment_a(p, 2) - analytic.sacs_moment_a(p, 1) ** 2
    assert zeta(ms_of(sacs(2.0), 1)).real == pytest.approx(closed, rel=1e-10)


# -- Q1 ------------------------------------------------------------------------------


@pytest.mark.parametrize("phi", [0.0, 0.3, 1.7])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_q1_coherent_is_zero(phi, m):
    assert abs(q1_phase(ms_of(coherent(1.1), m), phi).value) < 1e-9


def test_q1_sacs_alpha_two():
    ms = ms_of(sacs(2.0), 1)
    assert q1_phase(ms, 0.0).value == pytest.approx(-0.24, abs=1e-10)
    assert q1_opt(ms).value == pytest.approx(-0.24, abs=1e-10)


def test_q1_vacuum():
    w = q1_opt(ms_of(number_state(0), 1))
    assert w.value == 0 and w.numerator == 0 and w.denominator == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 3))
def test_optimal_phase_is_optimal(seed, m):
    rng = np.random.default_rng(seed)
    ms = ms_of(fock.random_pure_state(10, rng), m)
    best = q1_opt(ms)
    for phi in rng.uniform(0, 2 * math.pi, 100):
        assert q1_phase(ms, phi).value - best.value >= -1e-12


def test_optimal_phase_range():
    ms = ms_of(fock.random_pure_state(8, np.random.default_rng(3)), 2)
    assert 0.0 <= optimal_phase(ms) < math.pi


@pytest.mark.parametrize("m", range(1, 6))
def test_q1_sacs_sign_law(m):
    for alpha in np.arange(0.1, 3.01, 0.1):
        w = q1_opt(analytic.sacs_moment_set(analytic.SacsParams(alpha), m))
        if alpha <= 1 + 1e-12:
            assert w.value >= -1e-12
        else:
            assert w.value < 0


# -- Q2 --------------------------------------------------------------------------------


def test_q2_single_photon():
    assert q2(ms_of(number_state(1), 1)).value == pytest.approx(-1.0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_q2_coherent_is_zero(m):
    assert abs(q2(ms_of(coherent(1.5), m)).value) < 1e-9


def test_q2_thermal_is_one():
    assert q2(ms_of(fock.thermal_state(0.8), 1)).value == pytest.approx(1.0, rel=1e-9)


def test_q2_undefined_for_number_state_below_order():
    ms = ms_of(number_state(1), 2)
    w = q2(ms)
    assert not w.defined and math.isnan(w.value)
    with pytest.raises(UndefinedWitness):
        q2(ms, strict=True)


def test_q1_undefined_threshold():
    ms = MomentSet(m=1, a_m=0, a2m=0, n_m=0.0, n_2m=0.0, anti_m=DEFINED_THRESHOLD / 2)
    assert not q1_opt(ms).defined
    with pytest.raises(UndefinedWitness):
        q1_opt(ms, strict=True)


# -- Mandel Q ------------------------------------------------------------------------------


def test_mandel_q():
    assert abs(mandel_q(ms_of(coherent(2.0), 1))) < 1e-9
    assert mandel_q(ms_of(number_state(1), 1)) == pytest.approx(-1.0)
    assert mandel_q(ms_of(fock.thermal_state(1.0), 1)) == pytest.approx(1.0, rel=1e-9)


def test_mandel_q_needs_first_order():
    with pytest.raises(InvalidParameter):
        mandel_q(ms_of(coherent(1.0), 2))


# -- floors and sign -------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 16), m=st.integers(1, 4))
def test_witness_floors(seed, dim, m):
    ms = ms_of(fock.random_pure_state(dim, np.random.default_rng(seed)), m)
    assert q1_opt(ms).value >= -1 - 1e-12
    w = q2(ms)
    if w.defined:
        assert w.value >= -1 - 1e-12


@pytest.mark.parametrize(
    "value, expected",
    [(0.5, 1), (-0.5, -1), (1e-13, 0), (-1e-13, 0), (float("nan"), 0), (0.0, 0)],
)
def test_sign_deadband(value, expected):
    assert sign(value) == expected
