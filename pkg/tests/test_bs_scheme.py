import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonadd import analytic, bs_scheme, fock
from photonadd.bs_scheme import BsParams
from photonadd.errors import DegenerateGeometry, InvalidParameter, ZeroProbability
from photonadd.witnesses import q2


def oracle(p: BsParams):
    rho_in = fock.coherent_state(p.alpha) if p.input_kind == "coherent" else fock.thermal_state(p.nbar)
    return fock.herald_no_click(rho_in, p.p_s, p.theta, p.eta)


# -- coefficients ---------------------------------------------------------------------------


def test_coeffs_ideal_reduce_to_sacs():
    p = BsParams.coherent(1.3, 0.4, 1.0, 1.0)
    k = bs_scheme.bs_coeffs(p)
    assert (k.s, k.f, k.c) == (pytest.approx(0.4), 0.0, 0.0)
    assert k.norm_n == pytest.approx(0.4 * (1 + 0.6 * 1.3 ** 2))


def test_coeffs_without_source():
    k = bs_scheme.bs_coeffs(BsParams.coherent(1.3, 0.4, 0.6, 0.0))
    assert (k.s, k.c, k.f, k.norm_n) == (0.0, 0.0, 1.0, 1.0)


def test_conditional_state_matches_pipeline_coefficients():
    p = BsParams.coherent(1.0, 0.5, 0.6, 0.7)
    rho_c, p_nd = bs_scheme.bs_conditional_density(p)
    rho_o, p_o = oracle(p)
    assert fock.fidelity(rho_c, rho_o) >= 1 - 1e-10
    assert p_nd == pytest.approx(p_o, rel=1e-10)


def test_conditional_state_fidelity_nonideal():
    p = BsParams.coherent(1.5, 0.4, 0.6, 0.7)
    rho_c, _ = bs_scheme.bs_conditional_density(p)
    assert fock.fidelity(rho_c, oracle(p)[0]) >= 1 - 1e-9
    assert rho_c.matrix.trace().real == pytest.approx(1.0, abs=1e-10)


def test_conditional_state_ideal_is_photon_added():
    p = BsParams.coherent(1.5, 0.4, 1.0, 1.0)
    rho_c, _ = bs_scheme.bs_conditional_density(p)
    beta = 1.5 * math.sqrt(0.6)
    target = fock.photon_add(fock.coherent_state(beta, fock.TruncationPolicy.for_coherent(beta, extra=1)))
    assert fock.fidelity(rho_c, target) >= 1 - 1e-10


# -- no-click probability -------------------------------------------------------------------------


def test_pnd_blind_detector():
    assert bs_scheme.bs_pnd_coherent(BsParams.coherent(2.0, 0.3, 0.0, 0.8)) == pytest.approx(1.0)


def test_pnd_ideal_value():
    assert bs_scheme.bs_pnd_coherent(BsParams.coherent(1.0, 0.5, 1.0, 1.0)) == pytest.approx(0.75 * math.exp(-0.5))


def test_pnd_spot_value():
    assert bs_scheme.bs_pnd_coherent(BsParams.coherent(5.0, 0.5, 0.6, 0.7)) == pytest.approx(1.3e-3, rel=0.1)


# -- moments ----------------------------------------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 6))
def test_moments_reduce_to_sacs(m):
    p = BsParams.coherent(2.0, 0.3, 1.0, 1.0)
    ideal = analytic.SacsParams(2.0 * math.sqrt(0.7))
    assert bs_scheme.bs_moment_a(p, m) == pytest.approx(analytic.sacs_moment_a(ideal, m), rel=1e-12)
    assert bs_scheme.bs_moment_nm(p, m) == pytest.approx(analytic.sacs_moment_nm(ideal, m), rel=1e-12)


@pytest.mark.parametrize("m", range(1, 5))
def test_moments_without_source_are_coherent(m):
    p = BsParams.coherent(2.0, 0.3, 0.6, 0.0)
    beta = 2.0 * math.sqrt(0.7)
    assert bs_scheme.bs_moment_a(p, m) == pytest.approx(beta ** m)
    assert bs_scheme.bs_moment_nm(p, m) == pytest.approx(beta ** (2 * m))


def test_moments_match_oracle():
    p = BsParams.coherent(2.0, 0.3, 0.6, 0.7)
    rho, _ = oracle(p)
    assert bs_scheme.bs_moment_a(p, 2) == pytest.approx(fock.normal_moment(rho, 0, 2).real, rel=1e-9)
    assert bs_scheme.bs_moment_nm(p, 3) == pytest.approx(fock.normal_moment(rho, 3, 3).real, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(
    alpha=st.floats(0.0, 3.0),
    R=st.floats(0.05, 1.0),
    eta=st.floats(0.0, 1.0),
    ps=st.floats(0.0, 1.0),
    m=st.integers(1, 4),
)
def test_moment_set_matches_oracle(alpha, R, eta, ps, m):
    p = BsParams.coherent(alpha, R, eta, ps)
    rho, p_nd = oracle(p)
    closed = bs_scheme.bs_moment_set(p, m)
    direct = fock.moment_set(rho, m)
    assert bs_scheme.bs_pnd_coherent(p) == pytest.approx(p_nd, rel=1e-9)
    for name in ("a_m", "a2m", "n_m", "n_2m", "anti_m"):
        assert complex(getattr(closed, name)) == pytest.approx(complex(getattr(direct, name)), rel=1e-8, abs=1e-12)


def test_beta_zero_is_finite():
    p = BsParams.coherent(0.0, 0.5, 0.6, 0.7)
    assert math.isfinite(bs_scheme.bs_moment_nm(p, 1))


def test_zero_probability_corner():
    p = BsParams.coherent(1.0, 0.0, 1.0, 1.0)
    assert bs_scheme.bs_pnd_coherent(p) == 0.0
    with pytest.raises(ZeroProbability):
        bs_scheme.bs_moment_set(p, 1)
    row = bs_scheme.bs_witnesses_coherent(p, [1])[0]
    assert not row.q1.defined and not row.q2.defined


# -- witnesses ---------------------------------------------------------------------------------------------


def test_spot_q1():
    rows = bs_scheme.bs_witnesses_coherent(BsParams.coherent(5.0, 0.5, 0.6, 0.7), [1, 2, 3])
    for row, expected in zip(rows, (-0.098, -0.08, -0.062)):
        assert row.q1.value == pytest.approx(expected, abs=3e-3)


def test_spot_q2():
    rows = bs_scheme.bs_witnesses_coherent(BsParams.coherent(1.5, 0.8, 0.3, 0.3), [2, 3, 4, 5])
    for row, expected in zip(rows, (-0.14, -0.46, -0.65, -0.76)):
        assert row.q2.value == pytest.approx(expected, abs=1e-2)
    assert rows[0].p_nd == pytest.approx(0.58, abs=1e-2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_no_source_is_classical(m):
    row = bs_scheme.bs_witnesses_coherent(BsParams.coherent(1.7, 0.4, 0.5, 0.0), [m])[0]
    assert abs(row.q1.value) < 1e-12 and abs(row.q2.value) < 1e-12


def test_order_limits():
    with pytest.raises(InvalidParameter):
        bs_scheme.bs_witnesses_coherent(BsParams.coherent(1.0, 0.5), [9])


@pytest.mark.parametrize("field, value", [("reflectance", 1.2), ("eta", -0.1), ("p_s", 2.0)])
def test_params_validation(field, value):
    kwargs = dict(input_kind="coherent", amplitude=1.0, reflectance=0.5, eta=0.5, p_s=0.5)
    kwargs[field] = value
    with pytest.raises(InvalidParameter):
        BsParams(**kwargs)


# -- thermal input --------------------------------------------------------------------------------------------


def test_thermal_first_moment_ideal():
    p = BsParams.thermal(0.8, 0.4, 1.0, 1.0)
    rho, _ = oracle(p)
    ratio = bs_scheme.bs_thermal_dm(p, 1) / bs_scheme.bs_thermal_dm(p, 0)
    assert ratio == pytest.approx(fock.normal_moment(rho, 1, 1).real, rel=1e-9)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_thermal_blind_detector(m):
    p = BsParams.thermal(0.8, 0.4, 0.0, 0.6)
    rho, p_nd = oracle(p)
    assert p_nd == pytest.approx(1.0)
    ratio = bs_scheme.bs_thermal_dm(p, m) / bs_scheme.bs_thermal_dm(p, 0)
    assert ratio == pytest.approx(fock.normal_moment(rho, m, m).real, rel=1e-9)


def test_thermal_pnd_matches_oracle():
    p = BsParams.thermal(1.0, 0.5, 0.6, 0.7)
    assert bs_scheme.bs_thermal_dm(p, 0) == pytest.approx(oracle(p)[1], rel=1e-9)


def test_thermal_degenerate_geometry():
    p = BsParams.thermal(0.5, 1.0, 0.6, 0.7)
    with pytest.raises(DegenerateGeometry):
        bs_scheme.bs_thermal_dm(p, 0)
    with pytest.warns(RuntimeWarning):
        p_nd = bs_scheme.bs_pnd_thermal(p)
    assert p_nd == pytest.approx(oracle(p)[1], rel=1e-12)


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("R", [0.1, 0.5, 0.999])
def test_thermal_ideal_reduces_to_cooled_sats(R, m):
    nbar = 0.6
    p = BsParams.thermal(nbar, R, 1.0, 1.0)
    cooled = analytic.SatsParams((1 - R) * nbar / (1 + R * nbar))
    row = bs_scheme.bs_witnesses_thermal(p, [m])[0]
    assert row.q2.value == pytest.approx(analytic.sats_q2(cooled, m), abs=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_thermal_without_source(m):
    row = bs_scheme.bs_witnesses_thermal(BsParams.thermal(1.0, 0.4, 0.6, 0.0), [m])[0]
    assert row.q2.value == pytest.approx(math.comb(2 * m, m) - 1, rel=1e-12)


def test_thermal_sub_poissonian_point():
    row = bs_scheme.bs_witnesses_thermal(BsParams.thermal(0.5, 0.7, 0.6, 0.7), [1])[0]
    assert row.q2.value < 0


def test_thermal_zero_probability_corner():
    row = bs_scheme.bs_witnesses_thermal(BsParams.thermal(1.0, 0.0, 1.0, 1.0), [1])[0]
    assert not row.q2.defined


def test_thermal_moment_set_matches_oracle():
    p = BsParams.thermal(1.5, 0.3, 0.6, 0.7)
    rho, _ = oracle(p)
    closed = bs_scheme.bs_thermal_moment_set(p, 2)
    direct = fock.moment_set(rho, 2)
    assert q2(closed).value == pytest.approx(q2(direct).value, abs=1e-9)
    assert closed.anti_m == pytest.approx(direct.anti_m, rel=1e-9)
