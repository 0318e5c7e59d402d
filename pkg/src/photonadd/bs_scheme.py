"""Beam-splitter heralded photon addition with an imperfect source and detector.

A classical state (coherent or thermal) enters one port of a beam splitter of
reflectance ``R``; the other port receives ``p_s |1><1| + (1 - p_s)|0><0|``.
Conditioning on a no-click of an efficiency-``eta`` detector at the second
output approximately adds one photon to the first output.

The coherent case has a closed-form conditional state
``(s a^dag|b><b|a + f|b><b| + c(|b><b|a + a^dag|b><b|)) / N`` with
``b = alpha sqrt(T)``; the thermal case is handled through the unnormalised
coincidence rates ``D_m`` (``D_0`` is the no-click probability).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import fock
from .errors import DegenerateGeometry, InvalidParameter, ZeroProbability
from .witnesses import MomentSet, WitnessKind, WitnessResult, q1_opt, q2

MAX_ORDER = 8

COHERENT = "coherent"
THERMAL = "thermal"


def _in_unit(name, value):
    if not (0.0 <= value <= 1.0):
        raise InvalidParameter(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class BsParams:
    """Scheme parameters.

    ``amplitude`` is the coherent amplitude ``alpha`` (real, >= 0) for a coherent
    input and the mean photon number ``nbar`` (> 0) for a thermal one.
    """

    input_kind: str
    amplitude: float
    reflectance: float
    eta: float
    p_s: float

    def __post_init__(self):
        if self.input_kind not in (COHERENT, THERMAL):
            raise InvalidParameter(f"input_kind must be 'coherent' or 'thermal', got {self.input_kind!r}")
        if self.input_kind == COHERENT and not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise InvalidParameter(f"alpha must be finite and >= 0, got {self.amplitude}")
        if self.input_kind == THERMAL and not (math.isfinite(self.amplitude) and self.amplitude > 0):
            raise InvalidParameter(f"nbar must be finite and > 0, got {self.amplitude}")
        _in_unit("reflectance", self.reflectance)
        _in_unit("eta", self.eta)
        _in_unit("p_s", self.p_s)

    @classmethod
    def coherent(cls, alpha, reflectance, eta=1.0, p_s=1.0):
        return cls(COHERENT, float(alpha), float(reflectance), float(eta), float(p_s))

    @classmethod
    def thermal(cls, nbar, reflectance, eta=1.0, p_s=1.0):
        return cls(THERMAL, float(nbar), float(reflectance), float(eta), float(p_s))

    @property
    def alpha(self) -> float:
        self._require(COHERENT)
        return self.amplitude

    @property
    def nbar(self) -> float:
        self._require(THERMAL)
        return self.amplitude

    @property
    def transmittance(self) -> float:
        return 1.0 - self.reflectance

    @property
    def theta(self) -> float:
        return math.asin(math.sqrt(self.reflectance))

    def _require(self, kind):
        if self.input_kind != kind:
            raise InvalidParameter(f"operation needs a {kind} input, got {self.input_kind}")


@dataclass(frozen=True)
class BsCoeffs:
    """Coefficients of the conditional state; ``c_per_beta = c / beta`` stays finite at ``beta = 0``."""

    s: float
    f: float
    c: float
    norm_n: float
    beta_amp: float
    c_per_beta: float


def bs_coeffs(p: BsParams) -> BsCoeffs:
    p._require(COHERENT)
    R, T, eta, ps, a = p.reflectance, p.transmittance, p.eta, p.p_s, p.alpha
    beta = a * math.sqrt(T)
    s = R * ps
    f = ps * (1 - eta) * T * (1 + (1 - eta) * R * a * a) + (1 - ps)
    c_tilde = -R * ps * (1 - eta)
    norm = ps * (1 - T * eta + R * T * eta * eta * a * a) + 1 - ps
    return BsCoeffs(s, f, c_tilde * beta, norm, beta, c_tilde)


def bs_pnd_coherent(p: BsParams) -> float:
    """No-click probability ``N exp(-R eta alpha^2)``."""
    k = bs_coeffs(p)
    return k.norm_n * math.exp(-p.reflectance * p.eta * p.alpha ** 2)


def _conditional_coeffs(p: BsParams) -> BsCoeffs:
    k = bs_coeffs(p)
    if not k.norm_n > fock.P_ND_FLOOR:
        # R = 0 with a pure source and perfect detector: the herald never fires
        raise ZeroProbability(f"no-click weight N = {k.norm_n:g}; the conditional state does not exist")
    return k


def _check_order(m, lowest=1):
    if int(m) != m or m < lowest or m > 2 * MAX_ORDER:
        raise InvalidParameter(f"order m must be an integer in [{lowest}, {2 * MAX_ORDER}], got {m}")
    return int(m)


def bs_moment_a(p: BsParams, m: int) -> float:
    """``<a^m>`` of the conditional state."""
    m = _check_order(m, 0)
    if m == 0:
        return 1.0
    k = _conditional_coeffs(p)
    b = k.beta_amp
    bm = b ** m
    # c beta^(m-1) is written as (c / beta) beta^m
    total = k.s * bm * (b * b + m + 1) + k.f * bm + k.c_per_beta * bm * (2 * b * b + m)
    return total / k.norm_n


def bs_moment_nm(p: BsParams, m: int) -> float:
    """``<a^{dag m} a^m>`` of the conditional state."""
    m = _check_order(m, 0)
    if m == 0:
        return 1.0
    k = _conditional_coeffs(p)
    b2 = k.beta_amp ** 2
    total = (
        k.s * b2 ** (m - 1) * ((b2 + m) ** 2 + b2)
        + k.f * b2 ** m
        + 2 * k.c_per_beta * b2 ** m * (b2 + m)
    )
    return total / k.norm_n


def bs_moment_set(p: BsParams, m: int) -> MomentSet:
    m = _check_order(m)
    ladder = tuple(bs_moment_nm(p, k) for k in range(m + 1))
    return MomentSet(
        m=m,
        a_m=bs_moment_a(p, m),
        a2m=bs_moment_a(p, 2 * m),
        n_m=ladder[m],
        n_2m=bs_moment_nm(p, 2 * m),
        anti_m=fock.antinormal_from_normal(ladder, m),
        ladder=ladder,
    )


class CoherentRow(NamedTuple):
    m: int
    q1: WitnessResult
    q2: WitnessResult
    p_nd: float


class ThermalRow(NamedTuple):
    m: int
    q2: WitnessResult
    p_nd: float


def _orders(orders):
    orders = [int(m) for m in orders]
    for m in orders:
        if not 1 <= m <= MAX_ORDER:
            raise InvalidParameter(f"orders must lie in 1..{MAX_ORDER}, got {m}")
    return orders


def _undefined(kind):
    return WitnessResult(math.nan, math.nan, math.nan, False, kind)


def bs_witnesses_coherent(p: BsParams, orders: Iterable[int]) -> list[CoherentRow]:
    """Q1, Q2 and P_nd per order; both witnesses are undefined when P_nd vanishes."""
    p_nd = bs_pnd_coherent(p)
    rows = []
    for m in _orders(orders):
        try:
            ms = bs_moment_set(p, m)
        except ZeroProbability:
            rows.append(CoherentRow(m, _undefined(WitnessKind.Q1_OPT), _undefined(WitnessKind.Q2), p_nd))
            continue
        rows.append(CoherentRow(m, q1_opt(ms), q2(ms), p_nd))
    return rows


def bs_conditional_density(p: BsParams, policy: Optional[fock.TruncationPolicy] = None):
    """Build the closed-form conditional state in a truncated basis.

    Returns ``(rho_c, P_nd)``.
    """
    k = _conditional_coeffs(p)
    if policy is None:
        policy = fock.TruncationPolicy.for_coherent(k.beta_amp, extra=1)
    beta = fock.coherent_state(k.beta_amp, policy).amplitudes
    n = policy.max_dim
    if n * abs(beta[-1]) ** 2 > policy.tail_tol:
        raise fock.TruncationOverflow("a^dag|beta> leaves the basis; widen it")
    added = fock.annihilation(n).T @ beta
    rho = (
        k.s * np.outer(added, added.conj())
        + k.f * np.outer(beta, beta.conj())
        + k.c * (np.outer(beta, added.conj()) + np.outer(added, beta.conj()))
    ) / k.norm_n
    trace = rho.trace().real
    if abs(trace - 1.0) > 1e-10:
        raise fock.TruncationOverflow(f"constructed state has trace {trace!r}; widen the basis")
    return fock.FockDensity(rho / trace, policy), bs_pnd_coherent(p)


# ---------------------------------------------------------------------------
# thermal input


def bs_thermal_dm(p: BsParams, m: int) -> float:
    """Unnormalised ``m``-photon coincidence rate ``D_m``; ``D_0`` is ``P_nd``.

    The printed expression carries ``T^(m-1)``, which is singular at ``T = 0``
    for ``m = 0``; that point raises :class:`DegenerateGeometry`.
    """
    p._require(THERMAL)
    m = _check_order(m, 0)
    R, T, eta, ps = p.reflectance, p.transmittance, p.eta, p.p_s
    if T == 0 and m == 0:
        raise DegenerateGeometry("D_0 has a T^-1 prefactor and is undefined at R = 1")
    inv = 1.0 / p.nbar
    k = inv + eta * R
    pref = math.factorial(m) * T ** (m - 1) * inv / k ** (m + 2)
    bracket = (
        T * k * (1 - eta * ps * T + 2 * m * eta * ps * R)
        + m * ps * R * k * k
        + (m + 1) * eta * eta * ps * R * T * T
    )
    return pref * bracket


def bs_pnd_thermal(p: BsParams) -> float:
    """``D_0``; at ``R = 1`` the brute-force pipeline is used instead (with a warning)."""
    if p.transmittance == 0:
        warnings.warn(
            "closed-form D_0 is singular at R = 1; falling back to the Fock-space pipeline",
            RuntimeWarning,
            stacklevel=2,
        )
        rho_in = fock.thermal_state(p.nbar)
        return fock.herald_no_click(rho_in, p.p_s, p.theta, p.eta)[1]
    return bs_thermal_dm(p, 0)


def bs_thermal_moment_set(p: BsParams, m: int, p_nd: Optional[float] = None) -> MomentSet:
    """Moment set of the conditional thermal output.

    The output is phase-symmetric, so ``<a^m>`` and ``<a^{2m}>`` vanish.
    """
    m = _check_order(m)
    d0 = bs_pnd_thermal(p) if p_nd is None else p_nd
    if not d0 > fock.P_ND_FLOOR:
        raise ZeroProbability(f"no-click probability {d0:g}; the conditional state does not exist")
    ladder = tuple([1.0] + [bs_thermal_dm(p, k) / d0 for k in range(1, m + 1)])
    return MomentSet(
        m=m,
        a_m=0.0,
        a2m=0.0,
        n_m=ladder[m],
        n_2m=bs_thermal_dm(p, 2 * m) / d0,
        anti_m=fock.antinormal_from_normal(ladder, m),
        ladder=ladder,
    )


def bs_witnesses_thermal(p: BsParams, orders: Iterable[int]) -> list[ThermalRow]:
    """Q2 for each order. Q1 is not offered: the output has no phase preference."""
    p._require(THERMAL)
    orders = _orders(orders)
    d0 = bs_pnd_thermal(p)
    if not d0 > fock.P_ND_FLOOR:
        return [ThermalRow(m, _undefined(WitnessKind.Q2), d0) for m in orders]
    return [ThermalRow(m, q2(bs_thermal_moment_set(p, m, d0)), d0) for m in orders]
