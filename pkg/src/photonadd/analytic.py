"""Closed-form moments and witnesses of pure single-photon-added states.

SACS: ``a^dag |alpha> / sqrt(1 + alpha^2)`` with real ``alpha``.
SATS: ``a^dag rho_th a`` normalised, ``rho_th`` thermal with mean ``nbar``.
The thermal state is parameterised through ``x = e^beta = 1 + 1/nbar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, InvalidParameter
from .fock import antinormal_from_normal
from .witnesses import MomentSet, WitnessResult, q1_opt, q2

MAX_EXACT_ORDER = 8


def _check_order(m, lowest=1):
    if int(m) != m or m < lowest:
        raise InvalidParameter(f"order m must be an integer >= {lowest}, got {m}")
    return int(m)


@dataclass(frozen=True)
class SacsParams:
    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise InvalidParameter(f"alpha must be finite and >= 0, got {self.alpha}")


@dataclass(frozen=True)
class SatsParams:
    nbar: float

    def __post_init__(self):
        if not self.nbar > 0 or not math.isfinite(self.nbar):
            raise InvalidParameter(f"nbar must be finite and > 0, got {self.nbar}")

    @property
    def x(self) -> float:
        return 1.0 + 1.0 / self.nbar

    @property
    def beta_thermal(self) -> float:
        return math.log(self.x)


# ---------------------------------------------------------------------------
# SACS


def sacs_moment_a(p: SacsParams, m: int) -> float:
    """``<a^m> = alpha^m (m + 1 + alpha^2) / (1 + alpha^2)``."""
    m = _check_order(m, 0)
    a2 = p.alpha ** 2
    return p.alpha ** m * (m + 1 + a2) / (1 + a2)


def sacs_moment_nm(p: SacsParams, m: int) -> float:
    """``<a^{dag m} a^m>``.

    Written as ``alpha^(2m-2) (alpha^4 + (2m+1) alpha^2 + m^2) / (1 + alpha^2)`` so
    that ``alpha = 0`` evaluates to the limit (1 at m = 1, 0 for m >= 2).
    """
    m = _check_order(m, 0)
    if m == 0:
        return 1.0
    a2 = p.alpha ** 2
    return a2 ** (m - 1) * (a2 * a2 + (2 * m + 1) * a2 + m * m) / (1 + a2)


def sacs_q1_combination(p: SacsParams, m: int) -> float:
    """``-|zeta| + <a^{dag m} a^m> - |<a^m>|^2 = -m^2 alpha^(2m-2) (alpha^2 - 1) / (1 + alpha^2)^2``.

    This is half the optimised Q1 numerator; its sign is the sign of Q1.
    """
    m = _check_order(m)
    a2 = p.alpha ** 2
    return -m * m * a2 ** (m - 1) * (a2 - 1) / (1 + a2) ** 2


def sacs_q2(p: SacsParams, m: int) -> float:
    m = _check_order(m)
    if p.alpha == 0 and m >= 2:
        raise DomainError(f"Q2 of |1> is 0/0 for m = {m}; SACS Q2 needs alpha > 0 when m >= 2")
    a2 = p.alpha ** 2
    if a2 == 0:
        return -1.0
    num = a2 * (1 + a2) * (a2 * a2 + (4 * m + 1) * a2 + 4 * m * m)
    den = (a2 * a2 + (2 * m + 1) * a2 + m * m) ** 2
    return num / den - 1.0


def sacs_moment_set(p: SacsParams, m: int) -> MomentSet:
    m = _check_order(m)
    ladder = tuple(sacs_moment_nm(p, k) for k in range(m + 1))
    return MomentSet(
        m=m,
        a_m=sacs_moment_a(p, m),
        a2m=sacs_moment_a(p, 2 * m),
        n_m=ladder[m],
        n_2m=sacs_moment_nm(p, 2 * m),
        anti_m=antinormal_from_normal(ladder, m),
        ladder=ladder,
    )


def sacs_q1(p: SacsParams, m: int) -> WitnessResult:
    """Phase-optimised Q1 of the SACS (numerator = 2 * :func:`sacs_q1_combination`)."""
    return q1_opt(sacs_moment_set(p, m))


# ---------------------------------------------------------------------------
# SATS


def sats_moment_nm(p: SatsParams, m: int) -> float:
    """``<a^{dag m} a^m> = m! (x - 1)^-m (1 + m x) = m! nbar^m (1 + m x)``."""
    m = _check_order(m, 0)
    return math.factorial(m) * p.nbar ** m * (1 + m * p.x)


def sats_q2(p: SatsParams, m: int) -> float:
    """``(2m)!/(m!)^2 (2 m x + 1) / (m x + 1)^2 - 1``; negative iff ``x > C_m``."""
    m = _check_order(m)
    return sats_q2_x(p.x, m)


def sats_q2_x(x: float, m: int) -> float:
    return math.comb(2 * m, m) * (2 * m * x + 1) / (m * x + 1) ** 2 - 1.0


def sats_q2_at_x(x: float, m: int) -> float:
    """:func:`sats_q2` as a function of ``x`` directly (``x > 1``)."""
    if not x > 1:
        raise InvalidParameter(f"x = 1 + 1/nbar must exceed 1, got {x}")
    return sats_q2_x(x, _check_order(m))


class SatsThreshold(NamedTuple):
    c_m: float
    nbar_max: float


def sats_threshold(m: int) -> SatsThreshold:
    """Threshold ``C_m`` on ``x``: the SATS has ``Q2 < 0`` iff ``x > C_m``.

    ``nbar_max = 1 / (C_m - 1)`` is the same boundary in mean photon number.
    Factorials are exact integers; only the final square root is floating.
    """
    m = _check_order(m)
    if m > MAX_EXACT_ORDER:
        raise InvalidParameter(f"order {m} exceeds {MAX_EXACT_ORDER}")
    f2m = math.factorial(2 * m)
    fm2 = math.factorial(m) ** 2
    root = math.sqrt(f2m * (f2m - fm2))
    c = (f2m - fm2 + root) / (m * fm2)
    return SatsThreshold(c, 1.0 / (c - 1.0))


def sats_moment_set(p: SatsParams, m: int) -> MomentSet:
    """Moment set of the SATS; phase symmetry makes ``<a^m>`` and ``<a^{2m}>`` vanish."""
    m = _check_order(m)
    ladder = tuple(sats_moment_nm(p, k) for k in range(m + 1))
    return MomentSet(
        m=m,
        a_m=0.0,
        a2m=0.0,
        n_m=ladder[m],
        n_2m=sats_moment_nm(p, 2 * m),
        anti_m=antinormal_from_normal(ladder, m),
        ladder=ladder,
    )


def sats_q2_witness(p: SatsParams, m: int) -> WitnessResult:
    return q2(sats_moment_set(p, m))
