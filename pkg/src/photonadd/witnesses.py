"""Higher-order nonclassicality witnesses built from normally ordered moments.

Two families are provided:

* ``Q1`` -- the phase-sensitive depth of the normally ordered variance of
  ``a^m e^{-i phi} + a^{dag m} e^{i phi}`` normalised by ``<[a^m, a^{dag m}]>``.
  ``m = 1`` is quadrature squeezing, ``m = 2`` amplitude-squared squeezing.
* ``Q2`` -- the phase-insensitive depth ``<a^{dag 2m} a^{2m}> / <a^{dag m} a^m>^2 - 1``.
  ``m = 1`` is sub-Poissonian statistics.

Both live in ``[-1, 0)`` for a nonclassical state; any negative value is a
signature of nonclassicality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import InvalidParameter, UndefinedWitness

#: Denominators below this are reported as undefined instead of +-inf.
DEFINED_THRESHOLD = 1e-14

_MOMENT_SLACK = 1e-9


class WitnessKind(str, Enum):
    Q1_PHASE = "Q1_phase"
    Q1_OPT = "Q1_opt"
    Q2 = "Q2"
    MANDEL_Q = "MandelQ"


@dataclass(frozen=True)
class MomentSet:
    """The moments of order ``m`` that the witnesses consume.

    Attributes
    ----------
    m : int
        Order.
    a_m : complex
        ``<a^m>``.
    a2m : complex
        ``<a^{2m}>``.
    n_m : float
        ``<a^{dag m} a^m>``.
    n_2m : float
        ``<a^{dag 2m} a^{2m}>``.
    anti_m : float
        ``<a^m a^{dag m}>``.
    ladder : tuple of float, optional
        ``<a^{dag p} a^p>`` for ``p = 0..m``. Needed only when the set has to be
        transformed (e.g. by a loss channel) and ``anti_m`` recomputed.
    """

    m: int
    a_m: complex
    a2m: complex
    n_m: float
    n_2m: float
    anti_m: float
    ladder: Optional[tuple] = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidParameter(f"order m must be a positive integer, got {self.m}")
        scale = max(1.0, abs(self.anti_m), abs(self.n_m))
        for name in ("n_m", "n_2m", "anti_m"):
            if getattr(self, name) < -_MOMENT_SLACK * max(1.0, abs(getattr(self, name))):
                raise InvalidParameter(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.anti_m - self.n_m < -_MOMENT_SLACK * scale:
            raise InvalidParameter(
                "anti_m - n_m is the expectation of a positive commutator and "
                f"cannot be negative (got {self.anti_m - self.n_m})"
            )
        if self.ladder is not None:
            if len(self.ladder) != self.m + 1:
                raise InvalidParameter(f"ladder must hold m + 1 = {self.m + 1} entries")
            object.__setattr__(self, "ladder", tuple(float(v) for v in self.ladder))

    @property
    def commutator(self) -> float:
        """``<[a^m, a^{dag m}]>``, the Q1 denominator."""
        return float(self.anti_m - self.n_m)


@dataclass(frozen=True)
class WitnessResult:
    value: float
    numerator: float
    denominator: float
    defined: bool
    kind: WitnessKind
    phase: Optional[float] = None

    def __float__(self):
        return float(self.value)

    @property
    def negative(self) -> bool:
        return self.defined and self.value < 0


def _result(num, den, kind, phase=None, strict=False):
    defined = den >= DEFINED_THRESHOLD
    if not defined and strict:
        raise UndefinedWitness(f"{kind.value}: denominator {den!r} below {DEFINED_THRESHOLD}")
    value = num / den if defined else math.nan
    return WitnessResult(float(value), float(num), float(den), defined, kind, phase)


def zeta(ms: MomentSet) -> complex:
    """``<a^{dag 2m}> - <a^{dag m}>^2``."""
    return complex(ms.a2m).conjugate() - complex(ms.a_m).conjugate() ** 2


def _q1_offset(ms):
    return 2.0 * ms.n_m - 2.0 * abs(ms.a_m) ** 2


def q1_phase(ms: MomentSet, phi: float, strict: bool = False) -> WitnessResult:
    """Q1 at a fixed quadrature phase ``phi``."""
    z = zeta(ms)
    num = 2.0 * (z * cmath.exp(-2j * phi)).real + _q1_offset(ms)
    return _result(num, ms.commutator, WitnessKind.Q1_PHASE, float(phi), strict)


def optimal_phase(ms: MomentSet) -> float:
    """Phase in ``[0, pi)`` that minimises :func:`q1_phase`."""
    z = zeta(ms)
    return ((cmath.phase(z) + math.pi) / 2.0) % math.pi


def q1_opt(ms: MomentSet, strict: bool = False) -> WitnessResult:
    """Q1 minimised over the quadrature phase.

    The optimal phase is stored on the result so an experiment can be set up
    at it.
    """
    num = -2.0 * abs(zeta(ms)) + _q1_offset(ms)
    return _result(num, ms.commutator, WitnessKind.Q1_OPT, optimal_phase(ms), strict)


def q2(ms: MomentSet, strict: bool = False) -> WitnessResult:
    """Q2; undefined when ``<a^{dag m} a^m>`` vanishes (Fock states with n < m)."""
    den = float(ms.n_m) ** 2
    if ms.n_m < DEFINED_THRESHOLD:
        if strict:
            raise UndefinedWitness(f"Q2: <a^dag^m a^m> = {ms.n_m!r} below {DEFINED_THRESHOLD}")
        return WitnessResult(math.nan, float(ms.n_2m), den, False, WitnessKind.Q2)
    num = ms.n_2m - den
    return WitnessResult(float(ms.n_2m / den - 1.0), float(num), den, True, WitnessKind.Q2)


def mandel_q(ms: MomentSet) -> float:
    """Mandel Q = <n> * Q2 at m = 1."""
    if ms.m != 1:
        raise InvalidParameter("Mandel Q is defined for m = 1 only")
    return float(ms.n_m * q2(ms, strict=True).value)


def sign(value: float, deadband: float = 1e-12) -> int:
    if math.isnan(value):
        return 0
    if abs(value) < deadband:
        return 0
    return 1 if value > 0 else -1

