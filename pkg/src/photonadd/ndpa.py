"""Photon addition through a parametric amplifier, modelled as ideal ``a^dag``
followed by a pure-loss channel of overall efficiency ``eta``.

Under loss ``a -> sqrt(eta) a + sqrt(1 - eta) v`` the normally ordered moments
rescale exactly: ``<a^m> -> eta^(m/2) <a^m>`` and
``<a^{dag m} a^m> -> eta^m <a^{dag m} a^m>``. Anti-normally ordered moments do
not rescale and are rebuilt from the scaled ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import analytic
from .errors import InvalidParameter, MissingMoment
from .fock import antinormal_from_normal
from .witnesses import MomentSet, WitnessResult, q1_opt, q2

COHERENT = "coherent"
THERMAL = "thermal"


@dataclass(frozen=True)
class NdpaParams:
    """``amplitude`` is ``alpha`` for a coherent input and ``nbar`` for a thermal one."""

    input_kind: str
    amplitude: float
    eta: float

    def __post_init__(self):
        if self.input_kind not in (COHERENT, THERMAL):
            raise InvalidParameter(f"input_kind must be 'coherent' or 'thermal', got {self.input_kind!r}")
        if not 0.0 < self.eta <= 1.0:
            raise InvalidParameter(f"eta must lie in (0, 1], got {self.eta}")
        # range checks on the amplitude are delegated to the pure-state parameters
        self.ideal()

    @classmethod
    def coherent(cls, alpha, eta):
        return cls(COHERENT, float(alpha), float(eta))

    @classmethod
    def thermal(cls, nbar, eta):
        return cls(THERMAL, float(nbar), float(eta))

    def ideal(self):
        if self.input_kind == COHERENT:
            return analytic.SacsParams(self.amplitude)
        return analytic.SatsParams(self.amplitude)


def ndpa_moments(ideal: MomentSet, eta: float) -> MomentSet:
    """Moments after loss ``eta`` given the moments of the ideal added state."""
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameter(f"eta must lie in [0, 1], got {eta}")
    if ideal.ladder is None:
        raise MissingMoment("the ideal moment set needs its ladder <a^dag^p a^p>, p = 0..m")
    m = ideal.m
    ladder = tuple(eta ** p * v for p, v in enumerate(ideal.ladder))
    return MomentSet(
        m=m,
        a_m=math.sqrt(eta) ** m * ideal.a_m,
        a2m=eta ** m * ideal.a2m,
        n_m=ladder[m],
        n_2m=eta ** (2 * m) * ideal.n_2m,
        anti_m=antinormal_from_normal(ladder, m),
        ladder=ladder,
    )


def _ideal_set(p: NdpaParams, m):
    if p.input_kind == COHERENT:
        return analytic.sacs_moment_set(p.ideal(), m)
    return analytic.sats_moment_set(p.ideal(), m)


def ndpa_moment_set(p: NdpaParams, m: int) -> MomentSet:
    return ndpa_moments(_ideal_set(p, m), p.eta)


def ndpa_q1(p: NdpaParams, m: int) -> WitnessResult:
    """Phase-optimised Q1 of the lossy SACS.

    The numerator is ``eta^m`` times the ideal one, so the sign region
    (negative iff ``alpha > 1``) does not move with ``eta``; the magnitude does.
    """
    if p.input_kind != COHERENT:
        raise InvalidParameter("Q1 is not available for the thermal input (phase-symmetric state)")
    return q1_opt(ndpa_moment_set(p, m))


def ndpa_q2(p: NdpaParams, m: int) -> WitnessResult:
    """Q2 of the lossy state; the ``eta^m`` factors cancel, leaving the ideal value."""
    if p.input_kind == COHERENT:
        # raises DomainError at alpha = 0, m >= 2 like the pure-state closed form
        analytic.sacs_q2(p.ideal(), m)
    return q2(ndpa_moment_set(p, m))
