"""Nonclassicality witnesses of photon-added coherent and thermal states.

Closed-form moments for ideal and realistic photon addition, checked against a
truncated Fock-space simulation.
"""

from .analytic import (
    SacsParams,
    SatsParams,
    sacs_moment_set,
    sacs_q1,
    sacs_q2,
    sats_moment_set,
    sats_q2,
    sats_threshold,
)
from .bs_scheme import BsParams, bs_moment_set, bs_pnd_coherent, bs_pnd_thermal, bs_witnesses_coherent, bs_witnesses_thermal
from .errors import PhotonAddError
from .ndpa import NdpaParams, ndpa_q1, ndpa_q2
from .witnesses import MomentSet, WitnessResult, mandel_q, q1_opt, q1_phase, q2

__version__ = "0.1.0"

__all__ = [
    "BsParams",
    "MomentSet",
    "NdpaParams",
    "PhotonAddError",
    "SacsParams",
    "SatsParams",
    "WitnessResult",
    "bs_moment_set",
    "bs_pnd_coherent",
    "bs_pnd_thermal",
    "bs_witnesses_coherent",
    "bs_witnesses_thermal",
    "mandel_q",
    "ndpa_q1",
    "ndpa_q2",
    "q1_opt",
    "q1_phase",
    "q2",
    "sacs_moment_set",
    "sacs_q1",
    "sacs_q2",
    "sats_moment_set",
    "sats_q2",
    "sats_threshold",
]
