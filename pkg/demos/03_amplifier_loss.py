"""Photon addition through a lossy parametric amplifier.

Loss rescales normally ordered moments, so Q2 does not depend on the
efficiency while the magnitude of Q1 shrinks.

Run: python3 demos/03_amplifier_loss.py
"""

import numpy as np

from photonadd import fock, ndpa
from photonadd.ndpa import NdpaParams
from photonadd.witnesses import q2

alphas = np.arange(0.5, 3.01, 0.5)
print("alpha  Q1(eta=1)  Q1(eta=0.62)  Q2(eta=1)  Q2(eta=0.62)")
for a in alphas:
    ideal, lossy = NdpaParams.coherent(a, 1.0), NdpaParams.coherent(a, 0.62)
    print(
        f"{a:4.1f}  {ndpa.ndpa_q1(ideal, 2).value:+9.5f}  {ndpa.ndpa_q1(lossy, 2).value:+11.5f}"
        f"  {ndpa.ndpa_q2(ideal, 2).value:+9.5f}  {ndpa.ndpa_q2(lossy, 2).value:+11.5f}"
    )

# the same invariance through an explicit loss channel
rho = fock.photon_add(fock.thermal_state(0.5, fock.TruncationPolicy.for_thermal(0.5, extra=1)))
for eta in (0.1, 0.3, 0.62, 1.0):
    ms = fock.moment_set(fock.loss_channel(rho, eta), 1)
    print(f"thermal nbar=0.5, eta={eta:4.2f}: Q2 = {q2(ms).value:.12f}")
