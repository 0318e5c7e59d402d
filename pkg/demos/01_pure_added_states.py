"""Witness values of ideal photon-added coherent and thermal states.

Run: python3 demos/01_pure_added_states.py
"""

import numpy as np

from photonadd import analytic, fock
from photonadd.witnesses import q1_opt, q2

# Q1 of a*|alpha> flips sign at alpha = 1; Q2 is negative everywhere.
print("alpha   Q1(m=1)   Q1(m=2)   Q2(m=1)   Q2(m=2)")
for alpha in (0.5, 1.0, 1.5, 2.0, 3.0):
    p = analytic.SacsParams(alpha)
    row = [analytic.sacs_q1(p, m).value for m in (1, 2)] + [analytic.sacs_q2(p, m) for m in (1, 2)]
    print(f"{alpha:5.2f} " + " ".join(f"{v:9.5f}" for v in row))

# the same numbers from a truncated Fock-space simulation
alpha = 2.0
rho = fock.photon_add(fock.coherent_state(alpha, fock.TruncationPolicy.for_coherent(alpha, extra=1)))
ms = fock.moment_set(rho, 1)
print(f"\nsimulated alpha=2: Q1 = {q1_opt(ms).value:.6f}, Q2 = {q2(ms).value:.6f}")

# thermal input: Q2 < 0 only while 1 + 1/nbar exceeds C_m
print("\nm   C_m          largest nbar with Q2 < 0")
for m in range(1, 6):
    t = analytic.sats_threshold(m)
    print(f"{m}   {t.c_m:10.6f}   {t.nbar_max:.6f}")

nbars = np.array([0.2, 0.5, 0.7, 0.8, 1.5])
print("\nnbar    Q2(m=1)")
for nbar in nbars:
    print(f"{nbar:4.2f}  {analytic.sats_q2(analytic.SatsParams(nbar), 1):9.5f}")
