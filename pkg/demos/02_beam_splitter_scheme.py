"""Beam-splitter photon addition with an imperfect source and detector.

Run: python3 demos/02_beam_splitter_scheme.py
"""

from photonadd import bs_scheme, fock
from photonadd.bs_scheme import BsParams

# a bright input and a balanced splitter: phase-sensitive witness
p = BsParams.coherent(5.0, reflectance=0.5, eta=0.6, p_s=0.7)
for row in bs_scheme.bs_witnesses_coherent(p, [1, 2, 3]):
    print(f"alpha=5 R=0.5 eta=0.6 ps=0.7  m={row.m}  Q1 = {row.q1.value:+.4f}")
print(f"no-click probability {bs_scheme.bs_pnd_coherent(p):.3e}")

# a weak input: the phase-insensitive witness survives worse hardware
p = BsParams.coherent(1.5, reflectance=0.8, eta=0.3, p_s=0.3)
for row in bs_scheme.bs_witnesses_coherent(p, [2, 3, 4, 5]):
    print(f"alpha=1.5 R=0.8 eta=0.3 ps=0.3  m={row.m}  Q2 = {row.q2.value:+.4f}")
print(f"no-click probability {bs_scheme.bs_pnd_coherent(p):.4f}")

# cross-check the closed form against the brute-force beam splitter
p = BsParams.coherent(1.5, reflectance=0.4, eta=0.6, p_s=0.7)
closed, p_closed = bs_scheme.bs_conditional_density(p)
brute, p_brute = fock.herald_no_click(fock.coherent_state(1.5), p.p_s, p.theta, p.eta)
print(f"\nfidelity closed form vs simulation: {fock.fidelity(closed, brute):.12f}")
print(f"no-click probability: {p_closed:.12f} vs {p_brute:.12f}")

# thermal light in the same setup
p = BsParams.thermal(0.5, reflectance=0.7, eta=0.6, p_s=0.7)
for row in bs_scheme.bs_witnesses_thermal(p, [1, 2, 3]):
    print(f"nbar=0.5 R=0.7  m={row.m}  Q2 = {row.q2.value:+.4f}  P_nd = {row.p_nd:.4f}")
