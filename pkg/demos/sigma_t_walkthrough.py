"""
The automorphism sigma_t of a unitary Sylow subgroup
=====================================================

Builds the Sylow 2-subgroup of SU3(16) (q = 4, order 64), applies
sigma_t: (a, b) -> (t a, t^(1+q) b) for a primitive t in GF(16), and splits
its order into the part seen on the center and the part seen on G/Z(G).
"""

import numpy as np

from seslab.auto import acts_irreducibly, coset_orbit_length, decomposition, induced_on_quotient, power, sigma_t
from seslab.constructions import su3_matrix, su3_sylow
from seslab.grp import center, order_histogram

q = 4
G = su3_sylow(q)
F = G.ambient.F
print(f"group of order {G.order} over {F!r}, modulus {F.modulus}")
print("order histogram:", order_histogram(G))

# a sample element rendered as a 3x3 matrix over GF(16)
a, b = G.ambient.split(G.keys[5])
print("element 5 as a matrix:")
for row in su3_matrix(F, q, int(a), int(b)):
    print("   ", [x.code for x in row])

t = F.gen
sigma = sigma_t(q, t)
print(f"\nsigma_t with t = {t}: order {sigma.order} (q^2 - 1 = {q * q - 1})")

dec = decomposition(sigma)
print(f"order on Z(G): d = {dec.d}; order of sigma^d on G/Z(G): c = {dec.c}; c*d = {dec.c * dec.d}")

# sigma^d fixes the center, so the induced map preserves every commutator form
psi = induced_on_quotient(power(sigma, dec.d), center(G))
print("induced matrix over GF(2):")
print(psi.matrix)
print("preserves all forms:", psi.symplectic, "| irreducible:", acts_irreducibly(psi))

print("orbit of a nontrivial coset of Z(G):", coset_orbit_length(sigma), "of", G.order // center(G).order - 1)
