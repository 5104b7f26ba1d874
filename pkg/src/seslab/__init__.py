"""Semi-extraspecial p-groups over exact finite-field arithmetic.

Constructs the Sylow p-subgroups of SU3(q^2) and SL3(q), the automorphism
sigma_t, and checks the surrounding structural and enumerative facts.
"""

__version__ = "0.1.0"
