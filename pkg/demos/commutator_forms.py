"""
Commutator forms and the semi-extraspecial property
===================================================

Each nonzero functional phi on Z(G) gives an alternating form
(xZ, yZ) -> phi([x, y]) on G/Z(G).  The group is semi-extraspecial exactly
when all of these are nondegenerate; the class-3 group UT4(2) is the
negative control.
"""

from seslab.constructions import heisenberg, su3_sylow, unitriangular
from seslab.ses import (
    central_functionals,
    commutator_form,
    is_camina,
    is_semi_extraspecial,
    is_ses_by_forms,
)

for G in (heisenberg(3), su3_sylow(4), heisenberg(4), su3_sylow(9)):
    ranks = [commutator_form(G, phi).rank() for phi in central_functionals(G)]
    print(f"{G.label:8s} forms: {len(ranks)}, ranks {ranks}")
    print(f"{'':8s} S.E.S. by quotients {is_semi_extraspecial(G)}, by forms {is_ses_by_forms(G)}, Camina {is_camina(G)}")

(phi,) = central_functionals(heisenberg(3))
print("Gram matrix for heis:3:")
print(commutator_form(heisenberg(3), phi).gram)

U = unitriangular(4, 2)
print(f"{U.label}: S.E.S. {is_semi_extraspecial(U)}, Camina {is_camina(U)}")
