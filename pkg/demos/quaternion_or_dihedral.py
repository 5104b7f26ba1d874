"""
Unitary versus linear Sylow subgroups
=====================================

For odd q the Sylow p-subgroups of SU3(q^2) and SL3(q) are isomorphic;
for q a power of 2 they are not, and counting involutions already tells
them apart.  Both halves are checked here by explicit search.
"""

from seslab.auto import isomorphism_search, verify_homomorphism
from seslab.constructions import heisenberg, su3_sylow
from seslab.ses import count_involutions

for q in (2, 4, 8):
    G, H = su3_sylow(q), heisenberg(q)
    print(f"q = {q}: involutions {count_involutions(G)} vs {count_involutions(H)}",
          "->", isomorphism_search(G, H).status)

# for q = 2 also run the search with no invariant pruning at all
full = isomorphism_search(su3_sylow(2), heisenberg(2), prefilter=False)
print(f"q = 2 without pruning: {full.status} after {full.nodes} nodes")

for q in (3, 5, 7, 9):
    G, H = su3_sylow(q), heisenberg(q)
    r = isomorphism_search(G, H, budget=10**8)
    ok = verify_homomorphism(G, r.mapping, H)
    images = [(int(G.keys[g]), int(H.keys[h])) for g, h in zip(r.generators, r.images)]
    print(f"q = {q}: {r.status} after {r.nodes} nodes, verified {ok}; generator images (keys) {images}")
