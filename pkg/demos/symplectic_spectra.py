"""
Orders of p'-elements in small symplectic groups
================================================

Enumerates Sp_2a(p) by transvections and lists the element orders prime
to p.  Pass --big to include Sp6(2) (about a minute; cached on disk by
``seslab sp-orders 6 2``).
"""

import sys

from seslab.auto import max_sp_check, pprime_order_spectrum
from seslab.constructions import sl2, sp_group

for p in (2, 3, 5, 7):
    spec = pprime_order_spectrum(sl2(p), p)
    print(f"SL2({p}): {p}'-orders {spec}, largest {max(spec)} = p + 1")

cases = [(4, 2), (4, 3)] + ([(6, 2)] if "--big" in sys.argv else [])
for n, p in cases:
    G = sp_group(n, p)
    spec = pprime_order_spectrum(G, p)
    rep = max_sp_check(spec, p, n // 2)
    print(f"Sp{n}({p}), order {G.order}: {p}'-orders {spec}")
    print(f"    Zsigmondy primes {list(rep.zsigmondy)}; bound case {rep.part}; passed {rep.passed}")
    if rep.note:
        print("    note:", rep.note)
