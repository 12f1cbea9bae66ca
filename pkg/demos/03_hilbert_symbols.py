"""K^x modulo p-th powers and the mod-p Hilbert symbol on Q_3(zeta_3).

The 4-dimensional F_3-space K^x/(K^x)^3 carries a perfect antisymmetric
pairing.  Two distinguished subgroups, the unit classes and the
unramified kernel, are exact annihilators of each other; that duality is
not built into the construction, so seeing it hold is a real check.

Run:  python demos/03_hilbert_symbols.py
"""

import random

from localcft import (
    annihilator,
    cyclotomic_field,
    hilbert_symbol,
    subgroup_Ubar,
    subgroup_V,
    units_mod_p,
)
from localcft.symbols import symbol_table

K = cyclotomic_field(3, 1)
B = units_mod_p(K)

print("basis of K^x/3 (pi, zeta, principal units):")
for k, b in enumerate(B.basis):
    print(f"  b{k} = {b}   coordinates {B.coordinates(b)}")

T = symbol_table(K)
print("\nGram matrix of the symbol on that basis (values in Z/3):")
for row in T.gram:
    print("  ", row)

U = subgroup_Ubar(K)
V = subgroup_V(K)
print("\ndim Ubar =", U.dim, "  dim V =", V.dim, "  V inside Ubar:", V <= U)
print("annihilator(Ubar) == V:", annihilator(U) == V)
print("annihilator(V) == Ubar:", annihilator(V) == U)

zeta = K.zeta()
pairings = [hilbert_symbol(zeta, b, K) for b in B.basis[1:]]
print("\n(zeta, unit basis) values:", pairings, " -> some unit pairs "
      "nontrivially with zeta")

rng = random.Random(7)
print("\nrandom Steinberg checks (a, 1-a) and (a, -a):")
for _ in range(5):
    a = K.from_int(rng.randrange(1, 100)) + K.pi() * rng.randrange(100)
    print(f"  (a,1-a) = {hilbert_symbol(a, 1 - a, K)}   "
          f"(a,-a) = {hilbert_symbol(a, -a, K)}")
