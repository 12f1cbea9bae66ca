"""Tour of finite-precision local-field arithmetic.

Run:  python demos/01_local_fields.py
"""

from localcft import (
    KPoly,
    Qp,
    cyclotomic_field,
    hensel_roots,
    is_square,
    pexp,
    plog,
    teichmuller,
    trace_and_norm,
)

# Q_3 and the ramified quadratic field Q_3(zeta_3)
Q3 = Qp(3)
K = cyclotomic_field(3, 1)

print("K = Q_3(zeta_3):  e =", K.e, " f =", K.f, " degree =", K.degree)
print("Eisenstein polynomial coefficients:", [c[0] for c in K.eis])

pi = K.pi()
zeta = K.zeta()
print("\npi =", pi)
print("zeta = 1 + pi =", zeta)
print("zeta^3 =", zeta ** 3, " (a cube root of unity)")
print("v(3) =", K.from_int(3).valuation(), " (totally ramified: v(p) = e)")

# arithmetic keeps exact digit bookkeeping
x = (1 + pi) * (2 - pi) / (1 + pi + pi ** 2)
print("\nmixed expression:", x)
print("valuation:", x.valuation(), " precision:", x.prec, "pi-digits")

# root finding walks the Newton polygon, including negative valuations
f = KPoly.from_ints(Q3, [-7, 0, 1])  # x^2 - 7
roots = hensel_roots(f)
print("\nroots of x^2 - 7 over Q_3:", roots)

g = KPoly(K, [-K.one(), K.pi() ** 2])  # pi^2 x - 1
print("root of pi^2 x - 1 has valuation",
      hensel_roots(g)[0].valuation())

# squares, Teichmueller representatives, log and exp
print("\nis_square(7) over Q_3:", is_square(Q3.from_int(7)))
print("is_square(-1) over Q_3:", is_square(Q3.from_int(-1)))
print("teichmuller(2) =", teichmuller(Q3.from_int(2)), " (the -1 in Z_3)")

u = Q3.from_int(10)
print("\nplog(10) =", plog(u))
print("pexp(plog(10)) - 10 =", pexp(plog(u)) - u)

tr, nm = trace_and_norm(pi)
print("\ntrace(pi) =", tr, "  norm(pi) =", nm)
