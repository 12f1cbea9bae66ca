"""One curve's full 3-torsion over Q_3(zeta_3), certified point by point.

The curve 14a1 = [1,0,1,4,-6] has good ordinary reduction at 3 with
E(F_3) of order 6, and all eight nonzero 3-torsion points become
rational over the ramified quadratic field Q_3(zeta_3).  One x-coordinate
(shared by two points) sits at valuation -2: that pair is the formal
part, the kernel of reduction.

Run:  python demos/02_torsion_certification.py
"""

from localcft import (
    WeierstrassCurve,
    check_conditions,
    class_group_finite_part,
    cyclotomic_field,
    p_torsion_points,
)

E = WeierstrassCurve(1, 0, 1, 4, -6)
K = cyclotomic_field(3, 1)

report = check_conditions(E, p=3, M=1, label="14a1")
print("flags:", "good =", report.good, "ordinary =", report.ordinary,
      "rational torsion =", report.rat, "ramified =", report.ram)
print("a_3 =", report.a_p, "  E(F_3) =", report.reduced_group)
print("torsion level N =", report.torsion_level)

pts = p_torsion_points(E, K, 3)
EK = E.base_change(K)
print(f"\n{len(pts)} nonzero 3-torsion points over K:")
for P in pts:
    v = P.x.valuation()
    kind = "formal (reduces to O)" if v is not None and v < 0 else "integral"
    print(f"  x-valuation {str(v):>4}  [3]P = O: "
          f"{EK.mul(3, P).is_infinity}   {kind}")

print("\nfinite class group part:", class_group_finite_part(report))
print("expected for a_3 = -2: Z/3 + Z/6 (reduced group Z/6 plus one Z/3^N)")
