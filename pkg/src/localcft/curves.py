"""Weierstrass curves over Q, over local fields, and over finite fields.

One generic curve class carries the long-form coefficients a1..a6 over
whatever ring they live in (Python ints for curves over Q, FqElem for
reduced curves, KElem for base changes to a local field).  The group
law, division polynomials, reduction, point counting and the p-power
torsion tests over ramified extensions all live here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .abgroup import AbGroup
from .exceptions import PrecisionError
from .padic import (
    FqElem,
    KElem,
    KPoly,
    LocalField,
    ResidueField,
    hensel_roots,
    is_square,
    ksqrt,
)

ENUMERATION_BOUND = 1 << 16


# ----------------------------------------------------------------------
# generic dense polynomials (int / Fraction / FqElem / KElem coefficients)
# ----------------------------------------------------------------------

def _polyadd(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        elif i < len(a):
            out.append(a[i])
        else:
            out.append(b[i])
    return out


def _polysub(a, b):
    return _polyadd(a, [-c for c in b])


def _polymul(a, b):
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            t = ai * bj
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return out


def _polyscale(a, c):
    return [c * x for x in a]


def _poly_divexact(num, den):
    """Exact polynomial division over the coefficient ring.

    Integer polynomials go through Fractions with a final integrality
    assertion; field coefficients (FqElem, KElem) divide directly.
    """
    if isinstance(den[-1], int):
        num = [Fraction(c) for c in num]
        den = [Fraction(c) for c in den]
    out = [None] * (len(num) - len(den) + 1)
    work = list(num)
    for k in range(len(out) - 1, -1, -1):
        c = work[len(den) - 1 + k] / den[-1]
        out[k] = c
        for i, d in enumerate(den):
            work[i + k] = work[i + k] - c * d
    for w in work:
        if not (w.is_zero() if hasattr(w, "is_zero") else w == 0):
            raise ArithmeticError("polynomial division was not exact")
    if isinstance(out[0], Fraction):
        res = []
        for c in out:
            if c.denominator != 1:
                raise ArithmeticError("quotient is not integral")
            res.append(int(c))
        return res
    return out


# ----------------------------------------------------------------------
# curves and points
# ----------------------------------------------------------------------

class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over any ring."""

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4
                   + a2 * a3 * a3 - a4 * a4)
        self.c4 = self.b2 * self.b2 - 24 * self.b4
        self.c6 = (-self.b2 * self.b2 * self.b2 + 36 * self.b2 * self.b4
                   - 216 * self.b6)
        self.disc = (-self.b2 * self.b2 * self.b8 - 8 * self.b4 ** 3
                     - 27 * self.b6 * self.b6 + 9 * self.b2 * self.b4 * self.b6)
        self._check()

    def _check(self):
        lhs = 4 * self.b8
        rhs = self.b2 * self.b6 - self.b4 * self.b4
        diff = lhs - rhs
        zero = (diff.is_zero() if hasattr(diff, "is_zero") else diff == 0)
        if not zero:
            raise ArithmeticError("b8 identity failed (bad coefficient ring?)")
        dz = (self.disc.is_zero() if hasattr(self.disc, "is_zero")
              else self.disc == 0)
        if dz:
            raise ValueError("singular curve: discriminant is zero")

    @classmethod
    def from_ainvs(cls, ainvs) -> "WeierstrassCurve":
        return cls(*[int(a) for a in ainvs])

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def j_invariant(self):
        return Fraction(self.c4 ** 3, self.disc) * 1 if isinstance(self.c4, int) \
            else self.c4 ** 3 / self.disc

    def invariants(self):
        return (self.b2, self.b4, self.b6, self.b8, self.c4, self.c6,
                self.disc, self.j_invariant())

    def change_ring(self, convert) -> "WeierstrassCurve":
        return WeierstrassCurve(*[convert(a) for a in self.ainvs])

    def base_change(self, K: LocalField) -> "WeierstrassCurve":
        return self.change_ring(K.from_int)

    def reduction(self, rf: ResidueField) -> "WeierstrassCurve":
        return self.change_ring(lambda a: rf.make([a]))

    # ---- the chord-tangent group law (field coefficients only) ----

    def rhs(self, x):
        return x * x * x + self.a2 * x * x + self.a4 * x + self.a6

    def is_on_curve(self, P: "CurvePoint") -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        diff = y * y + self.a1 * x * y + self.a3 * y - self.rhs(x)
        return diff.is_zero() if hasattr(diff, "is_zero") else diff == 0

    def neg(self, P: "CurvePoint") -> "CurvePoint":
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: "CurvePoint", Q: "CurvePoint") -> "CurvePoint":
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        dx = x2 - x1
        dx_zero = dx.is_zero() if hasattr(dx, "is_zero") else dx == 0
        if dx_zero:
            ny = -y1 - self.a1 * x1 - self.a3
            dy = y2 - ny
            if (dy.is_zero() if hasattr(dy, "is_zero") else dy == 0):
                return CurvePoint.infinity()
            denom = y1 - ny  # = 2 y1 + a1 x1 + a3
            lam = (3 * x1 * x1 + 2 * self.a2 * x1 + self.a4 - self.a1 * y1) / denom
            nu = (-(x1 * x1 * x1) + self.a4 * x1 + 2 * self.a6 - self.a3 * y1) / denom
        else:
            lam = (y2 - y1) / dx
            nu = y1 - lam * x1
        x3 = lam * lam + self.a1 * lam - self.a2 - x1 - x2
        y3 = -(lam + self.a1) * x3 - nu - self.a3
        return CurvePoint(x3, y3)

    def mul(self, n: int, P: "CurvePoint") -> "CurvePoint":
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = CurvePoint.infinity()
        Q = P
        while n:
            if n & 1:
                R = self.add(R, Q)
            n >>= 1
            if n:
                Q = self.add(Q, Q)
        return R

    def __repr__(self):
        return f"WeierstrassCurve{tuple(self.ainvs)}"


class CurvePoint:
    """Affine point or the point at infinity."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x
        self.y = y

    @classmethod
    def infinity(cls):
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x!r}, {self.y!r})"


# ----------------------------------------------------------------------
# finite-field side: counting and group structure
# ----------------------------------------------------------------------

def _fq_sqrt_table(rf: ResidueField) -> dict:
    tab = getattr(rf, "_sqrt_table", None)
    if tab is None:
        tab = {}
        for z in rf.elements():
            tab.setdefault((z * z).coeffs, z)
        rf._sqrt_table = tab
    return tab


def fq_points(E: WeierstrassCurve, rf: ResidueField):
    """All affine points of E over F_q (p odd), via the y-quadratic."""
    if rf.q > ENUMERATION_BOUND:
        raise ValueError(f"enumeration bound exceeded: q = {rf.q}")
    tab = _fq_sqrt_table(rf)
    inv2 = rf.make([pow(2, -1, rf.p)])
    pts = []
    for x in rf.elements():
        bee = E.a1 * x + E.a3
        g = bee * bee + 4 * E.rhs(x)
        s = tab.get(g.coeffs)
        if s is None:
            continue
        y1 = (-bee + s) * inv2
        pts.append(CurvePoint(x, y1))
        if not s.is_zero():
            pts.append(CurvePoint(x, (-bee - s) * inv2))
    return pts


def fq_point_count(E: WeierstrassCurve, rf: ResidueField) -> int:
    return len(fq_points(E, rf)) + 1


def _point_order(E: WeierstrassCurve, P: CurvePoint, n: int, nfactors) -> int:
    t = n
    for ell in nfactors:
        while t % ell == 0 and E.mul(t // ell, P).is_infinity:
            t //= ell
    return t


def fq_group_structure(E: WeierstrassCurve, rf: ResidueField) -> AbGroup:
    """Invariant factors of E(F_q), from full enumeration.

    The exponent d2 is the lcm of point orders, verified by exhibiting a
    point of that order; d1 = #E / d2 and must divide gcd(d2, q - 1).
    """
    pts = fq_points(E, rf)
    n = len(pts) + 1
    if n == 1:
        return AbGroup([])
    nfactors = sorted(set(_prime_factors(n)))
    exponent = 1
    witness_order = 0
    for P in pts:
        o = _point_order(E, P, n, nfactors)
        exponent = exponent * o // gcd(exponent, o)
        if o > witness_order:
            witness_order = o
    if witness_order != exponent:
        # exponent reached only as an lcm of prime-power parts of distinct
        # points; in a rank <= 2 abelian group some point realizes it
        raise ArithmeticError("no point realizes the exponent (impossible)")
    d2 = exponent
    d1 = n // d2
    if d1 * d2 != n or d2 % d1 != 0 or gcd(d2, rf.q - 1) % d1 != 0:
        raise ArithmeticError("inconsistent group structure")
    return AbGroup([d1, d2]) if d1 > 1 else AbGroup([d2])


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def hasse_interval(q: int):
    from math import isqrt
    b = 2 * isqrt(q) + 2
    return q + 1 - b, q + 1 + b


# ----------------------------------------------------------------------
# reduction type over Q
# ----------------------------------------------------------------------

def _vp_int(n: int, p: int) -> int:
    if n == 0:
        return 10 ** 9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def check_minimal_at(E: WeierstrassCurve, p: int) -> bool:
    """Necessary minimality test: not (v_p(c4) >= 4 and v_p(disc) >= 12)."""
    return not (_vp_int(E.c4, p) >= 4 and _vp_int(E.disc, p) >= 12)


def good_ordinary_at(E: WeierstrassCurve, p: int):
    """(good, ordinary, a_p) for a curve over Q minimal at p.

    a_p comes from exhaustive point counting over F_p; ordinary means
    good reduction with a_p not divisible by p.
    """
    if not check_minimal_at(E, p):
        raise ValueError(f"model is not minimal at {p}")
    good = _vp_int(E.disc, p) == 0
    if not good:
        return False, False, None
    rf = ResidueField(p, 1)
    ap = p + 1 - fq_point_count(E.reduction(rf), rf)
    lo, hi = hasse_interval(p)
    assert lo <= p + 1 - ap <= hi
    return True, ap % p != 0, ap


# ----------------------------------------------------------------------
# division polynomials
# ----------------------------------------------------------------------

def _psi_pair_mul(a, b, B):
    """Product of psi-values represented as (w_parity, poly), w^2 = B."""
    eps = a[0] + b[0]
    poly = _polymul(a[1], b[1])
    if eps == 2:
        poly = _polymul(poly, B)
        eps = 0
    return (eps, poly)


def _division_psi(E: WeierstrassCurve, m: int, cache: dict):
    """psi_m as (w_parity, univariate poly), w = 2y + a1 x + a3."""
    if m in cache:
        return cache[m]
    B = cache["B"]
    if m == 0:
        val = (0, [])
    elif m == 1:
        val = (0, [_ring_one(E)])
    elif m == 2:
        val = (1, [_ring_one(E)])
    elif m == 3:
        val = (0, [E.b8, 3 * E.b6, 3 * E.b4, E.b2, 3 * _ring_one(E)])
    elif m == 4:
        val = (1, [E.b4 * E.b8 - E.b6 * E.b6,
                   E.b2 * E.b8 - E.b4 * E.b6,
                   10 * E.b8,
                   10 * E.b6,
                   5 * E.b4,
                   E.b2,
                   2 * _ring_one(E)])
    elif m % 2 == 1:
        n = (m - 1) // 2
        t1 = _psi_pair_mul(_division_psi(E, n + 2, cache),
                           _psi_cube(E, n, cache), B)
        t2 = _psi_pair_mul(_division_psi(E, n - 1, cache),
                           _psi_cube(E, n + 1, cache), B)
        assert t1[0] == t2[0]
        val = (t1[0], _polysub(t1[1], t2[1]))
        if val[0] == 1:
            raise ArithmeticError("odd psi acquired a w factor (bug)")
    else:
        n = m // 2
        sq1 = _psi_pair_mul(_division_psi(E, n - 1, cache),
                            _division_psi(E, n - 1, cache), B)
        sq2 = _psi_pair_mul(_division_psi(E, n + 1, cache),
                            _division_psi(E, n + 1, cache), B)
        t1 = _psi_pair_mul(_division_psi(E, n + 2, cache), sq1, B)
        t2 = _psi_pair_mul(_division_psi(E, n - 2, cache), sq2, B)
        assert t1[0] == t2[0]
        bracket = (t1[0], _polysub(t1[1], t2[1]))
        num = _psi_pair_mul(_division_psi(E, n, cache), bracket, B)
        # num = psi_n * bracket = psi_{2n} * psi_2 = B * P_{2n}
        if num[0] != 0:
            raise ArithmeticError("even psi parity bookkeeping failed")
        val = (1, _poly_divexact(num[1], B))
    cache[m] = val
    return val


def _psi_cube(E, n, cache):
    v = _division_psi(E, n, cache)
    return _psi_pair_mul(v, _psi_pair_mul(v, v, cache["B"]), cache["B"])


def _ring_one(E: WeierstrassCurve):
    b = E.b2
    if isinstance(b, int):
        return 1
    if isinstance(b, FqElem):
        return b.field.one()
    if isinstance(b, KElem):
        return b.field.one()
    raise TypeError("unsupported coefficient ring")


def division_polynomial(E: WeierstrassCurve, m: int):
    """Univariate division polynomial whose roots are m-torsion x-coords.

    Odd m: the classical psi_m(x) of degree (m^2-1)/2.  Even m: the
    product psi_m * psi_2 = (4x^3 + b2 x^2 + 2 b4 x + b6) * g_m(x), which
    vanishes exactly on x-coordinates of nonzero m-torsion.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    one = _ring_one(E)
    cache = getattr(E, "_psi_cache", None)
    if cache is None:
        cache = {"B": [E.b6, 2 * E.b4, E.b2, 4 * one]}
        try:
            E._psi_cache = cache
        except AttributeError:
            pass
    eps, poly = _division_psi(E, m, cache)
    if eps == 0:
        return list(poly)
    return _polymul(cache["B"], poly)


# ----------------------------------------------------------------------
# p-power torsion over a local field
# ----------------------------------------------------------------------

def torsion_y_coordinates(EK: WeierstrassCurve, x0: KElem):
    """Both y with (x0, y) on the curve, or None when y is irrational.

    Rationality is decided by squareness of the discriminant of the
    y-quadratic; if one root is rational both are.
    """
    bee = EK.a1 * x0 + EK.a3
    disc = bee * bee + 4 * EK.rhs(x0)
    if disc.is_zero():
        y = -bee / 2
        return y, y
    if not is_square(disc):
        return None
    s = ksqrt(disc)
    return (-bee + s) / 2, (-bee - s) / 2


def _fresh_torsion_poly(E: WeierstrassCurve, p: int, level: int):
    """Integer polynomial whose roots are x-coords of points of exact
    order p^level (p odd)."""
    big = division_polynomial(E, p ** level)
    if level == 1:
        return big
    small = division_polynomial(E, p ** (level - 1))
    return _poly_divexact(big, small)


def full_p_power_torsion_x(E: WeierstrassCurve, K: LocalField, p: int,
                           level: int = 1):
    """K-rational roots of the exact-order-p^level polynomial, or None
    when not all of them lie in K."""
    poly = _fresh_torsion_poly(E, p, level)
    f = KPoly.from_ints(K, poly)
    roots = hensel_roots(f)
    if len(roots) != len(poly) - 1:
        return None
    return roots


def has_full_p_torsion(E: WeierstrassCurve, K: LocalField, p: int) -> bool:
    """True iff E[p] is K-rational: all (p^2-1)/2 roots of psi_p lie in K
    and every root has K-rational y."""
    roots = full_p_power_torsion_x(E, K, p, level=1)
    if roots is None:
        return False
    EK = E.base_change(K)
    return all(torsion_y_coordinates(EK, x0) is not None for x0 in roots)


def p_torsion_points(E: WeierstrassCurve, K: LocalField, p: int):
    """All nonzero points of E[p](K) as CurvePoints over K."""
    poly = division_polynomial(E, p)
    f = KPoly.from_ints(K, poly)
    EK = E.base_change(K)
    pts = []
    for x0 in hensel_roots(f):
        ys = torsion_y_coordinates(EK, x0)
        if ys is None:
            continue
        y1, y2 = ys
        pts.append(CurvePoint(x0, y1))
        if not (y1 - y2).is_zero():
            pts.append(CurvePoint(x0, y2))
    return pts


def full_torsion_level(E: WeierstrassCurve, K: LocalField, p: int, M: int,
                       info: dict | None = None) -> int:
    """Largest n <= M with E[p^n] contained in E(K); 0 when E[p] is not.

    Checked level by level through the exact-order division polynomials;
    by the pairing bound the answer cannot exceed M over Q_p(mu_{p^M}).
    A precision failure mid-ladder is re-raised with the certified lower
    bound attached.  Pass `info` to collect root-valuation diagnostics.
    """
    EK = E.base_change(K)
    n = 0
    while n < M:
        try:
            roots = full_p_power_torsion_x(E, K, p, level=n + 1)
        except PrecisionError as exc:
            raise PrecisionError(
                f"level-{n + 1} torsion roots not certified; "
                f"certified lower bound N >= {n}") from exc
        if roots is None:
            break
        if info is not None and n == 0:
            # None means zero to precision, i.e. an exact root at x = 0
            info["x_valuations"] = sorted(
                (x.valuation() if x.valuation() is not None else 0)
                for x in roots)
        if not all(torsion_y_coordinates(EK, x0) is not None for x0 in roots):
            break
        n += 1
    return n
