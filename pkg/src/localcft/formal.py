"""The formal group of a Weierstrass curve as truncated power series.

Everything is computed over exact Fractions from the curve coefficients:
the parameter is t = -x/y, the w-recursion gives x(t) and y(t) as Laurent
series, the invariant differential integrates to the formal logarithm L,
and the group law is assembled as F(t1,t2) = L^{-1}(L(t1) + L(t2)).  For
integral models the group law must come out integral, which is asserted
rather than assumed; that check exercises the whole construction chain.

Series conventions: univariate series are coefficient lists indexed by
degree; bivariate series are {(i, j): coeff} dicts truncated at total
degree D.
"""

from __future__ import annotations

from fractions import Fraction

from .curves import WeierstrassCurve, p_torsion_points
from .exceptions import IntegrityError
from .padic import LocalField

DEFAULT_ORDER = 12


# ---- univariate helpers (lists of Fractions, index = degree) ----

def _u_trunc(a, D):
    return a[: D + 1] + [Fraction(0)] * max(0, D + 1 - len(a))

def _u_add(a, b, D):
    a, b = _u_trunc(a, D), _u_trunc(b, D)
    return [x + y for x, y in zip(a, b)]

def _u_mul(a, b, D):
    out = [Fraction(0)] * (D + 1)
    for i, ai in enumerate(a[: D + 1]):
        if ai:
            for j, bj in enumerate(b[: D + 1 - i]):
                if bj:
                    out[i + j] += ai * bj
    return out

def _u_scale(a, c):
    return [c * x for x in a]

def _u_compose(outer, inner, D):
    """outer(inner(t)) truncated; inner must have zero constant term."""
    assert not inner[0]
    out = [Fraction(0)] * (D + 1)
    power = [Fraction(1)] + [Fraction(0)] * D
    for k, ck in enumerate(outer[: D + 1]):
        if k:
            power = _u_mul(power, inner, D)
        if ck:
            for i, pi in enumerate(power):
                out[i] += ck * pi
    return out

def _u_derive(a):
    return [k * a[k] for k in range(1, len(a))]

def _u_integrate(a, D):
    out = [Fraction(0)] * (D + 1)
    for k, c in enumerate(a[:D]):
        out[k + 1] = Fraction(c, k + 1)
    return out

def _u_invert_unit(a, D):
    """1 / a for a unit series (nonzero constant term)."""
    inv0 = Fraction(1) / a[0]
    out = [inv0] + [Fraction(0)] * D
    for k in range(1, D + 1):
        s = Fraction(0)
        for j in range(1, k + 1):
            if j < len(a) and a[j]:
                s += a[j] * out[k - j]
        out[k] = -inv0 * s
    return out

def _u_reverse(a, D):
    """Compositional inverse of a = t + O(t^2)."""
    assert not a[0] and a[1] == 1
    inv = [Fraction(0), Fraction(1)] + [Fraction(0)] * (D - 1)
    for k in range(2, D + 1):
        err = _u_compose(a, inv, D)[k]
        inv[k] -= err
    return inv


# ---- bivariate helpers ({(i, j): Fraction}, total degree <= D) ----

def _b_add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}

def _b_mul(a, b, D):
    out = {}
    for (i1, j1), v1 in a.items():
        for (i2, j2), v2 in b.items():
            i, j = i1 + i2, j1 + j2
            if i + j <= D:
                key = (i, j)
                out[key] = out.get(key, Fraction(0)) + v1 * v2
    return {k: v for k, v in out.items() if v}

def _b_eval_series(coeffs, s, D):
    """sum coeffs[k] * s^k for a bivariate s with no constant term."""
    out = {}
    power = {(0, 0): Fraction(1)}
    for k, ck in enumerate(coeffs[: D + 1]):
        if k:
            power = _b_mul(power, s, D)
            if not power:
                break
        if ck:
            for key, v in power.items():
                out[key] = out.get(key, Fraction(0)) + ck * v
    return {k: v for k, v in out.items() if v}


class FormalGroupLaw:
    """Truncated formal group law of a Weierstrass curve.

    Attributes: curve; order D; log (list); exp (list); law (bivariate
    dict F(t1,t2)); all coefficients exact Fractions, and the law's are
    integers for integral models.
    """

    def __init__(self, curve: WeierstrassCurve, order: int = DEFAULT_ORDER):
        if order < 5:
            raise ValueError("truncation order must be >= 5")
        self.curve = curve
        self.order = order
        self._m_cache: dict[int, list] = {}
        D = order
        work = D + 4
        a1, a2, a3, a4, a6 = [Fraction(a) for a in curve.ainvs]

        # w(t) = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3
        w = [Fraction(0)] * (work + 1)
        w[3] = Fraction(1)
        for _ in range(work):
            w2 = _u_mul(w, w, work)
            w3 = _u_mul(w2, w, work)
            new = [Fraction(0)] * (work + 1)
            new[3] = Fraction(1)
            for k in range(work):
                if w[k]:
                    if a1:
                        new[k + 1] += a1 * w[k]
                    if a2 and k + 2 <= work:
                        new[k + 2] += a2 * w[k]
            for k in range(work + 1):
                if w2[k]:
                    if a3:
                        new[k] += a3 * w2[k]
                    if a4 and k + 1 <= work:
                        new[k + 1] += a4 * w2[k]
                if w3[k] and a6:
                    new[k] += a6 * w3[k]
            if new == w:
                break
            w = new

        # unit u = t^3 / w;  x = u * t^-2,  y = -u * t^-3
        what = w[3:] + [Fraction(0)] * 3  # w / t^3, unit series
        u = _u_invert_unit(what, work)

        # omega = dx / (2y + a1 x + a3)
        #       = (t u' - 2u) / (-2u + a1 t u + a3 t^3)
        du = _u_derive(u) + [Fraction(0)]
        num = _u_add([Fraction(0)] + du, _u_scale(u, Fraction(-2)), work)
        den = _u_scale(u, Fraction(-2))
        if a1:
            den = _u_add(den, [Fraction(0)] + _u_scale(u, a1)[:-1], work)
        if a3:
            den = _u_add(den, [Fraction(0)] * 3 + [a3] + [Fraction(0)] * (work - 3),
                         work)
        omega = _u_mul(num, _u_invert_unit(den, work), work)
        if omega[0] != 1:
            raise IntegrityError("invariant differential does not start at 1")

        self.log = _u_integrate(omega, D)
        self.exp = _u_reverse(self.log, D)

        sl = _b_add(_b_eval_series(self.log, {(1, 0): Fraction(1)}, D),
                    _b_eval_series(self.log, {(0, 1): Fraction(1)}, D))
        self.law = _b_eval_series(self.exp, sl, D)

        if all(isinstance(a, int) for a in curve.ainvs):
            for key, v in self.law.items():
                if v.denominator != 1:
                    raise IntegrityError(
                        f"group law coefficient at {key} is not integral: {v}")

    # ---- series accessors ----

    def law_coefficient(self, i: int, j: int) -> Fraction:
        return self.law.get((i, j), Fraction(0))

    def m_series(self, m: int) -> list:
        """[m](t) via the logarithm: exp(m * log t)."""
        if m not in self._m_cache:
            self._m_cache[m] = _u_compose(self.exp, _u_scale(self.log, Fraction(m)),
                                          self.order)
        return self._m_cache[m]

    def m_series_by_recursion(self, m: int) -> list:
        """[m](t) via [m] = F([m-1](t), t); independent of m_series."""
        D = self.order
        cur = [Fraction(0), Fraction(1)] + [Fraction(0)] * (D - 1)
        for _ in range(m - 1):
            cur = self.compose_with_uni(cur, D)
        return cur

    def compose_with_uni(self, u, D):
        """F(u(t), t) for a univariate u with u(0) = 0."""
        by_j: dict[int, dict[int, Fraction]] = {}
        for (i, j), v in self.law.items():
            by_j.setdefault(j, {})[i] = v
        out = [Fraction(0)] * (D + 1)
        upow = [[Fraction(1)] + [Fraction(0)] * D]
        for _ in range(D):
            upow.append(_u_mul(upow[-1], u, D))
        for j, row in by_j.items():
            inner = [Fraction(0)] * (D + 1)
            for i, v in row.items():
                for k, c in enumerate(upow[i][: D + 1 - j]):
                    if c:
                        inner[k] += v * c
            for k, c in enumerate(inner):
                if c and k + j <= D:
                    out[k + j] += c
        return out

    # ---- identity checks (used by the test suites) ----

    def check_symmetry(self) -> bool:
        return all(self.law.get((j, i), Fraction(0)) == v
                   for (i, j), v in self.law.items())

    def check_neutral(self) -> bool:
        return all((v == 1 if (i, j) == (1, 0) else v == 0)
                   for (i, j), v in self.law.items() if j == 0)

    def check_log_linearizes(self) -> bool:
        D = self.order
        lhs = _b_eval_series(self.log, self.law, D)
        rhs = _b_add(_b_eval_series(self.log, {(1, 0): Fraction(1)}, D),
                     _b_eval_series(self.log, {(0, 1): Fraction(1)}, D))
        return lhs == rhs

    def check_associative(self) -> bool:
        """F(F(t1,t2),t3) = F(t1,F(t2,t3)) coefficientwise.

        Both sides are assembled per power of the lone variable, so all
        heavy products stay bivariate.
        """
        D = self.order
        by_j: dict[int, dict[int, Fraction]] = {}
        for (i, j), v in self.law.items():
            by_j.setdefault(j, {})[i] = v

        def tri_from(u, swap):
            # sum_{a,b} F_ab u(x,y)^a z^b as {(i,j,k): v}
            upow = [{(0, 0): Fraction(1)}]
            for _ in range(D):
                upow.append(_b_mul(upow[-1], u, D))
            out = {}
            for b, row in by_j.items():
                for a, v in row.items():
                    for (i, j), c in upow[a].items():
                        if i + j + b <= D:
                            key = (i, j, b) if not swap else (b, i, j)
                            out[key] = out.get(key, Fraction(0)) + v * c
            return {k: v for k, v in out.items() if v}

        lhs = tri_from(self.law, swap=False)          # F(F(t1,t2), t3)
        rhs = tri_from(self.law, swap=True)           # F(t1, F(t2,t3))
        return lhs == rhs


def formal_group(E: WeierstrassCurve, order: int = DEFAULT_ORDER) -> FormalGroupLaw:
    return FormalGroupLaw(E, order)


def formal_log(E: WeierstrassCurve, order: int = DEFAULT_ORDER) -> list:
    return FormalGroupLaw(E, order).log


# ----------------------------------------------------------------------
# formal torsion inside the kernel of reduction
# ----------------------------------------------------------------------

def formal_torsion_points(E: WeierstrassCurve, K: LocalField, p: int):
    """Nonzero points of E[p](K) reducing to the origin (x of negative
    valuation); for an ordinary curve with rational p-torsion over a
    field containing mu_p this is one x-orbit of p - 1 points."""
    pts = p_torsion_points(E, K, p)
    out = []
    for P in pts:
        v = P.x.valuation()
        if v is not None and v < 0:
            out.append(P)
    return out


def formal_mod_p_dim(E: WeierstrassCurve, K: LocalField, p: int) -> int:
    """d with #(formal group of E over O_K) / p = p^d.

    d = [K:Q_p] + dim_{F_p} of the K-rational formal p-torsion; the free
    part contributes the degree, torsion the rest.
    """
    count = 1 + len(formal_torsion_points(E, K, p))
    dim = 0
    while p ** (dim + 1) <= count:
        dim += 1
    if p ** dim != count:
        raise IntegrityError(f"formal torsion count {count} is not a p-power")
    return K.degree + dim
