"""Finite-precision arithmetic in towers of p-adic fields.

A LocalField models Q_p itself or a two-step tower

    Q_p -- unramified step of degree f -- Eisenstein step of degree e,

which covers every field this package needs (Q_p, cyclotomic fields
Q_p(mu_{p^M}), small unramified extensions).  Elements are stored as

    pi^shift * sum_{i<e} c_i * pi^i,    c_i in Z_q = Z_p[y]/(unram),

with the c_i kept as length-f tuples of integers modulo p^coef_prec.
The pi-adic valuation of such a sum is min_i (e*v_p(c_i) + i); the
minimum is attained at a unique i because the candidates are distinct
mod e, so valuations are exact whenever the element is nonzero at the
working precision.  Every element carries an absolute precision in
pi-units and arithmetic never claims more precision than its inputs
justify.

p = 2 is rejected everywhere: unit squares and the symbol theory at 2
are structurally different and out of scope here.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exceptions import PrecisionError

DEFAULT_PRECISION = 60  # pi-adic digits
_GUARD = 4  # extra p-digits kept beyond the advertised precision


def _vp(n: int, p: int, cap: int) -> int | None:
    """p-adic valuation of n (given mod p^cap); None when n = 0 mod p^cap."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
        if v >= cap:
            return None
    return v


# ----------------------------------------------------------------------
# Residue fields F_{p^f}
# ----------------------------------------------------------------------

class FqElem:
    """Element of F_{p^f}, stored as a length-f tuple of ints mod p."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "ResidueField", coeffs):
        self.field = field
        self.coeffs = tuple(c % field.p for c in coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.make([other])
        return isinstance(other, FqElem) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = self.field.coerce(other)
        return FqElem(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self.field.coerce(other)
        return FqElem(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return FqElem(self.field, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self.field.coerce(other)
        return self.field._mul(self, other)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return (-self) + other

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in residue field")
        return self ** (self.field.q - 2)

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        return (self ** ((self.field.q - 1) // 2)) == self.field.one()

    def sqrt(self):
        """A square root, or None.  Brute force; residue fields here are tiny."""
        if self.is_zero():
            return self.field.zero()
        for z in self.field.elements():
            if z * z == self:
                return z
        return None

    def __repr__(self):
        if self.field.f == 1:
            return str(self.coeffs[0])
        return "Fq" + str(self.coeffs)


class ResidueField:
    """The finite field F_{p^f} defined by a monic irreducible polynomial."""

    def __init__(self, p: int, f: int = 1, modulus=None):
        if p == 2:
            raise ValueError("p = 2 is out of scope")
        self.p = p
        self.f = f
        self.q = p ** f
        if f == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = tuple(modulus) if modulus else _find_irreducible(p, f)
            if len(self.modulus) != f + 1 or self.modulus[-1] % p != 1:
                raise ValueError("defining polynomial must be monic of degree f")
            if not _is_irreducible_mod_p(self.modulus, p):
                raise ValueError("defining polynomial is reducible over F_p")
        # reduction rows for y^f .. y^{2f-2}
        self._red = []
        row = [(-c) % p for c in self.modulus[:f]]
        self._red.append(tuple(row))
        for _ in range(f - 2):
            # multiply the previous row by y and reduce
            prev = self._red[-1]
            nxt = [0] * f
            carry = prev[f - 1]
            for i in range(f - 1, 0, -1):
                nxt[i] = prev[i - 1]
            for i in range(f):
                nxt[i] = (nxt[i] + carry * self._red[0][i]) % p
            self._red.append(tuple(nxt))

    def coerce(self, x) -> FqElem:
        if isinstance(x, FqElem):
            if x.field.q != self.q:
                raise ValueError("residue field mismatch")
            return x
        if isinstance(x, int):
            return self.make([x])
        raise TypeError(f"cannot coerce {type(x)} into F_{self.q}")

    def make(self, coeffs) -> FqElem:
        coeffs = list(coeffs)[: self.f]
        coeffs += [0] * (self.f - len(coeffs))
        return FqElem(self, coeffs)

    def zero(self) -> FqElem:
        return self.make([])

    def one(self) -> FqElem:
        return self.make([1])

    def gen(self) -> FqElem:
        return self.make([0, 1]) if self.f > 1 else self.one()

    def elements(self):
        for tup in itertools.product(range(self.p), repeat=self.f):
            yield FqElem(self, tup)

    def _mul(self, a: FqElem, b: FqElem) -> FqElem:
        p, f = self.p, self.f
        if f == 1:
            return FqElem(self, (a.coeffs[0] * b.coeffs[0],))
        prod = [0] * (2 * f - 1)
        for i, ai in enumerate(a.coeffs):
            if ai:
                for j, bj in enumerate(b.coeffs):
                    prod[i + j] += ai * bj
        out = prod[:f]
        for k in range(f, 2 * f - 1):
            c = prod[k] % p
            if c:
                row = self._red[k - f]
                for i in range(f):
                    out[i] += c * row[i]
        return FqElem(self, out)

    def __repr__(self):
        return f"F_{self.q}"


def _poly_gcd_mod_p(a, b, p):
    a = [c % p for c in a]
    b = [c % p for c in b]
    while any(b):
        while b and b[-1] % p == 0:
            b.pop()
        if not b:
            break
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and any(a):
            while a and a[-1] % p == 0:
                a.pop()
            if len(a) < len(b):
                break
            coef = (a[-1] * inv) % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * c) % p
        a, b = b, a
    while a and a[-1] % p == 0:
        a.pop()
    return a


def _poly_powmod(base, exp, modulus, p):
    """base(y)^exp mod (modulus, p), all coefficient lists."""
    def red(poly):
        poly = [c % p for c in poly]
        d = len(modulus) - 1
        for k in range(len(poly) - 1, d - 1, -1):
            c = poly[k]
            if c:  # modulus is monic
                for i in range(d + 1):
                    poly[k - d + i] = (poly[k - d + i] - c * modulus[i]) % p
        while len(poly) > d:
            poly.pop()
        return poly

    def mul(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    out[i + j] += a * b
        return red(out)

    result = [1]
    base = red(list(base))
    while exp:
        if exp & 1:
            result = mul(result, base)
        base = mul(base, base)
        exp >>= 1
    return result


def _is_irreducible_mod_p(modulus, p) -> bool:
    f = len(modulus) - 1
    # y^(p^f) == y mod (modulus) and gcd(y^(p^d) - y, modulus) trivial for d < f
    y = [0, 1]
    pw = _poly_powmod(y, p ** f, modulus, p)
    test = list(pw)
    while len(test) < 2:
        test.append(0)
    test[1] = (test[1] - 1) % p
    if any(c % p for c in test):
        return False
    for d in range(1, f):
        if f % d:
            continue
        pw = _poly_powmod(y, p ** d, modulus, p)
        diff = list(pw)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd_mod_p(diff, list(modulus), p)
        if len(g) > 1:
            return False
    return True


def _find_irreducible(p: int, f: int):
    """Smallest monic irreducible of degree f over F_p, lexicographic search."""
    for tail in itertools.product(range(p), repeat=f):
        poly = tuple(tail) + (1,)
        if poly[0] == 0:
            continue
        if _is_irreducible_mod_p(poly, p):
            return poly
    raise RuntimeError("no irreducible polynomial found (unreachable)")


# ----------------------------------------------------------------------
# Local fields
# ----------------------------------------------------------------------

class LocalField:
    """A finite extension of Q_p: unramified degree f, Eisenstein degree e.

    `eis` is the Eisenstein polynomial as a sequence of e+1 coefficients,
    each an integer or a length-f tuple over Z (coordinates in the
    unramified subfield); the leading coefficient must be 1.
    """

    def __init__(self, p: int, f: int = 1, e: int = 1, eis=None, unram=None,
                 prec: int = DEFAULT_PRECISION):
        if p == 2:
            raise ValueError("p = 2 is out of scope")
        if p < 3 or not _is_prime(p):
            raise ValueError(f"p = {p} is not an odd prime")
        self.p = p
        self.f = f
        self.e = e
        self.degree = e * f
        self.prec = prec
        self.coef_prec = prec // e + 1 + _GUARD
        self.pmod = p ** self.coef_prec
        self.residue = ResidueField(p, f, modulus=unram)
        self.unram = self.residue.modulus

        if eis is None:
            if e != 1:
                raise ValueError("an Eisenstein polynomial is required when e > 1")
            eis = [-p, 1]
        self.eis = tuple(self._zq_coerce(c) for c in eis)
        if len(self.eis) != e + 1:
            raise ValueError("Eisenstein polynomial must have degree e")
        if self.eis[-1] != tuple([1] + [0] * (f - 1)):
            raise ValueError("Eisenstein polynomial must be monic")
        if self._zq_vp(self.eis[0]) != 1:
            raise ValueError("constant term must have valuation exactly 1")
        for c in self.eis[1:-1]:
            v = self._zq_vp(c)
            if v is not None and v < 1:
                raise ValueError("non-leading coefficients must have valuation >= 1")

        # reduction rows: x^(e+t) = sum_i rows[t][i] pi^i, t = 0..e-2
        neg = [self._zq_neg(c) for c in self.eis[:e]]
        self._rows = [tuple(neg)]
        for _ in range(e - 2):
            prev = self._rows[-1]
            top = prev[e - 1]
            nxt = [self._zq_mul(top, neg[0])]
            for i in range(1, e):
                nxt.append(self._zq_add(prev[i - 1], self._zq_mul(top, neg[i])))
            self._rows.append(tuple(nxt))

        # unit part of the Eisenstein constant term: eis[0] = p * u0
        u0 = tuple(c // p for c in self.eis[0])
        self._eis0_unit_inv = self._zq_inv(u0)

        # metadata for cyclotomic fields, set by cyclotomic_field()
        self.cyclotomic_level = 0

    # ---- Z_q coefficient arithmetic (length-f int tuples mod pmod) ----

    def _zq_coerce(self, c):
        if isinstance(c, int):
            return tuple([c % self.pmod] + [0] * (self.f - 1))
        c = tuple(x % self.pmod for x in c)
        if len(c) != self.f:
            raise ValueError("coefficient has wrong length")
        return c

    def _zq_add(self, a, b):
        m = self.pmod
        return tuple((x + y) % m for x, y in zip(a, b))

    def _zq_sub(self, a, b):
        m = self.pmod
        return tuple((x - y) % m for x, y in zip(a, b))

    def _zq_neg(self, a):
        m = self.pmod
        return tuple((-x) % m for x in a)

    def _zq_mul(self, a, b):
        f, m = self.f, self.pmod
        if f == 1:
            return ((a[0] * b[0]) % m,)
        prod = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = [c % m for c in prod[:f]]
        red = self.residue._red
        for k in range(f, 2 * f - 1):
            c = prod[k] % m
            if c:
                row = red[k - f]
                for i in range(f):
                    out[i] = (out[i] + c * row[i]) % m
        return tuple(out)

    def _zq_vp(self, a):
        vals = [v for v in (_vp(x, self.p, self.coef_prec) for x in a) if v is not None]
        return min(vals) if vals else None

    def _zq_inv(self, a):
        """Newton inverse of a unit of Z_q mod pmod."""
        r = self.residue.make([x % self.p for x in a])
        if r.is_zero():
            raise ZeroDivisionError("not a unit in Z_q")
        w = self._zq_coerce(list(r.inverse().coeffs))
        one = self._zq_coerce(1)
        two = self._zq_coerce(2)
        for _ in range(self.coef_prec.bit_length() + 2):
            e = self._zq_sub(two, self._zq_mul(a, w))
            w = self._zq_mul(w, e)
            if e == one:
                break
        return w

    # ---- vec arithmetic (length-e tuples of Z_q coefficients) ----

    def _vec_zero(self):
        z = self._zq_coerce(0)
        return tuple([z] * self.e)

    def _vec_add(self, a, b):
        return tuple(self._zq_add(x, y) for x, y in zip(a, b))

    def _vec_sub(self, a, b):
        return tuple(self._zq_sub(x, y) for x, y in zip(a, b))

    def _vec_neg(self, a):
        return tuple(self._zq_neg(x) for x in a)

    def _vec_scale(self, a, c):
        return tuple(self._zq_mul(x, c) for x in a)

    def _vec_mul(self, a, b):
        e = self.e
        if e == 1:
            return (self._zq_mul(a[0], b[0]),)
        zero = self._zq_coerce(0)
        prod = [zero] * (2 * e - 1)
        for i, ai in enumerate(a):
            if any(x for x in ai):
                for j, bj in enumerate(b):
                    prod[i + j] = self._zq_add(prod[i + j], self._zq_mul(ai, bj))
        out = list(prod[:e])
        for k in range(e, 2 * e - 1):
            c = prod[k]
            if any(x for x in c):
                row = self._rows[k - e]
                for i in range(e):
                    out[i] = self._zq_add(out[i], self._zq_mul(c, row[i]))
        return tuple(out)

    def _vec_val(self, a):
        """pi-valuation of an integral vec, None if zero mod the modulus."""
        best = None
        for i, c in enumerate(a):
            v = self._zq_vp(c)
            if v is not None:
                cand = self.e * v + i
                if best is None or cand < best:
                    best = cand
        return best

    def _vec_pimul(self, a, k: int = 1):
        """Multiply an integral vec by pi^k, k >= 0."""
        for _ in range(k):
            top = a[self.e - 1]
            if self.e == 1:
                # pi is the root of eis = x - (-eis[0]), i.e. pi = -eis[0]
                a = (self._zq_mul(top, self._zq_neg(self.eis[0])),)
                continue
            shifted = [self._zq_coerce(0)] + list(a[: self.e - 1])
            if any(x for x in top):
                row = self._rows[0]
                shifted = [self._zq_add(shifted[i], self._zq_mul(top, row[i]))
                           for i in range(self.e)]
            a = tuple(shifted)
        return a

    def _vec_pidiv(self, a):
        """Divide an integral vec by pi; requires valuation >= 1."""
        e, p = self.e, self.p
        if e == 1:
            # pi = -eis[0] = p * unit
            c = a[0]
            if self._zq_vp(c) == 0:
                raise PrecisionError("pi-division of a unit")
            c = tuple(x // p for x in c)
            return (self._zq_mul(self._zq_neg(c), self._eis0_unit_inv),)
        v0 = a[0]
        if any(x % p for x in v0):
            raise PrecisionError("pi-division of a unit")
        d_top = self._zq_mul(self._zq_neg(tuple(x // p for x in v0)), self._eis0_unit_inv)
        out = []
        for i in range(e - 1):
            out.append(self._zq_add(a[i + 1], self._zq_mul(d_top, self.eis[i + 1])))
        out.append(d_top)
        return tuple(out)

    # ---- element constructors ----

    def element(self, vec, shift: int = 0, prec: int | None = None) -> "KElem":
        cap = shift + self.e * self.coef_prec
        if prec is None or prec > cap:
            prec = cap
        vec = list(vec)
        if len(vec) > self.e:
            raise ValueError("coefficient vector longer than the degree")
        vec = vec + [0] * (self.e - len(vec))
        return KElem(self, shift, tuple(self._zq_coerce(c) for c in vec), prec)

    def zero(self) -> "KElem":
        return self.element(self._vec_zero())

    def one(self) -> "KElem":
        return self.from_int(1)

    def from_int(self, n: int) -> "KElem":
        vec = [n] + [0] * (self.e - 1)
        return self.element(vec)

    def from_rational(self, r) -> "KElem":
        r = Fraction(r)
        num, den = r.numerator, r.denominator
        t = 0
        while den % self.p == 0:
            den //= self.p
            t += 1
        inv = pow(den, -1, self.pmod)
        x = self.from_int(num * inv)
        if t:
            x = x / self.from_int(self.p) ** t
        return x

    def pi(self) -> "KElem":
        if self.e == 1:
            # the root of eis = x - (-eis[0]); for Q_p this is p itself
            return self.element([self._zq_neg(self.eis[0])])
        return self.element([0, 1] + [0] * (self.e - 2))

    def gen_unramified(self) -> "KElem":
        """Image of the unramified generator y (equals 1 when f = 1)."""
        if self.f == 1:
            return self.one()
        return self.element([(0, 1) + (0,) * (self.f - 2)])

    def zeta(self) -> "KElem":
        """The canonical p^M-th root of unity 1 + pi on a cyclotomic field."""
        if not self.cyclotomic_level:
            raise ValueError("zeta() is only defined on cyclotomic fields")
        return self.one() + self.pi()

    def __repr__(self):
        tag = f"Q_{self.p}"
        if self.f > 1:
            tag += f"^(unram deg {self.f})"
        if self.e > 1:
            tag += f"^(eis deg {self.e})"
        return tag

    # fields are compared by identity; construct once and share
    __hash__ = object.__hash__


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class KElem:
    """An element of a LocalField at finite precision.

    Value = pi^shift * (integral vec); `prec` is the absolute pi-adic
    precision: the element is known modulo pi^prec.
    """

    __slots__ = ("field", "shift", "vec", "prec")

    def __init__(self, field: LocalField, shift: int, vec, prec: int):
        self.field = field
        self.shift = shift
        self.vec = vec
        self.prec = prec

    # ---- basic queries ----

    def valuation(self) -> int | None:
        """pi-adic valuation; None means zero at the working precision."""
        v = self.field._vec_val(self.vec)
        if v is None:
            return None
        v += self.shift
        if v >= self.prec:
            return None
        return v

    def is_zero(self) -> bool:
        return self.valuation() is None

    def _val_floor(self) -> int:
        """A lower bound for the valuation, usable when zero-to-precision."""
        v = self.valuation()
        return self.prec if v is None else v

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def compact(self) -> "KElem":
        """Move the vec's pi-valuation into the shift.

        The value and precision are unchanged; this restores headroom in
        the representation window (cap = shift + e * coef_prec), which
        otherwise erodes when shifts drift negative across arithmetic.
        """
        v = self.field._vec_val(self.vec)
        if v is None or v == 0:
            return self
        vec = self.vec
        for _ in range(v):
            vec = self.field._vec_pidiv(vec)
        return KElem(self.field, self.shift + v, vec, self.prec)

    # ---- arithmetic ----

    def _align(self, other: "KElem"):
        if self.field is not other.field:
            raise ValueError("field mismatch")
        s = min(self.shift, other.shift)
        va = self.field._vec_pimul(self.vec, self.shift - s)
        vb = self.field._vec_pimul(other.vec, other.shift - s)
        return s, va, vb

    def __add__(self, other):
        other = self._coerce(other)
        s, va, vb = self._align(other)
        prec = min(self.prec, other.prec)
        return KElem(self.field, s, self.field._vec_add(va, vb), prec)

    def __sub__(self, other):
        other = self._coerce(other)
        s, va, vb = self._align(other)
        prec = min(self.prec, other.prec)
        return KElem(self.field, s, self.field._vec_sub(va, vb), prec)

    def __neg__(self):
        return KElem(self.field, self.shift, self.field._vec_neg(self.vec), self.prec)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.field is not other.field:
            raise ValueError("field mismatch")
        prec = min(self.prec + other._val_floor(), other.prec + self._val_floor())
        vec = self.field._vec_mul(self.vec, other.vec)
        shift = self.shift + other.shift
        cap = shift + self.field.e * self.field.coef_prec
        return KElem(self.field, shift, vec, min(prec, cap))

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return (-self) + other

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def _coerce(self, other) -> "KElem":
        if isinstance(other, KElem):
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_rational(other)
        raise TypeError(f"cannot coerce {type(other)}")

    def inverse(self) -> "KElem":
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("division by zero (to working precision)")
        u, uprec = self._unit_vec()
        F = self.field
        r = F.residue.make([c % F.p for c in u[0]])
        w = F.element([list(r.inverse().coeffs)]).vec
        one = F.from_int(1).vec
        for _ in range((F.e * F.coef_prec).bit_length() + 2):
            err = F._vec_sub(one, F._vec_mul(u, w))
            if F._vec_val(err) is None:
                break
            w = F._vec_add(w, F._vec_mul(w, err))
        prec = (self.prec - v) - v  # relative precision preserved
        return KElem(F, -v, w, min(prec, -v + F.e * F.coef_prec))

    def _unit_vec(self):
        """(vec of pi^-v * self, relative precision); requires nonzero."""
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("zero to working precision")
        k = v - self.shift  # >= 0
        vec = self.vec
        for _ in range(k):
            vec = self.field._vec_pidiv(vec)
        return vec, self.prec - v

    def unit_part(self) -> "KElem":
        """pi^-v * self."""
        vec, rel = self._unit_vec()
        return KElem(self.field, 0, vec, min(rel, self.field.e * self.field.coef_prec))

    def residue(self) -> FqElem:
        """Image in the residue field; requires valuation >= 0."""
        v = self.valuation()
        if v is None or v > 0:
            return self.field.residue.zero()
        if v < 0:
            raise ValueError("negative valuation has no residue")
        if self.shift >= 0:
            vec = self.field._vec_pimul(self.vec, self.shift)
        else:
            vec = self.vec
            for _ in range(-self.shift):
                vec = self.field._vec_pidiv(vec)
        return self.field.residue.make([c % self.field.p for c in vec[0]])

    # ---- display ----

    def digits(self, count: int | None = None):
        """Canonical pi-adic digits [(k, FqElem)] starting at the valuation."""
        v = self.valuation()
        if v is None:
            return []
        if count is None:
            count = min(self.prec - v, 12)
        x = self.unit_part()
        out = []
        vec = x.vec
        F = self.field
        for k in range(count):
            r = F.residue.make([c % F.p for c in vec[0]])
            if not r.is_zero():
                out.append((v + k, r))
            lift = F._zq_coerce(list(r.coeffs))
            vec = list(vec)
            vec[0] = F._zq_sub(vec[0], lift)
            vec = F._vec_pidiv(tuple(vec))
        return out

    def __repr__(self):
        v = self.valuation()
        if v is None:
            return f"O(pi^{self.prec})"
        terms = []
        for k, d in self.digits(8):
            if self.field.f == 1:
                c = str(d.coeffs[0])
            else:
                c = repr(d)
            if k == 0:
                terms.append(c)
            else:
                terms.append(f"{c}*pi^{k}")
        s = " + ".join(terms) if terms else "0"
        return f"({s} + O(pi^{self.prec}))"


# ----------------------------------------------------------------------
# Cyclotomic fields
# ----------------------------------------------------------------------

_FIELD_CACHE: dict = {}


def cyclotomic_field(p: int, M: int, prec: int = DEFAULT_PRECISION) -> LocalField:
    """Q_p(mu_{p^M}) as the Eisenstein extension by Phi_{p^M}(1 + x).

    The uniformizer pi is zeta - 1 for a primitive p^M-th root of unity
    zeta, recovered as field.zeta() = 1 + pi.  Instances are cached so
    elements of "the same" field can always interoperate.
    """
    if p == 2:
        raise ValueError("p = 2 is out of scope")
    if M < 1:
        raise ValueError("M must be >= 1")
    key = ("cyc", p, M, prec)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    e = p ** (M - 1) * (p - 1)
    # Phi_{p^M}(y) = (y^{p^M} - 1)/(y^{p^{M-1}} - 1) = sum_k y^{k p^{M-1}}
    # evaluate at y = 1 + x and expand exactly over Z
    coeffs = [0] * (e + 1)
    for k in range(p):
        # (1+x)^(k * p^(M-1))
        n = k * p ** (M - 1)
        row = [1]
        for _ in range(n):
            row = [a + b for a, b in zip(row + [0], [0] + row)]
        for i, c in enumerate(row):
            coeffs[i] += c
    field = LocalField(p, f=1, e=e, eis=coeffs, prec=prec)
    field.cyclotomic_level = M
    _FIELD_CACHE[key] = field
    return field


def Qp(p: int, prec: int = DEFAULT_PRECISION) -> LocalField:
    key = ("qp", p, prec)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = LocalField(p, prec=prec)
    return _FIELD_CACHE[key]


def unramified_field(p: int, f: int, prec: int = DEFAULT_PRECISION) -> LocalField:
    key = ("ur", p, f, prec)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = LocalField(p, f=f, prec=prec)
    return _FIELD_CACHE[key]


# ----------------------------------------------------------------------
# Polynomials over a local field
# ----------------------------------------------------------------------

class KPoly:
    """Polynomial with KElem coefficients over one LocalField."""

    def __init__(self, field: LocalField, coeffs):
        self.field = field
        cs = [(c if isinstance(c, KElem) else field.from_int(c)).compact()
              for c in coeffs]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        if not cs:
            cs = [field.zero()]
        self.coeffs = cs

    @classmethod
    def from_ints(cls, field: LocalField, coeffs):
        return cls(field, [field.from_int(int(c)) for c in coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: KElem) -> KElem:
        out = self.field.zero()
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def derivative(self) -> "KPoly":
        if self.degree == 0:
            return KPoly(self.field, [self.field.zero()])
        return KPoly(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __repr__(self):
        return f"KPoly(deg {self.degree} over {self.field!r})"


# ----------------------------------------------------------------------
# Root finding
# ----------------------------------------------------------------------

def _newton_refine(f: KPoly, df: KPoly, x: KElem, vd: int):
    """Newton iteration from a certified starting point; returns the root."""
    field = f.field
    target = field.prec
    prev = None
    for _ in range(64):
        fx = f(x)
        vf = fx.valuation()
        if vf is None or vf - vd >= target:
            break
        if prev is not None and vf <= prev:
            break
        prev = vf
        x = (x - fx / df(x)).compact()
    fx = f(x)
    vf = fx._val_floor()
    root_prec = vf - vd
    return KElem(field, x.shift, x.vec, min(x.prec, root_prec))


def _residue_poly_roots(coeffs, field):
    """Roots over F_q of the residue of an integral vec-of-KElem poly."""
    rf = field.residue
    rcoeffs = []
    for c in coeffs:
        v = c.valuation()
        rcoeffs.append(c.residue() if v == 0 else rf.zero())
    if all(r.is_zero() for r in rcoeffs):
        return None  # not normalized
    roots = []
    for z in rf.elements():
        acc = rf.zero()
        for rc in reversed(rcoeffs):
            acc = acc * z + rc
        if acc.is_zero():
            roots.append(z)
    return roots


def _taylor_shift(coeffs, center, field):
    """Taylor coefficients of f at `center`: f(center + u) = sum t_k u^k."""
    work = list(coeffs)
    out = []
    n = len(work)
    for k in range(n):
        # synthetic division of `work` by (u - center); remainder = f_k(center)
        for i in range(n - 2 - k, -1, -1):
            work[i] = work[i] + work[i + 1] * center
        out.append(work[0])
        work = work[1:]
    return out


def hensel_roots(f: KPoly, max_depth: int | None = None) -> list[KElem]:
    """All roots of f in its field, of any valuation, certified by Newton.

    Negative-valuation roots are found by slope scaling x -> pi^s x along
    the Newton polygon; within a slope the finder branches on residue
    digits and switches to Newton iteration once v(f(a)) > 2 v(f'(a)).
    Raises PrecisionError when certification fails before `max_depth`
    digits (default: the field's working precision).
    """
    field = f.field
    if f.is_zero():
        raise ValueError("root finding on the zero polynomial")
    if max_depth is None:
        max_depth = field.prec
    coeffs = list(f.coeffs)

    roots: list[KElem] = []

    # exact zero root(s): constant coefficient zero to working precision
    while coeffs[0].is_zero() and len(coeffs) > 1:
        roots.append(field.zero())
        coeffs = coeffs[1:]
        if not coeffs[0].is_zero():
            break
        if all(c.is_zero() for c in coeffs):
            raise PrecisionError("polynomial vanishes to working precision")

    pts = [(i, c.valuation()) for i, c in enumerate(coeffs) if not c.is_zero()]
    if len(pts) < 2:
        return roots

    # lower convex hull of (i, v_i)
    hull = []
    for i, v in pts:
        while len(hull) >= 2:
            (i1, v1), (i2, v2) = hull[-2], hull[-1]
            if (v2 - v1) * (i - i1) >= (v - v1) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append((i, v))

    slopes = []
    for (i1, v1), (i2, v2) in zip(hull, hull[1:]):
        num, den = v2 - v1, i2 - i1
        if num % den == 0:
            slopes.append(num // den)

    dfull = KPoly(field, coeffs)

    for sl in sorted(set(slopes)):
        w = -sl  # valuation of roots on this segment
        piw_shifted = []
        minval = None
        for i, c in enumerate(coeffs):
            scaled = KElem(field, c.shift + i * w, c.vec, c.prec + i * w)
            piw_shifted.append(scaled)
            v = scaled.valuation()
            if v is not None and (minval is None or v < minval):
                minval = v
        g = [KElem(field, c.shift - minval, c.vec, c.prec - minval).compact()
             for c in piw_shifted]
        found = _unit_root_dfs(g, field, max_depth)
        for t in found:
            x = KElem(field, t.shift + w, t.vec, t.prec + w).compact()
            # certify by substitution into the original polynomial
            val = dfull(x)._val_floor()
            dval = dfull.derivative()(x)._val_floor()
            if val <= 2 * dval:
                raise PrecisionError("root failed final certification")
            roots.append(x)
    return roots


def _unit_root_dfs(gcoeffs, field, max_depth):
    """Unit-valuation roots of an integral, normalized coefficient list.

    A simple residue root carries exactly one root of the branch and is
    finished by Newton; a multiple residue root forces one more digit.
    """
    results = []
    stack = [(list(gcoeffs), field.zero(), 0)]
    while stack:
        coeffs, center, depth = stack.pop()
        if depth > max_depth:
            raise PrecisionError("digit search exceeded the precision budget")
        coeffs = [c.compact() for c in coeffs]
        h = KPoly(field, coeffs)
        dh = h.derivative()
        rroots = _residue_poly_roots(coeffs, field)
        if rroots is None:
            raise PrecisionError("polynomial segment vanished during search")
        dcoeffs = [c * k for k, c in enumerate(coeffs)][1:] or [field.zero()]
        drroots = _residue_poly_roots(dcoeffs, field)
        dres = set()
        if drroots is not None:
            dres = {r.coeffs for r in drroots}
        for r in rroots:
            if depth == 0 and r.is_zero():
                continue  # valuation-0 roots only at the top level
            lift = field.element([list(r.coeffs)])
            simple = r.coeffs not in dres if drroots is not None else False
            if simple:
                u = _newton_refine(h, dh, lift, 0)
                results.append((center + u * field.pi() ** depth).compact())
                continue
            shifted = _taylor_shift(coeffs, lift, field)
            # substitute u = pi * t and renormalize to an integral poly
            scaled = [KElem(field, c.shift + k, c.vec, c.prec + k)
                      for k, c in enumerate(shifted)]
            m = None
            for c in scaled:
                v = c.valuation()
                if v is not None and (m is None or v < m):
                    m = v
            if m is None:
                raise PrecisionError("all digits ambiguous at working precision")
            renorm = [KElem(field, c.shift - m, c.vec, c.prec - m) for c in scaled]
            stack.append((renorm, (center + lift * field.pi() ** depth).compact(),
                          depth + 1))
    return results


# ----------------------------------------------------------------------
# Squares, p-th powers, log/exp, Teichmueller, trace/norm
# ----------------------------------------------------------------------

def is_square(a: KElem) -> bool:
    """True iff a is a square (p odd: even valuation, square residue)."""
    v = a.valuation()
    if v is None:
        raise PrecisionError("squareness of zero-to-precision element")
    if v % 2:
        return False
    return a.unit_part().residue().is_square()


def ksqrt(a: KElem) -> KElem:
    """A square root of a; raises ValueError when a is not a square."""
    v = a.valuation()
    if v is None:
        raise PrecisionError("sqrt of zero-to-precision element")
    if v % 2:
        raise ValueError("odd valuation: not a square")
    u = a.unit_part()
    r = u.residue().sqrt()
    if r is None:
        raise ValueError("residue is not a square")
    field = a.field
    x = field.element([list(r.coeffs)])
    inv2 = field.from_rational(Fraction(1, 2))
    for _ in range(field.prec.bit_length() + 3):
        err = x * x - u
        if err.is_zero():
            break
        x = (x + u / x) * inv2
    x = KElem(field, x.shift, x.vec, min(x.prec, a.prec - v // 2))
    return x * field.pi() ** (v // 2) if v else x


def is_pth_power(a: KElem) -> bool:
    """Decide a in (K^x)^p by root extraction on x^p - a."""
    v = a.valuation()
    if v is None:
        raise PrecisionError("p-th power test on zero-to-precision element")
    p = a.field.p
    if v % p:
        return False
    f = KPoly(a.field, [-a] + [0] * (p - 1) + [1])
    return bool(hensel_roots(f))


def _intvp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _series_kmax(t: int, e: int, p: int, target: int) -> int:
    """Smallest K with k*t - e*log_p(k) >= target for all k >= K (t >= 1)."""
    k = max(1, target // max(t, 1))
    while True:
        logp = 0
        m = 1
        while m <= k:
            m *= p
            logp += 1
        if k * t - e * logp >= target:
            return k
        k += 1
        if k > 64 * (target + e + 16):
            raise PrecisionError("series bound search diverged")


def plog(u: KElem) -> KElem:
    """p-adic logarithm on principal units: v(u - 1) >= 1."""
    field = u.field
    z = u - field.one()
    t = z.valuation()
    if t is None:
        return field.zero()
    if t < 1:
        raise ValueError("plog requires a principal unit")
    target = min(u.prec, field.prec)
    kmax = _series_kmax(t, field.e, field.p, target)
    out = field.zero()
    zpow = field.one()
    for k in range(1, kmax + 1):
        zpow = (zpow * z).compact()
        if k * t - field.e * _intvp(k, field.p) >= target:
            continue  # the term vanishes at the working precision
        contrib = zpow / field.from_int(k)
        out = out + (contrib if k % 2 == 1 else -contrib)
    return KElem(field, out.shift, out.vec, min(out.prec, target))


def pexp(x: KElem) -> KElem:
    """p-adic exponential; requires v(x) > e/(p-1)."""
    field = x.field
    v = x.valuation()
    if v is None:
        return field.one()
    if v * (field.p - 1) <= field.e:
        raise ValueError("pexp requires v(x) > e/(p-1)")
    target = min(x.prec, field.prec)
    # v(x^k/k!) >= k*v - e*(k-1)/(p-1), which reaches `target` once
    # k * (v*(p-1) - e) >= target*(p-1) - e
    num = v * (field.p - 1) - field.e
    kmax = (target * (field.p - 1) - field.e) // num + 2
    p_inv = field.from_int(field.p).inverse()
    out = field.one()
    xpow = field.one()
    fact_unit = 1
    fact_vp = 0
    for k in range(1, kmax + 1):
        xpow = (xpow * x).compact()
        kv = _intvp(k, field.p)
        fact_vp += kv
        fact_unit = fact_unit * (k // field.p ** kv) % field.pmod
        if k * v - field.e * fact_vp >= target:
            continue
        # 1/k! split as p^-fact_vp times a unit, else large factorials
        # would overflow the representation window on ramified fields
        term = xpow * p_inv ** fact_vp / field.from_int(fact_unit)
        out = out + term
    return KElem(field, out.shift, out.vec, min(out.prec, target))


def teichmuller(a: KElem) -> KElem:
    """The unique (q-1)-th root of unity congruent to a mod pi."""
    if a.valuation() != 0:
        raise ValueError("teichmuller requires a unit")
    field = a.field
    q = field.residue.q
    x = field.element([list(a.residue().coeffs)])
    for _ in range(field.e * field.coef_prec + 4):
        nxt = x ** q
        if (nxt - x).is_zero():
            x = nxt
            break
        x = nxt
    return x


def _mul_matrix(a: KElem):
    """Matrix of multiplication by integral a on the Q_p-basis y^j pi^i."""
    field = a.field
    n = field.degree
    cols = []
    for i in range(field.e):
        for j in range(field.f):
            vec = [[0] * field.f for _ in range(field.e)]
            vec[i][j] = 1
            b = field.element([tuple(r) for r in vec])
            prod = a * b
            if prod.shift >= 0:
                pvec = field._vec_pimul(prod.vec, prod.shift)
            else:
                pvec = prod.vec
                for _ in range(-prod.shift):
                    pvec = field._vec_pidiv(pvec)
            col = []
            for ii in range(field.e):
                col.extend(pvec[ii])
            cols.append(col)
    # row-major matrix: entry[r][c]
    return [[cols[c][r] for c in range(n)] for r in range(n)]


def _det_mod(mat, mod: int) -> int:
    """Determinant of an integer matrix, exact, reduced mod `mod` at the end."""
    n = len(mat)
    m = [row[:] for row in mat]
    # fraction-free Bareiss
    denom = 1
    sign = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // denom
        denom = m[k][k]
    return sign * m[n - 1][n - 1] % mod


def trace_and_norm(a: KElem):
    """Trace and norm of a down to Q_p, as elements of Q_p.

    Computed from the matrix of multiplication by a; non-integral
    elements are handled by scaling with a power of p.
    """
    field = a.field
    v = a.valuation()
    qp = Qp(field.p, prec=field.coef_prec - 1)
    if v is None:
        return qp.zero(), qp.zero()
    t = 0
    if v < 0:
        t = (-v + field.e - 1) // field.e
        a = a * field.from_int(field.p ** t)
    mat = _mul_matrix(a)
    n = field.degree
    tr = sum(mat[i][i] for i in range(n)) % field.pmod
    det = _det_mod(mat, field.pmod)
    tr_el = qp.from_int(tr)
    det_el = qp.from_int(det)
    if t:
        scale = qp.from_int(field.p ** t)
        tr_el = tr_el / scale
        det_el = det_el / scale ** n
    return tr_el, det_el


def qp_int_value(x: KElem, ndigits: int) -> int:
    """Integer representative of an integral Q_p element mod p^ndigits."""
    field = x.field
    if field.degree != 1:
        raise ValueError("qp_int_value is for Q_p elements")
    v = x.valuation()
    if v is None:
        return 0
    if v < 0:
        raise ValueError("negative valuation")
    if x.shift >= 0:
        vec = field._vec_pimul(x.vec, x.shift)
    else:
        vec = x.vec
        for _ in range(-x.shift):
            vec = field._vec_pidiv(vec)
    return vec[0][0] % (field.p ** ndigits)
