"""Finite abelian groups in invariant-factor form."""

from __future__ import annotations


def _factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class AbGroup:
    """A finite abelian group as a chain of invariant factors d1 | d2 | ...

    The trivial group is the empty chain.  Construction normalizes any
    list of cyclic orders into canonical form, e.g. Z/9 + Z/45 from
    orders (9, 9, 5).
    """

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        fs = [int(d) for d in factors if int(d) != 1]
        if any(d < 1 for d in fs):
            raise ValueError("cyclic orders must be positive")
        self.factors = self._normalize(fs)

    @staticmethod
    def _normalize(orders) -> tuple:
        primary: dict[int, list[int]] = {}
        for d in orders:
            for q, k in _factorize(d).items():
                primary.setdefault(q, []).append(k)
        if not primary:
            return ()
        rank = max(len(v) for v in primary.values())
        chain = [1] * rank
        for q, exps in primary.items():
            exps = sorted(exps, reverse=True)
            for i, k in enumerate(exps):
                chain[i] *= q ** k
        chain.reverse()  # smallest first: d1 | d2 | ...
        return tuple(chain)

    @property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def is_trivial(self) -> bool:
        return not self.factors

    def quotient_mod(self, m: int) -> "AbGroup":
        """The cokernel G/mG: each Z/d contributes Z/gcd(d, m)."""
        from math import gcd
        return AbGroup([gcd(d, m) for d in self.factors])

    def direct_sum(self, other: "AbGroup") -> "AbGroup":
        return AbGroup(list(self.factors) + list(other.factors))

    def __eq__(self, other):
        return isinstance(other, AbGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        if not self.factors:
            return "AbGroup(trivial)"
        return "AbGroup(" + " + ".join(f"Z/{d}" for d in self.factors) + ")"

    def to_list(self) -> list[int]:
        return list(self.factors)
