import random
from fractions import Fraction

import pytest

from localcft.curves import WeierstrassCurve
from localcft.formal import (
    FormalGroupLaw,
    formal_mod_p_dim,
    formal_torsion_points,
)
from localcft.padic import Qp, cyclotomic_field


def random_curves(n, seed, span=10):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        ai = [rng.randrange(-span, span + 1) for _ in range(5)]
        try:
            out.append(WeierstrassCurve(*ai))
        except ValueError:
            continue
    return out


@pytest.fixture(scope="module")
def fg14():
    return FormalGroupLaw(WeierstrassCurve(1, 0, 1, 4, -6), 12)


class TestConstruction:
    def test_low_order_terms(self, fg14):
        # F = t1 + t2 - a1 t1 t2 + O(deg 3) for t = -x/y
        assert fg14.law_coefficient(1, 0) == 1
        assert fg14.law_coefficient(0, 1) == 1
        assert fg14.law_coefficient(1, 1) == -1

    def test_neutral_element(self, fg14):
        assert fg14.check_neutral()

    def test_symmetry(self, fg14):
        assert fg14.check_symmetry()

    def test_log_starts_t(self, fg14):
        assert fg14.log[0] == 0 and fg14.log[1] == 1

    def test_log_t2_coefficient(self):
        for a1 in (0, 1, 5, -3):
            fg = FormalGroupLaw(WeierstrassCurve(a1, 2, 3, 4, 5), 6)
            assert fg.log[2] == Fraction(a1, 2)

    def test_doubling_linear_term(self, fg14):
        assert fg14.m_series(2)[1] == 2

    def test_integrality_enforced(self, fg14):
        assert all(v.denominator == 1 for v in fg14.law.values())

    def test_order_too_small(self):
        with pytest.raises(ValueError):
            FormalGroupLaw(WeierstrassCurve(1, 0, 1, 4, -6), 3)


class TestIdentities:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_associativity_random(self, seed):
        for E in random_curves(3, seed):
            fg = FormalGroupLaw(E, 12)
            assert fg.check_associative()

    @pytest.mark.parametrize("seed", [4, 5])
    def test_log_linearizes_random(self, seed):
        for E in random_curves(3, seed):
            fg = FormalGroupLaw(E, 12)
            assert fg.check_log_linearizes()

    def test_m_series_routes_agree(self, fg14):
        for m in (2, 3, 5):
            assert fg14.m_series(m) == fg14.m_series_by_recursion(m)

    def test_p_log_compatibility(self, fg14):
        # log([p](t)) = p * log(t) to truncation order
        from localcft.formal import _u_compose, _u_scale
        D = fg14.order
        lhs = _u_compose(fg14.log, fg14.m_series(3), D)
        rhs = _u_scale(fg14.log, Fraction(3))
        assert lhs == rhs


class TestFormalTorsion:
    def test_census_finalist(self):
        K = cyclotomic_field(3, 1)
        E = WeierstrassCurve(1, 0, 1, 4, -6)
        pts = formal_torsion_points(E, K, 3)
        assert len(pts) == 2
        xs = {repr(P.x.valuation()) for P in pts}
        assert xs == {"-2"}
        EK = E.base_change(K)
        for P in pts:
            assert EK.mul(3, P).is_infinity

    def test_torsion_closed_under_negation(self):
        K = cyclotomic_field(3, 1)
        E = WeierstrassCurve(1, 0, 1, 4, -6)
        pts = formal_torsion_points(E, K, 3)
        EK = E.base_change(K)
        P, Q = pts
        R = EK.neg(P)
        assert (R.x - Q.x).is_zero() and (R.y - Q.y).is_zero()

    def test_torsion_closed_under_addition(self):
        # [2]P = -P inside the order-3 formal subgroup
        K = cyclotomic_field(3, 1)
        E = WeierstrassCurve(1, 0, 1, 4, -6)
        P, Q = formal_torsion_points(E, K, 3)
        EK = E.base_change(K)
        S = EK.add(P, P)
        assert (S.x - Q.x).is_zero() and (S.y - Q.y).is_zero()
        assert EK.add(P, Q).is_infinity

    def test_supersingular_no_formal_torsion(self):
        E = WeierstrassCurve(0, 0, 0, -1, 0)
        assert formal_torsion_points(E, Qp(3), 3) == []

    def test_mod_p_dim_census(self):
        K = cyclotomic_field(3, 1)
        E = WeierstrassCurve(1, 0, 1, 4, -6)
        assert formal_mod_p_dim(E, K, 3) == 3  # [K:Q_3] + 1

    def test_mod_p_dim_torsion_free(self):
        E = WeierstrassCurve(0, 0, 0, -1, 0)
        assert formal_mod_p_dim(E, Qp(3), 3) == 1  # [Q_3:Q_3] + 0
