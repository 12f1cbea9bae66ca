import random

import pytest

from localcft.padic import Qp, cyclotomic_field
from localcft.symbols import (
    SubspaceModP,
    annihilator,
    hilbert_symbol,
    subgroup_Ubar,
    subgroup_V,
    symbol_table,
    units_mod_p,
)


@pytest.fixture(scope="module")
def K3():
    return cyclotomic_field(3, 1)


@pytest.fixture(scope="module")
def K5():
    return cyclotomic_field(5, 1)


def random_unit(K, rng, span=400):
    while True:
        x = K.from_int(rng.randrange(1, span)) + K.pi() * rng.randrange(span)
        if not x.is_zero() and x.valuation() == 0:
            return x


class TestUnitsBasis:
    def test_dimension_zeta3(self, K3):
        assert units_mod_p(K3).dim == 4  # [K:Q_3] + 2

    def test_dimension_q3(self):
        # pi = 3 and one principal unit; no mu_3 in Q_3
        assert units_mod_p(Qp(3)).dim == 2

    def test_dimension_zeta5(self, K5):
        assert units_mod_p(K5).dim == 6  # [K:Q_5] + 2

    def test_basis_roundtrip(self, K3):
        B = units_mod_p(K3)
        for k, b in enumerate(B.basis):
            vec = B.coordinates(b)
            assert vec == tuple(1 if i == k else 0 for i in range(B.dim))

    def test_pi_coordinates(self, K3):
        B = units_mod_p(K3)
        assert B.coordinates(K3.pi()) == (1, 0, 0, 0)

    def test_multiplicativity(self, K3):
        B = units_mod_p(K3)
        p = K3.p
        a = K3.pi() ** 2 * B.basis[2]
        vec = B.coordinates(a)
        assert vec == (2 % p, 0, 1, 0)

    def test_coordinates_of_products(self, K5):
        B = units_mod_p(K5)
        rng = random.Random(13)
        for _ in range(8):
            a, b = random_unit(K5, rng), random_unit(K5, rng)
            ca, cb, cab = B.coordinates(a), B.coordinates(b), B.coordinates(a * b)
            assert cab == tuple((x + y) % 5 for x, y in zip(ca, cb))

    def test_pth_powers_trivial(self, K3):
        B = units_mod_p(K3)
        rng = random.Random(3)
        for _ in range(6):
            u = random_unit(K3, rng)
            assert B.coordinates(u ** 3) == (0, 0, 0, 0)

    def test_mu_level(self, K3, K5):
        assert units_mod_p(K3).mu_level == 1
        assert units_mod_p(K5).mu_level == 1
        assert units_mod_p(Qp(3)).mu_level == 0


class TestSubgroups:
    def test_ubar_dims(self, K3, K5):
        assert subgroup_Ubar(K3).dim == 3
        assert subgroup_Ubar(K5).dim == 5

    def test_v_dims(self, K3, K5):
        assert subgroup_V(K3).dim == 1
        assert subgroup_V(K5).dim == 1

    def test_v_inside_ubar(self, K3):
        assert subgroup_V(K3) <= subgroup_Ubar(K3)

    def test_v_undefined_over_qp(self):
        # e = 1, p - 1 = 2 does not divide it
        with pytest.raises(ValueError):
            subgroup_V(Qp(3))


class TestHilbertSymbol:
    def test_minus_a_relation(self, K3):
        rng = random.Random(1)
        for _ in range(30):
            a = random_unit(K3, rng) * K3.pi() ** rng.choice((0, 0, 1, 2))
            assert hilbert_symbol(a, -a) == 0

    def test_steinberg_relation(self, K3):
        rng = random.Random(2)
        done = 0
        while done < 30:
            a = random_unit(K3, rng) * K3.pi() ** rng.choice((0, 0, 1))
            if (1 - a).is_zero():
                continue
            assert hilbert_symbol(a, 1 - a) == 0
            done += 1

    def test_bilinear(self, K5):
        rng = random.Random(4)
        p = 5
        for _ in range(20):
            a, a2, b = (random_unit(K5, rng) for _ in range(3))
            lhs = hilbert_symbol(a * a2, b)
            rhs = (hilbert_symbol(a, b) + hilbert_symbol(a2, b)) % p
            assert lhs == rhs

    def test_antisymmetric(self, K3):
        rng = random.Random(5)
        for _ in range(20):
            a, b = random_unit(K3, rng), random_unit(K3, rng)
            assert (hilbert_symbol(a, b) + hilbert_symbol(b, a)) % 3 == 0

    def test_exists_unit_pairing_with_zeta(self, K3, K5):
        for K in (K3, K5):
            B = units_mod_p(K)
            z = K.zeta()
            assert any(hilbert_symbol(z, y) for y in B.basis[1:])

    def test_gram_rank_full(self, K3, K5):
        from localcft.symbols import _rref
        for K in (K3, K5):
            T = symbol_table(K)
            _, pivots = _rref(T.gram, K.p)
            assert len(pivots) == T.dim

    def test_pth_power_kills(self, K3):
        rng = random.Random(6)
        for _ in range(10):
            a = random_unit(K3, rng)
            b = random_unit(K3, rng) ** 3
            assert hilbert_symbol(a, b) == 0

    def test_non_cyclotomic_unsupported(self):
        Q3 = Qp(3)
        with pytest.raises(ValueError):
            symbol_table(Q3)


class TestAnnihilators:
    def test_duality(self, K3, K5):
        for K in (K3, K5):
            U, V = subgroup_Ubar(K), subgroup_V(K)
            assert annihilator(U) == V
            assert annihilator(V) == U

    def test_whole_space_to_zero(self, K3):
        B = units_mod_p(K3)
        full = SubspaceModP(B, [[1 if i == j else 0 for j in range(B.dim)]
                                for i in range(B.dim)])
        assert annihilator(full).dim == 0

    def test_zero_to_whole_space(self, K3):
        B = units_mod_p(K3)
        zero = SubspaceModP(B, [])
        assert annihilator(zero).dim == B.dim

    def test_double_annihilator(self, K3):
        B = units_mod_p(K3)
        rng = random.Random(8)
        for _ in range(6):
            vecs = [[rng.randrange(3) for _ in range(B.dim)]
                    for _ in range(rng.randrange(1, 4))]
            S = SubspaceModP(B, vecs)
            assert annihilator(annihilator(S)) == S
