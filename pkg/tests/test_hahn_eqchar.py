import math
import random
from fractions import Fraction as Fr

import pytest

from hahnforge.errors import DivisionByZero, PrecisionLoss
from hahnforge.exactnum import PrimeConfig
from hahnforge.hahn_eqchar import EqHahn, eval_poly

INF = math.inf


def abhyankar_partial(cfg, K):
    """S_K = sum_{k<=K} t^(-1/p^k), exact."""
    return EqHahn(cfg, [(Fr(-1, cfg.p ** k), cfg.fq(1)) for k in range(1, K + 1)])


def artin_schreier_poly(cfg):
    """X^p - X - t^(-1) as a coefficient list."""
    coeffs = [EqHahn.zero(cfg) for _ in range(cfg.p + 1)]
    coeffs[0] = EqHahn.monomial(cfg, -1, Fr(-1))
    coeffs[1] = EqHahn.from_int(cfg, -1)
    coeffs[cfg.p] = EqHahn.one(cfg)
    return coeffs


def prop33_poly(cfg):
    """X^p - t^(p-1) X - t^(p-1)."""
    p = cfg.p
    coeffs = [EqHahn.zero(cfg) for _ in range(p + 1)]
    coeffs[0] = EqHahn.monomial(cfg, -1, Fr(p - 1))
    coeffs[1] = EqHahn.monomial(cfg, -1, Fr(p - 1))
    coeffs[p] = EqHahn.one(cfg)
    return coeffs


def random_series(cfg, rng, cap=None):
    exps = sorted(rng.sample([Fr(n, d) for n in range(-8, 9) for d in (1, 2, 3, 4)],
                             rng.randrange(0, 5)))
    terms = [(e, cfg.fq(rng.randrange(cfg.q))) for e in exps]
    if cap is None:
        cap = Fr(rng.randrange(3, 9))
    return EqHahn(cfg, terms, cap)


class TestAdd:
    def test_additive_identity(self):
        cfg = PrimeConfig.make(3)
        rng = random.Random(1)
        for _ in range(20):
            a = random_series(cfg, rng)
            z = EqHahn.zero(cfg, cap=a.cap)
            assert (a + z).terms == a.terms

    def test_char2_self_cancel_keeps_cap(self):
        cfg = PrimeConfig.make(2)
        a = EqHahn.monomial(cfg, 1, Fr(-1, 2), cap=Fr(5))
        s = a + a
        assert s.terms == ()
        assert s.cap == Fr(5)

    def test_mod3_coefficient_drop(self):
        cfg = PrimeConfig.make(3)
        a = EqHahn(cfg, [(Fr(0), cfg.fq(2)), (Fr(1, 3), cfg.fq(1))])
        b = EqHahn(cfg, [(Fr(0), cfg.fq(1))])
        assert (a + b) == EqHahn(cfg, [(Fr(1, 3), cfg.fq(1))])

    def test_cap_is_min(self):
        cfg = PrimeConfig.make(2)
        a = EqHahn.monomial(cfg, 1, Fr(0), cap=Fr(2))
        b = EqHahn.monomial(cfg, 1, Fr(1), cap=Fr(7))
        assert (a + b).cap == Fr(2)


class TestMul:
    def test_multiplicative_identity(self):
        cfg = PrimeConfig.make(5)
        rng = random.Random(2)
        for _ in range(20):
            a = random_series(cfg, rng)
            prod = a * EqHahn.one(cfg)
            assert prod.terms == a.terms

    def test_char2_square_kills_cross_terms(self):
        cfg = PrimeConfig.make(2)
        a = EqHahn(cfg, [(Fr(-1, 2), cfg.fq(1)), (Fr(-1, 4), cfg.fq(1))])
        sq = a * a
        assert sq == EqHahn(cfg, [(Fr(-1), cfg.fq(1)), (Fr(-1, 2), cfg.fq(1))])

    def test_monomial_product(self):
        cfg = PrimeConfig.make(3)
        a = EqHahn.monomial(cfg, 1, Fr(-1, 3))
        b = EqHahn.monomial(cfg, 1, Fr(-1, 9))
        assert a * b == EqHahn.monomial(cfg, 1, Fr(-4, 9))

    def test_mul_cap_rule(self):
        cfg = PrimeConfig.make(2)
        a = EqHahn(cfg, [(Fr(1), cfg.fq(1))], cap=Fr(4))   # v=1, cap 4
        b = EqHahn(cfg, [(Fr(-2), cfg.fq(1))], cap=Fr(1))  # v=-2, cap 1
        assert (a * b).cap == min(Fr(4) + Fr(-2), Fr(1) + Fr(1))

    def test_val_additive(self):
        cfg = PrimeConfig.make(3)
        rng = random.Random(3)
        for _ in range(100):
            a, b = random_series(cfg, rng), random_series(cfg, rng)
            if a.terms and b.terms:
                assert (a * b).valuation() == a.valuation() + b.valuation()


class TestRingAxioms:
    @pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2)])
    def test_random_capped_triples(self, p, r):
        cfg = PrimeConfig.make(p, r)
        rng = random.Random(41)
        for _ in range(60):
            a, b, c = (random_series(cfg, rng) for _ in range(3))
            lhs = a * (b + c)
            rhs = a * b + a * c
            bound = min(lhs.cap, rhs.cap)
            assert lhs.agree_below(rhs, bound)
            lhs2 = (a * b) * c
            rhs2 = a * (b * c)
            bound2 = min(lhs2.cap, rhs2.cap)
            assert lhs2.agree_below(rhs2, bound2)
            assert a + b == b + a
            assert a * b == b * a


class TestVal:
    def test_examples(self):
        cfg = PrimeConfig.make(2)
        a = EqHahn(cfg, [(Fr(-1, 2), cfg.fq(1)), (Fr(1, 4), cfg.fq(1))])
        assert a.valuation() == Fr(-1, 2)
        assert EqHahn.zero(cfg).valuation() == INF

    def test_capped_zero_raises(self):
        cfg = PrimeConfig.make(2)
        with pytest.raises(PrecisionLoss):
            EqHahn.zero(cfg, cap=Fr(1)).valuation()

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_abhyankar_partial_val(self, p):
        cfg = PrimeConfig.make(p)
        assert abhyankar_partial(cfg, 5).valuation() == Fr(-1, p)


class TestInverse:
    def test_one(self):
        cfg = PrimeConfig.make(3)
        assert EqHahn.one(cfg).inverse(Fr(5)) == EqHahn.one(cfg)

    def test_geometric_char2(self):
        cfg = PrimeConfig.make(2)
        a = EqHahn(cfg, [(Fr(0), cfg.fq(1)), (Fr(1), cfg.fq(1))])
        inv = a.inverse(Fr(3))
        expected = EqHahn(cfg, [(Fr(0), cfg.fq(1)), (Fr(1), cfg.fq(1)),
                                (Fr(2), cfg.fq(1))], cap=Fr(3))
        assert inv == expected
        prod = a * inv
        assert prod.coeff_at(0) == cfg.fq(1)
        assert all(e >= 3 for e, _ in prod.terms if e != 0)

    def test_monomial_exact(self):
        cfg = PrimeConfig.make(5)
        a = EqHahn.monomial(cfg, 1, Fr(1, 2))
        assert a.inverse(Fr(10)) == EqHahn.monomial(cfg, 1, Fr(-1, 2))

    def test_exact_zero_raises(self):
        cfg = PrimeConfig.make(2)
        with pytest.raises(DivisionByZero):
            EqHahn.zero(cfg).inverse(Fr(1))

    def test_insufficient_cap_raises(self):
        cfg = PrimeConfig.make(2)
        a = EqHahn(cfg, [(Fr(0), cfg.fq(1)), (Fr(1), cfg.fq(1))], cap=Fr(2))
        with pytest.raises(PrecisionLoss):
            a.inverse(Fr(10))

    @pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (5, 1), (2, 2)])
    def test_roundtrip_random(self, p, r):
        cfg = PrimeConfig.make(p, r)
        rng = random.Random(17)
        checked = 0
        for _ in range(60):
            a = random_series(cfg, rng, cap=Fr(12))
            if not a.terms:
                continue
            target = min(Fr(6), a.cap - 2 * a.valuation())
            if target <= a.valuation():
                continue
            inv = a.inverse(target)
            prod = a * inv
            one = EqHahn.one(cfg)
            assert prod.agree_below(one, min(prod.cap, target))
            checked += 1
        assert checked >= 20


class TestFrobenius:
    def test_monomial(self):
        cfg = PrimeConfig.make(2)
        assert EqHahn.monomial(cfg, 1, Fr(-1, 2)).frobenius() == \
            EqHahn.monomial(cfg, 1, Fr(-1))

    def test_coefficient_power(self):
        cfg = PrimeConfig.make(3)
        a = EqHahn.monomial(cfg, 2, Fr(1, 3))
        assert a.frobenius() == EqHahn.monomial(cfg, 2, Fr(1))  # 2^3 = 8 = 2

    @pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2)])
    def test_is_additive_and_multiplicative(self, p, r):
        cfg = PrimeConfig.make(p, r)
        rng = random.Random(23)
        for _ in range(40):
            a, b = random_series(cfg, rng), random_series(cfg, rng)
            s1 = (a + b).frobenius()
            s2 = a.frobenius() + b.frobenius()
            assert s1.agree_below(s2, min(s1.cap, s2.cap))
            m1 = (a * b).frobenius()
            m2 = a.frobenius() * b.frobenius()
            assert m1.agree_below(m2, min(m1.cap, m2.cap))

    def test_agrees_with_pfold_product(self):
        cfg = PrimeConfig.make(3)
        rng = random.Random(29)
        for _ in range(20):
            a = random_series(cfg, rng)
            byprod = a * a * a
            frob = a.frobenius()
            assert frob.agree_below(byprod, min(frob.cap, byprod.cap))


class TestEvalPoly:
    def test_identity_polynomial(self):
        cfg = PrimeConfig.make(2)
        x = EqHahn(cfg, [(Fr(1, 3), cfg.fq(1))], cap=Fr(2))
        assert eval_poly([EqHahn.zero(cfg), EqHahn.one(cfg)], x) == x

    @pytest.mark.parametrize("p,K", [(2, 1), (2, 2), (3, 2), (5, 3), (2, 8), (3, 8)])
    def test_artin_schreier_residual_single_term(self, p, K):
        cfg = PrimeConfig.make(p)
        res = eval_poly(artin_schreier_poly(cfg), abhyankar_partial(cfg, K))
        assert len(res.terms) == 1
        exp, coeff = res.terms[0]
        assert exp == Fr(-1, p ** K)
        assert coeff == cfg.fq(-1)

    @pytest.mark.parametrize("p,K", [(2, 1), (2, 3), (3, 2), (5, 2)])
    def test_prop33_residual_single_term(self, p, K):
        cfg = PrimeConfig.make(p)
        x = EqHahn(cfg, [(1 - Fr(1, p ** k), cfg.fq(1)) for k in range(1, K + 1)])
        res = eval_poly(prop33_poly(cfg), x)
        assert len(res.terms) == 1
        assert res.terms[0][0] == p - Fr(1, p ** K)
