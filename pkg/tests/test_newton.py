import math
import random
from fractions import Fraction as Fr

import pytest

from hahnforge.errors import BoundViolation, FieldExtensionExceeded
from hahnforge.exactnum import PrimeConfig, subfield_embedding
from hahnforge.hahn_eqchar import EqHahn
from hahnforge.hahn_padic import PHahn, frak_a, from_integer, normalize
from hahnforge.newton import (
    ExpandOptions,
    expand_root_padic,
    expand_roots_eq,
    eval_poly_generic,
    polygon_of,
    verify_root,
)

INF = math.inf


def eq_artin_schreier(cfg):
    """X^p - X - t^(-1) (signs collapse in char p)."""
    coeffs = [EqHahn.zero(cfg) for _ in range(cfg.p + 1)]
    coeffs[0] = EqHahn.monomial(cfg, -1, Fr(-1))
    coeffs[1] = EqHahn.from_int(cfg, -1)
    coeffs[cfg.p] = EqHahn.one(cfg)
    return coeffs


def eq_prop33(cfg):
    p = cfg.p
    coeffs = [EqHahn.zero(cfg) for _ in range(p + 1)]
    coeffs[0] = EqHahn.monomial(cfg, -1, Fr(p - 1))
    coeffs[1] = EqHahn.monomial(cfg, -1, Fr(p - 1))
    coeffs[p] = EqHahn.one(cfg)
    return coeffs


def padic_artin_schreier(cfg, coeff_cap):
    """X^p - X - p^(-1) over PHahn coefficients known below coeff_cap."""
    coeffs = [PHahn.zero(cfg) for _ in range(cfg.p + 1)]
    coeffs[0] = normalize(cfg, [(-1, Fr(-1))], coeff_cap)
    coeffs[1] = from_integer(cfg, -1, coeff_cap)
    coeffs[cfg.p] = PHahn.one(cfg)
    return coeffs


class TestPolygon:
    def test_artin_schreier_hull(self):
        cfg = PrimeConfig.make(2)
        poly = polygon_of(eq_artin_schreier(cfg))
        assert poly.vertices == ((0, Fr(-1)), (2, Fr(0)))
        assert poly.root_valuations() == [(Fr(-1, 2), 2)]

    def test_monomial_x(self):
        cfg = PrimeConfig.make(2)
        poly = polygon_of([EqHahn.zero(cfg), EqHahn.one(cfg)])
        assert poly.vertices == ((1, Fr(0)),)
        assert poly.root_valuations() == [(INF, 1)]

    def test_cubic_p3(self):
        cfg = PrimeConfig.make(3)
        poly = polygon_of(eq_artin_schreier(cfg))
        assert poly.vertices == ((0, Fr(-1)), (3, Fr(0)))
        assert poly.root_valuations() == [(Fr(-1, 3), 3)]

    def test_hull_invariants_random(self):
        cfg = PrimeConfig.make(3)
        rng = random.Random(3)
        pool = sorted({Fr(n, d) for n in range(-6, 7) for d in (1, 2, 3)})
        for _ in range(200):
            coeffs = []
            for _i in range(rng.randrange(2, 7)):
                if rng.random() < 0.25:
                    coeffs.append(EqHahn.zero(cfg))
                else:
                    coeffs.append(EqHahn.monomial(cfg, 1, rng.choice(pool)))
            if all(c.is_exact_zero() for c in coeffs):
                continue
            poly = polygon_of(coeffs)
            hull = list(poly.vertices)
            # every point on or above the hull
            for i, c in enumerate(coeffs):
                if c.leading() is not None:
                    level = c.leading()[0]
                    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
                        if x1 <= i <= x2:
                            chord = y1 + Fr(y2 - y1, x2 - x1) * (i - x1)
                            assert level >= chord
            # slopes strictly increase
            slopes = [s for *_rest, s in poly.segments()]
            assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)
            # horizontal lengths sum to degree span
            nonzero = [i for i, c in enumerate(coeffs) if c.leading() is not None]
            assert sum(i2 - i1 for i1, _, i2, _, _ in poly.segments()) == \
                nonzero[-1] - nonzero[0]


class TestExpandEq:
    def test_abhyankar_two_branches(self):
        cfg = PrimeConfig.make(2)
        branches = expand_roots_eq(eq_artin_schreier(cfg), max_terms=3)
        assert len(branches) == 2
        negss = [Fr(-1, 2), Fr(-1, 4), Fr(-1, 8)]
        main = [b for b in branches if b.term_at(Fr(0)) is None][0]
        shifted = [b for b in branches if b.term_at(Fr(0)) is not None][0]
        assert main.exponents() == negss
        assert shifted.exponents() == negss + [Fr(0)]
        assert all(c == cfg.fq(1) for _, c in main.terms)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_artin_schreier_branches_differ_by_prime_field(self, p):
        cfg = PrimeConfig.make(p)
        branches = expand_roots_eq(eq_artin_schreier(cfg), max_terms=3)
        assert len(branches) == p
        consts = sorted(
            (b.term_at(Fr(0)) or cfg.fq(0)).coeffs[0] for b in branches)
        assert consts == list(range(p))
        # all branches share the same fractional prefix
        prefixes = {tuple(t for t in b.terms if t[0] < 0) for b in branches}
        assert len(prefixes) == 1

    def test_square_root_of_t(self):
        cfg = PrimeConfig.make(5)
        coeffs = [EqHahn.monomial(cfg, -1, Fr(1)), EqHahn.zero(cfg), EqHahn.one(cfg)]
        branches = expand_roots_eq(coeffs, max_terms=1)
        assert len(branches) == 2
        leads = sorted(c.coeffs[0] for b in branches for e, c in b.terms)
        assert leads == [1, 4]  # +-1
        assert all(b.exponents() == [Fr(1, 2)] for b in branches)

    def test_prop33_branch(self):
        cfg = PrimeConfig.make(2)
        branches = expand_roots_eq(eq_prop33(cfg), max_terms=3)
        mains = [b for b in branches
                 if b.exponents()[:3] == [Fr(1, 2), Fr(3, 4), Fr(7, 8)]
                 and len(b.terms) == 3]
        assert len(mains) == 1

    def test_every_branch_verifies_declared_bound(self):
        for p in (2, 3):
            cfg = PrimeConfig.make(p)
            for coeffs in (eq_artin_schreier(cfg), eq_prop33(cfg)):
                for b in expand_roots_eq(coeffs, max_terms=4):
                    big = [c.embed(b.cfg) for c in coeffs]
                    verify_root(big, b.value(), b.residual_bound)

    def test_field_extension_for_irreducible_residue(self):
        cfg = PrimeConfig.make(2)
        # X^2 + X + 1: residue equation needs F_4
        coeffs = [EqHahn.one(cfg), EqHahn.one(cfg), EqHahn.one(cfg)]
        branches = expand_roots_eq(coeffs, max_terms=2)
        assert len(branches) == 2
        assert all(b.field_degree == 2 for b in branches)
        for b in branches:
            assert b.residual_bound == INF
            assert eval_poly_generic([c.embed(b.cfg) for c in coeffs],
                                     b.value()).is_exact_zero()

    def test_field_extension_budget_exceeded(self):
        cfg = PrimeConfig.make(2)
        coeffs = [EqHahn.one(cfg), EqHahn.one(cfg), EqHahn.one(cfg)]
        with pytest.raises(FieldExtensionExceeded):
            expand_roots_eq(coeffs, max_terms=2,
                            opts=ExpandOptions(max_field_degree=1))

    def test_deeper_truncations(self):
        cfg = PrimeConfig.make(2)
        branches = expand_roots_eq(eq_artin_schreier(cfg), max_terms=6)
        main = [b for b in branches if b.term_at(Fr(0)) is None][0]
        assert main.exponents() == [Fr(-1, 2 ** k) for k in range(1, 7)]
        assert main.residual_bound == Fr(-1, 64)


class TestExpandPadic:
    def test_linear_polynomial_returns_constant(self):
        cfg = PrimeConfig.make(3)
        c = normalize(cfg, [(7, Fr(0)), (2, Fr(1, 3))], Fr(3))
        coeffs = [-c, PHahn.one(cfg)]
        branches = expand_root_padic(coeffs, cap=Fr(3))
        assert len(branches) == 1
        assert branches[0].value().digits == c.digits

    def test_square_root_of_p(self):
        cfg = PrimeConfig.make(5)
        coeffs = [from_integer(cfg, -5, Fr(4)), PHahn.zero(cfg), PHahn.one(cfg)]
        branches = expand_root_padic(coeffs, cap=Fr(2))
        assert len(branches) == 2
        leads = sorted(b.terms[0][1].coeffs[0] for b in branches)
        assert leads == [1, 4]
        assert all(b.terms[0][0] == Fr(1, 2) for b in branches)

    @pytest.mark.parametrize("p", [2, 3])
    def test_deviation_from_frak_a(self, p):
        cfg = PrimeConfig.make(p)
        cap = Fr(1, 2) if p == 2 else Fr(1, 3)
        branches = expand_root_padic(padic_artin_schreier(cfg, Fr(1)), cap=cap)
        alpha = [b for b in branches if b.term_at(Fr(0)) is None]
        assert len(alpha) == 1
        alpha = alpha[0]
        deviation = Fr(1, p) - Fr(1, p * p)
        neg = [(e, c) for e, c in alpha.terms if e < 0]
        pos = [(e, c) for e, c in alpha.terms if e >= 0]
        # negative part is exactly a truncation of the headline series
        ref = frak_a(cfg, Fr(0), terms=len(neg))
        assert tuple(neg) == ref.digits
        # all digits below the deviation exponent agree; the first extra digit
        # sits at exactly 1/p - 1/p^2 with coefficient [1]
        assert pos[0][0] == deviation
        assert pos[0][1] == cfg.fq(1)

    @pytest.mark.parametrize("p", [2, 3])
    def test_branch_count_matches_artin_schreier(self, p):
        cfg = PrimeConfig.make(p)
        cap = Fr(1, 2) if p == 2 else Fr(1, 3)
        branches = expand_root_padic(padic_artin_schreier(cfg, Fr(1)), cap=cap)
        assert len(branches) == p

    def test_branches_verify_their_bounds(self):
        for p in (2, 3):
            cfg = PrimeConfig.make(p)
            cap = Fr(1, 2) if p == 2 else Fr(1, 3)
            coeffs = padic_artin_schreier(cfg, Fr(1))
            for b in expand_root_padic(coeffs, cap=cap):
                verify_root(coeffs, b.value().truncate(INF), b.residual_bound)

    def test_field_extension_in_padic_expansion(self):
        cfg = PrimeConfig.make(3)
        # X^2 - [2]p: the residue equation Y^2 = 2 is rootless over F_3
        c0 = normalize(cfg, [((-1, cfg.fq(2)), Fr(1))], Fr(4))
        coeffs = [c0, PHahn.zero(cfg), PHahn.one(cfg)]
        branches = expand_root_padic(coeffs, cap=Fr(2))
        assert len(branches) == 2
        assert all(b.field_degree == 2 for b in branches)
        assert all(b.terms[0][0] == Fr(1, 2) for b in branches)
        big = branches[0].cfg
        for b in branches:
            lead = b.terms[0][1]
            assert lead * lead == subfield_embedding(cfg.fq(2), big)

    def test_step_budget_raises_no_progress(self):
        from hahnforge.errors import NoProgress
        cfg = PrimeConfig.make(2)
        # the root has ~40 digits below the cap, far beyond the tiny budget
        c = from_integer(cfg, (2 ** 41 - 1) // 1, Fr(40))
        coeffs = [normalize(cfg, [((-1, d), e) for e, d in c.digits], Fr(40)),
                  PHahn.one(cfg)]
        with pytest.raises(NoProgress):
            expand_root_padic(coeffs, cap=Fr(40),
                              opts=ExpandOptions(max_steps=10))


class TestVerifyRoot:
    @pytest.mark.parametrize("p,K", [(2, 1), (2, 4), (3, 3), (5, 2)])
    def test_abhyankar_partial_valuation(self, p, K):
        cfg = PrimeConfig.make(p)
        prefix = EqHahn(cfg, [(Fr(-1, p ** k), cfg.fq(1)) for k in range(1, K + 1)])
        val = verify_root(eq_artin_schreier(cfg), prefix, Fr(-1, p ** K))
        assert val == Fr(-1, p ** K)

    @pytest.mark.parametrize("p,K", [(2, 2), (3, 2), (5, 1)])
    def test_prop33_partial_valuation(self, p, K):
        cfg = PrimeConfig.make(p)
        prefix = EqHahn(cfg, [(1 - Fr(1, p ** k), cfg.fq(1)) for k in range(1, K + 1)])
        val = verify_root(eq_prop33(cfg), prefix, p - Fr(1, p ** K))
        assert val == p - Fr(1, p ** K)

    def test_exact_root_gives_infinity(self):
        cfg = PrimeConfig.make(2)
        coeffs = [EqHahn.zero(cfg), EqHahn.one(cfg)]
        assert verify_root(coeffs, EqHahn.zero(cfg), Fr(100)) == INF

    def test_bound_violation_carries_valuation(self):
        cfg = PrimeConfig.make(2)
        prefix = EqHahn(cfg, [(Fr(-1, 2), cfg.fq(1))])
        with pytest.raises(BoundViolation) as err:
            verify_root(eq_artin_schreier(cfg), prefix, Fr(0))
        assert err.value.valuation == Fr(-1, 2)
