import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy as sp

from spiked_qes.exceptions import InvalidBracketError, ZeroPolynomialError
from spiked_qes.polyalg import (
    VAR,
    RationalPoly,
    RootBracket,
    SturmChain,
    cauchy_bound,
    content_split,
    divmod_poly,
    fraction_to_decimal,
    is_proportional,
    isolate_real_roots,
    poly_gcd,
    refine_bracket,
    refine_root,
    squarefree_decomposition,
    squarefree_part,
    strip_zero_root,
)

X = RationalPoly.variable()


def from_roots(*roots) -> RationalPoly:
    p = RationalPoly.constant(1)
    for r in roots:
        p = p * (X - Fraction(r))
    return p


class TestArithmetic:
    def test_canonical_form_drops_trailing_zeros(self):
        assert RationalPoly.of(1, 2, 0, 0) == RationalPoly.of(1, 2)
        assert RationalPoly.of(0, 0).is_zero
        assert RationalPoly.zero().degree is None

    def test_product_and_difference(self):
        assert (X + 1) * (X - 1) == RationalPoly.of(-1, 0, 1)
        assert 3 - X == RationalPoly.of(3, -1)
        assert Fraction(1, 2) * X * 4 == RationalPoly.of(0, 2)

    def test_backed_by_sympy_poly_over_qq(self):
        p = RationalPoly.of(Fraction(1, 2), 0, -3)
        assert p.as_sympy == sp.Poly(-3 * VAR**2 + sp.Rational(1, 2), VAR, domain="QQ")
        assert RationalPoly.from_sympy(p.as_sympy) == p
        assert RationalPoly.zero().as_sympy.is_zero

    def test_scalar_division_is_exact(self):
        p = RationalPoly.of(1, 3) / 3
        assert p.coeffs == (Fraction(1, 3), Fraction(1))

    def test_evaluate_exact_and_float(self):
        p = RationalPoly.of(-5, 0, 2)
        assert p(Fraction(1, 2)) == Fraction(-9, 2)
        assert isinstance(p(0.5), float)
        assert p(0.5) == pytest.approx(-4.5)

    def test_derivative_and_negated_argument(self):
        p = RationalPoly.of(1, 2, 3, 4)
        assert p.derivative() == RationalPoly.of(2, 6, 12)
        assert p.negated_argument() == RationalPoly.of(1, -2, 3, -4)
        assert RationalPoly.of(3, 0, -9, 0, 2).is_even()
        assert not p.is_even()

    @pytest.mark.parametrize("coeffs,var,expected", [
        ((-5, 0, 2), "d", "2d^2 - 5"),
        ((3, 0, -12, 0, 4), "a", "4a^4 - 12a^2 + 3"),
        ((-15, 0, 75, 0, -40, 0, 4), "d", "4d^6 - 40d^4 + 75d^2 - 15"),
        ((0, -1), "d", "-d"),
        ((Fraction(1, 2),), "d", "(1/2)"),
        ((), "d", "0"),
    ])
    def test_to_string(self, coeffs, var, expected):
        assert RationalPoly(coeffs).to_string(var) == expected


class TestDivisionAndFactors:
    def test_divmod_reconstructs(self):
        p = RationalPoly.of(5, -3, 0, 2, 1)
        q = RationalPoly.of(1, 0, 3)
        s, r = divmod_poly(p, q)
        assert s * q + r == p
        assert r.degree < q.degree

    def test_division_by_zero_polynomial(self):
        with pytest.raises(ZeroPolynomialError):
            divmod_poly(X, RationalPoly.zero())

    def test_gcd_is_monic(self):
        p = 4 * from_roots(1, 2, 3)
        q = 6 * from_roots(2, 3, 5)
        assert poly_gcd(p, q) == from_roots(2, 3)

    def test_content_split_moves_sign_into_content(self):
        content, primitive = content_split(RationalPoly.of(Fraction(1, 2), 0, -3))
        assert content == Fraction(-1, 2)
        assert primitive == RationalPoly.of(-1, 0, 6)
        assert content * primitive == RationalPoly.of(Fraction(1, 2), 0, -3)

    def test_strip_zero_root(self):
        reduced, m = strip_zero_root(RationalPoly.of(0, -20, 0, 8))
        assert m == 1
        assert reduced == RationalPoly.of(-20, 0, 8)

    def test_strip_zero_root_rejects_zero(self):
        with pytest.raises(ZeroPolynomialError):
            strip_zero_root(RationalPoly.zero())

    def test_is_proportional(self):
        assert is_proportional(RationalPoly.of(-2, 0, 2), RationalPoly.of(2, 0, -2)) == -1
        assert is_proportional(RationalPoly.of(1, 1), RationalPoly.of(1, 2)) is None
        assert is_proportional(RationalPoly.zero(), X) is None

    def test_squarefree_decomposition_reports_multiplicity(self):
        p = 3 * from_roots(1, 1, -2)
        factors = {m: f for f, m in squarefree_decomposition(p)}
        assert factors == {1: from_roots(-2), 2: from_roots(1)}
        assert squarefree_part(p).monic() == from_roots(1, -2)

    def test_zero_polynomial_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            squarefree_part(RationalPoly.zero())

    def test_cauchy_bound_encloses_roots(self):
        p = from_roots(-7, Fraction(1, 3), 4)
        bound = cauchy_bound(p)
        assert all(abs(r) < bound for r in (-7, Fraction(1, 3), 4))


class TestSturm:
    def test_counts_on_intervals(self):
        chain = SturmChain.of(RationalPoly.of(-2, 0, 1))
        assert chain.count_roots() == 2
        assert chain.count_roots(0, 2) == 1
        assert chain.count_roots(None, 0) == 1
        assert chain.count_roots(2, None) == 0

    def test_matches_numpy_on_random_polynomials(self):
        rng = random.Random(7)
        for _ in range(40):
            roots = rng.sample(range(-5, 6), rng.randint(1, 5))
            p = from_roots(*roots)
            if rng.random() < 0.5:
                p = p * RationalPoly.of(rng.randint(1, 9), 0, 1)
            chain = SturmChain.of(p)

            assert chain.count_roots() == len(roots)
            numeric = np.roots([float(c) for c in reversed(p.coeffs)])
            real = [z.real for z in numeric if abs(z.imag) < 1e-7]
            assert len(real) == len(roots)

            lo = Fraction(rng.randint(-6, 5)) + Fraction(1, 2)
            hi = lo + rng.randint(1, 6)
            assert chain.count_roots(lo, hi) == sum(1 for r in roots if lo < r < hi)


def random_corpus(seed: int, size: int) -> list[RationalPoly]:
    """Integer polynomials of degree <= 6, coefficients in [-9, 9], roots pairwise > 1e-3 apart."""
    rng = random.Random(seed)
    corpus = []
    while len(corpus) < size:
        degree = rng.randint(1, 6)
        coeffs = [rng.randint(-9, 9) for _ in range(degree + 1)]
        if coeffs[-1] == 0:
            continue
        roots = np.roots(coeffs[::-1])
        if any(abs(a - b) <= 1e-3 for a, b in combinations(roots, 2)):
            continue
        corpus.append(RationalPoly(tuple(coeffs)))
    return corpus


def sampled_sign_changes(p: RationalPoly, resolution: float = 1e-4) -> int:
    bound = float(cauchy_bound(p))
    xs = np.linspace(-bound, bound, int(2 * bound / resolution) + 2)
    signs = np.sign(np.polyval([float(c) for c in reversed(p.coeffs)], xs))
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


class TestRandomCorpus:
    corpus = random_corpus(2024, 60)

    def test_bracket_count_matches_dense_sampling(self):
        for p in self.corpus:
            assert len(isolate_real_roots(p)) == sampled_sign_changes(p), p

    def test_brackets_hold_the_numeric_roots(self):
        for p in self.corpus:
            real = sorted(z.real for z in np.roots([float(c) for c in reversed(p.coeffs)])
                          if abs(z.imag) < 1e-9)
            brackets = isolate_real_roots(p)
            assert len(brackets) == len(real)
            for bracket, root in zip(brackets, real):
                assert float(bracket.lo) - 1e-9 < root < float(bracket.hi) + 1e-9

    def test_variations_at_infinity_match_cauchy_bound(self):
        for p in self.corpus:
            chain = SturmChain.of(squarefree_part(p))
            bound = cauchy_bound(p)
            assert chain.variations_at_infinity(True) == chain.variations_at(bound)
            assert chain.variations_at_infinity(False) == chain.variations_at(-bound)

    @pytest.mark.parametrize("digits", [4, 8, 15])
    def test_refined_root_is_straddled(self, digits):
        step = Fraction(1, 10**digits)
        for p in self.corpus:
            for bracket in isolate_real_roots(p):
                r = refine_root(p, bracket, digits)
                assert p.sign_at(r - step) * p.sign_at(r + step) == -1


class TestIsolationAndRefinement:
    def test_quartic_roots_isolated_in_order(self):
        p = RationalPoly.of(3, 0, -9, 0, 2)
        brackets = isolate_real_roots(p)
        expected = sorted(s * math.sqrt((9 + t * math.sqrt(57)) / 4) for s in (-1, 1) for t in (-1, 1))
        assert len(brackets) == 4
        for bracket, root in zip(brackets, expected):
            assert float(bracket.lo) < root < float(bracket.hi)
        assert all(a.hi <= b.lo for a, b in zip(brackets, brackets[1:]))

    def test_exact_root_at_bisection_midpoint(self):
        brackets = isolate_real_roots(from_roots(-1, 0, 1))
        assert len(brackets) == 3
        for bracket, root in zip(brackets, (-1, 0, 1)):
            assert bracket.contains(root)

    def test_multiplicity_attached(self):
        brackets = isolate_real_roots(from_roots(1, 1, -2))
        assert [b.multiplicity for b in brackets] == [1, 2]

    def test_constant_has_no_roots(self):
        assert isolate_real_roots(RationalPoly.constant(5)) == []

    def test_refine_irrational_root(self):
        p = RationalPoly.of(-2, 0, 1)
        bracket = isolate_real_roots(p)[1]
        narrowed, value = refine_bracket(p, bracket, 20)
        assert narrowed.width < Fraction(1, 10**20)
        assert narrowed.lo <= value <= narrowed.hi
        assert abs(value * value - 2) < Fraction(1, 10**19)

    def test_refine_lands_on_rational_root(self):
        p = RationalPoly.of(-1, 2)
        bracket = RootBracket(Fraction(0), Fraction(1), -1, 1)
        assert refine_root(p, bracket, 12) == Fraction(1, 2)

    def test_refine_rejects_bracket_with_two_roots(self):
        p = RationalPoly.of(-1, 0, 1)
        with pytest.raises(InvalidBracketError):
            refine_bracket(p, RootBracket(Fraction(-2), Fraction(2), 1, 1), 10)

    def test_empty_bracket_rejected(self):
        with pytest.raises(InvalidBracketError):
            RootBracket(Fraction(1), Fraction(1), 1, -1)


@pytest.mark.parametrize("value,places,expected", [
    (Fraction(1, 3), 5, "0.33333"),
    (Fraction(-7, 4), 3, "-1.750"),
    (Fraction(2), 0, "2"),
    (Fraction(1, 1000), 2, "0.00"),
])
def test_fraction_to_decimal(value, places, expected):
    assert fraction_to_decimal(value, places) == expected
