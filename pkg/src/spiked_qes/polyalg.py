"""Exact univariate polynomial arithmetic over the rationals.

``RationalPoly`` wraps a ``sympy.Poly`` over QQ for the algebra (ring
operations, Euclidean division, gcd, primitive parts, squarefree
factorization). Sturm chains, certified real-root isolation and root
refinement sit on top, the substrate for the coefficient and condition
polynomials.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Union

import sympy as sp
from sympy import QQ, Poly, Rational

from spiked_qes.exceptions import InvalidBracketError, ZeroPolynomialError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Point = Union[int, Fraction, float]

VAR = sp.Symbol("x")


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def _to_rational(value: Scalar) -> Rational:
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def _to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with exact rational coefficients.

    ``coeffs[k]`` multiplies ``var**k``. The zero polynomial is the empty
    tuple and its degree is ``None``; any other polynomial has a nonzero
    leading coefficient. The tuple is the canonical value (equality, hashing,
    Horner evaluation); ``as_sympy`` is the QQ polynomial the algebra runs on.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        values = [Fraction(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @classmethod
    def of(cls, *coeffs: Scalar) -> RationalPoly:
        """Build from coefficients given in ascending powers."""
        return cls(tuple(coeffs))

    @classmethod
    def from_sympy(cls, poly: Poly) -> RationalPoly:
        return cls(tuple(_to_fraction(c) for c in reversed(poly.all_coeffs())))

    @classmethod
    def zero(cls) -> RationalPoly:
        return cls(())

    @classmethod
    def constant(cls, value: Scalar) -> RationalPoly:
        return cls((value,))

    @classmethod
    def monomial(cls, power: int, coeff: Scalar = 1) -> RationalPoly:
        return cls((0,) * power + (coeff,))

    @classmethod
    def variable(cls) -> RationalPoly:
        return cls.monomial(1)

    @cached_property
    def as_sympy(self) -> Poly:
        descending = [_to_rational(c) for c in reversed(self.coeffs)] or [Rational(0)]
        return Poly.from_list(descending, VAR, domain=QQ)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> Optional[int]:
        """Degree, or ``None`` for the zero polynomial."""
        if self.is_zero:
            return None
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def _coerce(self, other) -> Optional[RationalPoly]:
        if isinstance(other, RationalPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalPoly.from_sympy(self.as_sympy + other.as_sympy)

    __radd__ = __add__

    def __neg__(self) -> RationalPoly:
        return RationalPoly.from_sympy(-self.as_sympy)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalPoly.from_sympy(self.as_sympy - other.as_sympy)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalPoly.from_sympy(other.as_sympy - self.as_sympy)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalPoly.from_sympy(self.as_sympy * other.as_sympy)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            raise ZeroDivisionError("polynomial divided by zero")
        return self * (1 / Fraction(scalar))

    def evaluate(self, x: Point):
        """Horner evaluation: exact for rational ``x``, float for float ``x``."""
        if isinstance(x, float):
            acc = 0.0
            for c in reversed(self.coeffs):
                acc = acc * x + float(c)
            return acc
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    __call__ = evaluate

    def sign_at(self, x: Scalar) -> int:
        return _sign(self.evaluate(Fraction(x)))

    def derivative(self) -> RationalPoly:
        return RationalPoly.from_sympy(self.as_sympy.diff(VAR))

    def negated_argument(self) -> RationalPoly:
        """Return p(-x)."""
        return RationalPoly.from_sympy(self.as_sympy.compose(Poly(-VAR, VAR, domain=QQ)))

    def monic(self) -> RationalPoly:
        if self.is_zero:
            return self
        return RationalPoly.from_sympy(self.as_sympy.monic())

    def is_even(self) -> bool:
        """True when only even powers carry nonzero coefficients."""
        return all(c == 0 for k, c in enumerate(self.coeffs) if k % 2)

    def to_string(self, var: str = "d") -> str:
        """Render in descending powers, e.g. ``2d^2 - 5``."""
        parts: list[str] = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            magnitude = abs(c)
            text = str(magnitude) if magnitude.denominator == 1 else f"({magnitude})"
            if power == 0:
                body = text
            else:
                mono = var if power == 1 else f"{var}^{power}"
                body = mono if magnitude == 1 else f"{text}{mono}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts) or "0"

    def __str__(self) -> str:
        return self.to_string()


def divmod_poly(p: RationalPoly, q: RationalPoly) -> tuple[RationalPoly, RationalPoly]:
    """Exact Euclidean division ``p = s*q + r`` with ``deg r < deg q``."""
    if q.is_zero:
        raise ZeroPolynomialError("division by the zero polynomial")
    quot, rem = p.as_sympy.div(q.as_sympy)
    return RationalPoly.from_sympy(quot), RationalPoly.from_sympy(rem)


def remainder(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    if q.is_zero:
        raise ZeroPolynomialError("division by the zero polynomial")
    return RationalPoly.from_sympy(p.as_sympy.rem(q.as_sympy))


def quotient(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    return divmod_poly(p, q)[0]


def poly_gcd(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    """Monic greatest common divisor; gcd(0, 0) is the zero polynomial."""
    return RationalPoly.from_sympy(p.as_sympy.gcd(q.as_sympy)).monic()


def content_split(p: RationalPoly) -> tuple[Fraction, RationalPoly]:
    """Split ``p`` into ``content * primitive``.

    The primitive part has coprime integer coefficients and a positive
    leading coefficient; the sign of ``p`` goes into the content.

    Raises:
        ZeroPolynomialError: If ``p`` is zero.
    """
    if p.is_zero:
        raise ZeroPolynomialError("content of the zero polynomial is undefined")
    denominator, integral = p.as_sympy.clear_denoms(convert=True)
    numerator, primitive = integral.primitive()
    content = _to_fraction(numerator) / _to_fraction(denominator)
    primitive = RationalPoly.from_sympy(primitive)
    if primitive.leading < 0:
        content, primitive = -content, -primitive
    return content, primitive


def strip_zero_root(p: RationalPoly) -> tuple[RationalPoly, int]:
    """Divide out the largest power ``x**m`` dividing ``p``."""
    if p.is_zero:
        raise ZeroPolynomialError("the zero polynomial has no finite zero-root multiplicity")
    m = next(k for k, c in enumerate(p.coeffs) if c != 0)
    return RationalPoly(p.coeffs[m:]), m


def is_proportional(p: RationalPoly, q: RationalPoly) -> Optional[Fraction]:
    """Return ``r != 0`` with ``p == r*q`` exactly, or ``None``."""
    if p.is_zero or q.is_zero or p.degree != q.degree:
        return None
    ratio = p.leading / q.leading
    # cross-multiplied so no division enters the comparison
    if all(a * q.leading == b * p.leading for a, b in zip(p.coeffs, q.coeffs)):
        return ratio
    return None


def squarefree_part(p: RationalPoly) -> RationalPoly:
    """Monic product of the distinct irreducible factors of ``p``."""
    if p.is_zero:
        raise ZeroPolynomialError("squarefree part of the zero polynomial")
    if p.degree == 0:
        return p
    return RationalPoly.from_sympy(p.as_sympy.sqf_part())


def squarefree_decomposition(p: RationalPoly) -> list[tuple[RationalPoly, int]]:
    """Nonconstant coprime monic squarefree factors with their multiplicity."""
    if p.is_zero:
        raise ZeroPolynomialError("squarefree decomposition of the zero polynomial")
    if p.degree == 0:
        return []
    _, factors = p.as_sympy.sqf_list()
    return [(RationalPoly.from_sympy(f).monic(), m) for f, m in factors]


def cauchy_bound(p: RationalPoly) -> Fraction:
    """Exact bound B with every real root strictly inside (-B, B)."""
    if p.is_zero:
        raise ZeroPolynomialError("root bound of the zero polynomial")
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def _variations(values: Iterable) -> int:
    signs = [_sign(v) for v in values]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


@dataclass(frozen=True)
class SturmChain:
    """Signed remainder sequence p, p', -rem(p, p'), ... (trailing zero dropped)."""

    chain: tuple[RationalPoly, ...]

    @classmethod
    def of(cls, p: RationalPoly) -> SturmChain:
        if p.is_zero:
            raise ZeroPolynomialError("Sturm chain of the zero polynomial")
        seq = [p, p.derivative()]
        while not seq[-1].is_zero:
            seq.append(-remainder(seq[-2], seq[-1]))
        seq.pop()
        return cls(tuple(seq))

    def variations_at(self, x: Scalar) -> int:
        x = Fraction(x)
        return _variations(poly.evaluate(x) for poly in self.chain)

    def variations_at_infinity(self, positive: bool = True) -> int:
        """Sign variations read off leading coefficients at +inf or -inf."""
        signs = []
        for poly in self.chain:
            s = _sign(poly.leading)
            if not positive and poly.degree % 2:
                s = -s
            signs.append(s)
        return _variations(signs)

    def count_roots(self, lo: Optional[Scalar] = None, hi: Optional[Scalar] = None) -> int:
        """Distinct real roots in (lo, hi); ``None`` stands for an infinite end.

        Finite endpoints must not be roots.
        """
        v_lo = self.variations_at_infinity(False) if lo is None else self.variations_at(lo)
        v_hi = self.variations_at_infinity(True) if hi is None else self.variations_at(hi)
        return v_lo - v_hi


@dataclass(frozen=True)
class RootBracket:
    """Open rational interval certified to hold exactly one distinct real root."""

    lo: Fraction
    hi: Fraction
    sign_lo: int
    sign_hi: int
    multiplicity: int = 1

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidBracketError(f"empty bracket ({self.lo}, {self.hi})")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Scalar) -> bool:
        return self.lo < x < self.hi


def _isolate_exact_root(core: RationalPoly, chain: SturmChain, root: Fraction,
                        lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    half = (hi - lo) / 4
    while True:
        a, b = root - half, root + half
        if core(a) != 0 and core(b) != 0 and chain.count_roots(a, b) == 1:
            return a, b
        half /= 2


def isolate_real_roots(p: RationalPoly) -> list[RootBracket]:
    """Certified, disjoint, ascending brackets around every distinct real root.

    Isolation runs on the squarefree part; the multiplicity of each root in
    ``p`` is attached to its bracket.

    Raises:
        ZeroPolynomialError: If ``p`` is zero.
    """
    if p.is_zero:
        raise ZeroPolynomialError("cannot isolate roots of the zero polynomial")
    if p.degree == 0:
        return []

    core = squarefree_part(p)
    chain = SturmChain.of(core)
    bound = cauchy_bound(core)

    intervals: list[tuple[Fraction, Fraction]] = []
    pending = [(-bound, bound)]
    while pending:
        lo, hi = pending.pop()
        count = chain.count_roots(lo, hi)
        if count == 0:
            continue
        if count == 1:
            intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if core(mid) == 0:
            a, b = _isolate_exact_root(core, chain, mid, lo, hi)
            intervals.append((a, b))
            pending.extend([(lo, a), (b, hi)])
        else:
            pending.extend([(lo, mid), (mid, hi)])

    factor_chains = [(SturmChain.of(f), m) for f, m in squarefree_decomposition(p)]
    brackets = []
    for lo, hi in sorted(intervals):
        multiplicity = next((m for fc, m in factor_chains if fc.count_roots(lo, hi) == 1), 1)
        brackets.append(RootBracket(lo, hi, p.sign_at(lo), p.sign_at(hi), multiplicity))

    logger.debug("isolated %d real roots of a degree-%d polynomial", len(brackets), p.degree)
    return brackets


def _newton_candidate(core: RationalPoly, deriv: RationalPoly,
                      lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    x0 = float((lo + hi) / 2)
    slope = deriv(x0)
    if slope == 0 or not math.isfinite(slope):
        return None
    candidate = x0 - core(x0) / slope
    if not math.isfinite(candidate):
        return None
    candidate = Fraction(candidate)
    return candidate if lo < candidate < hi else None


def refine_bracket(p: RationalPoly, bracket: RootBracket,
                   digits: int) -> tuple[RootBracket, Fraction]:
    """Narrow ``bracket`` below width 10**-digits and return it with the root estimate.

    Newton candidates (in float) are accepted only strictly inside the
    current bracket; every round also bisects at the exact midpoint, so the
    result is deterministic and the error is below 10**-digits.

    Raises:
        InvalidBracketError: If the bracket does not isolate exactly one root.
    """
    if digits < 1:
        raise ValueError(f"digits must be positive, got {digits}")
    core = squarefree_part(p)
    chain = SturmChain.of(core)
    lo, hi = Fraction(bracket.lo), Fraction(bracket.hi)
    if core(lo) == 0 or core(hi) == 0 or chain.count_roots(lo, hi) != 1:
        raise InvalidBracketError(f"bracket ({lo}, {hi}) does not isolate exactly one root")

    tol = Fraction(1, 10**digits)
    deriv = core.derivative()
    s_lo = core.sign_at(lo)
    exact: Optional[Fraction] = None
    rounds = 0

    while hi - lo >= tol:
        rounds += 1
        trials = []
        candidate = _newton_candidate(core, deriv, lo, hi)
        if candidate is not None:
            trials.append(candidate)
        trials.append(None)  # exact midpoint of whatever bracket remains
        for trial in trials:
            x = (lo + hi) / 2 if trial is None else trial
            s = core.sign_at(x)
            if s == 0:
                exact = x
                break
            if s == s_lo:
                lo = x
                mirror = x + tol / 4
            else:
                hi = x
                mirror = x - tol / 4
            if trial is not None and lo < mirror < hi:
                s_mirror = core.sign_at(mirror)
                if s_mirror == 0:
                    exact = mirror
                    break
                if s_mirror == s_lo:
                    lo = mirror
                else:
                    hi = mirror
            if hi - lo < tol:
                break
        if exact is not None:
            break

    if exact is not None:
        lo, hi = max(lo, exact - tol / 2), min(hi, exact + tol / 2)
        value = exact
    else:
        value = (lo + hi) / 2

    logger.debug("refined root to %d digits in %d rounds", digits, rounds)
    narrowed = RootBracket(lo, hi, p.sign_at(lo), p.sign_at(hi), bracket.multiplicity)
    return narrowed, value


def refine_root(p: RationalPoly, bracket: RootBracket, digits: int) -> Fraction:
    """Rational approximation of the bracketed root with error below 10**-digits."""
    return refine_bracket(p, bracket, digits)[1]


def fraction_to_decimal(value: Scalar, places: int) -> str:
    """Exact decimal rendering of a rational rounded to ``places`` decimals."""
    scaled = round(Fraction(value) * 10**places)
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return f"{sign}{text}"
    return f"{sign}{text[:-places]}.{text[-places:]}"
