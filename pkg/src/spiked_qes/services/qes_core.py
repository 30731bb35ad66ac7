"""QES families of the spiked harmonic oscillator V(x) = (|x| - d)^2.

On x >= 0 the ansatz psi = exp(-x^2/2 + d x) * sum_k a_k x^k turns the
Schrodinger equation at E = 2N + 1 into the three-term recurrence

    (2N - 2n) a_n + 2d (n+1) a_{n+1} + (n+1)(n+2) a_{n+2} = 0,

seeded by the parity conditions at the origin. The coefficients a_k are
polynomials in d; the shifts d making a_{N+1} vanish are the QES shifts.
Two independent routes build them: the forward recurrence and the
tridiagonal continuants.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from spiked_qes.exceptions import IndexOutOfRangeError, InternalConsistencyError
from spiked_qes.models.problem import (
    CoefficientTable,
    Parity,
    QESProblem,
    QESSolution,
    ReducedCondition,
    WellType,
)
from spiked_qes.polyalg import (
    RationalPoly,
    content_split,
    isolate_real_roots,
    refine_bracket,
    strip_zero_root,
)

logger = logging.getLogger(__name__)

D = RationalPoly.variable()
GUARD_DIGITS = 3


def _degenerate(problem: QESProblem) -> bool:
    """Families whose only candidate shift is d = 0 (or none at all)."""
    return (problem.parity is Parity.EVEN and problem.N == 0) or (
        problem.parity is Parity.ODD and problem.N <= 1
    )


def _next_coefficient(N: int, n: int, a_n: RationalPoly, a_n1: RationalPoly) -> RationalPoly:
    """Solve row n of the recurrence for a_{n+2}."""
    return -((2 * N - 2 * n) * a_n + 2 * (n + 1) * D * a_n1) / ((n + 1) * (n + 2))


def _seed(problem: QESProblem) -> list[RationalPoly]:
    if problem.parity is Parity.EVEN:
        return [RationalPoly.constant(1), -D]
    return [RationalPoly.zero(), RationalPoly.constant(1)]


@lru_cache(maxsize=None)
def _extended_coefficients(problem: QESProblem) -> tuple[RationalPoly, ...]:
    """a_0 .. a_{N+1}, running the recurrence one row past the table."""
    a = _seed(problem)
    for n in range(problem.N):
        a.append(_next_coefficient(problem.N, n, a[n], a[n + 1]))
    return tuple(a)


@lru_cache(maxsize=None)
def coefficients_by_recurrence(problem: QESProblem) -> CoefficientTable:
    """Coefficients a_0..a_N as exact polynomials in d."""
    a = _extended_coefficients(problem)[: problem.N + 1]
    if problem.parity is Parity.EVEN:
        if a[0] != RationalPoly.constant(1) or (problem.N >= 1 and a[1] != -D):
            raise InternalConsistencyError("even seed must be a_0 = 1, a_1 = -d")
    else:
        if not a[0].is_zero or (problem.N >= 1 and a[1] != RationalPoly.constant(1)):
            raise InternalConsistencyError("odd seed must be a_0 = 0, a_1 = 1")
        # a_2 = -d comes out of row n = 0 rather than being seeded
        if problem.N >= 2 and a[2] != -D:
            raise InternalConsistencyError("row n = 0 must give a_2 = -d in the odd case")
    return CoefficientTable(problem=problem, a=a)


def closure_coefficient(problem: QESProblem) -> RationalPoly:
    """a_{N+1}, the first coefficient the ansatz forces to vanish.

    Raises:
        IndexOutOfRangeError: For N = 0, where no recurrence row reaches a_1.
    """
    if problem.N < 1:
        raise IndexOutOfRangeError("closure coefficient needs N >= 1")
    return _extended_coefficients(problem)[problem.N + 1]


@lru_cache(maxsize=None)
def continuant(problem: QESProblem, size: int) -> tuple[RationalPoly, ...]:
    """Leading principal minors D_0..D_size of the tridiagonal matrix for the parity."""
    N = problem.N
    minors = [RationalPoly.constant(1)]
    if size >= 1:
        minors.append(D if problem.parity is Parity.EVEN else 2 * D)
    for j in range(2, size + 1):
        if problem.parity is Parity.EVEN:
            if j == 2:
                # first row of the matrix is anomalous: it carries d and 1
                minors.append(2 * D * minors[1] - 2 * N * minors[0])
            else:
                minors.append(
                    2 * (j - 1) * D * minors[j - 1]
                    - 2 * (N - j + 2) * (j - 1) * (j - 2) * minors[j - 2]
                )
        else:
            minors.append(
                2 * j * D * minors[j - 1] - 2 * (N - j + 1) * (j - 1) * j * minors[j - 2]
            )
    return tuple(minors)


def coefficients_by_determinant(problem: QESProblem, k: int) -> RationalPoly:
    """Closed-form coefficient from a tridiagonal determinant.

    Even parity returns a_k for 1 <= k <= N+1; odd parity returns a_{k+1}
    for 1 <= k <= N. The top index yields a_{N+1}.

    Raises:
        IndexOutOfRangeError: If k is outside the admissible range.
    """
    if problem.parity is Parity.EVEN:
        if not 1 <= k <= problem.N + 1:
            raise IndexOutOfRangeError(f"even parity needs 1 <= k <= {problem.N + 1}, got {k}")
        scale = Fraction((-1) ** k, math.factorial(k) * math.factorial(k - 1))
    else:
        if not 1 <= k <= problem.N:
            raise IndexOutOfRangeError(f"odd parity needs 1 <= k <= {problem.N}, got {k}")
        scale = Fraction((-1) ** k, math.factorial(k + 1) * math.factorial(k))
    return scale * continuant(problem, k)[k]


@lru_cache(maxsize=None)
def condition_polynomial(problem: QESProblem) -> RationalPoly:
    """Raw determinant whose nonzero real roots are the QES shifts.

    Degenerate families (N=0 either parity, N=1 odd) return ``d`` so the
    exclusion of the trivial root stays uniform.
    """
    if _degenerate(problem):
        return D
    size = problem.N + 1 if problem.parity is Parity.EVEN else problem.N
    return continuant(problem, size)[size]


@lru_cache(maxsize=None)
def reduced_condition(problem: QESProblem) -> ReducedCondition:
    """Primitive condition polynomial with the factor d**m removed.

    Raises:
        InternalConsistencyError: If the condition is zero or not even in d.
    """
    raw = condition_polynomial(problem)
    if raw.is_zero:
        raise InternalConsistencyError(f"condition polynomial vanishes for {problem}")
    content, primitive = content_split(raw)
    reduced, m = strip_zero_root(primitive)
    if not reduced.is_even():
        raise InternalConsistencyError(f"reduced condition for {problem} has odd powers of d")
    return ReducedCondition(poly=reduced, stripped_zero_multiplicity=m, content=content, raw=raw)


def non_real_root_count(problem: QESProblem) -> int:
    """Degree of the reduced condition minus its real roots (with multiplicity)."""
    reduced = reduced_condition(problem).poly
    real = sum(b.multiplicity for b in isolate_real_roots(reduced))
    return reduced.degree - real


def solve(problem: QESProblem, digits: int = 12) -> list[QESSolution]:
    """All QES solutions of a family, sorted by ascending shift.

    Roots are refined with a few guard digits beyond ``digits`` so that the
    scaled condition residual stays comfortably below 10**(1 - digits).
    d = 0 never appears: the factor d**m is stripped exactly before isolation.
    """
    if digits < 1:
        raise ValueError(f"digits must be positive, got {digits}")
    table = coefficients_by_recurrence(problem)
    reduced = reduced_condition(problem)
    budget = Fraction(1, 10 ** (digits - 1)) * sum(abs(c) for c in reduced.poly.coeffs) / 10
    solutions = []
    for bracket in isolate_real_roots(reduced.poly):
        places = digits + GUARD_DIGITS
        narrowed, value = refine_bracket(reduced.poly, bracket, places)
        # steep polynomials at large |d| need extra places to meet the residual budget
        while abs(reduced.poly(value)) >= budget:
            places += GUARD_DIGITS
            narrowed, value = refine_bracket(reduced.poly, narrowed, places)
        exact = table.at(value)
        solutions.append(
            QESSolution(
                problem=problem,
                energy=problem.energy,
                d_bracket=narrowed,
                d_value=value,
                coefficients=tuple(float(c) for c in exact),
                exact_coefficients=exact,
                well_type=WellType.for_shift(value),
                digits=digits,
            )
        )
    logger.debug("%s: %d QES shifts", problem, len(solutions))
    return sorted(solutions, key=lambda s: s.d_value)


def ode_residual(problem: QESProblem) -> tuple[RationalPoly, ...]:
    """Coefficients of R(x) = -p'' + 2(x - d) p' + (1 - E) p, each a polynomial in d.

    Built straight from the differential operator, not from the recurrence,
    so it checks the recurrence independently.
    """
    a = coefficients_by_recurrence(problem).a
    N = problem.N

    def coeff(k: int) -> RationalPoly:
        return a[k] if 0 <= k <= N else RationalPoly.zero()

    return tuple(
        -(n + 1) * (n + 2) * coeff(n + 2)
        + 2 * n * coeff(n)
        - 2 * (n + 1) * D * coeff(n + 1)
        + (1 - problem.energy) * coeff(n)
        for n in range(N + 1)
    )


@dataclass(frozen=True)
class A3SignDiagnostic:
    """Sign of a_3 at N=3 even, settled by the recurrence at every root.

    ``resolved_sign`` is the s for which a_3 = s * 2d / (6d^2 - 3) holds at
    all four shifts (0 when the roots disagree).
    """

    resolved_sign: int
    shifts: tuple[float, ...]
    a3_values: tuple[float, ...]
    max_mismatch: float
    a2_closed_form_ok: bool


def a3_sign_diagnostic(digits: int = 12, tol: float = 1e-9) -> A3SignDiagnostic:
    """Compare recurrence a_3 with +-2d/(6d^2 - 3) at the N=3 even shifts."""
    solutions = solve(QESProblem(3, Parity.EVEN), digits)
    signs = set()
    mismatch = 0.0
    a2_ok = True
    for sol in solutions:
        d = sol.d
        closed = 2 * d / (6 * d * d - 3)
        a3 = sol.coefficients[3]
        sign = 1 if abs(a3 - closed) < abs(a3 + closed) else -1
        signs.add(sign)
        mismatch = max(mismatch, abs(a3 - sign * closed))
        a2_ok = a2_ok and abs(sol.coefficients[2] - 2 * d * d / (2 * d * d - 1)) < tol
    resolved = signs.pop() if len(signs) == 1 and mismatch < tol else 0
    return A3SignDiagnostic(
        resolved_sign=resolved,
        shifts=tuple(s.d for s in solutions),
        a3_values=tuple(s.coefficients[3] for s in solutions),
        max_mismatch=mismatch,
        a2_closed_form_ok=a2_ok,
    )
