"""Full-line QES wavefunctions built from a solution.

On x >= 0, psi(x) = exp(-x^2/2 + d x) p(x); the negative half-line follows by
parity. Derivatives use the rule (P e^g)' = (P' + g' P) e^g with g' = d - x,
carried out exactly on the rational coefficients.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import simpson

from spiked_qes.exceptions import InvalidGridError, NodeCountPrecisionError, UnsupportedOrderError
from spiked_qes.models.problem import Parity, QESSolution
from spiked_qes.models.wave import WaveGrid
from spiked_qes.polyalg import RationalPoly, RootBracket, SturmChain, refine_bracket, strip_zero_root
from spiked_qes.services.qes_core import GUARD_DIGITS, coefficients_by_recurrence, reduced_condition

logger = logging.getLogger(__name__)

JUMP_ORDERS = (0, 1, 2, 3)


def potential(x, d: float):
    """V(x) = (|x| - d)^2; works on scalars and arrays."""
    return (np.abs(x) - d) ** 2


def eval_psi(sol: QESSolution, x: float) -> float:
    """Unnormalized wavefunction at a point."""
    if x < 0:
        return sol.parity.sign * eval_psi(sol, -x)
    poly = 0.0
    for c in reversed(sol.coefficients):
        poly = poly * x + c
    return math.exp(-0.5 * x * x + sol.d * x) * poly


def psi_on_grid(sol: QESSolution, xs: np.ndarray) -> np.ndarray:
    """Vectorized eval_psi."""
    ax = np.abs(xs)
    values = np.exp(-0.5 * ax * ax + sol.d * ax) * npoly.polyval(ax, sol.coefficients)
    return np.where(xs < 0, sol.parity.sign * values, values)


def _derivative_factors(sol: QESSolution, order: int) -> list[RationalPoly]:
    """P_0..P_order with psi^(k)(x) = P_k(x) exp(g(x)) on x >= 0."""
    drift = RationalPoly.of(sol.d_value, -1)
    factors = [sol.polynomial]
    for _ in range(order):
        prev = factors[-1]
        factors.append(prev.derivative() + drift * prev)
    return factors


def eval_derivative(sol: QESSolution, x: float, order: int) -> float:
    """order-th derivative of psi at x != 0 (right-sided limit at x = 0)."""
    if order < 0:
        raise UnsupportedOrderError(f"derivative order must be non-negative, got {order}")
    if x < 0:
        return sol.parity.sign * (-1) ** order * eval_derivative(sol, -x, order)
    factor = _derivative_factors(sol, order)[order]
    return math.exp(-0.5 * x * x + sol.d * x) * factor.evaluate(float(x))


def derivative_jump(sol: QESSolution, order: int) -> tuple[float, float]:
    """One-sided limits (left, right) of psi^(order) at the origin.

    Computed exactly from the rational coefficients, then converted.

    Raises:
        UnsupportedOrderError: If order is not in 0..3.
    """
    if order not in JUMP_ORDERS:
        raise UnsupportedOrderError(f"derivative_jump supports orders {JUMP_ORDERS}, got {order}")
    right = _derivative_factors(sol, order)[order].evaluate(Fraction(0))
    left = sol.parity.sign * (-1) ** order * right
    return float(left), float(right)


def _magnitude(poly: RationalPoly, x: Fraction) -> Fraction:
    """Sum of |c_k| x^k, the size of poly(x) before cancellation."""
    return sum((abs(c) * x**k for k, c in enumerate(poly.coeffs)), Fraction(0))


def half_line_residual(sol: QESSolution, x: float) -> tuple[float, float]:
    """(-psi'' + (x-d)^2 psi - E psi, local scale) at x > 0.

    With psi = P e^g and psi'' = P_2 e^g the residual is
    e^g (-P_2 + ((x - d)^2 - E) P), evaluated exactly at the rational shift
    and at x, so only the refinement error of d survives. The scale is
    e^g (|P_2| + ((x - d)^2 + E) |P|) with each polynomial taken term by
    term, so cancellation among mixed-sign coefficients cannot shrink it.
    """
    p, _, p2 = _derivative_factors(sol, 2)
    at = Fraction(x)
    v = (at - sol.d_value) ** 2
    exact = -p2(at) + (v - sol.energy) * p(at)
    magnitude = _magnitude(p2, at) + (v + sol.energy) * _magnitude(p, at)
    weight = math.exp(-0.5 * x * x + sol.d * x)
    return float(exact) * weight, float(magnitude) * weight


def sample(sol: QESSolution, x_max: float, n_points: int) -> WaveGrid:
    """Sample psi on a symmetric uniform grid with x = 0 as a node.

    The norm uses composite Simpson, O(h^4) on each smooth half; the kink in
    psi''' at the origin sits on a node so the halves are integrated cleanly.

    Raises:
        InvalidGridError: If x_max <= 0, or n_points is below 3 or even.
    """
    if not x_max > 0:
        raise InvalidGridError(f"x_max must be positive, got {x_max}")
    if n_points < 3 or n_points % 2 == 0:
        raise InvalidGridError(f"n_points must be an odd integer >= 3, got {n_points}")
    half = np.linspace(0.0, x_max, n_points // 2 + 1)
    xs = np.concatenate((-half[:0:-1], half))
    psi = psi_on_grid(sol, xs)
    norm = float(np.sqrt(simpson(psi * psi, x=xs)))
    return WaveGrid(xs=xs, psi=psi, norm=norm, psi_normalized=psi / norm)


def _count_nodes_at(sol: QESSolution, bracket: RootBracket, value: Fraction, digits: int) -> int:
    table = coefficients_by_recurrence(sol.problem)
    guard = Fraction(1, 10 ** max(digits - 2, 1))
    counts = set()
    for d in (bracket.lo, value, bracket.hi):
        core, _ = strip_zero_root(table.polynomial_at(d))
        if core.degree == 0:
            counts.add(0)
            continue
        chain = SturmChain.of(core)
        if core(guard) == 0 or chain.count_roots(0, guard):
            raise NodeCountPrecisionError(f"polynomial root within {float(guard)} of the origin")
        counts.add(chain.count_roots(0, None))
    if len(counts) != 1:
        raise NodeCountPrecisionError("positive-root count changes across the shift bracket")
    positive = counts.pop()
    return 2 * positive + (1 if sol.parity is Parity.ODD else 0)


def count_nodes(sol: QESSolution) -> int:
    """Distinct real zeros of psi on the whole line.

    Counts positive roots of p exactly at the refined shift and at both ends
    of its certified bracket; on disagreement the bracket is refined once more
    before giving up.

    Raises:
        NodeCountPrecisionError: If the count stays ambiguous after the retry.
    """
    try:
        return _count_nodes_at(sol, sol.d_bracket, sol.d_value, sol.digits)
    except NodeCountPrecisionError as exc:
        logger.debug("%s at d=%s: %s; raising precision", sol.problem, sol.d, exc)
    digits = 2 * sol.digits
    reduced = reduced_condition(sol.problem).poly
    bracket, value = refine_bracket(reduced, sol.d_bracket, digits + GUARD_DIGITS)
    return _count_nodes_at(sol, bracket, value, digits)
