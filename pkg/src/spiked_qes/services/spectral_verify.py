"""Finite-difference oracle for the spiked oscillator spectrum.

Discretizes H = -d^2/dx^2 + (|x| - d)^2 on [-L, L] with Dirichlet walls and
second-order central differences, then extracts eigenvalues by bisection on
the inertia count of T - lambda I.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from spiked_qes.exceptions import InvalidGridError
from spiked_qes.models.problem import QESSolution
from spiked_qes.models.spectrum import (
    SpectrumMatch,
    SpectrumReport,
    SpectrumRequest,
    TridiagonalOperator,
)
from spiked_qes.services.wavefunction import count_nodes, potential

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-10
DEFAULT_PADDING = 10.0
DEFAULT_POINTS = 4000
WINDOW = 0.5


def discretize(req: SpectrumRequest) -> TridiagonalOperator:
    """Tridiagonal operator with diagonal 2/h^2 + V(x_i) and off-diagonal -1/h^2.

    x_i = -L + i h for i = 1..n with h = 2L/(n+1); n is forced odd so the
    kink of V at the origin sits on a grid node.
    """
    n = req.n_used
    h = req.h
    # integer offsets keep x = 0 exact and the grid exactly symmetric
    xs = h * (np.arange(1, n + 1) - (n + 1) // 2)
    diagonal = 2.0 / h**2 + potential(xs, req.d)
    off_diagonal = np.full(n - 1, -1.0 / h**2)
    return TridiagonalOperator(xs=xs, diagonal=diagonal, off_diagonal=off_diagonal, h=h)


def _inertia_counter(op: TridiagonalOperator) -> Callable[[float], int]:
    """Closure counting eigenvalues below lambda via the LDL^T pivot recurrence."""
    diag = op.diagonal.tolist()
    off2 = (op.off_diagonal**2).tolist()
    pivmin = sys.float_info.min * max(1.0, max(off2, default=1.0))
    head, tail = diag[0], list(zip(diag[1:], off2))

    def count(lam: float) -> int:
        q = head - lam
        if abs(q) < pivmin:
            q = -pivmin
        negatives = 1 if q < 0 else 0
        for a, b2 in tail:
            q = (a - lam) - b2 / q
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0:
                negatives += 1
        return negatives

    return count


def inertia_count(op: TridiagonalOperator, lam: float) -> int:
    """Number of eigenvalues of the operator strictly below lam."""
    return _inertia_counter(op)(lam)


def _bisect(op: TridiagonalOperator, first: int, last: int, rtol: float, scale: float) -> list[float]:
    """Eigenvalues with indices first..last (inclusive), ascending.

    LAPACK's stebz bisects on the same LDL^T inertia count as
    ``inertia_count``; its tolerance is absolute, so rtol is scaled by the
    magnitude of the requested levels.
    """
    values = eigvalsh_tridiagonal(
        op.diagonal,
        op.off_diagonal,
        select="i",
        select_range=(first, last),
        check_finite=False,
        tol=rtol * max(abs(scale), 1.0),
        lapack_driver="stebz",
    )
    return [float(v) for v in values]


def lowest_eigenvalues(req: SpectrumRequest, rtol: float = DEFAULT_RTOL) -> SpectrumReport:
    """k smallest eigenvalues by inertia-count bisection.

    The spectrum is bounded below by 0 (positive Laplacian plus V >= 0); the
    k lowest levels sit below roughly 2k + d^2, which sets the tolerance scale.

    Raises:
        InvalidGridError: If k exceeds the number of grid points.
    """
    op = discretize(req)
    if req.k > op.size:
        raise InvalidGridError(f"k={req.k} exceeds the {op.size} grid points")
    eigenvalues = _bisect(op, 0, req.k - 1, rtol, 4.0 * req.k + req.d**2 + 4.0)
    logger.debug("d=%s n=%d: lowest %d eigenvalues computed", req.d, req.n_used, req.k)
    return SpectrumReport(
        d=req.d,
        L=req.L,
        n_used=req.n_used,
        h=op.h,
        eigenvalues=tuple(eigenvalues),
    )


def eigenvalues_in_window(req: SpectrumRequest, lo: float, hi: float) -> int:
    """Number of eigenvalues in [lo, hi)."""
    count = _inertia_counter(discretize(req))
    return count(hi) - count(lo)


def nearest_eigenvalue(req: SpectrumRequest, target: float, window: float = WINDOW,
                       rtol: float = DEFAULT_RTOL) -> Optional[tuple[int, float]]:
    """(index, value) of the eigenvalue nearest target within target +- window."""
    op = discretize(req)
    count = _inertia_counter(op)
    lo, hi = target - window, target + window
    first, last = count(lo), count(hi)
    if first == last:
        return None
    values = _bisect(op, first, last - 1, rtol, hi)
    best = min(range(len(values)), key=lambda i: abs(values[i] - target))
    return first + best, values[best]


def validate_solution(sol: QESSolution, req_overrides: Optional[dict] = None,
                      padding: float = DEFAULT_PADDING, n: int = DEFAULT_POINTS) -> SpectrumReport:
    """Locate E = 2N + 1 in the finite-difference spectrum at the solution's shift.

    k covers eigenindex node_count + 2, so a correct match (index equal to the
    node count, by the oscillation theorem) is always inside the computed set.
    """
    nodes = count_nodes(sol)
    params = {"d": sol.d, "L": abs(sol.d) + padding, "n": n, "k": nodes + 3}
    params.update(req_overrides or {})
    params["k"] = max(params["k"], nodes + 3)
    report = lowest_eigenvalues(SpectrumRequest(**params))
    target = sol.energy
    index = min(range(len(report.eigenvalues)), key=lambda i: abs(report.eigenvalues[i] - target))
    nearest = report.eigenvalues[index]
    match = SpectrumMatch(
        target_energy=target,
        nearest_eigenvalue=nearest,
        gap=abs(nearest - target),
        eigenindex=index,
        node_count=nodes,
        index_matches_nodes=index == nodes,
    )
    return replace(report, matched=match)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Gaps to the QES energy on successively doubled grids."""

    sizes: tuple[int, ...]
    gaps: tuple[float, ...]
    ratios: tuple[float, ...]


def convergence_ratios(sol: QESSolution, sizes: Sequence[int] = (2000, 4000, 8000),
                       padding: float = DEFAULT_PADDING) -> ConvergenceStudy:
    """Gap shrink factors when n doubles at fixed L (about 4 for a second-order scheme)."""
    gaps = []
    for n in sizes:
        req = SpectrumRequest(d=sol.d, L=abs(sol.d) + padding, n=n, k=1)
        found = nearest_eigenvalue(req, sol.energy)
        gaps.append(float("inf") if found is None else abs(found[1] - sol.energy))
    ratios = tuple(a / b if b > 0 else float("inf") for a, b in zip(gaps, gaps[1:]))
    return ConvergenceStudy(sizes=tuple(sizes), gaps=tuple(gaps), ratios=ratios)


def box_sensitivity(sol: QESSolution, extra: float = 4.0, padding: float = DEFAULT_PADDING,
                    n: int = DEFAULT_POINTS) -> float:
    """Change of the matched eigenvalue when the box grows by about ``extra`` at fixed h."""
    base = SpectrumRequest(d=sol.d, L=abs(sol.d) + padding, n=n, k=1)
    steps = max(1, round(extra / base.h))
    grown = SpectrumRequest(d=sol.d, L=base.L + steps * base.h, n=base.n_used + 2 * steps, k=1)
    first = nearest_eigenvalue(base, sol.energy)
    second = nearest_eigenvalue(grown, sol.energy)
    if first is None or second is None:
        return float("inf")
    return abs(second[1] - first[1])
