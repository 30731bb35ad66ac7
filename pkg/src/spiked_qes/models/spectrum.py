"""Finite-difference spectrum request and report models."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from spiked_qes.exceptions import InvalidGridError

MIN_GRID_POINTS = 16


@dataclass(frozen=True)
class SpectrumRequest:
    """Box [-L, L] with Dirichlet walls, n interior points, k lowest eigenvalues."""

    d: float
    L: float
    n: int
    k: int

    def __post_init__(self):
        if not self.L > 0:
            raise InvalidGridError(f"box half-width must be positive, got L={self.L}")
        if self.n < MIN_GRID_POINTS:
            raise InvalidGridError(f"need at least {MIN_GRID_POINTS} grid points, got n={self.n}")
        if not 1 <= self.k <= self.n:
            raise InvalidGridError(f"k must lie in [1, n={self.n}], got k={self.k}")

    @classmethod
    def around(cls, d: float, k: int, padding: float = 10.0, n: int = 4000) -> SpectrumRequest:
        """Request with the recommended box L = |d| + padding."""
        return cls(d=float(d), L=abs(float(d)) + padding, n=n, k=k)

    @property
    def n_used(self) -> int:
        """Odd point count so that x = 0 is a grid node."""
        return self.n if self.n % 2 else self.n + 1

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n_used + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix with constant off-diagonal."""

    xs: np.ndarray
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    h: float

    @property
    def size(self) -> int:
        return len(self.diagonal)


@dataclass(frozen=True)
class SpectrumMatch:
    """How a QES energy sits in the finite-difference spectrum."""

    target_energy: int
    nearest_eigenvalue: float
    gap: float
    eigenindex: int
    node_count: int
    index_matches_nodes: bool


@dataclass(frozen=True)
class SpectrumReport:
    """Lowest eigenvalues of the discretized Hamiltonian."""

    d: float
    L: float
    n_used: int
    h: float
    eigenvalues: tuple[float, ...]
    matched: Optional[SpectrumMatch] = None

    def to_dict(self) -> dict:
        return asdict(self)
