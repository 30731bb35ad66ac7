"""Sampled wavefunction grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WaveGrid:
    """Wavefunction sampled on a symmetric uniform grid.

    Attributes:
        xs: Strictly increasing positions in oscillator units
        psi: Unnormalized wavefunction values
        norm: L2 norm of ``psi`` by composite Simpson quadrature
        psi_normalized: ``psi / norm``
    """

    xs: np.ndarray
    psi: np.ndarray
    norm: float
    psi_normalized: np.ndarray

    def __len__(self) -> int:
        return len(self.xs)
