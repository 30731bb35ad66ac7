"""Quasi-exactly solvable states of the spiked harmonic oscillator."""

__version__ = "0.1.0"
