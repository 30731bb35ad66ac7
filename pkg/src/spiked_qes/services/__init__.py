"""Solver, wavefunction and spectral verification services."""
