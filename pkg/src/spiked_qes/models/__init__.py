"""Data models for QES problems, solutions, spectra and wave grids."""
