"""Utility modules for the QES toolkit."""
