"""Numerical laboratory for weighted Fourier multipliers and Littlewood-Paley square functions."""

__version__ = "0.1.0"
