"""Numerical and parsing helpers."""
from .numerics import ConvergenceError, adaptive_simpson, bisect
from .parsing import parse_float_grid, parse_int_grid

__all__ = ['ConvergenceError', 'adaptive_simpson', 'bisect', 'parse_float_grid', 'parse_int_grid']
