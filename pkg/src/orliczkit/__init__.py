"""Numerical Orlicz mixed volumes, Orlicz-Petty bodies and the functionals built on them."""

from .errors import DegenerateError, OrliczError

__version__ = "0.1.0"

__all__ = ["OrliczError", "DegenerateError", "__version__"]
