"""Archimedean local theory of Waldspurger periods for PGL2 over R and C, in exact arithmetic."""

from .scalars import GaussianRational, PiScaled, to_float

__all__ = ["GaussianRational", "PiScaled", "to_float"]
__version__ = "0.1.0"
