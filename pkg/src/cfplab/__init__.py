"""Numerical laboratory for circular free Poisson elements and their matrix models."""

__version__ = "0.1.0"
