"""Exact truncated normal forms of vector fields on Poisson manifolds."""

__version__ = "0.1.0"
