"""Lagrangian gas dynamics: conservation laws, symmetries and invariant schemes."""

__version__ = "0.1.0"
