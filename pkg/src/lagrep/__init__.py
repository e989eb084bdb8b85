"""Lagrangian involutions and unitary representations of punctured-sphere groups."""

__version__ = "0.1.0"
