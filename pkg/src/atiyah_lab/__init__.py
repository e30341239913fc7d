"""Exact computations with Lie pairs, infinitesimal ideal systems and Atiyah classes."""

__version__ = "0.1.0"
