"""Exact-arithmetic laboratory for projective differential invariants."""

__version__ = "0.1.0"
