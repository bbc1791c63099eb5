"""Exact arithmetic substrate: rationals, matrices, polynomials, truncated series."""
