"""Chains of connected subgroups in simple algebraic groups: length, depth and certificates."""
