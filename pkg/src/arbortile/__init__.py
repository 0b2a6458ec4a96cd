"""Exact tools for H-tilings: invariants, gadgets, extremal hosts and certificates."""
__version__ = "0.1.0"
