"""Exact radii of convergence of p-adic differential systems at Berkovich points."""

__version__ = "0.1.0"
