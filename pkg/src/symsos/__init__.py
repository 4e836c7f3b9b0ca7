"""Exact sum-of-squares certificates for symmetric quadratics on the hypercube."""

__version__ = "0.1.0"
