"""Quantum Fisher information and tradeoff indicator for a boosted spin-1/2 wave packet."""
__version__ = "0.1.0"
