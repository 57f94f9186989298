"""Numerical building blocks: quadrature, special functions, roots, Gram-Schmidt."""
from .gram import orthonormalize
from .quadrature import (
    DEFAULT_SPEC,
    IntegrationResult,
    QuadratureSpec,
    composite_gauss_legendre_rule,
    gauss_legendre_rule,
    integrate_interval,
    integrate_semi_infinite,
)
from .roots import RootResult, find_root_bracketed, maximize_unimodal, scan_then_maximize
from .special import bessel_j1, erfc, erfcx

__all__ = [
    "DEFAULT_SPEC",
    "IntegrationResult",
    "QuadratureSpec",
    "RootResult",
    "bessel_j1",
    "composite_gauss_legendre_rule",
    "erfc",
    "erfcx",
    "find_root_bracketed",
    "gauss_legendre_rule",
    "integrate_interval",
    "integrate_semi_infinite",
    "maximize_unimodal",
    "orthonormalize",
    "scan_then_maximize",
]
