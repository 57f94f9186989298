"""Coordinate-space spin-up amplitude of the boosted Gaussian packet.

The transverse Fourier integral of e^{i Phi} f(|p|) collapses to a Hankel
transform of order one, so the amplitude at distance r from the boost axis is

    A(r, x3) = int_0^inf dp p e^{-kappa^2 p^2 / 2} J_1(p r) sin(alpha(p)/2) e^{-i p0 x3 sinh(chi)}

up to a constant prefactor and the phase e^{i delta}. Only relative densities
|A|^2 are reported. ``density_direct`` evaluates the original two-dimensional
momentum integral on a polar grid as an independent check.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from .errors import InvalidParameters, NoPeak
from .model import rotation_half_angles
from .numerics import QuadratureSpec, bessel_j1, composite_gauss_legendre_rule, integrate_interval
from .numerics import scan_then_maximize

SQRT2 = math.sqrt(2.0)
AMPLITUDE_QUAD = QuadratureSpec(relative_tolerance=1e-12, absolute_tolerance=1e-300)
# densities below this (in units of kappa^-4) count as identically zero
NEGLIGIBLE_DENSITY = 1e-28


@dataclass(frozen=True)
class AmplitudeSample:
    r: float
    x3: float
    amplitude: complex

    @property
    def density(self):
        return abs(self.amplitude) ** 2


def momentum_cutoff(params):
    """Upper momentum limit 9 sqrt(2) / kappa, where e^{-kappa^2 p^2/2} < 1e-35."""
    return 9.0 * SQRT2 / params.kappa


def _check(params, r, x3):
    if params.velocity <= 0.0:
        raise InvalidParameters("the spin-up amplitude needs V > 0")
    if not (r >= 0.0 and math.isfinite(r)):
        raise InvalidParameters(f"r must be finite and non-negative, got {r}")
    if x3 != 0.0 and params.velocity == 1.0:
        raise InvalidParameters("x3 != 0 needs V < 1 (sinh(chi) diverges at V = 1)")


def _radial_weight(p, params):
    """p e^{-kappa^2 p^2 / 2} sin(alpha(p)/2)."""
    _, sin_half = rotation_half_angles(p, params.mass, params.inv_cosh_chi)
    return p * np.exp(-0.5 * params.kappa**2 * p * p) * sin_half


def spin_up_amplitude(r, x3, params, spec=AMPLITUDE_QUAD):
    """Unnormalised spin-up amplitude at radius r and height x3 (theta = 0)."""
    r = float(r)
    x3 = float(x3)
    _check(params, r, x3)
    if r == 0.0:
        return 0j
    p_max = momentum_cutoff(params)
    # at most half an oscillation of J_1 (period ~ 2 pi / r) or of the x3 phase per panel
    width = math.pi / r
    boost = 0.0
    if x3 != 0.0:
        boost = x3 * params.sinh_chi
        width = min(width, math.pi / abs(boost))
    m2 = params.mass**2

    def integrand(p):
        val = _radial_weight(p, params) * bessel_j1(p * r)
        if boost != 0.0:
            return val * np.exp(-1j * np.sqrt(m2 + p * p) * boost)
        return val

    res = integrate_interval(integrand, 0.0, p_max, spec, max_panel_width=width)
    return complex(res.value)


def density(r, x3, params, spec=AMPLITUDE_QUAD):
    return abs(spin_up_amplitude(r, x3, params, spec)) ** 2


def sample(r, x3, params):
    return AmplitudeSample(float(r), float(x3), spin_up_amplitude(r, x3, params))


def density_direct(x1, x2, params, n_angular=None, panel_order=15, backend=None):
    """Density at (x1, x2, x3 = 0) from the two-dimensional momentum integral.

    Radial composite Gauss-Legendre with panels no wider than pi / r, times a
    uniform angular rule with more nodes than the largest p r (the angular
    rule is then exact to well below double precision). Divided by (2 pi)^2
    so it matches ``density``.
    """
    x1s = np.atleast_1d(np.asarray(x1, dtype=float))
    x2s = np.atleast_1d(np.asarray(x2, dtype=float))
    if x1s.shape != x2s.shape:
        raise InvalidParameters("x1 and x2 must have the same shape")
    if params.velocity <= 0.0:
        raise InvalidParameters("the spin-up amplitude needs V > 0")
    p_max = momentum_cutoff(params)
    r_max = float(np.max(np.hypot(x1s, x2s))) if x1s.size else 0.0
    z_max = p_max * r_max
    panels = max(8, int(math.ceil(z_max / math.pi)) + 8)
    p, w = composite_gauss_legendre_rule(0.0, p_max, panels, panel_order)
    profile = (w * _radial_weight(p, params)).astype(complex)
    if n_angular is None:
        n_angular = int(2 * math.ceil(0.5 * (z_max + 40.0)))
    angles = 2.0 * np.pi * np.arange(n_angular) / n_angular
    out = np.empty(x1s.size, dtype=complex)
    kernel = _kernels.get("polar_fourier", backend)
    kernel(p, profile, angles, 2.0 * np.pi / n_angular, x1s.ravel(), x2s.ravel(), out)
    dens = np.abs(out) ** 2 / (2.0 * np.pi) ** 2
    dens = dens.reshape(x1s.shape)
    return float(dens[0]) if np.ndim(x1) == 0 else dens


def rotational_symmetry_residual(params, r, deltas):
    """Largest relative deviation of the direct density around a circle of radius r."""
    deltas = np.asarray(deltas, dtype=float)
    d = density_direct(r * np.cos(deltas), r * np.sin(deltas), params)
    mean = float(np.mean(d))
    if mean * params.kappa**4 < NEGLIGIBLE_DENSITY:
        return 0.0
    return float(np.max(np.abs(d - mean)) / mean)


def peak_radius(params, x3=0.0, n_scan=256, tol=None, spec=AMPLITUDE_QUAD):
    """Radius of the maximum of the spin-up density on (0, 10 kappa].

    A 256-point scan locates the best sample; golden-section search then
    refines within its two neighbouring cells.
    """
    if params.velocity <= 0.0:
        raise InvalidParameters("peak_radius needs V > 0")
    r_hi = 10.0 * params.kappa
    grid = r_hi * np.arange(1, n_scan + 1) / n_scan
    if tol is None:
        tol = 1e-10 * params.kappa

    def f(r):
        return density(r, x3, params, spec)

    r_star, _, k = scan_then_maximize(f, grid, tol=tol)
    if k == 0 or k == n_scan - 1:
        raise NoPeak(
            f"spin-up density has no interior maximum on (0, {r_hi}] "
            f"(kappa'={params.kappa_prime}, V={params.velocity})"
        )
    return r_star


__all__ = [
    "AmplitudeSample",
    "density",
    "density_direct",
    "momentum_cutoff",
    "peak_radius",
    "rotational_symmetry_residual",
    "sample",
    "spin_up_amplitude",
]
