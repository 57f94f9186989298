"""Adaptive composite Gauss-Legendre quadrature.

Each panel is integrated with a 15-point Gauss-Legendre rule and with the
same rule on its two halves; the difference is the panel's error estimate.
The panel with the largest estimate is bisected until the summed estimate
falls under tolerance. Semi-infinite integrals with a Gaussian tail are
truncated at a fixed number of decay lengths.
"""
from dataclasses import dataclass
import heapq
import math

import numpy as np

from ..errors import InvalidDomain, InvalidParameters, NonConvergence

GL_ORDER = 15
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
# Nodes for [-1, 0] and [0, 1] halves, stacked after the whole-panel nodes.
_STACKED_NODES = np.concatenate([_GL_NODES, 0.5 * (_GL_NODES - 1.0), 0.5 * (_GL_NODES + 1.0)])
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    relative_tolerance: float = 1e-12
    absolute_tolerance: float = 1e-15
    max_subdivisions: int = 4000
    truncation_radius_in_decay_units: float = 9.0

    def __post_init__(self):
        if not (self.relative_tolerance > 0 and self.absolute_tolerance > 0):
            raise InvalidParameters("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise InvalidParameters("max_subdivisions must be at least 1")
        if not self.truncation_radius_in_decay_units >= 6.0:
            raise InvalidParameters("truncation radius must be at least 6 decay units")


@dataclass(frozen=True)
class IntegrationResult:
    value: complex
    error_estimate: float
    evaluations: int


DEFAULT_SPEC = QuadratureSpec()


def _panel(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = f(mid + half * _STACKED_NODES)
    vals = np.asarray(vals)
    whole = half * np.dot(_GL_WEIGHTS, vals[:GL_ORDER])
    left = 0.5 * half * np.dot(_GL_WEIGHTS, vals[GL_ORDER:2 * GL_ORDER])
    right = 0.5 * half * np.dot(_GL_WEIGHTS, vals[2 * GL_ORDER:])
    fine = left + right
    return fine, abs(whole - fine), np.abs(vals).max() * abs(b - a)


def integrate_interval(f, a, b, spec=DEFAULT_SPEC, max_panel_width=None, initial_panels=4):
    """Integrate a vectorised ``f`` over the finite interval [a, b].

    ``max_panel_width`` caps the width of the starting panels; use it for
    oscillatory integrands so no panel spans more than a fraction of a period.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidDomain("integration limits must be finite")
    if a == b:
        return IntegrationResult(0.0, 0.0, 1)
    n0 = max(1, int(initial_panels))
    if max_panel_width is not None and max_panel_width > 0:
        n0 = max(n0, int(math.ceil(abs(b - a) / max_panel_width)))
    edges = np.linspace(a, b, n0 + 1)

    heap = []
    total = 0.0
    err_total = 0.0
    scale_total = 0.0
    evaluations = 0
    counter = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err, scale = _panel(f, lo, hi)
        evaluations += 3 * GL_ORDER
        total += val
        err_total += err
        scale_total += scale
        heapq.heappush(heap, (-err, counter, lo, hi, val, scale))
        counter += 1

    subdivisions = 0
    while True:
        # roundoff floor: panels cannot resolve below a few ulps of their magnitude
        floor = 50.0 * _EPS * scale_total
        tol = max(spec.relative_tolerance * abs(total), spec.absolute_tolerance, floor)
        if err_total <= tol:
            break
        if subdivisions >= spec.max_subdivisions:
            raise NonConvergence(
                f"quadrature on [{a}, {b}] did not converge after {subdivisions} "
                f"subdivisions (error {err_total:.3e} > tolerance {tol:.3e})"
            )
        neg_err, _, lo, hi, val, scale = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        total -= val
        err_total += neg_err
        scale_total -= scale
        for c_lo, c_hi in ((lo, mid), (mid, hi)):
            c_val, c_err, c_scale = _panel(f, c_lo, c_hi)
            evaluations += 3 * GL_ORDER
            total += c_val
            err_total += c_err
            scale_total += c_scale
            heapq.heappush(heap, (-c_err, counter, c_lo, c_hi, c_val, c_scale))
            counter += 1
        subdivisions += 1
        # rebuild sums occasionally to stop drift from repeated add/subtract
        if subdivisions % 64 == 0:
            total = sum(item[4] for item in heap)
            err_total = sum(-item[0] for item in heap)
            scale_total = sum(item[5] for item in heap)

    total = sum(item[4] for item in heap)
    err_total = sum(-item[0] for item in heap)
    value = complex(total) if np.iscomplexobj(total) else float(total)
    return IntegrationResult(value, float(err_total), evaluations)


def integrate_semi_infinite(f, decay_scale, spec=DEFAULT_SPEC, max_panel_width=None):
    """Integrate ``f`` over [0, inf) for integrands with a Gaussian tail.

    The tail beyond ``truncation_radius_in_decay_units * decay_scale`` is
    dropped; at the default of 9 units a exp(-(t/decay_scale)**2) factor is
    below 1e-35 there.
    """
    if not (decay_scale > 0 and math.isfinite(decay_scale)):
        raise InvalidDomain(f"decay_scale must be positive and finite, got {decay_scale}")
    upper = spec.truncation_radius_in_decay_units * decay_scale
    return integrate_interval(f, 0.0, upper, spec, max_panel_width=max_panel_width)


def gauss_legendre_rule(n, a, b):
    """Nodes and weights of the n-point Gauss-Legendre rule mapped onto [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def composite_gauss_legendre_rule(a, b, panels, order=GL_ORDER):
    """Fixed composite rule with ``panels`` equal panels of ``order`` nodes each."""
    edges = np.linspace(a, b, panels + 1)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre_rule(order, lo, hi)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)
