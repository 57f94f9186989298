"""Bracketed root finding and unimodal maximisation."""
from dataclasses import dataclass
import math

import numpy as np

from ..errors import NoSignChange

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RootResult:
    root: float
    lo: float
    hi: float
    iterations: int


def find_root_bracketed(f, lo, hi, tol=1e-12, maxiter=500, full_output=False):
    """Brent's method on [lo, hi] with guaranteed bisection fallback.

    Requires f(lo) and f(hi) of strictly opposite sign. The returned bracket
    (with ``full_output=True``) always straddles the sign change.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if not (fa * fb < 0):
        raise NoSignChange(f"f({a})={fa!r} and f({b})={fb!r} do not bracket a root")

    # b is the best estimate, a the previous one, c the contrapoint
    c, fc = a, fa
    d = e = b - a
    it = 0
    for it in range(1, maxiter + 1):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0:
            break
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b = b + d if abs(d) > tol1 else b + math.copysign(tol1, xm)
        fb = f(b)

    if not full_output:
        return b
    if fb == 0:
        return RootResult(b, b, b, it)
    return RootResult(b, min(b, c), max(b, c), it)


def maximize_unimodal(f, lo, hi, tol=1e-10, maxiter=500):
    """Golden-section search for the maximum of a unimodal ``f`` on [lo, hi].

    Unimodality is the caller's responsibility. Returns ``(argmax, max)``.
    """
    a, b = float(lo), float(hi)
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
    if f1 >= f2:
        return x1, f1
    return x2, f2


def scan_then_maximize(f, grid, tol=1e-10):
    """Grid pre-scan followed by golden-section refinement around the best sample.

    Returns ``(argmax, max, index)`` where ``index`` is the best grid sample.
    The refinement window is the two neighbouring grid cells.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.array([f(x) for x in grid])
    k = int(np.argmax(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    x, fx = maximize_unimodal(f, lo, hi, tol=tol)
    if values[k] > fx:
        return float(grid[k]), float(values[k]), k
    return x, fx, k
