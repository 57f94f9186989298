"""Hot numeric kernels with a numba path and a vectorised numpy path.

Every kernel exists twice: ``*_loop`` is plain scalar code compiled by numba,
``*_numpy`` is an array rewrite used when numba is unavailable or disabled.
The public names at the bottom pick one according to ``_accel.USE_NUMBA``;
both variants stay importable so tests and benchmarks can compare them.
"""
import math

import numpy as np

from . import _accel

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)
_EPS = 2.220446049250313e-16
_TINY = 1e-300

# Branch points for J1: power series below, Miller recurrence between,
# Hankel asymptotic expansion above.
J1_SERIES_MAX = 4.0
J1_ASYMPTOTIC_MIN = 25.0


# ---------------------------------------------------------------------------
# erfc / erfcx
# ---------------------------------------------------------------------------

def _erfc_loop(xs, scaled, out):
    n = xs.shape[0]
    for k in range(n):
        x = xs[k]
        ax = abs(x)
        if ax < 1.0:
            x2 = x * x
            term = x
            total = x
            m = 0
            while True:
                m += 1
                term *= -x2 / m
                add = term / (2 * m + 1)
                total += add
                if abs(add) <= 1e-17 * abs(total) or m > 60:
                    break
            val = 1.0 - _TWO_OVER_SQRT_PI * total
            if scaled:
                val *= math.exp(x2)
            out[k] = val
            continue
        # modified Lentz on erfcx(ax) = 1/(sqrt(pi) * (ax + (1/2)/(ax + 1/(ax + (3/2)/(ax + ...)))))
        f = ax
        c = ax
        d = 0.0
        j = 1
        while j < 5000:
            a = 0.5 * j
            d = ax + a * d
            if d == 0.0:
                d = _TINY
            d = 1.0 / d
            c = ax + a / c
            if c == 0.0:
                c = _TINY
            delta = c * d
            f *= delta
            if abs(delta - 1.0) < _EPS:
                break
            j += 1
        erfcx_ax = _INV_SQRT_PI / f
        if x > 0.0:
            out[k] = erfcx_ax if scaled else erfcx_ax * math.exp(-x * x)
        elif scaled:
            out[k] = 2.0 * math.exp(x * x) - erfcx_ax
        else:
            out[k] = 2.0 - erfcx_ax * math.exp(-x * x)


def _erfc_numpy(xs, scaled, out):
    xs = np.asarray(xs, dtype=float)
    ax = np.abs(xs)
    small = ax < 1.0
    if small.any():
        x = xs[small]
        x2 = x * x
        term = x.copy()
        total = x.copy()
        for m in range(1, 40):
            term = term * (-x2 / m)
            total = total + term / (2 * m + 1)
        val = 1.0 - _TWO_OVER_SQRT_PI * total
        if scaled:
            val = val * np.exp(x2)
        out[small] = val
    big = ~small
    if big.any():
        x = xs[big]
        a_x = ax[big]
        f = a_x.copy()
        c = a_x.copy()
        d = np.zeros_like(a_x)
        active = np.ones(a_x.shape, dtype=bool)
        for j in range(1, 5000):
            a = 0.5 * j
            d_new = a_x + a * d
            d_new[d_new == 0.0] = _TINY
            d_new = 1.0 / d_new
            c_new = a_x + a / c
            c_new[c_new == 0.0] = _TINY
            delta = c_new * d_new
            d = np.where(active, d_new, d)
            c = np.where(active, c_new, c)
            f = np.where(active, f * delta, f)
            active &= np.abs(delta - 1.0) >= _EPS
            if not active.any():
                break
        erfcx_ax = _INV_SQRT_PI / f
        with np.errstate(over="ignore"):
            if scaled:
                val = np.where(x > 0.0, erfcx_ax, 2.0 * np.exp(x * x) - erfcx_ax)
            else:
                tail = erfcx_ax * np.exp(-x * x)
                val = np.where(x > 0.0, tail, 2.0 - tail)
        out[big] = val


# ---------------------------------------------------------------------------
# Bessel J1
# ---------------------------------------------------------------------------

def _j1_loop(xs, out):
    n = xs.shape[0]
    for k in range(n):
        x = xs[k]
        ax = abs(x)
        sign = 1.0 if x >= 0.0 else -1.0
        if ax == 0.0:
            out[k] = 0.0
        elif ax < J1_SERIES_MAX:
            h = 0.5 * ax
            h2 = h * h
            term = h
            total = h
            m = 0
            while True:
                m += 1
                term *= -h2 / (m * (m + 1))
                total += term
                if abs(term) <= 1e-17 * abs(total) or m > 60:
                    break
            out[k] = sign * total
        elif ax < J1_ASYMPTOTIC_MIN:
            # Miller backward recurrence normalised by J0 + 2*sum J_2k = 1
            start = 2 * int((ax + 30.0 + 4.0 * ax ** (1.0 / 3.0)) / 2.0 + 1.0)
            jp1 = 0.0
            j = 1e-30
            s = 0.0
            ans = 0.0
            for order in range(start, 0, -1):
                if order == 1:
                    ans = j
                elif order % 2 == 0:
                    s += 2.0 * j
                jm1 = (2.0 * order / ax) * j - jp1
                jp1 = j
                j = jm1
                if abs(j) > 1e200:
                    j *= 1e-200
                    jp1 *= 1e-200
                    s *= 1e-200
                    ans *= 1e-200
            s += j
            out[k] = sign * ans / s
        else:
            mu = 4.0
            p = 1.0
            q = 0.0
            t = 1.0
            prev = 1.0
            for m in range(1, 60):
                t_new = t * (mu - (2 * m - 1) ** 2) / (m * 8.0 * ax)
                if abs(t_new) > abs(prev):
                    break
                t = t_new
                prev = t_new
                r = m % 4
                if r == 1:
                    q += t
                elif r == 2:
                    p -= t
                elif r == 3:
                    q -= t
                else:
                    p += t
                if abs(t) < 1e-17:
                    break
            w = ax - 0.75 * math.pi
            out[k] = sign * math.sqrt(2.0 / (math.pi * ax)) * (p * math.cos(w) - q * math.sin(w))


def _j1_numpy(xs, out):
    xs = np.asarray(xs, dtype=float)
    ax = np.abs(xs)
    sign = np.where(xs >= 0.0, 1.0, -1.0)
    out[...] = 0.0

    ser = (ax > 0.0) & (ax < J1_SERIES_MAX)
    if ser.any():
        h = 0.5 * ax[ser]
        h2 = h * h
        term = h.copy()
        total = h.copy()
        for m in range(1, 30):
            term = term * (-h2 / (m * (m + 1)))
            total = total + term
        out[ser] = sign[ser] * total

    mid = (ax >= J1_SERIES_MAX) & (ax < J1_ASYMPTOTIC_MIN)
    if mid.any():
        x = ax[mid]
        xmax = float(x.max())
        start = 2 * int((xmax + 30.0 + 4.0 * xmax ** (1.0 / 3.0)) / 2.0 + 1.0)
        jp1 = np.zeros_like(x)
        j = np.full_like(x, 1e-30)
        s = np.zeros_like(x)
        ans = np.zeros_like(x)
        for order in range(start, 0, -1):
            if order == 1:
                ans = j.copy()
            elif order % 2 == 0:
                s = s + 2.0 * j
            jm1 = (2.0 * order / x) * j - jp1
            jp1 = j
            j = jm1
            big = np.abs(j) > 1e200
            if big.any():
                scale = np.where(big, 1e-200, 1.0)
                j, jp1, s, ans = j * scale, jp1 * scale, s * scale, ans * scale
        s = s + j
        out[mid] = sign[mid] * ans / s

    asy = ax >= J1_ASYMPTOTIC_MIN
    if asy.any():
        x = ax[asy]
        p = np.ones_like(x)
        q = np.zeros_like(x)
        t = np.ones_like(x)
        live = np.ones(x.shape, dtype=bool)
        for m in range(1, 60):
            t_new = t * (4.0 - (2 * m - 1) ** 2) / (m * 8.0 * x)
            live &= np.abs(t_new) <= np.abs(t)
            t = np.where(live, t_new, 0.0)
            r = m % 4
            if r == 1:
                q = q + t
            elif r == 2:
                p = p - t
            elif r == 3:
                q = q - t
            else:
                p = p + t
            live &= np.abs(t) >= 1e-17
            if not live.any():
                break
        w = x - 0.75 * np.pi
        out[asy] = sign[asy] * np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(w) - q * np.sin(w))


# ---------------------------------------------------------------------------
# direct 2D Fourier sum for the spin-up wave packet
# ---------------------------------------------------------------------------

def _polar_fourier_loop(radial_nodes, radial_profile, angles, angle_weight, x1s, x2s, out):
    """out[k] = sum_{r,a} profile[r] * w_a * e^{i Phi_a} * e^{-i p_r (x1 cos Phi_a + x2 sin Phi_a)}."""
    n_r = radial_nodes.shape[0]
    n_a = angles.shape[0]
    cos_a = np.cos(angles)
    sin_a = np.sin(angles)
    for k in range(x1s.shape[0]):
        x1 = x1s[k]
        x2 = x2s[k]
        acc_re = 0.0
        acc_im = 0.0
        for a in range(n_a):
            proj = x1 * cos_a[a] + x2 * sin_a[a]
            inner_re = 0.0
            inner_im = 0.0
            for r in range(n_r):
                ph = -radial_nodes[r] * proj
                c = math.cos(ph)
                s = math.sin(ph)
                pr = radial_profile[r].real
                pi_ = radial_profile[r].imag
                inner_re += pr * c - pi_ * s
                inner_im += pr * s + pi_ * c
            # multiply by e^{i Phi}
            acc_re += inner_re * cos_a[a] - inner_im * sin_a[a]
            acc_im += inner_re * sin_a[a] + inner_im * cos_a[a]
        out[k] = complex(acc_re, acc_im) * angle_weight


def _polar_fourier_numpy(radial_nodes, radial_profile, angles, angle_weight, x1s, x2s, out):
    cos_a = np.cos(angles)
    sin_a = np.sin(angles)
    e_phi = np.exp(1j * angles)
    for k in range(len(x1s)):
        proj = x1s[k] * cos_a + x2s[k] * sin_a
        phase = np.exp(-1j * np.outer(radial_nodes, proj))
        out[k] = angle_weight * np.sum((radial_profile @ phase) * e_phi)


_erfc_jit = _accel.jit(_erfc_loop)
_j1_jit = _accel.jit(_j1_loop)
_polar_fourier_jit = _accel.jit(_polar_fourier_loop)

IMPLEMENTATIONS = {
    "numpy": {
        "erfc": _erfc_numpy,
        "j1": _j1_numpy,
        "polar_fourier": _polar_fourier_numpy,
    },
}
if _accel.HAVE_NUMBA:
    IMPLEMENTATIONS["numba"] = {
        "erfc": _erfc_jit,
        "j1": _j1_jit,
        "polar_fourier": _polar_fourier_jit,
    }


def get(name, backend=None):
    """Return kernel ``name`` for ``backend`` (defaults to the active one)."""
    backend = backend or _accel.backend_name()
    return IMPLEMENTATIONS[backend][name]
