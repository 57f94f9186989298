"""Scalar functions of the boosted Gaussian spin-1/2 model and its Wigner rotation.

Everything here depends on the spread and mass only through the
dimensionless product ``kappa_prime = mass * kappa``. The velocity enters
through ``s = sqrt(1 - V**2) = 1/cosh(chi)``, computed as
``sqrt((1 - V)(1 + V))`` so that V close to one loses no digits and V = 1
is an ordinary input.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DivisionByZero, InvalidParameters, InvariantViolation
from .numerics import QuadratureSpec, erfcx, integrate_semi_infinite

SQRT2 = math.sqrt(2.0)
SQRT_PI = math.sqrt(math.pi)

# Both integrals are requested tighter than their documented 1e-11 accuracy.
MODEL_QUAD = QuadratureSpec(relative_tolerance=1e-13, absolute_tolerance=1e-16)


@dataclass(frozen=True)
class ModelParams:
    """Rest mass, wave-packet spread (a length) and observer velocity."""

    kappa: float
    velocity: float
    mass: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise InvalidParameters(f"mass must be positive, got {self.mass}")
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise InvalidParameters(f"spread kappa must be positive, got {self.kappa}")
        if not (0.0 <= self.velocity <= 1.0):
            raise InvalidParameters(f"velocity must lie in [0, 1], got {self.velocity}")

    @classmethod
    def from_kappa_prime(cls, kappa_prime, velocity, mass=1.0):
        return cls(kappa=kappa_prime / mass, velocity=velocity, mass=mass)

    @property
    def kappa_prime(self):
        return self.mass * self.kappa

    @property
    def inv_cosh_chi(self):
        v = self.velocity
        return math.sqrt((1.0 - v) * (1.0 + v))

    @property
    def rapidity(self):
        return math.inf if self.velocity == 1.0 else math.atanh(self.velocity)

    @property
    def cosh_chi(self):
        s = self.inv_cosh_chi
        return math.inf if s == 0.0 else 1.0 / s

    @property
    def sinh_chi(self):
        s = self.inv_cosh_chi
        return math.inf if s == 0.0 else self.velocity / s


# ---------------------------------------------------------------------------
# the two model integrals
# ---------------------------------------------------------------------------

def _zeta_integral(kp, v, s, spec=MODEL_QUAD):
    def integrand(t):
        return t**3 / (np.sqrt(1.0 + t * t) + s) * np.exp(-kp * kp * t * t)

    res = integrate_semi_infinite(integrand, 1.0 / kp, spec)
    return SQRT2 * kp**3 * v * res.value


def _xi_integral(kp, s, spec=MODEL_QUAD):
    def integrand(t):
        root = np.sqrt(1.0 + t * t)
        return 2.0 * t * (1.0 + root * s) / (root + s) * np.exp(-kp * kp * t * t)

    res = integrate_semi_infinite(integrand, 1.0 / kp, spec)
    return kp * kp * res.value


def zeta(params, method="auto", spec=MODEL_QUAD):
    """The off-diagonal model integral (called zeta), a number in [0, 1).

    ``method="auto"`` uses quadrature for V < 1 and the closed form at V = 1;
    ``"quad"`` forces quadrature (also at V = 1); ``"closed"`` requires V = 1.
    """
    kp, v = params.kappa_prime, params.velocity
    if method == "closed" or (method == "auto" and v == 1.0):
        if v != 1.0:
            raise InvalidParameters("closed form for zeta exists only at V = 1")
        return zeta_rel(kp)
    if method not in ("auto", "quad"):
        raise InvalidParameters(f"unknown method {method!r}")
    if v == 0.0:
        return 0.0
    return _zeta_integral(kp, v, params.inv_cosh_chi, spec)


def xi(params, method="auto", spec=MODEL_QUAD):
    """The diagonal model integral (called xi), a number in (0, 1]."""
    kp, v = params.kappa_prime, params.velocity
    if method == "closed" or (method == "auto" and v == 1.0):
        if v != 1.0:
            raise InvalidParameters("closed form for xi exists only at V = 1")
        return xi_rel(kp)
    if method not in ("auto", "quad"):
        raise InvalidParameters(f"unknown method {method!r}")
    if v == 0.0:
        return 1.0
    return _xi_integral(kp, params.inv_cosh_chi, spec)


def zeta_xi(params, method="auto", spec=MODEL_QUAD):
    return zeta(params, method, spec), xi(params, method, spec)


def zeta_rel(kappa_prime):
    """Closed form of zeta at V = 1."""
    kp = np.asarray(kappa_prime, dtype=float)
    out = kp / SQRT2 + (SQRT2 * SQRT_PI / 4.0) * (1.0 - 2.0 * kp * kp) * erfcx(kp)
    return float(out) if out.ndim == 0 else out


def xi_rel(kappa_prime):
    """Closed form of xi at V = 1."""
    kp = np.asarray(kappa_prime, dtype=float)
    out = SQRT_PI * kp * erfcx(kp)
    return float(out) if out.ndim == 0 else out


def cubic_gaussian_over_root_plus_one(kappa_prime):
    """Closed form of int_0^inf k^3 t^3 e^{-k^2 t^2} / (sqrt(1+t^2) + 1) dt."""
    return SQRT_PI / 4.0 * erfcx(kappa_prime)


def cubic_gaussian_over_root(kappa_prime):
    """Closed form of int_0^inf k^3 t^3 e^{-k^2 t^2} / sqrt(1+t^2) dt."""
    kp = kappa_prime
    return kp / 2.0 + SQRT_PI / 4.0 * (1.0 - 2.0 * kp * kp) * erfcx(kp)


def identity_rhs(kappa_prime):
    return 1.0 + SQRT_PI / (2.0 * kappa_prime) * erfcx(kappa_prime)


def identity_residual(params, method="auto"):
    """xi + sqrt(2) zeta / (kappa' V) minus its closed-form value.

    A residual near zero certifies zeta, xi and erfc together.
    """
    v = params.velocity
    if v == 0.0:
        raise DivisionByZero("the zeta/xi identity divides by V and is undefined at V = 0")
    kp = params.kappa_prime
    z, x = zeta_xi(params, method)
    return x + SQRT2 * z / (kp * v) - identity_rhs(kp)


def theta_ratio(params, method="auto", zeta_value=None, xi_value=None):
    """Theta = (1 - zeta^2) / xi, which must exceed one for V in (0, 1]."""
    if params.velocity == 0.0:
        raise InvalidParameters("theta_ratio requires V > 0 (it equals 1 at V = 0)")
    z = zeta(params, method) if zeta_value is None else zeta_value
    x = xi(params, method) if xi_value is None else xi_value
    theta = (1.0 - z * z) / x
    if not theta > 1.0:
        raise InvariantViolation(
            f"Theta = {theta!r} <= 1 at kappa'={params.kappa_prime}, V={params.velocity}; "
            "this indicates a quadrature failure"
        )
    return theta


# ---------------------------------------------------------------------------
# Wigner rotation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerAngles:
    """Rotation angle alpha (stored as cos/sin) and azimuth phi of the momentum.

    ``phase_defined`` is False at zero transverse momentum, where phi is
    meaningless; alpha vanishes there, so the spin rotation is the identity.
    """

    cos_alpha: float
    sin_alpha: float
    phi: float
    phase_defined: bool = True
    # 1 - cos(alpha), kept separately to avoid cancellation for small alpha
    one_minus_cos: float = 0.0

    @classmethod
    def from_alpha(cls, alpha, phi=0.0):
        return cls(math.cos(alpha), math.sin(alpha), phi, True, 2.0 * math.sin(0.5 * alpha) ** 2)

    @property
    def alpha(self):
        return math.atan2(self.sin_alpha, self.cos_alpha)

    @property
    def cos_half(self):
        if self.one_minus_cos > 1.0:
            # |alpha| > pi/2: the square root form cancels, sin(alpha) = 2 sin(a/2) cos(a/2) does not
            return self.sin_alpha / (2.0 * self.sin_half)
        return math.sqrt(max(1.0 - 0.5 * self.one_minus_cos, 0.0))

    @property
    def sin_half(self):
        # alpha lies in [-pi, 0], so sin(alpha/2) <= 0
        return -math.sqrt(max(0.5 * self.one_minus_cos, 0.0))


def rotation_half_angles(p, mass, inv_cosh_chi):
    """Vectorised cos(alpha/2) and sin(alpha/2) as functions of |p|."""
    p = np.asarray(p, dtype=float)
    p0 = np.sqrt(mass * mass + p * p)
    s = inv_cosh_chi
    one_minus_cos = (p * p / (p0 + mass)) * (1.0 - s) / (p0 + mass * s)
    cos_half = np.sqrt(np.clip(1.0 - 0.5 * one_minus_cos, 0.0, None))
    sin_half = -np.sqrt(np.clip(0.5 * one_minus_cos, 0.0, None))
    return cos_half, sin_half


def wigner_angles(p1, p2, params):
    m = params.mass
    s = params.inv_cosh_chi
    v = params.velocity
    pabs = math.hypot(p1, p2)
    p0 = math.sqrt(m * m + pabs * pabs)
    denom = p0 + m * s
    cos_a = (p0 * s + m) / denom
    sin_a = -pabs * v / denom
    one_minus_cos = (pabs * pabs / (p0 + m)) * (1.0 - s) / denom
    if pabs == 0.0:
        return WignerAngles(1.0, 0.0, 0.0, False, 0.0)
    return WignerAngles(cos_a, sin_a, math.atan2(p2, p1), True, one_minus_cos)


def wigner_rotation_matrix(p1, p2, params):
    """Spatial block of the Wigner rotation for momentum (p1, p2, 0).

    Built from the closed-form components with numerator and denominator
    divided by cosh(chi), so V = 1 is handled without overflow.
    """
    m = params.mass
    v = params.velocity
    s = params.inv_cosh_chi
    pp = p1 * p1 + p2 * p2
    if pp == 0.0:
        raise InvalidParameters("the Wigner rotation components need nonzero transverse momentum")
    p0 = math.sqrt(m * m + pp)
    den_diag = pp * (p0 * p0 * v * v + pp * s * s)

    def diag(a, b):
        return (p0 * (m * a * a + p0 * b * b) * v * v + pp * (a * a * s + b * b * s * s)) / den_diag

    off = -p1 * p2 * (1.0 - s) * (p0 - m) / (pp * (p0 + m * s))
    r31 = -p1 * v / (p0 + m * s)
    r32 = -p2 * v / (p0 + m * s)
    r33 = (p0 * s + m) / (m * s + p0)
    return np.array([
        [diag(p1, p2), off, -r31],
        [off, diag(p2, p1), -r32],
        [r31, r32, r33],
    ])


def rot_z(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(cos_a, sin_a):
    """Rotation about y in the sign convention used for the Wigner angle."""
    return np.array([[cos_a, 0.0, -sin_a], [0.0, 1.0, 0.0], [sin_a, 0.0, cos_a]])


def euler_rotation(angles):
    """Recompose the 3x3 rotation from (alpha, phi)."""
    return rot_z(angles.phi) @ rot_y(angles.cos_alpha, angles.sin_alpha) @ rot_z(-angles.phi)


def spin_half_rep(angles):
    """Spin-1/2 matrix of the Wigner rotation, rows/columns ordered (up, down)."""
    c = angles.cos_half
    s = angles.sin_half
    e = complex(math.cos(angles.phi), math.sin(angles.phi))
    return np.array([[c, -e * s], [e.conjugate() * s, c]], dtype=complex)


def spin_half_rep_from_exponentials(angles):
    """Same matrix from exp(i phi s3/2) exp(-i alpha s2/2) exp(-i phi s3/2)."""
    a = angles.alpha
    phi = angles.phi
    rz_plus = np.diag([np.exp(0.5j * phi), np.exp(-0.5j * phi)])
    rz_minus = rz_plus.conj()
    ry = np.array([[math.cos(a / 2), -math.sin(a / 2)], [math.sin(a / 2), math.cos(a / 2)]], dtype=complex)
    return rz_plus @ ry @ rz_minus

