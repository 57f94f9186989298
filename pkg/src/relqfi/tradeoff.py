"""Tradeoff indicator between the SLD and lambda-LD Cramer-Rao bounds.

omega > 0 means the SLD corner point (J_S^-1,11, J_S^-1,22) is excluded by
the lambda-LD bound, which certifies that the two shift parameters cannot be
estimated optimally at the same time. Everything is computed from the pair
(zeta, xi); ``*_core`` functions return omega in units of kappa^2 / 2.
"""
from dataclasses import dataclass
import enum
from fractions import Fraction
import math

import numpy as np

from .errors import DegenerateDenominator, InvalidParameters, RadicandNegative, ZeroDenominator
from .fisher import fim_lambda_inverse_analytic, sld_fim_inverse
from .model import ModelParams, zeta_xi
from .numerics import find_root_bracketed, scan_then_maximize


def _check_velocity(params):
    if params.velocity <= 0.0:
        raise InvalidParameters("this quantity needs V > 0 (there is no tradeoff in the rest frame)")


def _fold(lam):
    lam = abs(float(lam))
    if not lam <= 1.0:
        raise InvalidParameters(f"lambda must lie in [-1, 1], got {lam}")
    return lam


# ---------------------------------------------------------------------------
# dimensionless cores
# ---------------------------------------------------------------------------

def omega_core_denominator(lam, zeta, xi):
    one_z = 1.0 - zeta * zeta
    return xi * xi * (lam * lam * one_z + zeta * zeta) - one_z * one_z


def omega_core(lam, zeta, xi):
    """omega * 2 / kappa^2 from the explicit rational expression, for 0 < lambda < 1."""
    one_z = 1.0 - zeta * zeta
    inner = lam * lam * one_z + zeta * zeta
    num = lam * lam * one_z * one_z - xi * xi * inner * inner
    den = omega_core_denominator(lam, zeta, xi)
    if abs(den) < 1e-14:
        raise DegenerateDenominator(f"omega denominator {den!r} is numerically zero")
    if den > 0:
        raise DegenerateDenominator(f"omega denominator {den!r} is positive; expected negative")
    return num / (one_z * den)


def omega_limit0_core(zeta, xi):
    one_z = 1.0 - zeta * zeta
    z2 = zeta * zeta
    return z2 * z2 * xi * xi / (one_z * (one_z * one_z - xi * xi * z2))


def omega_limit0_core_theta(zeta, xi):
    """Same limit written with Theta = (1 - zeta^2) / xi."""
    theta = (1.0 - zeta * zeta) / xi
    return zeta**4 / (xi * theta * (theta * theta - zeta * zeta))


def omega_limit1_core(zeta):
    return -1.0 / (1.0 - zeta * zeta)


def lambda_star_core(zeta, xi):
    """Zero of omega in (0, 1), the smaller root of the quadratic in lambda."""
    one_z = 1.0 - zeta * zeta
    u = 4.0 * xi * xi * zeta * zeta / one_z
    radicand = 1.0 - u
    if radicand < 0.0:
        raise RadicandNegative(f"radicand {radicand!r} < 0 in lambda*")
    # (1 - sqrt(1-u)) / (2 xi) rewritten without cancellation
    return 2.0 * xi * zeta * zeta / (one_z * (1.0 + math.sqrt(radicand)))


def omega_derivative_coefficients(zeta, xi):
    """(a, b, c) with d omega/d lambda proportional to -lambda (a l^4 + b l^2 + c)."""
    one_z = 1 - zeta * zeta
    z2, x2 = zeta * zeta, xi * xi
    a = x2 * x2 * one_z * one_z
    b = -2 * x2 * one_z * (one_z * one_z - x2 * z2)
    c = one_z**3 - x2 * z2 * one_z * (3 - 2 * z2) + x2 * x2 * z2 * z2
    return a, b, c


def discriminant_closed_form(zeta, xi):
    """-4 zeta^2 xi^6 (1 - zeta^2)^3 (Theta^2 - 1).

    Theta^2 - 1 is factored as ((1 - xi) - zeta^2)(1 - zeta^2 + xi) / xi^2,
    since Theta is close to one for slow observers.
    """
    one_z = 1 - zeta * zeta
    theta2_m1 = ((1 - xi) - zeta * zeta) * (one_z + xi) / (xi * xi)
    return -4 * zeta * zeta * xi**6 * one_z**3 * theta2_m1


def quartic_discriminant(zeta, xi):
    """b^2 - 4ac evaluated exactly in rational arithmetic from float (zeta, xi).

    In floating point the expansion cancels catastrophically when V is small
    (b^2 and 4ac agree to about ten digits), so it is not usable there.
    """
    a, b, c = omega_derivative_coefficients(Fraction(zeta), Fraction(xi))
    return float(b * b - 4 * a * c)


def omega_core_derivative(lam, zeta, xi):
    a, b, c = omega_derivative_coefficients(zeta, xi)
    den = omega_core_denominator(lam, zeta, xi)
    return -2.0 * lam * (a * lam**4 + b * lam**2 + c) / (den * den)


# ---------------------------------------------------------------------------
# dimensional wrappers
# ---------------------------------------------------------------------------

def omega(lam, params, zeta_xi_values=None):
    """The tradeoff indicator in units of length^2.

    Negative lambda is folded onto |lambda|; lambda = 0 and 1 use the limits.
    """
    lam = _fold(lam)
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    half_k2 = 0.5 * params.kappa**2
    if params.velocity == 0.0 or z == 0.0:
        return -half_k2 * lam * lam
    if lam == 0.0:
        return half_k2 * omega_limit0_core(z, x)
    if lam == 1.0:
        return half_k2 * omega_limit1_core(z)
    return half_k2 * omega_core(lam, z, x)


def omega_from_fims(js_inv, jl_inv):
    """(omega, omega') from the inverse SLD and lambda-LD Fisher matrices.

    Both share the numerator -det(J_S^-1 - J_lambda^-1) restricted to the
    diagonal gaps; they differ only in which diagonal gap divides.
    """
    g1 = js_inv.a11 - jl_inv.a11
    g2 = js_inv.a22 - jl_inv.a22
    if g1 == 0.0 or g2 == 0.0:
        raise ZeroDenominator("J_S^-1 and J_lambda^-1 share a diagonal entry (lambda = 0?)")
    im2 = jl_inv.a12.imag ** 2
    num = im2 - g1 * g2
    return num / g1, num / g2


def omega_limit0(params, zeta_xi_values=None):
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    return 0.5 * params.kappa**2 * omega_limit0_core(z, x)


def omega_limit0_alternate(params, zeta_xi_values=None):
    _check_velocity(params)
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    return 0.5 * params.kappa**2 * omega_limit0_core_theta(z, x)


def omega_limit1(params, zeta_xi_values=None):
    z, _ = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    return 0.5 * params.kappa**2 * omega_limit1_core(z)


def lambda_star(params, zeta_xi_values=None):
    """Threshold below which the lambda-LD bound certifies a tradeoff."""
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    if params.velocity == 0.0:
        return 0.0
    return lambda_star_core(z, x)


def lambda_star_bisect(params, tol=1e-13, zeta_xi_values=None):
    """Bracketed root of omega on [0, 1], an independent check of ``lambda_star``.

    The endpoints use the closed-form limits, which have opposite signs for
    V > 0, so arbitrarily small roots (V -> 0) stay inside the bracket.
    """
    _check_velocity(params)
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values

    def f(lam):
        if lam <= 0.0:
            return omega_limit0_core(z, x)
        if lam >= 1.0:
            return omega_limit1_core(z)
        return omega_core(lam, z, x)

    return find_root_bracketed(f, 0.0, 1.0, tol=tol)


@dataclass(frozen=True)
class MonotonicityCertificate:
    monotone: bool
    discriminant: float
    discriminant_closed_form: float
    abc: tuple

    @property
    def discriminant_relative_error(self):
        return abs(self.discriminant - self.discriminant_closed_form) / abs(self.discriminant_closed_form)


def monotonicity_certificate(params, grid=None, zeta_xi_values=None):
    """Certify that omega strictly decreases in lambda on (0, 1).

    The quartic a l^4 + b l^2 + c has a > 0 and negative discriminant, so it
    is positive for every lambda; the sampled grid check is a second witness.
    """
    _check_velocity(params)
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    a, b, c = omega_derivative_coefficients(z, x)
    disc = quartic_discriminant(z, x)
    disc_cf = discriminant_closed_form(z, x)
    if grid is None:
        grid = np.linspace(0.0, 1.0, 100)
    values = np.array([omega(lam, params, (z, x)) for lam in grid])
    monotone = bool(a > 0 and disc_cf < 0 and np.all(np.diff(values) < 0))
    return MonotonicityCertificate(monotone, disc, disc_cf, (a, b, c))


# ---------------------------------------------------------------------------
# Cramer-Rao geometry on the (V11, V22) plane
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MsePoint:
    """Diagonal of a mean-square-error matrix (length^2)."""

    v11: float
    v22: float

    def __post_init__(self):
        if not (self.v11 > 0 and self.v22 > 0):
            raise InvalidParameters("MSE diagonal entries must be positive")


class Region(enum.Enum):
    ALLOWED_BY_BOTH = "AllowedByBoth"
    EXCLUDED_BY_SLD = "ExcludedBySld"
    EXCLUDED_BY_LAMBDA_ONLY = "ExcludedByLambdaOnly"


def _inverses(lam, params, zeta_xi_values):
    zx = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    return sld_fim_inverse(params, zx[0]), fim_lambda_inverse_analytic(lam, params, zx)


def boundary_residuals(point, lam, params, zeta_xi_values=None):
    """Slack of the SLD bounds and of the lambda-LD bound at ``point``.

    Returns (s1, s2, s_lambda); each is >= 0 when its inequality holds.
    """
    js, jl = _inverses(lam, params, zeta_xi_values)
    s1 = point.v11 - js.a11
    s2 = point.v22 - js.a22
    s_lam = (point.v11 - jl.a11) * (point.v22 - jl.a22) - jl.a12.imag ** 2
    if point.v11 < jl.a11 or point.v22 < jl.a22:
        s_lam = min(point.v11 - jl.a11, point.v22 - jl.a22)
    return s1, s2, s_lam


def region_check(point, lam, params, zeta_xi_values=None, atol=0.0):
    if not 0.0 < lam < 1.0:
        raise InvalidParameters("region_check needs 0 < lambda < 1")
    s1, s2, s_lam = boundary_residuals(point, lam, params, zeta_xi_values)
    if s1 < -atol or s2 < -atol:
        return Region.EXCLUDED_BY_SLD
    if s_lam < -atol:
        return Region.EXCLUDED_BY_LAMBDA_ONLY
    return Region.ALLOWED_BY_BOTH


def bound_intersections(lam, params, zeta_xi_values=None):
    """Points A and A' where the lambda-LD hyperbola meets the SLD lines.

    A lies on V11 = J_S^-1,11 and A' on V22 = J_S^-1,22. Returns None when
    the hyperbola passes below the SLD corner (omega < 0).
    """
    if not 0.0 < lam < 1.0:
        raise InvalidParameters("bound_intersections needs 0 < lambda < 1")
    _check_velocity(params)
    js, jl = _inverses(lam, params, zeta_xi_values)
    im2 = jl.a12.imag ** 2
    g1 = js.a11 - jl.a11
    g2 = js.a22 - jl.a22
    w, _ = omega_from_fims(js, jl)
    if w < 0.0:
        return None
    point_a = MsePoint(js.a11, im2 / g1 + jl.a22)
    point_a_prime = MsePoint(im2 / g2 + jl.a11, js.a22)
    return point_a, point_a_prime


# ---------------------------------------------------------------------------
# reports and sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TradeoffReport:
    lam: float
    omega: float
    omega_prime: float
    omega_limit0: float
    omega_limit1: float
    lambda_star: float
    monotone_decreasing: bool
    discriminant: float


def tradeoff_report(lam, params):
    _check_velocity(params)
    zx = zeta_xi(params)
    lam_f = _fold(lam)
    if 0.0 < lam_f < 1.0:
        w, w_prime = omega_from_fims(*_inverses(lam_f, params, zx))
    else:
        w = w_prime = omega(lam_f, params, zx)
    cert = monotonicity_certificate(params, zeta_xi_values=zx)
    return TradeoffReport(
        lam=lam_f,
        omega=w,
        omega_prime=w_prime,
        omega_limit0=omega_limit0(params, zx),
        omega_limit1=omega_limit1(params, zx),
        lambda_star=lambda_star(params, zx),
        monotone_decreasing=cert.monotone,
        discriminant=cert.discriminant,
    )


def omega0_peak(velocity, kappa_prime_grid=None, tol=1e-8, scaled=False):
    """Spread kappa'* maximising omega(0) at fixed V.

    With ``scaled=False`` the maximised quantity is omega(0) m^2 (omega in
    units of the squared Compton length); with ``scaled=True`` it is the
    dimensionless core omega(0) * 2 / kappa^2. Both have a single interior
    peak, but only an empirical scan backs the golden-section refinement.
    Returns (kappa_prime_star, peak_value).
    """
    if kappa_prime_grid is None:
        kappa_prime_grid = np.geomspace(1e-3, 10.0, 200)

    def f(kp):
        core = omega_limit0_core(*zeta_xi(ModelParams.from_kappa_prime(kp, velocity)))
        return core if scaled else 0.5 * kp * kp * core

    kp_star, value, _ = scan_then_maximize(f, kappa_prime_grid, tol=tol)
    return kp_star, value


__all__ = [
    "MonotonicityCertificate",
    "MsePoint",
    "Region",
    "TradeoffReport",
    "bound_intersections",
    "boundary_residuals",
    "discriminant_closed_form",
    "lambda_star",
    "lambda_star_bisect",
    "lambda_star_core",
    "monotonicity_certificate",
    "omega",
    "omega0_peak",
    "omega_core",
    "omega_core_derivative",
    "omega_derivative_coefficients",
    "omega_from_fims",
    "omega_limit0",
    "omega_limit0_alternate",
    "omega_limit0_core",
    "omega_limit1",
    "quartic_discriminant",
    "region_check",
    "tradeoff_report",
]
