"""Self-verification suite behind ``relqfi verify``.

Each check reports the measured worst-case quantity next to its tolerance.
The fast level covers the scalar identities, inequalities, limits and
tradeoff certificates; the full level adds the reduced-model Fisher oracle
and the wave-packet cross-checks.
"""
from dataclasses import asdict, dataclass
import math
import time

import numpy as np

from .fisher import (
    PolarGrid,
    build_reduced_model,
    fim_lambda_analytic,
    fim_lambda_general,
    fim_lambda_inverse_analytic,
)
from .model import ModelParams, identity_rhs, xi_rel, zeta_rel, zeta_xi
from .tradeoff import (
    lambda_star,
    lambda_star_bisect,
    monotonicity_certificate,
    omega,
    omega_limit0,
)
from .wavepacket import density, density_direct, peak_radius

GRID_KAPPA = np.linspace(0.05, 5.0, 20)
GRID_VELOCITY = np.linspace(0.05, 0.99, 20)


@dataclass
class Check:
    name: str
    tolerance: float
    measured: float
    passed: bool
    comparison: str = "<"


def _grid_values():
    out = []
    for kp in GRID_KAPPA:
        for v in GRID_VELOCITY:
            p = ModelParams(float(kp), float(v))
            out.append((p, zeta_xi(p)))
    return out


def _max_check(name, tol, measured):
    measured = float(measured)
    return Check(name, tol, measured, bool(measured < tol), "<")


def _min_check(name, bound, measured):
    measured = float(measured)
    return Check(name, bound, measured, bool(measured > bound), ">")


def _exact_check(name, target, measured):
    measured = float(measured)
    return Check(name, target, measured, bool(measured == target), "==")


def fast_checks(grid=None):
    grid = _grid_values() if grid is None else grid
    checks = []

    worst = max(abs(x + math.sqrt(2.0) * z / (p.kappa_prime * p.velocity) - identity_rhs(p.kappa_prime))
                for p, (z, x) in grid)
    checks.append(_max_check("identity_residual_grid", 1e-9, worst))
    checks.append(_min_check("zeta2_plus_xi_below_one", 0.0, min(1.0 - z * z - x for _, (z, x) in grid)))
    checks.append(_min_check("theta_above_one", 0.0, min((1.0 - z * z) / x - 1.0 for _, (z, x) in grid)))

    checks.append(_max_check("zeta_rel_small_kappa", 1e-4, abs(zeta_rel(1e-4) - math.sqrt(2 * math.pi) / 4)))
    checks.append(_max_check("xi_rel_small_kappa", 1e-3, xi_rel(1e-4)))
    checks.append(_max_check("xi_rel_large_kappa", 1e-6, abs(xi_rel(50.0) - (1.0 - 1.0 / (2 * 50.0**2)))))

    mono_fail = 0
    lam_gap = disc_err = lim1_err = 0.0
    lim0_min = math.inf
    for p, zx in grid:
        cert = monotonicity_certificate(p, zeta_xi_values=zx)
        mono_fail += 0 if (cert.monotone and cert.discriminant < 0) else 1
        disc_err = max(disc_err, cert.discriminant_relative_error)
        lam_gap = max(lam_gap, abs(lambda_star(p, zx) - lambda_star_bisect(p, zeta_xi_values=zx)))
        lim1_err = max(lim1_err, abs(omega(1.0, p, zx) + p.kappa**2 / (2 * (1 - zx[0] ** 2))))
        lim0_min = min(lim0_min, omega_limit0(p, zx))
    checks.append(_max_check("omega_monotone_failures", 0.5, mono_fail))
    checks.append(_max_check("discriminant_relative_error", 1e-9, disc_err))
    checks.append(_max_check("lambda_star_vs_bisection", 1e-9, lam_gap))
    checks.append(_max_check("omega_at_one_limit", 1e-10, lim1_err))
    checks.append(_min_check("omega_at_zero_positive", 0.0, lim0_min))

    rest = max(abs(omega(lam, ModelParams(kp, 0.0)) + kp * kp * lam * lam / 2)
               for kp in (0.3, 1.0, 3.0) for lam in (0.1, 0.5, 0.9))
    checks.append(_max_check("rest_frame_omega", 1e-12, rest))
    checks.append(_max_check("lambda_star_slow_observer", 1e-2, lambda_star(ModelParams(1.0, 1e-3))))

    worst = 0.0
    for kp in (0.1, 1.0, 3.0):
        for v in (0.2, 0.8, 1.0):
            p = ModelParams(kp, v)
            zx = zeta_xi(p)
            for lam in (0.0, 0.3, -0.3, 0.7, -0.7, 0.99, -0.99):
                prod = fim_lambda_analytic(lam, p, zx) @ fim_lambda_inverse_analytic(lam, p, zx)
                worst = max(worst, np.linalg.norm(prod - np.eye(2)))
    checks.append(_max_check("fim_times_inverse", 1e-10, worst))
    zero = max(np.abs(fim_lambda_inverse_analytic(1.0, ModelParams(kp, v)).to_array()).max()
               for kp in (0.1, 1.0) for v in (0.5, 1.0))
    checks.append(_exact_check("rld_inverse_is_zero", 0.0, zero))
    return checks


def full_checks(grid_spec=PolarGrid()):
    checks = []
    worst = theta_worst = 0.0
    for kp, v in ((0.5, 0.3), (1.0, 0.5), (2.0, 0.9)):
        p = ModelParams(kp, v)
        m0 = build_reduced_model(p, grid=grid_spec)
        m1 = build_reduced_model(p, theta=(0.3 * p.kappa, -0.2 * p.kappa), grid=grid_spec)
        for lam in (0.0, 0.3, 0.7):
            ref = fim_lambda_analytic(lam, p).to_array()
            j0 = fim_lambda_general(m0, lam)
            # the general routine uses the index order tr(d_n rho L_m^dagger); see README
            worst = max(worst, np.linalg.norm(j0.T - ref) / np.linalg.norm(ref))
            j1 = fim_lambda_general(m1, lam)
            theta_worst = max(theta_worst, np.linalg.norm(j1 - j0) / np.linalg.norm(j0))
    checks.append(_max_check("reduced_model_vs_analytic_fim", 1e-6, worst))
    checks.append(_max_check("reduced_model_theta_independence", 1e-8, theta_worst))

    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(6):
        p = ModelParams(float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.1, 1.0)))
        r = float(rng.uniform(0.1, 4.0)) * p.kappa
        d = float(rng.uniform(0, 2 * math.pi))
        a = density(r, 0.0, p)
        b = density_direct(r * math.cos(d), r * math.sin(d), p)
        worst = max(worst, abs(a - b) / a)
    checks.append(_max_check("bessel_vs_direct_density", 1e-6, worst))
    p = ModelParams(1.0, 1.0)
    r_star = peak_radius(p)
    checks.append(_min_check("peak_radius_interior", 0.0, r_star))
    return checks


def run_verify(level="fast", inject_failure=None, grid_spec=PolarGrid()):
    """Run the suite; returns (checks, all_passed, seconds).

    ``inject_failure`` names a check to mark as failed, for exercising the
    reporting path and exit code.
    """
    if level not in ("fast", "full"):
        raise ValueError(f"unknown level {level!r}")
    t0 = time.perf_counter()
    checks = fast_checks()
    if level == "full":
        checks += full_checks(grid_spec)
    if inject_failure is not None:
        names = [c.name for c in checks]
        if inject_failure not in names:
            raise ValueError(f"no check named {inject_failure!r}")
        c = checks[names.index(inject_failure)]
        c.measured = None
        c.passed = False
    return checks, all(c.passed for c in checks), time.perf_counter() - t0


def report(checks, level, seconds=None):
    out = {
        "level": level,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
    if seconds is not None:
        out["seconds"] = round(seconds, 3)
    return out
