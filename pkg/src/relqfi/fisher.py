"""lambda-LD quantum Fisher information.

Two routes are provided. The analytic 2x2 matrices of the boosted wave-packet
model are closed-form functions of (zeta, xi). The general routine works on
any finite-dimensional, possibly rank-deficient model given as a density
matrix and its parameter derivatives; ``build_reduced_model`` produces such a
model for the wave packet by restricting to the six-dimensional subspace
spanned by the two spin components and their momentum multiples.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import (
    EigenFailure,
    GridTooCoarse,
    InvalidParameters,
    LambdaOutOfRange,
    RldUndefined,
)
from .model import ModelParams, rotation_half_angles, zeta_xi
from .numerics import gauss_legendre_rule, orthonormalize


@dataclass(frozen=True)
class HermitianMatrix2:
    """Complex Hermitian 2x2 matrix; ``a21`` is ``conj(a12)``."""

    a11: float
    a22: float
    a12: complex

    @classmethod
    def from_array(cls, arr, atol=1e-12):
        arr = np.asarray(arr)
        if abs(arr[1, 0] - np.conj(arr[0, 1])) > atol * max(1.0, np.abs(arr).max()):
            raise InvalidParameters("matrix is not Hermitian")
        return cls(float(arr[0, 0].real), float(arr[1, 1].real), complex(arr[0, 1]))

    @property
    def a21(self):
        return self.a12.conjugate()

    def to_array(self):
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=complex)

    def eigvalsh(self):
        return np.linalg.eigvalsh(self.to_array())

    def is_psd(self, rtol=1e-12):
        ev = self.eigvalsh()
        return bool(ev.min() >= -rtol * abs(self.trace()))

    def trace(self):
        return self.a11 + self.a22

    def det(self):
        return self.a11 * self.a22 - abs(self.a12) ** 2

    def scaled(self, factor):
        return HermitianMatrix2(self.a11 * factor, self.a22 * factor, self.a12 * factor)

    def __matmul__(self, other):
        return self.to_array() @ (other.to_array() if isinstance(other, HermitianMatrix2) else other)


# ---------------------------------------------------------------------------
# analytic matrices
# ---------------------------------------------------------------------------

def _check_lambda(lam, allow_endpoints):
    if not math.isfinite(lam):
        raise LambdaOutOfRange(f"lambda must be finite, got {lam}")
    if allow_endpoints:
        if abs(lam) > 1.0:
            raise LambdaOutOfRange(f"|lambda| must not exceed 1, got {lam}")
    elif abs(lam) >= 1.0:
        raise LambdaOutOfRange(
            f"|lambda| = {abs(lam)} >= 1: the RLD-type Fisher matrix does not exist "
            "for this rank-deficient model"
        )


def fim_lambda_core(lam, zeta, xi):
    """lambda-LD Fisher matrix in units of 2/kappa^2."""
    _check_lambda(lam, allow_endpoints=False)
    pre = 1.0 / ((1.0 - lam * lam) * (1.0 - lam * lam * xi * xi))
    diag = pre * (1.0 - zeta * zeta - lam * lam * xi * xi)
    off = -1j * pre * lam * zeta * zeta * xi
    return HermitianMatrix2(diag, diag, off)


def fim_lambda_inverse_core(lam, zeta, xi):
    """Inverse lambda-LD Fisher matrix in units of kappa^2/2."""
    _check_lambda(lam, allow_endpoints=True)
    one_z = 1.0 - zeta * zeta
    pre = (1.0 - lam * lam) / (one_z * one_z - lam * lam * xi * xi)
    diag = pre * (one_z - lam * lam * xi * xi)
    off = 1j * pre * lam * zeta * zeta * xi
    return HermitianMatrix2(diag, diag, off)


def fim_lambda_analytic(lam, params, zeta_xi_values=None):
    """lambda-LD Fisher information matrix of the boosted wave packet (units 1/length^2).

    Diagonal entries are equal and the off-diagonal is purely imaginary; the
    matrix does not depend on the shift parameters.
    """
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    return fim_lambda_core(lam, z, x).scaled(2.0 / params.kappa**2)


def fim_lambda_inverse_analytic(lam, params, zeta_xi_values=None):
    """Inverse of ``fim_lambda_analytic`` (units length^2); zero at |lambda| = 1."""
    z, x = zeta_xi(params) if zeta_xi_values is None else zeta_xi_values
    return fim_lambda_inverse_core(lam, z, x).scaled(params.kappa**2 / 2.0)


def sld_fim_inverse(params, zeta_value=None):
    """Inverse SLD Fisher matrix, kappa^2 / (2 (1 - zeta^2)) times the identity."""
    z = zeta_xi(params)[0] if zeta_value is None else zeta_value
    d = params.kappa**2 / (2.0 * (1.0 - z * z))
    return HermitianMatrix2(d, d, 0j)


# ---------------------------------------------------------------------------
# general finite-dimensional models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaWeights:
    """Weights (1 +/- lambda) rho_i / 2 on the support of rho."""

    lam: float
    plus: np.ndarray
    minus: np.ndarray

    @classmethod
    def from_eigenvalues(cls, lam, support_eigenvalues):
        rho = np.asarray(support_eigenvalues, dtype=float)
        return cls(lam, 0.5 * (1.0 + lam) * rho, 0.5 * (1.0 - lam) * rho)


@dataclass(frozen=True)
class FiniteModel:
    """Density matrix ``rho`` (d x d) with derivatives ``drho`` for p parameters."""

    rho: np.ndarray
    drho: tuple
    rank_tol: float = 1e-12
    _eig: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        drho = tuple(np.asarray(d, dtype=complex) for d in self.drho)
        d = rho.shape[0]
        if rho.shape != (d, d):
            raise InvalidParameters("rho must be square")
        scale = max(1.0, np.abs(rho).max())
        if np.abs(rho - rho.conj().T).max() > 1e-10 * scale:
            raise EigenFailure("rho is not Hermitian")
        for k, dr in enumerate(drho):
            if dr.shape != (d, d):
                raise InvalidParameters(f"drho[{k}] has shape {dr.shape}, expected {(d, d)}")
            if np.abs(dr - dr.conj().T).max() > 1e-10 * max(1.0, np.abs(dr).max()):
                raise EigenFailure(f"drho[{k}] is not Hermitian")
            if abs(np.trace(dr)) > 1e-10 * max(1.0, np.abs(dr).max()):
                raise InvalidParameters(f"drho[{k}] is not traceless")
        if abs(np.trace(rho) - 1.0) > 1e-10:
            raise InvalidParameters(f"trace(rho) = {np.trace(rho).real!r}, expected 1")
        rho = 0.5 * (rho + rho.conj().T)
        try:
            evals, evecs = np.linalg.eigh(rho)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh rarely fails on Hermitian input
            raise EigenFailure(str(exc)) from exc
        if evals.min() < -1e-12:
            raise InvalidParameters(f"rho has a negative eigenvalue {evals.min()!r}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "drho", drho)
        object.__setattr__(self, "_eig", (evals, evecs))

    @property
    def dim(self):
        return self.rho.shape[0]

    @property
    def n_params(self):
        return len(self.drho)

    @property
    def eigenvalues(self):
        return self._eig[0]

    @property
    def eigenvectors(self):
        return self._eig[1]

    def support_mask(self):
        evals = self.eigenvalues
        return evals > self.rank_tol * evals.max()

    @property
    def rank(self):
        return int(self.support_mask().sum())


def _eigenbasis_data(model, lam):
    evals, evecs = model.eigenvalues, model.eigenvectors
    support = model.support_mask()
    if abs(lam) >= 1.0 and not support.all():
        raise RldUndefined(
            f"lambda = {lam} requires a full-rank state; rho has rank {support.sum()} < {model.dim}"
        )
    rho = np.where(support, evals, 0.0)
    weights = 0.5 * (1.0 + lam) * rho[:, None] + 0.5 * (1.0 - lam) * rho[None, :]
    # entries with both indices in the kernel are left undetermined (set to zero)
    determined = support[:, None] | support[None, :]
    dmats = [evecs.conj().T @ d @ evecs for d in model.drho]
    return evecs, rho, support, weights, determined, dmats


def lambda_ld_operators(model, lam):
    """lambda-LD operators with their kernel-kernel block set to zero.

    Returned in the original basis. Only the Fisher matrix built from them is
    unique for rank-deficient states.
    """
    _check_lambda(lam, allow_endpoints=True)
    evecs, _, _, weights, determined, dmats = _eigenbasis_data(model, lam)
    ops = []
    for dm in dmats:
        l_eig = np.zeros_like(dm)
        l_eig[determined] = dm[determined] / weights[determined]
        ops.append(evecs @ l_eig @ evecs.conj().T)
    return ops


def fim_lambda_general(model, lam):
    """lambda-LD Fisher information matrix J[m, n] = tr(d_n rho L_m^dagger).

    Works for rank-deficient states when |lambda| < 1; at |lambda| = 1 the
    state must be full rank.
    """
    _check_lambda(lam, allow_endpoints=True)
    evecs, _, _, weights, determined, dmats = _eigenbasis_data(model, lam)
    p = len(dmats)
    inv_w = np.zeros_like(weights)
    inv_w[determined] = 1.0 / weights[determined]
    J = np.empty((p, p), dtype=complex)
    for m in range(p):
        l_m = dmats[m] * inv_w
        for n in range(p):
            J[m, n] = np.sum(dmats[n] * l_m.conj())
    return J


def fim_lambda_projector_form(model, lam):
    """Same matrix as ``fim_lambda_general`` via support projectors.

    Uses sum_i <e_i|d_n rho d_m rho|e_i>/lambda_i^+ +
    sum_i <e_i|d_m rho d_n rho|e_i>/lambda_i^- plus a support-support
    correction, so no kernel vector is ever divided by.
    """
    _check_lambda(lam, allow_endpoints=True)
    evecs, rho, support, weights, _, dmats = _eigenbasis_data(model, lam)
    idx = np.flatnonzero(support)
    w = LambdaWeights.from_eigenvalues(lam, rho[idx])
    p = len(dmats)
    J = np.zeros((p, p), dtype=complex)
    for m in range(p):
        for n in range(p):
            nm = dmats[n] @ dmats[m]
            mn = dmats[m] @ dmats[n]
            total = 0j
            for a, i in enumerate(idx):
                if w.plus[a] > 0:
                    total += nm[i, i] / w.plus[a]
                if w.minus[a] > 0:
                    total += mn[i, i] / w.minus[a]
            for a, i in enumerate(idx):
                for b, j in enumerate(idx):
                    corr = 1.0 / weights[i, j]
                    if w.plus[a] > 0:
                        corr -= 1.0 / w.plus[a]
                    if w.minus[b] > 0:
                        corr -= 1.0 / w.minus[b]
                    total += corr * dmats[n][i, j] * dmats[m][j, i]
            J[m, n] = total
    return J


# ---------------------------------------------------------------------------
# reduced model of the boosted wave packet
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolarGrid:
    """Gauss-Legendre radial nodes on [0, radius/kappa] times a uniform angular rule."""

    n_radial: int = 200
    n_angular: int = 64
    radius_in_decay_units: float = 9.0

    def __post_init__(self):
        if self.n_angular < 32:
            raise InvalidParameters("at least 32 angular nodes are needed for the e^{+-2i Phi} harmonics")
        if self.n_radial < 16:
            raise InvalidParameters("too few radial nodes")


@dataclass(frozen=True)
class SampledModel:
    """The model's state vectors sampled on a polar momentum grid."""

    weights: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    f_down: np.ndarray
    f_up: np.ndarray

    def inner(self, f, g):
        return np.sum(self.weights * np.conj(f) * g)

    def vectors(self):
        """F_down, F_up, p1 F_down, p2 F_down, p1 F_up, p2 F_up."""
        return [
            self.f_down,
            self.f_up,
            self.p1 * self.f_down,
            self.p2 * self.f_down,
            self.p1 * self.f_up,
            self.p2 * self.f_up,
        ]


def sample_model(params, theta=(0.0, 0.0), grid=PolarGrid()):
    """Sample the spin-down and spin-up momentum amplitudes on a polar grid.

    Inner products use the flat measure dp1 dp2: the energy factors of the
    boost cancel against the normalisation of boosted momentum states, and
    the common plane-wave factor in p3 drops out after trace normalisation.
    """
    m, kappa = params.mass, params.kappa
    p_max = grid.radius_in_decay_units / kappa
    p, wr = gauss_legendre_rule(grid.n_radial, 0.0, p_max)
    phi = 2.0 * np.pi * np.arange(grid.n_angular) / grid.n_angular
    wa = 2.0 * np.pi / grid.n_angular
    pp, ph = np.meshgrid(p, phi, indexing="ij")
    weights = (wr[:, None] * pp * wa).ravel()
    p_abs = pp.ravel()
    angle = ph.ravel()
    p1 = p_abs * np.cos(angle)
    p2 = p_abs * np.sin(angle)

    cos_half, sin_half = rotation_half_angles(p_abs, m, params.inv_cosh_chi)
    gauss = (kappa / np.sqrt(np.pi)) * np.exp(-0.5 * kappa**2 * p_abs**2)
    shift = np.exp(-1j * (p1 * theta[0] + p2 * theta[1]))
    f_down = gauss * shift * cos_half
    f_up = -gauss * shift * np.exp(1j * angle) * sin_half
    return SampledModel(weights, p1, p2, f_down, f_up)


def build_reduced_model(params, theta=(0.0, 0.0), grid=PolarGrid(), rank_tol=1e-12, orth_tol=1e-10):
    """Finite matrix model of the spin-traced state on span{F, p1 F, p2 F}."""
    if not 0.0 < params.velocity < 1.0:
        raise InvalidParameters("build_reduced_model needs 0 < V < 1")
    sm = sample_model(params, theta, grid)
    vecs = sm.vectors()
    basis, coeffs = orthonormalize(vecs, sm.inner, rank_tol=orth_tol)
    c_down, c_up = coeffs[:, 0], coeffs[:, 1]
    rho = np.outer(c_down, c_down.conj()) + np.outer(c_up, c_up.conj())
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-8:
        raise GridTooCoarse(f"trace of the reduced state is {trace!r}; refine the polar grid")
    drho = []
    # d/d theta_j F = -i p_j F; columns 2..5 hold p1 F_down, p2 F_down, p1 F_up, p2 F_up
    for j in range(2):
        d_down = -1j * coeffs[:, 2 + j]
        d_up = -1j * coeffs[:, 4 + j]
        dr = (
            np.outer(d_down, c_down.conj())
            + np.outer(c_down, d_down.conj())
            + np.outer(d_up, c_up.conj())
            + np.outer(c_up, d_up.conj())
        )
        drho.append(dr)
    return FiniteModel(rho, tuple(drho), rank_tol=rank_tol)


def reduced_model_fim(lam, params, theta=(0.0, 0.0), grid=PolarGrid()):
    """``fim_lambda_general`` on the reduced model, as a HermitianMatrix2."""
    J = fim_lambda_general(build_reduced_model(params, theta, grid), lam)
    return HermitianMatrix2.from_array(J, atol=1e-9)


__all__ = [
    "FiniteModel",
    "HermitianMatrix2",
    "LambdaWeights",
    "ModelParams",
    "PolarGrid",
    "SampledModel",
    "build_reduced_model",
    "fim_lambda_analytic",
    "fim_lambda_core",
    "fim_lambda_general",
    "fim_lambda_inverse_analytic",
    "fim_lambda_inverse_core",
    "fim_lambda_projector_form",
    "lambda_ld_operators",
    "reduced_model_fim",
    "sample_model",
    "sld_fim_inverse",
]
