import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relqfi.errors import EigenFailure, GridTooCoarse, InvalidParameters, LambdaOutOfRange, RldUndefined
from relqfi.fisher import (
    FiniteModel,
    HermitianMatrix2,
    LambdaWeights,
    PolarGrid,
    build_reduced_model,
    fim_lambda_analytic,
    fim_lambda_core,
    fim_lambda_general,
    fim_lambda_inverse_analytic,
    fim_lambda_projector_form,
    lambda_ld_operators,
    reduced_model_fim,
    sample_model,
    sld_fim_inverse,
)
from relqfi.model import ModelParams, zeta_xi
from relqfi.numerics import orthonormalize
from relqfi.tradeoff import omega

SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2


def _random_model(rng, d=3, p=2, rank=None):
    rank = d if rank is None else rank
    a = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    drho = []
    for _ in range(p):
        h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = h + h.conj().T
        drho.append(-1j * (h @ rho - rho @ h))
    return FiniteModel(rho, tuple(drho))


# --- analytic matrices ----------------------------------------------------------

def test_rest_frame_sld_is_scaled_identity():
    p = ModelParams(0.8, 0.0)
    assert np.allclose(fim_lambda_analytic(0.0, p).to_array(), 2 / p.kappa**2 * np.eye(2), atol=1e-15)
    assert np.allclose(sld_fim_inverse(p).to_array(), p.kappa**2 / 2 * np.eye(2), atol=1e-15)


def test_lambda_sign_transposes():
    p = ModelParams(1.0, 0.5)
    a = fim_lambda_analytic(0.4, p).to_array()
    b = fim_lambda_analytic(-0.4, p).to_array()
    assert np.allclose(a, b.T, atol=1e-15)
    assert np.real(a[0, 1]) == 0 and a[0, 0] == a[1, 1]


def test_inverse_endpoints():
    p = ModelParams(1.0, 0.7)
    assert np.all(fim_lambda_inverse_analytic(1.0, p).to_array() == 0)
    assert np.all(fim_lambda_inverse_analytic(-1.0, p).to_array() == 0)
    z = zeta_xi(p)[0]
    assert np.allclose(fim_lambda_inverse_analytic(0.0, p).to_array(), p.kappa**2 / (2 * (1 - z * z)) * np.eye(2))
    assert sld_fim_inverse(p) == fim_lambda_inverse_analytic(0.0, p)
    with pytest.raises(LambdaOutOfRange):
        fim_lambda_analytic(1.0, p)
    with pytest.raises(LambdaOutOfRange):
        fim_lambda_inverse_analytic(1.5, p)


def test_inverse_product_example():
    p = ModelParams(1.0, 0.8)
    prod = fim_lambda_analytic(0.3, p) @ fim_lambda_inverse_analytic(0.3, p)
    assert np.abs(prod - np.eye(2)).max() < 1e-10


def test_sld_inverse_small_spread_light_speed():
    p = ModelParams(1e-4, 1.0)
    assert abs(sld_fim_inverse(p).a11 / (p.kappa**2 / 2) - 1 / (1 - math.pi / 8)) < 1e-3


def test_sld_inverse_increases_with_velocity():
    d = [sld_fim_inverse(ModelParams(1.0, v)).a11 for v in np.linspace(0, 1, 25)]
    assert np.all(np.diff(d) > 0)


@given(lam=st.floats(-0.999, 0.999), z=st.floats(0.0, 0.8), x=st.floats(0.01, 1.0))
def test_family_psd(lam, z, x):
    if z * z + x < 1:
        assert fim_lambda_core(lam, z, x).is_psd()


@given(kp=st.floats(0.05, 5.0), v=st.floats(0.05, 1.0), lam=st.floats(0.01, 1.0))
def test_sld_dominates_in_trace_not_in_matrix_order(kp, v, lam):
    p = ModelParams(kp, v)
    zx = zeta_xi(p)
    diff = sld_fim_inverse(p, zx[0]).to_array() - fim_lambda_inverse_analytic(lam, p, zx).to_array()
    scale = p.kappa**2
    assert np.trace(diff).real >= -1e-14 * scale
    # the matrix order fails exactly where the lambda bound says something new
    w = omega(lam, p, zx)
    if abs(w) > 1e-9 * scale:
        assert (np.linalg.eigvalsh(diff).min() >= 0) == (w < 0)


def test_hermitian_matrix_helpers():
    m = HermitianMatrix2(2.0, 3.0, 1 - 1j)
    assert m.a21 == 1 + 1j and m.trace() == 5.0 and abs(m.det() - 4.0) < 1e-15
    assert HermitianMatrix2.from_array(m.to_array()) == m
    with pytest.raises(InvalidParameters):
        HermitianMatrix2.from_array(np.array([[1, 1j], [1j, 1]]))


# --- general models ---------------------------------------------------------

def test_pure_qubit():
    rho = np.diag([1.0, 0.0]).astype(complex)
    model = FiniteModel(rho, (-1j * (SX @ rho - rho @ SX),))
    assert model.rank == 1
    for lam in (-0.9, -0.2, 0.0, 0.5, 0.95):
        j = fim_lambda_general(model, lam)[0, 0]
        assert abs(j - 1 / (1 - lam * lam)) < 1e-10
    with pytest.raises(RldUndefined):
        fim_lambda_general(model, 1.0)


def test_full_rank_qubit_rld():
    rho = np.diag([0.7, 0.3]).astype(complex)
    dr = -1j * (SX @ rho - rho @ SX)
    j = fim_lambda_general(FiniteModel(rho, (dr,)), 1.0)[0, 0]
    assert abs(j - np.trace(dr @ np.linalg.inv(rho) @ dr)) < 1e-12


def test_model_validation():
    with pytest.raises(EigenFailure):
        FiniteModel(np.array([[0.5, 0.1], [0.3, 0.5]]), ())
    with pytest.raises(InvalidParameters):
        FiniteModel(np.eye(2), ())
    with pytest.raises(InvalidParameters):
        FiniteModel(np.eye(2) / 2, (np.eye(2),))
    with pytest.raises(InvalidParameters):
        FiniteModel(np.diag([1.2, -0.2]), ())


def test_lambda_weights():
    w = LambdaWeights.from_eigenvalues(0.3, [0.6, 0.4])
    assert np.allclose(w.plus + w.minus, [0.6, 0.4])


def test_random_qutrits_hermitian_psd():
    rng = np.random.default_rng(3)
    for _ in range(100):
        model = _random_model(rng, d=3, p=3)
        lam = float(rng.uniform(-1, 1))
        j = fim_lambda_general(model, lam)
        assert np.abs(j - j.conj().T).max() < 1e-10 * np.abs(j).max()
        assert np.linalg.eigvalsh(0.5 * (j + j.conj().T)).min() > -1e-10 * np.abs(j).max()


def test_sld_matches_elementwise_solve():
    rng = np.random.default_rng(4)
    for _ in range(20):
        model = _random_model(rng, d=4, p=2)
        ev, u = np.linalg.eigh(model.rho)
        ls = []
        for d in model.drho:
            de = u.conj().T @ d @ u
            ls.append(u @ (2 * de / (ev[:, None] + ev[None, :])) @ u.conj().T)
        ref = np.array([[np.trace(model.drho[n] @ ls[m]) for n in range(2)] for m in range(2)])
        assert np.abs(fim_lambda_general(model, 0.0) - ref).max() < 1e-10 * np.abs(ref).max()


@pytest.mark.parametrize("rank", [2, 4])
def test_projector_form_agrees(rank):
    rng = np.random.default_rng(rank)
    for lam in (0.0, 0.4, -0.8):
        model = _random_model(rng, d=4, p=2, rank=rank)
        a = fim_lambda_general(model, lam)
        b = fim_lambda_projector_form(model, lam)
        assert np.abs(a - b).max() < 1e-9 * np.abs(a).max()


def test_operators_solve_defining_equation_on_support():
    rng = np.random.default_rng(5)
    model = _random_model(rng, d=3, p=1)
    lam = 0.35
    (op,) = lambda_ld_operators(model, lam)
    lhs = 0.5 * (1 + lam) * model.rho @ op + 0.5 * (1 - lam) * op @ model.rho
    assert np.abs(lhs - model.drho[0]).max() < 1e-10


# --- reduced model of the wave packet ------------------------------------------

def test_reduced_model_structure():
    p = ModelParams(1.0, 0.5)
    m = build_reduced_model(p)
    assert abs(np.trace(m.rho).real - 1) < 1e-9
    assert m.rank == 2 and m.dim <= 6
    sm = sample_model(p)
    assert abs(sm.inner(sm.f_up, sm.f_down)) < 1e-9
    basis, _ = orthonormalize(sm.vectors(), sm.inner)
    gram = np.array([[sm.inner(a, b) for b in basis] for a in basis])
    assert np.abs(gram - np.eye(len(basis))).max() < 1e-10


def test_reduced_model_shift_independent():
    p = ModelParams(1.0, 0.5)
    a = reduced_model_fim(0.5, p).to_array()
    b = reduced_model_fim(0.5, p, theta=(0.3 * p.kappa, -0.2 * p.kappa)).to_array()
    assert np.abs(a - b).max() < 1e-8 * np.abs(a).max()
    ref = fim_lambda_analytic(0.5, p).to_array()
    # the general routine's index order is the transpose of the closed form
    assert np.linalg.norm(a.T - ref) / np.linalg.norm(ref) < 1e-6


def test_slow_observer_has_little_spin_up():
    sm = sample_model(ModelParams(1.0, 1e-3))
    assert sm.inner(sm.f_up, sm.f_up).real < 1e-5


def test_reduced_model_errors():
    with pytest.raises(InvalidParameters):
        build_reduced_model(ModelParams(1.0, 1.0))
    with pytest.raises(InvalidParameters):
        PolarGrid(n_angular=16)
    with pytest.raises(GridTooCoarse):
        build_reduced_model(ModelParams(1.0, 0.5), grid=PolarGrid(n_radial=16, radius_in_decay_units=0.5))
