import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relqfi import _kernels, wavepacket
from relqfi.errors import InvalidParameters, NoPeak
from relqfi.model import ModelParams
from relqfi.wavepacket import (
    density,
    density_direct,
    peak_radius,
    rotational_symmetry_residual,
    sample,
    spin_up_amplitude,
)


def test_zero_on_axis():
    for v in (0.1, 0.5, 1.0):
        assert spin_up_amplitude(0.0, 0.0, ModelParams(1.0, v)) == 0


def test_slow_observer_amplitude_is_linear_in_velocity():
    r = 1.2
    a1 = abs(spin_up_amplitude(r, 0.0, ModelParams(1.0, 1e-3)))
    a2 = abs(spin_up_amplitude(r, 0.0, ModelParams(1.0, 2e-3)))
    fast = abs(spin_up_amplitude(r, 0.0, ModelParams(1.0, 1.0)))
    assert abs(a2 / a1 - 2.0) < 1e-5
    assert a1 / fast < 1e-3


def test_sample_density():
    s = sample(1.0, 0.0, ModelParams(1.0, 0.6))
    assert abs(s.density - abs(s.amplitude) ** 2) <= 1e-14 * s.density
    assert s.density == density(1.0, 0.0, ModelParams(1.0, 0.6))


def test_bessel_form_matches_direct_form():
    p = ModelParams(1.0, 1.0)
    for r in (0.3, 1.0, 2.5, 6.0):
        a = density(r, 0.0, p)
        b = density_direct(r, 0.0, p)
        assert abs(a - b) / a < 1e-7


@pytest.mark.parametrize("backend", sorted(_kernels.IMPLEMENTATIONS))
def test_direct_form_backends(backend):
    p = ModelParams(0.5, 0.8)
    x = np.array([0.2, 0.7, 1.5])
    got = density_direct(x, -x, p, backend=backend)
    ref = np.array([density(math.hypot(v, v), 0.0, p) for v in x])
    assert np.max(np.abs(got - ref) / ref) < 1e-7


@settings(max_examples=20)
@given(kp=st.floats(0.1, 2.0), v=st.floats(0.05, 1.0), r=st.floats(0.05, 5.0), d=st.floats(0, 2 * math.pi))
def test_bessel_form_matches_direct_form_random(kp, v, r, d):
    p = ModelParams(kp, v)
    rr = r * p.kappa
    a = density(rr, 0.0, p)
    b = density_direct(rr * math.cos(d), rr * math.sin(d), p)
    assert abs(a - b) / a < 1e-6


def test_axial_symmetry():
    p = ModelParams(1.0, 1.0)
    deltas = np.linspace(0, 2 * math.pi, 8, endpoint=False)
    assert rotational_symmetry_residual(p, peak_radius(p), deltas) < 1e-6
    assert rotational_symmetry_residual(ModelParams(0.3, 0.4), 0.7, deltas) < 1e-6
    assert rotational_symmetry_residual(ModelParams(1.0, 1e-3), 1.0, deltas) < 1e-6


def test_peak_is_a_local_maximum():
    p = ModelParams(1.0, 1.0)
    r = peak_radius(p)
    assert 0 < r < 10 * p.kappa
    h = 1e-3 * r
    lo, mid, hi = density(r - h, 0.0, p), density(r, 0.0, p), density(r + h, 0.0, p)
    assert lo < mid > hi
    # central difference of the density, relative to its scale
    assert abs(hi - lo) / (2 * h) * r / mid < 1e-6


def test_peak_moves_outward_with_velocity():
    # in units of kappa, the peak radius grows with V at fixed m kappa
    for kp in (0.5, 1.0):
        radii = [peak_radius(ModelParams(kp, v)) / kp for v in (0.25, 0.5, 0.75, 1.0)]
        assert all(a < b for a, b in zip(radii, radii[1:]))


def test_off_plane_amplitude():
    p = ModelParams(1.0, 0.6)
    up = spin_up_amplitude(1.0, 0.4, p)
    down = spin_up_amplitude(1.0, -0.4, p)
    assert abs(up - down.conjugate()) < 1e-12 * abs(up)
    with pytest.raises(InvalidParameters):
        spin_up_amplitude(1.0, 0.4, ModelParams(1.0, 1.0))


def test_errors(monkeypatch):
    with pytest.raises(InvalidParameters):
        spin_up_amplitude(1.0, 0.0, ModelParams(1.0, 0.0))
    with pytest.raises(InvalidParameters):
        spin_up_amplitude(-1.0, 0.0, ModelParams(1.0, 0.5))
    with pytest.raises(InvalidParameters):
        density_direct(np.zeros(2), np.zeros(3), ModelParams(1.0, 0.5))
    monkeypatch.setattr(wavepacket, "density", lambda r, x3, params, spec: r)
    with pytest.raises(NoPeak):
        peak_radius(ModelParams(1.0, 0.5))
