import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwsw.grid import SpectralGrid, green_kernel, impulse_response


def band_limited(grid, rng, modes=20):
    coeff = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
    k = np.arange(1, modes + 1)
    return sum((c * np.exp(1j * np.pi * kk * grid.x / grid.half_width)).real
               for c, kk in zip(coeff, k)) + rng.standard_normal()


def test_grid_layout(grid):
    assert grid.spacing * grid.size == 2 * grid.half_width
    assert grid.x[0] == -grid.half_width
    assert grid.x[grid.mid] == 0.0
    xi = np.sort(grid.xi)
    assert xi[0] == pytest.approx(-np.pi * grid.size / (2 * grid.half_width))
    np.testing.assert_allclose(xi[1:], -xi[1:][::-1])


@pytest.mark.parametrize("bad", [dict(size=1000), dict(size=0), dict(half_width=-1.0)])
def test_rejects_bad_grids(bad):
    with pytest.raises(ValueError):
        SpectralGrid(**{"half_width": 10.0, "size": 64, **bad})


def test_derivative_of_constant(grid):
    assert np.max(np.abs(grid.derivative(np.ones(grid.size)))) == 0.0


@pytest.mark.parametrize("m", [64, 256, 1024])
def test_derivative_of_sine(m):
    g = SpectralGrid(40.0, m)
    k = np.pi / g.half_width
    err = grid_err = np.max(np.abs(g.derivative(np.sin(k * g.x)) - k * np.cos(k * g.x)))
    assert grid_err <= 1e-12, err


def test_derivative_of_sech2(grid):
    x = grid.x
    f = 1 / np.cosh(x / 2) ** 2
    exact = -np.tanh(x / 2) / np.cosh(x / 2) ** 2
    assert np.max(np.abs(grid.derivative(f) - exact)) <= 1e-10


def test_derivative_rejects_nonfinite(grid):
    f = np.zeros(grid.size)
    f[3] = np.nan
    with pytest.raises(ValueError):
        grid.derivative(f)


def test_helmholtz_inverse_examples(grid):
    np.testing.assert_allclose(grid.helmholtz_inverse(np.ones(grid.size), 2.0, 1.0), 0.5, atol=1e-15)
    k = np.pi / grid.half_width
    out = grid.helmholtz_inverse(np.cos(k * grid.x), 1.0, 1.0)
    np.testing.assert_allclose(out, np.cos(k * grid.x) / (1 + k**2), atol=1e-14)


def test_helmholtz_roundtrip(grid):
    phi = 0.9 / np.cosh(grid.x / 2) ** 2 + 0.1 * np.exp(-(grid.x - 3) ** 2)
    sigma = 1.7
    forward = sigma * phi - grid.derivative(phi, 2)
    assert np.max(np.abs(grid.helmholtz_inverse(forward, sigma, 1.0) - phi)) <= 1e-12


@pytest.mark.parametrize("s,mass", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_helmholtz_rejects_bad_parameters(grid, s, mass):
    with pytest.raises(ValueError):
        grid.helmholtz_inverse(np.ones(grid.size), s, mass)


def test_impulse_response_matches_green_function_away_from_cusp(grid):
    r = impulse_response(grid, 4.0)
    far = np.abs(grid.x) > 2
    assert np.max(np.abs(r - green_kernel(grid.x, 4.0))[far]) < 5e-6


def test_shift_examples(grid):
    f = np.exp(-grid.x**2) + 0.3 * np.exp(-(grid.x - 2) ** 2 / 3)
    np.testing.assert_array_equal(grid.shift(f, 0.0), f)
    np.testing.assert_allclose(grid.shift(f, grid.spacing), np.roll(f, 1), atol=1e-14)
    np.testing.assert_allclose(grid.shift(grid.shift(f, 0.37), 1.91), grid.shift(f, 2.28), atol=1e-12)


def test_shift_complex_field(grid):
    u = np.exp(0.5j * grid.x) * np.exp(-grid.x**2 / 4)
    exact = np.exp(0.5j * (grid.x - 1.3)) * np.exp(-(grid.x - 1.3) ** 2 / 4)
    np.testing.assert_allclose(grid.shift(u, 1.3), exact, atol=1e-12)


def test_quadrature_examples(grid):
    assert grid.integrate(np.zeros(grid.size)) == 0.0
    s = 1 / np.cosh(grid.x / 2) ** 2
    assert grid.integrate(s) == pytest.approx(4.0, abs=1e-10)
    assert grid.integrate(s**2) == pytest.approx(8 / 3, abs=1e-10)


def test_evaluate_interpolates_between_nodes(grid):
    f = 1 / np.cosh(grid.x / 2) ** 2
    pts = np.array([0.1234, -3.3, 7.77])
    np.testing.assert_allclose(grid.evaluate(f, pts), 1 / np.cosh(pts / 2) ** 2, atol=1e-12)
    np.testing.assert_allclose(grid.evaluate(f, grid.x[:5]), f[:5], atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_parseval(seed):
    g = SpectralGrid(10.0, 128)
    f = band_limited(g, np.random.default_rng(seed))
    phys = g.integrate(f**2)
    assert abs(phys - g.spectral_energy(f)) <= 1e-10 * phys


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), s=st.floats(0.1, 10.0))
def test_derivative_commutes_with_helmholtz_inverse(seed, s):
    g = SpectralGrid(10.0, 128)
    f = band_limited(g, np.random.default_rng(seed))
    a = g.derivative(g.helmholtz_inverse(f, s))
    b = g.helmholtz_inverse(g.derivative(f), s)
    assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(f)))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.floats(-15.0, 15.0))
def test_shift_preserves_integrals(seed, d):
    g = SpectralGrid(10.0, 128)
    f = band_limited(g, np.random.default_rng(seed))
    fs = g.shift(f, d)
    assert abs(g.integrate(fs) - g.integrate(f)) <= 1e-12 * max(1.0, g.integrate(np.abs(f)))
    assert abs(g.integrate(fs**2) - g.integrate(f**2)) <= 1e-12 * g.integrate(f**2)
