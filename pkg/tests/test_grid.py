import math
import os
import warnings

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from conftest import form
from hodgekit.corpus import bump_form, gaussian
from hodgekit.grid import (
    DilationSupportWarning,
    GridForm,
    GridSpec,
    SpectralForm,
    dilate,
    fft_form,
    fft_workers,
    ifft_form,
    inner,
    lp_norm,
    spectral_inner,
)


@pytest.mark.parametrize("args", [(0, 8), (5, 8), (2, 12), (2, 1), (2, 8, 0.0), (2, 8, -1.0)])
def test_gridspec_validation(args):
    with pytest.raises(ValueError):
        GridSpec(*args)


def test_constant_transform():
    spec = GridSpec(2, 16, 3.0)
    F = fft_form(GridForm.scalar(spec, np.ones(spec.shape)))[()]
    assert F[0, 0] == pytest.approx(spec.L**2)
    F[0, 0] = 0
    assert np.abs(F).max() < 1e-12


def test_single_cosine_mode():
    spec = GridSpec(1, 32, 2.0)
    x = spec.coords()
    F = fft_form(GridForm.scalar(spec, np.cos(2 * np.pi * x / spec.L)))[()]
    big = np.flatnonzero(np.abs(F) > 1e-9)
    assert sorted(big) == [1, 31]
    assert np.allclose(np.abs(F[big]), spec.L / 2)
    assert np.allclose(F[1], np.conj(F[31]))


@pytest.mark.parametrize("n,k", [(1, 0), (2, 1), (3, 2)])
def test_roundtrip(n, k):
    f = form(GridSpec(n, 16), k, seed=3)
    g = ifft_form(fft_form(f), imag_tol=1e-12)
    assert np.abs(g.stack() - f.stack()).max() < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_parseval(n):
    spec = GridSpec(n, 16, 1.7)
    f, g = form(spec, 1, 1), form(spec, 1, 2)
    a = inner(f, g)
    b = spectral_inner(fft_form(f), fft_form(g))
    assert abs(a - b.real) <= 1e-10 * abs(a) and abs(b.imag) <= 1e-10 * abs(a)


@pytest.mark.parametrize("j", [0, 1])
def test_differentiation_rule(j):
    spec = GridSpec(2, 32, 2 * math.pi)
    x, y = spec.mesh()
    f = GridForm.scalar(spec, np.broadcast_to(np.sin(3 * x) * np.cos(2 * y) + np.cos(x + y), spec.shape))
    df = [3 * np.cos(3 * x) * np.cos(2 * y) - np.sin(x + y), -2 * np.sin(3 * x) * np.sin(2 * y) - np.sin(x + y)][j]
    lhs = fft_form(GridForm.scalar(spec, np.broadcast_to(df, spec.shape)))[()]
    rhs = -1j * spec.frequencies()[j] * fft_form(f)[()]
    assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(rhs).max()


def test_lp_norm_homogeneity_and_constant():
    spec = GridSpec(2, 32, 1.0)
    one = GridForm.scalar(spec, np.ones(spec.shape))
    for p in (1, 1.5, 2, 3, math.inf):
        assert lp_norm(one, p) == pytest.approx(1.0)
    f = bump_form(spec, 1, 0, 3)
    assert lp_norm(f * -2.5, 3) == pytest.approx(2.5 * lp_norm(f, 3))
    with pytest.raises(ValueError):
        lp_norm(one, 0.5)


@pytest.mark.parametrize("n,p", [(1, 1), (2, 1.5), (2, 3), (3, 2)])
def test_lp_norm_gaussian_oracle(n, p):
    # ||exp(-|x|^2/(2 s^2))||_p^p = (2 pi s^2 / p)^(n/2)
    sigma = 0.3
    spec = GridSpec(n, 64, 12 * sigma)
    exact = (2 * math.pi * sigma**2 / p) ** (n / (2 * p))
    assert lp_norm(gaussian(spec, sigma), p) == pytest.approx(exact, rel=1e-6)


def test_dilate_identity():
    f = bump_form(GridSpec(2, 32), 1, 0, 3)
    assert dilate(f, 0) is f


@pytest.mark.parametrize("k,s", [(0, 1.5), (0, 2), (1, 2), (1, 3)])
def test_dilate_norm_scaling(k, s):
    spec = GridSpec(2, 128, 2 * math.pi)
    f = bump_form(spec, k, 4, 8)
    ratio = lp_norm(dilate(f, 1), s) / lp_norm(f, s)
    assert ratio == pytest.approx(2.0 ** (k - 2 / s), rel=1e-3)


def test_dilate_contraction_roundtrip():
    spec = GridSpec(2, 128)
    # narrow enough that nothing is lost outside the central half-box
    f = bump_form(spec, 0, 1, 4)
    g = dilate(dilate(f, -1, tol=1e-10), 1)
    assert np.abs(g.stack() - f.stack()).max() < 1e-8


def test_dilation_warns_when_unsupported():
    spec = GridSpec(2, 32)
    f = bump_form(spec, 0, 0, 8)
    with pytest.warns(DilationSupportWarning):
        dilate(f, -2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        dilate(bump_form(spec, 0, 0, 2), -1, tol=1e-6)


def test_degree_bounds():
    spec = GridSpec(2, 8)
    assert GridForm.zeros(spec, 3).stack().shape[0] == 0
    with pytest.raises(ValueError):
        GridForm.zeros(spec, 4)
    with pytest.raises(ValueError):
        SpectralForm(spec, 1, {next(iter(GridForm.zeros(spec, 2).components)): np.zeros(spec.shape)})


def test_threads_env(monkeypatch):
    monkeypatch.setenv("HODGEKIT_THREADS", "2")
    assert fft_workers() == 2
    monkeypatch.setenv("HODGEKIT_THREADS", "0")
    assert fft_workers() == -1
    monkeypatch.setenv("HODGEKIT_THREADS", "many")
    with pytest.raises(ValueError):
        fft_workers()


def test_thread_count_does_not_change_results(monkeypatch):
    f = form(GridSpec(3, 32), 1, 9)
    monkeypatch.setenv("HODGEKIT_THREADS", "1")
    a = fft_form(f)
    monkeypatch.setenv("HODGEKIT_THREADS", "4")
    b = fft_form(f)
    assert all(np.array_equal(a.components[i], b.components[i]) for i in a.components)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 500), st.floats(0.5, 10))
def test_linearity_hypothesis(n, seed, c):
    spec = GridSpec(n, 8)
    f, g = form(spec, 0, seed), form(spec, 0, seed + 1)
    lhs = fft_form(f * c + g)[()]
    rhs = c * fft_form(f)[()] + fft_form(g)[()]
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())
