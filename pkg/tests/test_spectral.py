import numpy as np
import pytest

from conftest import cases, form, rel
from spectral_suite import expanded_R, identities, norm
from hodgekit.corpus import bump_form
from hodgekit.exterior import FormIndex
from hodgekit.grid import GridForm, GridSpec, SpectralForm, fft_form, ifft_form, lp_norm
from hodgekit.polynomial import Polynomial
from hodgekit.spectral import (
    MultiplierSpec,
    apply_scalar_multiplier,
    grid_d,
    grid_delta,
    grid_multiplier,
    hodge_decompose,
    lizorkin_mask,
    potential_U,
    riesz_R,
    spectral_d,
    spectral_delta,
)


@pytest.mark.parametrize("spec,k", cases(3, 32), ids=lambda v: str(v) if isinstance(v, int) else f"n{v.n}")
def test_identity_suite(spec, k):
    for name, r in identities(spec, k, seed=k).items():
        assert r <= 1e-10, name


def single_mode(spec, k, mode, idx=None):
    F = np.zeros(spec.shape, dtype=complex)
    F[mode] = spec.L**spec.n
    idx = idx or FormIndex(tuple(range(k)), spec.n)
    return SpectralForm(spec, k, {idx: F})


def test_identity_multiplier_and_riesz_symbol():
    spec = GridSpec(2, 16, 2 * np.pi)
    F = single_mode(spec, 0, (3, 1))
    assert norm(apply_scalar_multiplier(F, MultiplierSpec.identity()) - F) == 0
    xi = np.array([3.0, 1.0])
    for j in range(2):
        out = apply_scalar_multiplier(F, MultiplierSpec.riesz_direction(j))[()][3, 1]
        assert out == pytest.approx(1j * xi[j] / np.linalg.norm(xi) * spec.L**2)


def test_d_of_single_mode():
    spec = GridSpec(2, 16, 2 * np.pi)
    out = spectral_d(single_mode(spec, 0, (2, 5)))
    assert out[(0,)][2, 5] == pytest.approx(-2j * spec.L**2)
    assert out[(1,)][2, 5] == pytest.approx(-5j * spec.L**2)


def test_delta_of_constant_and_U_of_zero():
    spec = GridSpec(2, 16)
    const = GridForm(spec, 1, {FormIndex((0,), 2): np.full(spec.shape, 3.0)})
    assert lp_norm(grid_delta(const), 2) < 1e-12
    assert norm(potential_U(SpectralForm.zeros(spec, 1))) == 0


def test_U_single_mode_closed_form():
    # U = I^1 R* = I^2 delta: for theta = e dx1, U theta = |xi|^-2 * (i xi_1) e
    spec = GridSpec(2, 16, 2 * np.pi)
    F = single_mode(spec, 1, (1, 2))
    out = potential_U(F)[()][1, 2]
    assert out == pytest.approx(1j * 1 / 5 * spec.L**2)


def test_laplacian_after_I2_kills_zero_mode_only():
    spec = GridSpec(2, 16)
    F = fft_form(form(spec, 0, 1) + GridForm.scalar(spec, np.ones(spec.shape)))
    G = apply_scalar_multiplier(apply_scalar_multiplier(F, MultiplierSpec.riesz_potential(2)), MultiplierSpec.laplacian())
    assert G[()][0, 0] == 0
    H = G - F
    H[()][0, 0] = 0
    assert norm(H) <= 1e-12 * norm(F)


def test_odd_symbols_vanish_on_nyquist():
    spec = GridSpec(2, 16)
    s = MultiplierSpec.riesz_direction(0).symbol(spec)
    assert not s[8, :].any()
    d = MultiplierSpec.derivative(0).symbol(spec)
    assert not d[8, :].any()
    assert MultiplierSpec.laplacian().symbol(spec)[8, 0] != 0
    assert not lizorkin_mask(spec)[0, 0] and not lizorkin_mask(spec)[:, 8].any()


def test_polynomial_symbol():
    spec = GridSpec(1, 16, 2 * np.pi)
    p = Polynomial(1, {(2,): 1})  # xi^2 = |xi|^2
    f = form(spec, 0, 4)
    assert rel(grid_multiplier(f, MultiplierSpec.polynomial(p)), grid_multiplier(f, MultiplierSpec.laplacian())) < 1e-13


@pytest.mark.parametrize("kind,kwargs", [("riesz_potential", {}), ("derivative", {}), ("poly", {}), ("bogus", {})])
def test_multiplier_spec_validation(kind, kwargs):
    with pytest.raises(ValueError):
        MultiplierSpec(kind, **kwargs)


def test_expansion_sign_convention_is_pinned():
    spec = GridSpec(3, 16)
    th = fft_form(form(spec, 1, 0))
    assert norm(riesz_R(th) - expanded_R(th)) <= 1e-12 * norm(th)
    assert norm(riesz_R(th) + expanded_R(th)) > 0.5 * norm(th)


def test_multiplier_keeps_real_forms_real():
    spec = GridSpec(3, 16)
    F = fft_form(form(spec, 2, 2))
    for m in (MultiplierSpec.riesz_direction(1), MultiplierSpec.riesz_potential(0.5), MultiplierSpec.derivative(2)):
        ifft_form(apply_scalar_multiplier(F, m), imag_tol=1e-10)


# -- hodge decomposition -----------------------------------------------------------

@pytest.mark.parametrize("seed", range(10))
def test_hodge_random(seed):
    n = 1 + seed % 3
    spec = GridSpec(n, 32)
    k = seed % (n + 1)
    res = hodge_decompose(form(spec, k, seed))
    assert res.report["residual"] <= 1e-10
    assert not res.report["projected"]
    assert res.alpha.k == k - 1 if k > 0 else res.alpha.k == -1


def test_hodge_exact_and_coexact_inputs():
    spec = GridSpec(2, 64)
    exact = grid_d(form(spec, 0, 1))
    res = hodge_decompose(exact)
    assert lp_norm(res.beta, 2) <= 1e-10 * lp_norm(exact, 2)
    assert rel(grid_d(res.alpha), exact) <= 1e-10
    coexact = grid_delta(form(spec, 2, 2))
    res = hodge_decompose(coexact)
    assert lp_norm(res.alpha, 2) <= 1e-10 * lp_norm(coexact, 2)
    assert rel(grid_delta(res.beta), coexact) <= 1e-10


def test_hodge_bump_inputs():
    spec = GridSpec(2, 64)
    b0, b2 = bump_form(spec, 0, 3, 4), bump_form(spec, 2, 4, 4)
    res = hodge_decompose(grid_d(b0))
    assert res.report["norm_beta"] <= 1e-10 * res.report["norm_theta"]
    res = hodge_decompose(grid_delta(b2))
    assert res.report["norm_alpha"] <= 1e-10 * res.report["norm_theta"]


def test_hodge_zero_and_projected_inputs():
    spec = GridSpec(2, 16)
    res = hodge_decompose(GridForm.zeros(spec, 1))
    assert res.report["zero_input"] and res.report["residual"] == 0
    shifted = form(spec, 1, 0) + GridForm(spec, 1, {FormIndex((0,), 2): np.full(spec.shape, 0.5)})
    res = hodge_decompose(shifted)
    assert res.report["projected"] and res.report["projection_defect"] > 0.1
    assert res.report["residual"] <= 1e-10
