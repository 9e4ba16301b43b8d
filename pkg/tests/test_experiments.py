import math

import numpy as np
import pytest

from conftest import form
from hodgekit.corpus import bump_form
from hodgekit.experiments import (
    apriori_check,
    cohomology_check,
    critical_q,
    fit_exponent,
    gaffney_check,
    sobolev_constant_probe,
    sobolev_scaling,
)
from hodgekit.grid import GridForm, GridSpec, fft_form, ifft_form
from hodgekit.spectral import projector_E, projector_Estar


def test_fit_exponent():
    t = [1, 2, 4]
    assert fit_exponent(t, [3 * s**-0.5 for s in t]) == pytest.approx(-0.5)


@pytest.mark.parametrize("n,k", [(1, 0), (2, 1), (3, 2), (3, 0)])
def test_gaffney(n, k):
    rep = gaffney_check(form(GridSpec(n, 32), k, 2), 0)
    assert rep.passed, rep.criteria
    assert set(rep.measured["ratios"]) == {"1.5", "2.0", "3.0"}
    assert all(c.tolerance > 0 for c in rep.criteria)


def test_gaffney_closed_branch():
    spec = GridSpec(2, 32)
    closed = ifft_form(projector_E(fft_form(form(spec, 1, 1))))
    rep = gaffney_check(closed, 1)
    assert rep.flags["closed"] and rep.passed
    coclosed = ifft_form(projector_Estar(fft_form(form(spec, 1, 1))))
    assert gaffney_check(coclosed, 0).flags["coclosed"]


def test_gaffney_constant_form_flagged():
    spec = GridSpec(2, 16)
    rep = gaffney_check(GridForm.scalar(spec, np.ones(spec.shape)), 0)
    assert rep.flags["zero_denominator"]


@pytest.mark.parametrize("n,k,mu,nu", [(2, 0, 0, 1), (3, 1, 2, 2), (2, 2, 1, 0)])
def test_apriori(n, k, mu, nu):
    rep = apriori_check(form(GridSpec(n, 32), k, 5), mu, nu)
    assert rep.passed, rep.criteria


def test_harmonic_xy_is_outside_the_grid_setting():
    # x*y is harmonic with nonzero mixed derivative; on the torus its samples are
    # not periodic, and the mean-zero projection removes the paradox
    spec = GridSpec(2, 16)
    rep = apriori_check(GridForm.scalar(spec, np.zeros(spec.shape)), 0, 1)
    assert rep.flags["zero_denominator"]


@pytest.mark.parametrize("n,p,q", [(2, 1.5, 6.0), (2, 2.0, 4.0), (2, 3.0, 3.0)])
def test_sobolev_scaling(n, p, q):
    spec = GridSpec(n, 128)
    rep = sobolev_scaling(bump_form(spec, 1, 0, 8), p, q)
    assert rep.passed, rep.fitted
    assert not rep.flags["support_violation"]
    assert rep.fitted["exponent"] == pytest.approx(n / p - n / q - 1, abs=0.02)


def test_sobolev_scaling_scalar():
    spec = GridSpec(2, 128)
    rep = sobolev_scaling(bump_form(spec, 0, 1, 8), 1.5, 6.0)
    assert abs(rep.fitted["exponent"]) <= 0.02


def test_sobolev_constant_probe():
    good = sobolev_constant_probe(2, 1, 1.5, resolutions=(16, 32, 64), corpus_size=2)
    assert good.parameters["q"] == pytest.approx(critical_q(2, 1.5))
    assert good.passed
    bad = sobolev_constant_probe(2, 1, 1.5, q=4.0, resolutions=(16, 32, 64), corpus_size=2)
    assert not bad.passed and bad.flags["monotone_drift"]
    with pytest.raises(ValueError):
        sobolev_constant_probe(2, 1, 2.0)


def test_cohomology_branches():
    neg = cohomology_check(2, 1, 2.0, 2.0, corpus_size=2, N=32)
    assert neg.passed and neg.fitted["gamma_measured"] == pytest.approx(1.0, abs=0.05)
    pos = cohomology_check(2, 1, 1.5, 6.0, corpus_size=2, N=32, resolutions=(16, 32, 64))
    assert pos.passed and pos.fitted["gamma_expected"] == 0
    with pytest.raises(ValueError):
        cohomology_check(2, 0, 2, 2)


def test_critical_q():
    assert critical_q(3, 2) == 6
    with pytest.raises(ValueError):
        critical_q(2, 2)


def test_report_dict_excludes_runtime():
    rep = gaffney_check(form(GridSpec(2, 16), 1, 0), 0)
    d = rep.to_dict()
    assert "runtime" not in d and d["passed"] is True
    assert "runtime" in rep.to_dict(include_runtime=True)
