"""Deterministic test-form generators.

``random_bandlimited`` draws spectra supported in ``|jt| <= N/8`` with a
smooth Gaussian roll-off; the zero mode is removed so the result is
mean-zero. ``bump_form`` builds localized forms (Gaussian envelope times
low-order polynomials) whose width is given in grid cells, so that raising
N at fixed L acts like a dilation.
"""

from __future__ import annotations

from fractions import Fraction
import random

import numpy as np

from hodgekit.exterior import basis
from hodgekit.grid import GridForm, GridSpec, ifft_scalar, mirror
from hodgekit.polyform import PolyForm
from hodgekit.polynomial import Polynomial, monomials


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_bandlimited(spec: GridSpec, k: int, seed: int, band: float = 1 / 8) -> GridForm:
    gen = rng(seed)
    jt = spec.signed_index()
    cutoff = band * spec.N
    weight = np.ones(spec.shape)
    inside = np.ones(spec.shape, dtype=bool)
    for mu in range(spec.n):
        shape = [1] * spec.n
        shape[mu] = spec.N
        j = jt.reshape(shape)
        weight = weight * np.exp(-((j / (0.5 * cutoff)) ** 2))
        inside = inside & (np.abs(j) <= cutoff)
    weight = np.where(inside, weight, 0.0)
    weight[(0,) * spec.n] = 0.0
    comps = {}
    for idx in basis(spec.n, k):
        z = gen.standard_normal(spec.shape) + 1j * gen.standard_normal(spec.shape)
        z = z * weight
        z = 0.5 * (z + np.conj(mirror(spec, z)))
        comps[idx] = ifft_scalar(spec, z * spec.L**spec.n / np.sqrt(z.size)).real
    form = GridForm(spec, k, comps)
    scale = max(float(np.abs(form.stack()).max(initial=0.0)), 1e-300)
    return form * (1.0 / scale)


def bump_form(spec: GridSpec, k: int, seed: int, width_cells: float) -> GridForm:
    """Gaussian envelope of width ``width_cells * h`` times random affine coefficients."""
    gen = rng(seed)
    sigma = width_cells * spec.h
    mesh = spec.mesh()
    r2 = sum(x**2 for x in mesh)
    env = np.exp(-r2 / (2 * sigma**2))
    comps = {}
    for idx in basis(spec.n, k):
        c0 = gen.uniform(0.5, 1.5) * gen.choice([-1, 1])
        lin = sum(gen.uniform(-1, 1) * x / sigma for x in mesh)
        comps[idx] = np.broadcast_to((c0 + lin) * env, spec.shape).copy()
    return GridForm(spec, k, comps)


def gaussian(spec: GridSpec, sigma: float) -> GridForm:
    mesh = spec.mesh()
    r2 = sum(x**2 for x in mesh)
    return GridForm.scalar(spec, np.broadcast_to(np.exp(-r2 / (2 * sigma**2)), spec.shape))


def random_polynomial(n: int, max_degree: int, gen: random.Random, density: float = 0.4) -> Polynomial:
    terms = {}
    for d in range(max_degree + 1):
        for e in monomials(n, d):
            if gen.random() < density:
                num = gen.randint(-9, 9)
                if num:
                    terms[e] = Fraction(num, gen.randint(1, 6))
    return Polynomial(n, terms)


def random_polyform(n: int, k: int, max_degree: int, gen: random.Random) -> PolyForm:
    comps = {}
    for idx in basis(n, k):
        if gen.random() < 0.8:
            comps[idx] = random_polynomial(n, max_degree, gen)
    return PolyForm(n, k, comps)


def polyform_corpus(size: int, seed: int, n_max: int = 4, deg_max: int = 6) -> list[PolyForm]:
    gen = random.Random(seed)
    out = []
    for _ in range(size):
        n = gen.randint(1, n_max)
        k = gen.randint(0, n)
        out.append(random_polyform(n, k, gen.randint(0, deg_max), gen))
    return out
