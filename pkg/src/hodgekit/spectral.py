"""Fourier-multiplier calculus on spectral forms.

Symbols (``xi`` the grid frequency)::

    I^alpha      |xi|^-alpha
    R_j          i xi_j / |xi|        (R_j = -I^1 d/dx_j)
    d/dx_j       -i xi_j
    Delta        |xi|^2

Composite operators are literal compositions of the primitives::

    R  = d o I^1        R* = delta o I^1
    E  = R o R*         E* = R* o R
    U  = I^1 o R*       U* = I^1 o R

Expanding ``R`` by components gives ``R = sum_mu exterior(mu) o (I^1 d/dx_mu)
= -sum_mu exterior(mu) o R_mu``; the minus sign is the price of keeping the
``R_j`` symbol above.

Discrete conventions: the zero mode is set to 0 by any symbol singular or
non-polynomial at the origin, so identities of the form ``... = Id`` hold
on mean-zero forms only. Every symbol is Hermitian-symmetrised on the
lattice, ``s <- (s(j) + conj(s(-j mod N))) / 2``, which leaves even and
smooth odd symbols untouched and forces odd symbols to 0 on the Nyquist
planes, so real forms stay real.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import Optional

import numpy as np

from hodgekit.exterior import apply_exterior, apply_interior
from hodgekit.grid import (
    GridForm,
    GridSpec,
    SpectralForm,
    fft_form,
    ifft_form,
    imaginary_residue,
    lp_norm,
    mirror,
)
from hodgekit.polynomial import Polynomial


@dataclass(frozen=True)
class MultiplierSpec:
    kind: str
    alpha: Optional[float] = None
    axis: Optional[int] = None
    poly: Optional[Polynomial] = None

    KINDS = ("identity", "riesz_potential", "riesz_direction", "derivative", "laplacian", "poly")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown multiplier kind {self.kind!r}")
        if self.kind == "riesz_potential" and (self.alpha is None or not math.isfinite(self.alpha)):
            raise ValueError("riesz_potential needs a finite alpha")
        if self.kind in ("riesz_direction", "derivative") and self.axis is None:
            raise ValueError(f"{self.kind} needs an axis")
        if self.kind == "poly" and self.poly is None:
            raise ValueError("poly multiplier needs a polynomial")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def riesz_potential(cls, alpha: float):
        return cls("riesz_potential", alpha=float(alpha))

    @classmethod
    def riesz_direction(cls, j: int):
        return cls("riesz_direction", axis=int(j))

    @classmethod
    def derivative(cls, j: int):
        return cls("derivative", axis=int(j))

    @classmethod
    def laplacian(cls):
        return cls("laplacian")

    @classmethod
    def polynomial(cls, p: Polynomial):
        return cls("poly", poly=p)

    @property
    def kills_zero_mode(self) -> bool:
        if self.kind == "riesz_direction":
            return True
        return self.kind == "riesz_potential" and self.alpha != 0

    def symbol(self, spec: GridSpec) -> np.ndarray:
        if self.axis is not None and not 0 <= self.axis < spec.n:
            raise ValueError(f"axis {self.axis} out of range for n={spec.n}")
        return _symbol(self, spec)


def _raw_symbol(m: MultiplierSpec, spec: GridSpec) -> np.ndarray:
    xi = spec.frequencies()
    r = spec.radius()
    safe = np.where(r > 0, r, 1.0)
    if m.kind == "identity":
        s = np.ones(spec.shape, dtype=complex)
    elif m.kind == "riesz_potential":
        s = safe ** (-m.alpha) + 0j
    elif m.kind == "riesz_direction":
        s = 1j * xi[m.axis] / safe
    elif m.kind == "derivative":
        s = -1j * xi[m.axis] + 0j * r
    elif m.kind == "laplacian":
        s = r**2 + 0j
    else:
        vals = np.zeros(spec.shape)
        for exp, c in m.poly.terms.items():
            term = np.full(spec.shape, float(c))
            for mu, a in enumerate(exp):
                if a:
                    term = term * xi[mu] ** a
            vals = vals + term
        s = vals + 0j
    s = np.broadcast_to(s, spec.shape).astype(complex)
    if m.kills_zero_mode:
        s[(0,) * spec.n] = 0
    return s


@lru_cache(maxsize=64)
def _symbol(m: MultiplierSpec, spec: GridSpec) -> np.ndarray:
    s = _raw_symbol(m, spec)
    s = 0.5 * (s + np.conj(mirror(spec, s)))
    s.setflags(write=False)
    return s


def apply_scalar_multiplier(F: SpectralForm, m: MultiplierSpec) -> SpectralForm:
    s = m.symbol(F.spec)
    return SpectralForm(F.spec, F.k, {i: s * a for i, a in F.components.items()})


def riesz_potential(F: SpectralForm, alpha: float) -> SpectralForm:
    return apply_scalar_multiplier(F, MultiplierSpec.riesz_potential(alpha))


def riesz_direction(F: SpectralForm, j: int) -> SpectralForm:
    return apply_scalar_multiplier(F, MultiplierSpec.riesz_direction(j))


def partial(F: SpectralForm, j: int) -> SpectralForm:
    return apply_scalar_multiplier(F, MultiplierSpec.derivative(j))


def laplacian(F: SpectralForm) -> SpectralForm:
    return apply_scalar_multiplier(F, MultiplierSpec.laplacian())


def _accumulate(spec: GridSpec, k: int, parts: list[dict]) -> SpectralForm:
    out: dict = {}
    for part in parts:
        for i, a in part.items():
            out[i] = out[i] + a if i in out else a
    if not 0 <= k <= spec.n:
        return SpectralForm.zeros(spec, min(max(k, -1), spec.n + 1))
    return SpectralForm(spec, k, out)


def spectral_d(F: SpectralForm) -> SpectralForm:
    spec = F.spec
    parts = []
    for mu in range(spec.n):
        s = MultiplierSpec.derivative(mu).symbol(spec)
        parts.append(apply_exterior(mu, {i: s * a for i, a in F.components.items()}))
    return _accumulate(spec, F.k + 1, parts)


def spectral_delta(F: SpectralForm) -> SpectralForm:
    spec = F.spec
    parts = []
    for mu in range(spec.n):
        s = MultiplierSpec.derivative(mu).symbol(spec)
        parts.append(apply_interior(mu, {i: -s * a for i, a in F.components.items()}))
    return _accumulate(spec, F.k - 1, parts)


def riesz_R(F: SpectralForm) -> SpectralForm:
    return spectral_d(riesz_potential(F, 1))


def riesz_Rstar(F: SpectralForm) -> SpectralForm:
    return spectral_delta(riesz_potential(F, 1))


def projector_E(F: SpectralForm) -> SpectralForm:
    return riesz_R(riesz_Rstar(F))


def projector_Estar(F: SpectralForm) -> SpectralForm:
    return riesz_Rstar(riesz_R(F))


def potential_U(F: SpectralForm) -> SpectralForm:
    return riesz_potential(riesz_Rstar(F), 1)


def potential_Ustar(F: SpectralForm) -> SpectralForm:
    return riesz_potential(riesz_R(F), 1)


def lizorkin_mask(spec: GridSpec) -> np.ndarray:
    """True on modes where E + E* = Id holds exactly (no zero mode, no Nyquist plane)."""
    return _lizorkin_mask(spec)


@lru_cache(maxsize=32)
def _lizorkin_mask(spec: GridSpec) -> np.ndarray:
    jt = spec.signed_index()
    ok = np.ones(spec.shape, dtype=bool)
    for mu in range(spec.n):
        shape = [1] * spec.n
        shape[mu] = spec.N
        ok = ok & (jt != -spec.N // 2).reshape(shape)
    ok[(0,) * spec.n] = False
    ok.setflags(write=False)
    return ok


def lizorkin_project(F: SpectralForm) -> SpectralForm:
    mask = lizorkin_mask(F.spec)
    return SpectralForm(F.spec, F.k, {i: np.where(mask, a, 0) for i, a in F.components.items()})


# -- grid-level wrappers -------------------------------------------------------------

def _on_grid(op, f: GridForm) -> GridForm:
    return ifft_form(op(fft_form(f)))


def grid_d(f: GridForm) -> GridForm:
    return _on_grid(spectral_d, f)


def grid_delta(f: GridForm) -> GridForm:
    return _on_grid(spectral_delta, f)


def grid_partial(f: GridForm, j: int) -> GridForm:
    return _on_grid(lambda F: partial(F, j), f)


def grid_multiplier(f: GridForm, m: MultiplierSpec) -> GridForm:
    return _on_grid(lambda F: apply_scalar_multiplier(F, m), f)


@dataclass
class HodgeResult:
    alpha: GridForm
    beta: GridForm
    report: dict


def hodge_decompose(theta: GridForm) -> HodgeResult:
    """theta = d(alpha) + delta(beta) with alpha = U theta, beta = U* theta.

    The input is first projected onto the modes where the decomposition is
    an identity (mean and Nyquist planes removed); the relative size of the
    removed part is reported as ``projection_defect`` and flagged.
    """
    spec = theta.spec
    F = fft_form(theta)
    P = lizorkin_project(F)
    norm_theta = lp_norm(theta, 2)
    projected = ifft_form(P)
    norm_proj = lp_norm(projected, 2)
    defect = lp_norm(theta - projected, 2) / norm_theta if norm_theta else 0.0

    A = potential_U(P)
    B = potential_Ustar(P)
    recon = spectral_d(A) + spectral_delta(B)
    alpha = ifft_form(A)
    beta = ifft_form(B)
    resid_form = projected - ifft_form(recon)
    residual = lp_norm(resid_form, 2) / norm_proj if norm_proj else 0.0
    report = {
        "n": spec.n,
        "k": theta.k,
        "N": spec.N,
        "L": spec.L,
        "norm_theta": norm_theta,
        "norm_alpha": lp_norm(alpha, 2),
        "norm_beta": lp_norm(beta, 2),
        "norm_exact_part": lp_norm(ifft_form(spectral_d(A)), 2),
        "norm_coexact_part": lp_norm(ifft_form(spectral_delta(B)), 2),
        "residual": residual,
        "projection_defect": defect,
        "projected": bool(defect > 1e-12),
        "zero_input": bool(norm_proj == 0),
        "imag_residue": max(imaginary_residue(A), imaginary_residue(B)),
    }
    return HodgeResult(alpha, beta, report)
