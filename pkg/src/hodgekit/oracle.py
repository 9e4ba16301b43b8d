"""Independent (non-multiplier) checks of the Riesz machinery.

* closed-form kernel constant and a Gaussian pairing test of
  ``F(k_alpha) = |xi|^-alpha`` reduced to radial 1-D integrals;
* direct-space quadrature of the Riesz potential and of the truncated
  singular integral for R_j, for comparison against the spectral engine;
* discrete moment checks for the Lizorkin (moment-free) property.

The direct sums are discrete convolutions evaluated with ``fftconvolve``
(zero padded, linear); the FFT is only an accelerator there, the kernels
themselves are sampled in physical space.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
import math
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.signal import fftconvolve

from hodgekit.grid import GridForm, GridSpec, lp_norm


class QuadratureError(RuntimeError):
    pass


class MarginError(ValueError):
    """Input too close to the box edge (or too coarse) for the direct oracle."""


@dataclass(frozen=True)
class RieszKernelSpec:
    n: int
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha < self.n:
            raise ValueError(f"need 0 < alpha < n, got alpha={self.alpha}, n={self.n}")

    @property
    def gamma(self) -> float:
        return gamma_constant(self.n, self.alpha)

    def __call__(self, r):
        return np.asarray(r, dtype=float) ** (self.alpha - self.n) / self.gamma


def gamma_constant(n: int, alpha: float) -> float:
    """gamma(n, alpha) = 2^alpha pi^(n/2) Gamma(alpha/2) / Gamma((n-alpha)/2)."""
    if not 0 < alpha < n:
        raise ValueError(f"need 0 < alpha < n, got alpha={alpha}, n={n}")
    return 2**alpha * math.pi ** (n / 2) * math.gamma(alpha / 2) / math.gamma((n - alpha) / 2)


def sphere_area(n: int) -> float:
    """|S^(n-1)| = 2 pi^(n/2) / Gamma(n/2)  (2 for n = 1)."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def _radial(power: float, a: float) -> float:
    """int_0^inf r^power exp(-a r^2) dr by adaptive quadrature."""

    def f(r):
        return r**power * math.exp(-a * r * r)

    # split at the Gaussian scale so QUADPACK sees the singular end separately
    split = 1 / math.sqrt(a)
    parts = []
    for lo, hi in ((0.0, split), (split, math.inf)):
        val, err, info = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200, full_output=True)[:3]
        if err > 1e-10 * abs(val) + 1e-300:
            raise QuadratureError(f"radial integral r^{power} e^(-{a} r^2) did not converge (err {err:.2e})")
        parts.append(val)
    return parts[0] + parts[1]


def gaussian_pairing_check(n: int, alpha: float, s: float) -> dict:
    """<F k_alpha, g> vs <k_alpha, F g> for g = exp(-s|x|^2).

    lhs = int |xi|^-alpha exp(-s|xi|^2) dxi
    rhs = int k_alpha(x) (pi/s)^(n/2) exp(-|x|^2/(4s)) dx
    """
    if s <= 0:
        raise ValueError(f"s must be positive, got {s}")
    kernel = RieszKernelSpec(n, alpha)
    area = sphere_area(n)
    lhs = area * _radial(n - 1 - alpha, s)
    rhs = area * (math.pi / s) ** (n / 2) / kernel.gamma * _radial(alpha - 1, 1 / (4 * s))
    relerr = abs(lhs - rhs) / abs(lhs)
    return {"check": "gaussian_pairing", "n": n, "alpha": alpha, "s": s,
            "lhs": lhs, "rhs": rhs, "relerr": relerr}


# -- direct-space potentials ----------------------------------------------------------

def _margin_ok(phi: np.ndarray, spec: GridSpec, frac: float, tol: float) -> bool:
    x = spec.coords()
    inner = np.abs(x) < spec.L / 2 - frac * spec.L
    mask = np.ones(spec.shape, dtype=bool)
    for mu in range(spec.n):
        shape = [1] * spec.n
        shape[mu] = spec.N
        mask = mask & inner.reshape(shape)
    peak = float(np.abs(phi).max(initial=0.0))
    return peak == 0 or float(np.abs(phi[~mask]).max(initial=0.0)) <= tol * peak


def _offsets(spec: GridSpec) -> list[np.ndarray]:
    m = np.arange(-spec.N + 1, spec.N) * spec.h
    return np.meshgrid(*([m] * spec.n), indexing="ij", sparse=True)


def _convolve_full(phi: np.ndarray, kernel: np.ndarray, spec: GridSpec) -> np.ndarray:
    full = fftconvolve(phi, kernel, mode="full")
    sl = tuple(slice(spec.N - 1, 2 * spec.N - 1) for _ in range(spec.n))
    return full[sl]


def riesz_potential_kernel(spec: GridSpec, alpha: float) -> np.ndarray:
    """Cell-weighted samples of k_alpha on all grid offsets.

    The singular cell uses the exact integral of |y|^(alpha-n) over the
    ball of volume h^n: area * R^alpha / alpha.
    """
    n = spec.n
    gam = gamma_constant(n, alpha)
    r = np.sqrt(sum(o**2 for o in _offsets(spec)))
    kern = np.where(r > 0, r, 1.0) ** (alpha - n) * spec.cell_volume
    radius = (spec.cell_volume * math.gamma(n / 2 + 1) / math.pi ** (n / 2)) ** (1 / n)
    kern[(spec.N - 1,) * n] = sphere_area(n) * radius**alpha / alpha
    return kern / gam


def direct_riesz_potential(phi: GridForm, alpha: float, points: Sequence | None = None,
                           margin: float = 0.25, margin_tol: float = 1e-6):
    """I^alpha phi by direct quadrature of int phi(y) k_alpha(x - y) dy.

    ``points`` are grid multi-indices; ``None`` returns the whole grid.
    ``phi`` must be negligible (``margin_tol`` relative to its peak)
    outside the central box shrunk by ``margin * L`` on each side.
    """
    spec = phi.spec
    if phi.k != 0:
        raise ValueError("direct_riesz_potential acts on 0-forms")
    a = phi[()]
    if not _margin_ok(a, spec, margin, margin_tol):
        raise MarginError(f"phi is not negligible within {margin} L of the box edge")
    full = _convolve_full(a, riesz_potential_kernel(spec, alpha), spec)
    if points is None:
        return full
    return np.array([full[tuple(p)] for p in points])


def truncated_riesz_kernel(spec: GridSpec, j: int, delta: float) -> np.ndarray:
    n = spec.n
    c = math.gamma((n + 1) / 2) / math.pi ** ((n + 1) / 2)
    offs = _offsets(spec)
    r = np.sqrt(sum(o**2 for o in offs))
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > delta, c * offs[j] / safe ** (n + 1), 0.0) * spec.cell_volume


def truncated_riesz_transform(phi: GridForm, j: int, delta: float, inner_correction: bool = True) -> GridForm:
    """Principal-value quadrature of R_j phi with the ball |x - y| < delta removed.

    With ``inner_correction`` the excised ball's leading contribution,
    ``-c * area/n * delta * d_j phi`` (``d_j phi`` by central differences), is
    added back; this singularity subtraction turns the O(delta) truncation
    bias into O(delta^3) without touching the spectral engine.
    """
    spec = phi.spec
    if phi.k != 0:
        raise ValueError("truncated_riesz_transform acts on 0-forms")
    if delta <= spec.h:
        raise ValueError(f"delta={delta} must exceed the grid spacing {spec.h}")
    a = phi[()]
    out = _convolve_full(a, truncated_riesz_kernel(spec, j, delta), spec)
    if inner_correction:
        n = spec.n
        c = math.gamma((n + 1) / 2) / math.pi ** ((n + 1) / 2)
        grad = (np.roll(a, -1, axis=j) - np.roll(a, 1, axis=j)) / (2 * spec.h)
        out = out - c * sphere_area(n) / n * delta * grad
    return GridForm.scalar(spec, out)


def central_relerr(a: np.ndarray, b: np.ndarray, spec: GridSpec, frac: float = 0.5) -> float:
    """||a - b|| / ||b|| over the central ``frac`` of the box."""
    lo = int(round(spec.N * (1 - frac) / 2))
    sl = tuple(slice(lo, spec.N - lo) for _ in range(spec.n))
    return float(np.linalg.norm((a - b)[sl]) / np.linalg.norm(b[sl]))


def relerr_modulo_constant(a: np.ndarray, b: np.ndarray) -> float:
    """min_c ||a - b - c|| / ||b - mean(b)||; the torus sees I^alpha only up to constants."""
    diff = a - b
    diff = diff - diff.mean()
    ref = b - b.mean()
    return float(np.linalg.norm(diff) / np.linalg.norm(ref))


# -- moments ---------------------------------------------------------------------

def moments(phi: GridForm, degree: int) -> dict[tuple[int, ...], float]:
    spec = phi.spec
    a = phi[()]
    mesh = spec.mesh()
    out = {}
    for exps in product(range(degree + 1), repeat=spec.n):
        if sum(exps) != degree:
            continue
        w = np.ones((1,) * spec.n)
        for x, e in zip(mesh, exps):
            w = w * x**e
        out[exps] = float(np.sum(a * w) * spec.cell_volume)
    return out


def moment_vanish_order(phi: GridForm, m_max: int, rtol: float = 1e-8) -> int:
    """Number of leading moment degrees 0, 1, ... that all vanish.

    A degree M vanishes when every |int x^mu phi| with |mu| = M is below
    ``rtol * ||phi||_1 * L^M``. Returns the first failing degree, or
    ``m_max + 1`` when all degrees up to ``m_max`` vanish.
    """
    spec = phi.spec
    l1 = lp_norm(phi, 1)
    if l1 == 0:
        return m_max + 1
    for M in range(m_max + 1):
        thresh = rtol * l1 * spec.L**M
        if any(abs(v) > thresh for v in moments(phi, M).values()):
            return M
    return m_max + 1
