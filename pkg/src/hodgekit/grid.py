"""Periodic-grid forms and the discrete Fourier transform contract.

The box ``[-L/2, L/2)^n`` is sampled at ``x_i = -L/2 + i*h`` with
``h = L/N``. Index ``j`` carries frequency ``xi = (2*pi/L) * jt`` where
``jt`` is the signed alias of ``j`` in ``[-N/2, N/2)``.

Transform (a Riemann-sum surrogate of ``F f(xi) = int f(x) e^{+i x.xi} dx``)::

    F[j] = h^n  sum_x f(x) exp(+i x.xi_j)
    f(x) = L^-n sum_j F[j] exp(-i x.xi_j)

With this phase convention ``F(d f/dx_j) = -i xi_j F(f)``. Relative to
the engineering DFT it is an index conjugation plus the ``(-1)^j`` phase
coming from the box offset, so both directions are computed by scipy's
pocketfft.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import math
import os
import warnings
from typing import Callable, Mapping

import numpy as np
import scipy.fft

from hodgekit.exterior import FormIndex, basis


def fft_workers() -> int:
    """Thread count from ``HODGEKIT_THREADS`` (0 or unset means all cores)."""
    raw = os.environ.get("HODGEKIT_THREADS", "0").strip() or "0"
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"HODGEKIT_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"HODGEKIT_THREADS must be >= 0, got {value}")
    return -1 if value == 0 else value


@dataclass(frozen=True)
class GridSpec:
    n: int
    N: int
    L: float = 2 * math.pi

    def __post_init__(self):
        if not 1 <= self.n <= 4:
            raise ValueError(f"dimension must be in 1..4, got {self.n}")
        if self.N < 2 or self.N & (self.N - 1):
            raise ValueError(f"N must be a power of two >= 2, got {self.N}")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"box length must be positive, got {self.L}")
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def cell_volume(self) -> float:
        return self.h**self.n

    def coords(self) -> np.ndarray:
        """1-D sample coordinates ``-L/2 + i*h``."""
        return -self.L / 2 + self.h * np.arange(self.N)

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.coords()] * self.n), indexing="ij", sparse=True)

    def signed_index(self) -> np.ndarray:
        j = np.arange(self.N)
        return np.where(j < self.N // 2, j, j - self.N)

    def frequencies(self) -> list[np.ndarray]:
        """Broadcastable per-axis frequency arrays xi_mu."""
        return list(_frequencies(self.n, self.N, self.L))

    def radius(self) -> np.ndarray:
        return _radius(self.n, self.N, self.L)


@lru_cache(maxsize=32)
def _frequencies(n: int, N: int, L: float) -> tuple[np.ndarray, ...]:
    j = np.arange(N)
    jt = np.where(j < N // 2, j, j - N)
    xi = 2 * np.pi / L * jt
    out = []
    for mu in range(n):
        shape = [1] * n
        shape[mu] = N
        out.append(xi.reshape(shape))
    return tuple(out)


@lru_cache(maxsize=32)
def _radius(n: int, N: int, L: float) -> np.ndarray:
    r2 = sum(x**2 for x in _frequencies(n, N, L))
    return np.sqrt(np.broadcast_to(r2, (N,) * n))


@lru_cache(maxsize=32)
def _phase(n: int, N: int) -> np.ndarray:
    # exp(-i*pi*jt) = (-1)^j for even N
    sign = np.where(np.arange(N) % 2, -1.0, 1.0)
    out = np.ones((1,) * n)
    for mu in range(n):
        shape = [1] * n
        shape[mu] = N
        out = out * sign.reshape(shape)
    return out


def _check_degree(n: int, k: int):
    # degrees -1 and n+1 are the (empty) spaces reached by delta/d at the ends
    if not -1 <= k <= n + 1:
        raise ValueError(f"degree {k} out of range for n={n}")


@dataclass(frozen=True)
class GridForm:
    """Real samples of a k-form, one array per basis index (all present)."""

    spec: GridSpec
    k: int
    components: Mapping[FormIndex, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        _check_degree(self.spec.n, self.k)
        comps = {}
        given = dict(self.components)
        for idx in basis(self.spec.n, self.k):
            a = given.pop(idx, None)
            if a is None:
                a = np.zeros(self.spec.shape)
            a = np.asarray(a, dtype=float)
            if a.shape != self.spec.shape:
                raise ValueError(f"component {idx} has shape {a.shape}, expected {self.spec.shape}")
            comps[idx] = a
        if given:
            raise ValueError(f"components {sorted(given)} do not belong to degree {self.k}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zeros(cls, spec: GridSpec, k: int) -> "GridForm":
        return cls(spec, k, {})

    @classmethod
    def from_functions(cls, spec: GridSpec, k: int, funcs: Mapping[tuple, Callable]) -> "GridForm":
        """Sample ``{axes: f(*coords)}`` on the grid."""
        mesh = spec.mesh()
        comps = {}
        for axes, fn in funcs.items():
            comps[FormIndex(tuple(axes), spec.n)] = np.broadcast_to(fn(*mesh), spec.shape).astype(float)
        return cls(spec, k, comps)

    @classmethod
    def scalar(cls, spec: GridSpec, values: np.ndarray) -> "GridForm":
        return cls(spec, 0, {FormIndex((), spec.n): values})

    def __getitem__(self, idx) -> np.ndarray:
        if not isinstance(idx, FormIndex):
            idx = FormIndex(tuple(idx), self.spec.n)
        return self.components[idx]

    def _like(self, other: "GridForm"):
        if self.spec != other.spec or self.k != other.k:
            raise ValueError("forms live on different grids or degrees")

    def __add__(self, other: "GridForm") -> "GridForm":
        self._like(other)
        return GridForm(self.spec, self.k, {i: a + other.components[i] for i, a in self.components.items()})

    def __sub__(self, other: "GridForm") -> "GridForm":
        self._like(other)
        return GridForm(self.spec, self.k, {i: a - other.components[i] for i, a in self.components.items()})

    def __neg__(self) -> "GridForm":
        return self * -1.0

    def __mul__(self, c: float) -> "GridForm":
        return GridForm(self.spec, self.k, {i: a * c for i, a in self.components.items()})

    __rmul__ = __mul__

    def stack(self) -> np.ndarray:
        if not self.components:
            return np.zeros((0,) + self.spec.shape)
        return np.stack(list(self.components.values()))

    def pointwise_norm(self) -> np.ndarray:
        return np.sqrt(np.sum(self.stack() ** 2, axis=0))

    def mean(self) -> dict[FormIndex, float]:
        return {i: float(a.mean()) for i, a in self.components.items()}

    def is_finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.components.values())


@dataclass(frozen=True)
class SpectralForm:
    """Fourier coefficients of a k-form in the transform convention above."""

    spec: GridSpec
    k: int
    components: Mapping[FormIndex, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        _check_degree(self.spec.n, self.k)
        comps = {}
        given = dict(self.components)
        for idx in basis(self.spec.n, self.k):
            a = given.pop(idx, None)
            if a is None:
                a = np.zeros(self.spec.shape, dtype=complex)
            a = np.asarray(a, dtype=complex)
            if a.shape != self.spec.shape:
                raise ValueError(f"component {idx} has shape {a.shape}, expected {self.spec.shape}")
            comps[idx] = a
        if given:
            raise ValueError(f"components {sorted(given)} do not belong to degree {self.k}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zeros(cls, spec: GridSpec, k: int) -> "SpectralForm":
        return cls(spec, k, {})

    def __getitem__(self, idx) -> np.ndarray:
        if not isinstance(idx, FormIndex):
            idx = FormIndex(tuple(idx), self.spec.n)
        return self.components[idx]

    def _like(self, other: "SpectralForm"):
        if self.spec != other.spec or self.k != other.k:
            raise ValueError("forms live on different grids or degrees")

    def __add__(self, other: "SpectralForm") -> "SpectralForm":
        self._like(other)
        return SpectralForm(self.spec, self.k, {i: a + other.components[i] for i, a in self.components.items()})

    def __sub__(self, other: "SpectralForm") -> "SpectralForm":
        self._like(other)
        return SpectralForm(self.spec, self.k, {i: a - other.components[i] for i, a in self.components.items()})

    def __mul__(self, c) -> "SpectralForm":
        return SpectralForm(self.spec, self.k, {i: a * c for i, a in self.components.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralForm":
        return self * -1.0


# -- transforms -------------------------------------------------------------------

def fft_scalar(spec: GridSpec, a: np.ndarray) -> np.ndarray:
    axes = tuple(range(spec.n))
    coeffs = scipy.fft.ifftn(a, axes=axes, workers=fft_workers())
    return coeffs * (spec.L**spec.n) * _phase(spec.n, spec.N)


def ifft_scalar(spec: GridSpec, F: np.ndarray) -> np.ndarray:
    axes = tuple(range(spec.n))
    return scipy.fft.fftn(F * _phase(spec.n, spec.N), axes=axes, workers=fft_workers()) / spec.L**spec.n


def fft_form(f: GridForm) -> SpectralForm:
    return SpectralForm(f.spec, f.k, {i: fft_scalar(f.spec, a) for i, a in f.components.items()})


def ifft_form(F: SpectralForm, imag_tol: float | None = None) -> GridForm:
    """Inverse transform, keeping the real part.

    With ``imag_tol`` set, raises if the discarded imaginary part exceeds
    ``imag_tol`` relative to the largest real sample.
    """
    comps = {}
    for i, a in F.components.items():
        z = ifft_scalar(F.spec, a)
        if imag_tol is not None:
            scale = max(float(np.abs(z.real).max(initial=0.0)), np.finfo(float).tiny)
            resid = float(np.abs(z.imag).max(initial=0.0))
            if resid > imag_tol * scale:
                raise ValueError(f"imaginary residue {resid / scale:.3e} exceeds {imag_tol:g} on {i}")
        comps[i] = z.real
    return GridForm(F.spec, F.k, comps)


def imaginary_residue(F: SpectralForm) -> float:
    """max |Im f| / max |Re f| of the inverse transform (0 for a real form)."""
    num = 0.0
    den = 0.0
    for a in F.components.values():
        z = ifft_scalar(F.spec, a)
        num = max(num, float(np.abs(z.imag).max(initial=0.0)))
        den = max(den, float(np.abs(z.real).max(initial=0.0)))
    return num / den if den else num


def mirror(spec: GridSpec, a: np.ndarray) -> np.ndarray:
    """a[-j mod N] along every axis."""
    axes = tuple(range(spec.n))
    return np.roll(np.flip(a, axis=axes), 1, axis=axes)


# -- norms and pairings -----------------------------------------------------------

def lp_norm(f: GridForm, p: float) -> float:
    """(sum_x |f(x)|^p h^n)^(1/p) with |.| the Euclidean norm over components."""
    if not (p == math.inf or p >= 1):
        raise ValueError(f"p must be in [1, inf], got {p}")
    mag = f.pointwise_norm()
    if mag.size == 0:
        return 0.0
    if p == math.inf:
        return float(mag.max())
    if p == 2:
        return float(np.sqrt(np.sum(mag**2) * f.spec.cell_volume))
    return float((np.sum(mag**p) * f.spec.cell_volume) ** (1.0 / p))


def inner(f: GridForm, g: GridForm) -> float:
    """Discrete pairing h^n sum_x sum_I f_I g_I."""
    f._like(g)
    total = math.fsum(float(np.sum(a * g.components[i])) for i, a in f.components.items())
    return total * f.spec.cell_volume


def spectral_inner(F: SpectralForm, G: SpectralForm) -> complex:
    """L^-n sum_j sum_I F_I conj(G_I); equals :func:`inner` for real forms."""
    F._like(G)
    total = sum(complex(np.vdot(G.components[i], a)) for i, a in F.components.items())
    return total / F.spec.L**F.spec.n


# -- dilation -------------------------------------------------------------------

class DilationSupportWarning(UserWarning):
    """The form is not concentrated enough for the requested dilation."""


def dilation_support_defect(f: GridForm, j: int) -> float:
    """Relative energy that a dilation by 2**j would alias or wrap.

    For j > 0 this is the spectral energy above ``N / 2**(j+1)`` on any
    axis (it would alias once frequencies double); for j < 0 the energy
    outside the central ``2**j`` fraction of the box (it would wrap).
    """
    if j == 0:
        return 0.0
    spec = f.spec
    s = 2 ** abs(j)
    total = float(np.sum(f.stack() ** 2))
    if total == 0:
        return 0.0
    if j > 0:
        jt = np.abs(spec.signed_index())
        keep1 = jt < spec.N / (2 * s)
    else:
        x = spec.coords()
        keep1 = np.abs(x) < spec.L / (2 * s)
    keep = np.ones(spec.shape, dtype=bool)
    for mu in range(spec.n):
        shape = [1] * spec.n
        shape[mu] = spec.N
        keep = keep & keep1.reshape(shape)
    if j > 0:
        energy = sum(float(np.sum(np.abs(scipy.fft.fftn(a, workers=fft_workers())[~keep]) ** 2)) / a.size
                     for a in f.components.values())
    else:
        energy = sum(float(np.sum(a[~keep] ** 2)) for a in f.components.values())
    return energy / total


def dilate(f: GridForm, j: int, tol: float = 1e-12) -> GridForm:
    """Pullback by x -> t x with t = 2**j: samples of t^k f(t x).

    j > 0 is an exact gather (zero outside |t x| < L/2); j < 0 uses
    trigonometric interpolation. Emits :class:`DilationSupportWarning` when
    :func:`dilation_support_defect` exceeds ``tol``.
    """
    if j == 0:
        return f
    spec = f.spec
    defect = dilation_support_defect(f, j)
    if defect > tol:
        warnings.warn(f"dilation by 2^{j}: support defect {defect:.2e}", DilationSupportWarning, stacklevel=2)
    s = 2 ** abs(j)
    t = 2.0**j
    half = spec.N // 2
    comps = {}
    for idx, a in f.components.items():
        if j > 0:
            src = s * (np.arange(spec.N) - half) + half
            valid = (src >= 0) & (src < spec.N)
            out = a
            for mu in range(spec.n):
                out = np.take(out, np.clip(src, 0, spec.N - 1), axis=mu)
                mask_shape = [1] * spec.n
                mask_shape[mu] = spec.N
                out = out * valid.reshape(mask_shape)
        else:
            out = a
            offset = (s - 1) * spec.N // 2
            for mu in range(spec.n):
                fine = _fourier_resample(out, s, mu)
                out = np.take(fine, offset + np.arange(spec.N), axis=mu)
        comps[idx] = out * t**f.k
    return GridForm(spec, f.k, comps)


def _fourier_resample(a: np.ndarray, s: int, axis: int) -> np.ndarray:
    N = a.shape[axis]
    A = np.fft.fft(a, axis=axis)
    big_shape = list(a.shape)
    big_shape[axis] = N * s
    B = np.zeros(big_shape, dtype=complex)
    lo = [slice(None)] * a.ndim
    hi = [slice(None)] * a.ndim
    lo[axis] = slice(0, N // 2)
    hi[axis] = slice(N * s - N // 2 + 1, N * s)
    B[tuple(lo)] = A[tuple(lo)]
    src_hi = [slice(None)] * a.ndim
    src_hi[axis] = slice(N // 2 + 1, N)
    B[tuple(hi)] = A[tuple(src_hi)]
    # split the Nyquist coefficient between +N/2 and -N/2
    nyq = [slice(None)] * a.ndim
    nyq[axis] = N // 2
    pos = [slice(None)] * a.ndim
    pos[axis] = N // 2
    neg = [slice(None)] * a.ndim
    neg[axis] = N * s - N // 2
    B[tuple(pos)] = A[tuple(nyq)] / 2
    B[tuple(neg)] = A[tuple(nyq)] / 2
    return np.real(np.fft.ifft(B, axis=axis)) * s
