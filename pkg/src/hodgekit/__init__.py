"""Hodge-Kodaira decomposition of differential forms on R^n.

Two engines share one set of sign conventions:

* exact rational calculus on polynomial forms (:mod:`hodgekit.polyform`),
* an FFT Fourier-multiplier engine on periodic grids (:mod:`hodgekit.spectral`),

cross-checked by direct-space quadrature (:mod:`hodgekit.oracle`) and
exercised by the inequality experiments in :mod:`hodgekit.experiments`.
"""

from hodgekit.exterior import FormIndex, basis
from hodgekit.grid import GridForm, GridSpec, SpectralForm, fft_form, ifft_form, lp_norm
from hodgekit.polyform import PolyForm, harmonic_decompose, inverse_laplacian
from hodgekit.polynomial import Polynomial
from hodgekit.spectral import HodgeResult, hodge_decompose

__version__ = "0.1.0"

__all__ = [
    "FormIndex",
    "GridForm",
    "GridSpec",
    "HodgeResult",
    "PolyForm",
    "Polynomial",
    "SpectralForm",
    "basis",
    "fft_form",
    "harmonic_decompose",
    "hodge_decompose",
    "ifft_form",
    "inverse_laplacian",
    "lp_norm",
]
