"""Exact calculus of polynomial differential forms.

A :class:`PolyForm` is a sparse map ``FormIndex -> Polynomial``. The
operators follow the conventions of :mod:`hodgekit.exterior`:

    d     = sum_mu  exterior(mu) o d/dx_mu
    delta = -sum_mu interior(mu) o d/dx_mu
    Delta = d delta + delta d = -sum_mu d^2/dx_mu^2

The inverse Laplacian writes every homogeneous piece as
``sum_m |x|^(2m) h_{m,nu}`` with ``h`` harmonic and homogeneous, then
divides term by term using

    Delta(|x|^(2m+2) h) = -c(n, m, nu) |x|^(2m) h,   c = 2(m+1)(2m+2nu+n),

the minus sign being forced by the positive-Laplacian convention. The
sign is not hard-coded: each term's eigenvalue is read off from a direct
application of ``Delta`` and checked against ``c`` in magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import re
from typing import Iterable, Mapping

from hodgekit.exterior import (
    FormIndex,
    apply_exterior,
    apply_interior,
    apply_star,
    basis,
)
from hodgekit.polynomial import (
    Polynomial,
    format_polynomial,
    monomials,
    parse_polynomial,
    rank,
    solve,
)


@dataclass(frozen=True)
class PolyForm:
    n: int
    k: int
    components: Mapping[FormIndex, Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        # degrees -1 and n+1 have an empty basis; they hold d/delta of the extreme degrees
        if not -1 <= self.k <= self.n + 1:
            raise ValueError(f"degree {self.k} out of range for n={self.n}")
        clean = {}
        for idx, p in self.components.items():
            if idx.n != self.n or idx.degree != self.k:
                raise ValueError(f"component {idx} incompatible with (n={self.n}, k={self.k})")
            if p.n != self.n:
                raise ValueError(f"polynomial dimension {p.n} != {self.n}")
            if p:
                clean[idx] = p
        object.__setattr__(self, "components", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, n: int, k: int) -> "PolyForm":
        return cls(n, k, {})

    @classmethod
    def scalar(cls, p: Polynomial) -> "PolyForm":
        return cls(p.n, 0, {FormIndex((), p.n): p})

    @classmethod
    def from_dict(cls, n: int, k: int, comps: Mapping) -> "PolyForm":
        """Components keyed by axis tuples, e.g. ``{(0, 1): poly}``."""
        return cls(n, k, {FormIndex(tuple(a), n): p for a, p in comps.items()})

    def __getitem__(self, idx: FormIndex) -> Polynomial:
        return self.components.get(idx, Polynomial.zero(self.n))

    def is_zero(self) -> bool:
        return not self.components

    @property
    def degree(self) -> float:
        return max((p.degree for p in self.components.values()), default=float("-inf"))

    def map(self, fn) -> "PolyForm":
        return PolyForm(self.n, self.k, {i: fn(p) for i, p in self.components.items()})

    def _check(self, other: "PolyForm"):
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError(f"shape mismatch: ({self.n},{self.k}) vs ({other.n},{other.k})")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        comps = dict(self.components)
        for i, p in other.components.items():
            comps[i] = comps[i] + p if i in comps else p
        return PolyForm(self.n, self.k, comps)

    def __neg__(self) -> "PolyForm":
        return self.map(lambda p: -p)

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def __mul__(self, c) -> "PolyForm":
        return self.map(lambda p: p * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k) and self.components == other.components

    def __hash__(self):
        return hash((self.n, self.k, tuple(self.components.items())))

    def __str__(self):
        return format_polyform(self)


def poly_d(f: PolyForm) -> PolyForm:
    acc: dict = {}
    for mu in range(f.n):
        part = apply_exterior(mu, {i: p.diff(mu) for i, p in f.components.items()})
        for i, p in part.items():
            acc[i] = acc[i] + p if i in acc else p
    return PolyForm(f.n, min(f.k + 1, f.n + 1), acc)


def poly_delta(f: PolyForm) -> PolyForm:
    acc: dict = {}
    for mu in range(f.n):
        part = apply_interior(mu, {i: -p.diff(mu) for i, p in f.components.items()})
        for i, p in part.items():
            acc[i] = acc[i] + p if i in acc else p
    return PolyForm(f.n, max(f.k - 1, -1), acc)


def poly_laplacian(f: PolyForm) -> PolyForm:
    return f.map(Polynomial.laplacian)


def poly_star(f: PolyForm) -> PolyForm:
    return PolyForm(f.n, f.n - f.k, apply_star(dict(f.components)))


def is_polynomial_nilpotent(f: Polynomial) -> int:
    """Smallest m with Delta^m f = 0 (0 for the zero polynomial)."""
    m = 0
    while f:
        f = f.laplacian()
        m += 1
    return m


# -- harmonic decomposition -------------------------------------------------------

@dataclass(frozen=True)
class HarmonicTerm:
    m: int
    nu: int
    h: Polynomial
    weight: Fraction

    def value(self) -> Polynomial:
        return Polynomial.norm_squared(self.h.n, self.m) * self.h * self.weight


@dataclass(frozen=True)
class HarmonicExpansion:
    """``f = sum weight * |x|^(2m) * h`` with ``h`` harmonic, homogeneous of degree nu.

    Each ``h`` is normalised so that its leading monomial (total degree,
    then lexicographic) has coefficient 1; the scale lives in ``weight``.
    """

    n: int
    terms: tuple[HarmonicTerm, ...]

    def reconstruct(self) -> Polynomial:
        out = Polynomial.zero(self.n)
        for t in self.terms:
            out = out + t.value()
        return out


@lru_cache(maxsize=None)
def _lift_inverse(n: int, d: int) -> tuple[tuple[tuple[int, ...], ...], list[list[Fraction]]]:
    """Inverse of q -> sum_i d_i^2 (|x|^2 q) on homogeneous degree-d polynomials.

    The map equals ``(2n + 4d) q + |x|^2 sum_i d_i^2 q`` and is invertible
    for every d >= 0; returns the monomial basis and the inverse matrix.
    """
    mons = monomials(n, d)
    pos = {e: i for i, e in enumerate(mons)}
    r2 = Polynomial.norm_squared(n)
    size = len(mons)
    mat = [[Fraction(0)] * size for _ in range(size)]
    for j, e in enumerate(mons):
        image = (r2 * Polynomial.monomial(e)).flat_laplacian()
        for ee, c in image.terms.items():
            mat[pos[ee]][j] = c
    ident = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    return mons, solve(mat, ident)


def _split_homogeneous(f: Polynomial) -> tuple[Polynomial, Polynomial]:
    """f = h + |x|^2 q with Delta h = 0; f homogeneous of degree d."""
    d = int(f.degree)
    if d < 2:
        return f, Polynomial.zero(f.n)
    mons, inv = _lift_inverse(f.n, d - 2)
    g = f.flat_laplacian()
    coeffs = [g.coefficient(e) for e in mons]
    q_terms = {}
    for i, e in enumerate(mons):
        c = sum((inv[i][j] * coeffs[j] for j in range(len(mons)) if coeffs[j]), Fraction(0))
        if c:
            q_terms[e] = c
    q = Polynomial(f.n, q_terms)
    h = f - Polynomial.norm_squared(f.n) * q
    return h, q


def _normalised(m: int, nu: int, h: Polynomial) -> HarmonicTerm:
    _, lead = h.leading_term()
    return HarmonicTerm(m, nu, h / lead, lead)


def harmonic_decompose(f: Polynomial) -> HarmonicExpansion:
    terms: list[HarmonicTerm] = []
    for d, part in f.homogeneous_parts().items():
        m = 0
        rest = part
        while rest:
            h, rest = _split_homogeneous(rest)
            if h:
                terms.append(_normalised(m, d - 2 * m, h))
            m += 1
    terms.sort(key=lambda t: (2 * t.m + t.nu, t.m))
    return HarmonicExpansion(f.n, tuple(terms))


def laplacian_constant(n: int, m: int, nu: int) -> int:
    """c(n, m, nu) = 2(m+1)(2m+2nu+n)."""
    return 2 * (m + 1) * (2 * m + 2 * nu + n)


def inverse_laplacian(f: Polynomial) -> Polynomial:
    """Particular solution g of Delta g = f built from the harmonic expansion."""
    g = Polynomial.zero(f.n)
    for t in harmonic_decompose(f).terms:
        base = Polynomial.norm_squared(f.n, t.m) * t.h
        lifted = Polynomial.norm_squared(f.n, t.m + 1) * t.h
        image = lifted.laplacian()
        exp, c = base.leading_term()
        eigen = image.coefficient(exp) / c
        if image != base * eigen or abs(eigen) != laplacian_constant(f.n, t.m, t.nu):
            raise ArithmeticError(f"lifting identity failed for m={t.m}, nu={t.nu}")
        g = g + lifted * (t.weight / eigen)
    return g


def poly_inverse_laplacian(f: PolyForm) -> PolyForm:
    return f.map(inverse_laplacian)


def kernel_dimension_audit(n: int, dmax: int) -> dict[int, dict[str, int]]:
    """Rank/nullity of Delta on homogeneous polynomials of each degree <= dmax."""
    table = {}
    for nu in range(dmax + 1):
        src = monomials(n, nu)
        dst = monomials(n, nu - 2)
        pos = {e: i for i, e in enumerate(dst)}
        rows = [[Fraction(0)] * len(src) for _ in dst]
        for j, e in enumerate(src):
            for ee, c in Polynomial.monomial(e).laplacian().terms.items():
                rows[pos[ee]][j] = c
        r = rank(rows) if dst else 0
        table[nu] = {"dim": len(src), "rank": r, "kernel": len(src) - r}
    return table


def harmonic_dimension(n: int, nu: int) -> int:
    """Closed form dim H_nu(R^n) = C(nu+n-1, n-1) - C(nu+n-3, n-1)."""
    from math import comb

    lower = comb(nu + n - 3, n - 1) if nu >= 2 else 0
    return comb(nu + n - 1, n - 1) - lower


# -- text format -------------------------------------------------------------------

_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s*;\s*k\s*=\s*(-?\d+)\s*$")
_LINE = re.compile(r"^\s*idx\s*=\s*\[([^\]]*)\]\s*;\s*poly\s*=\s*(.+?)\s*$")


def format_polyform(f: PolyForm) -> str:
    """Header ``n=..; k=..`` then one ``idx=[..]; poly=..`` line per nonzero component.

    Axis labels in ``idx`` are 1-based, matching the ``x1 .. xn`` variables.
    """
    lines = [f"n={f.n}; k={f.k}"]
    for idx, p in f.components.items():
        axes = ",".join(str(a + 1) for a in idx.axes)
        lines.append(f"idx=[{axes}]; poly={format_polynomial(p)}")
    return "\n".join(lines) + "\n"


def parse_polyform(text: str) -> PolyForm:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty polynomial-form text")
    head = _HEADER.match(lines[0])
    if not head:
        raise ValueError(f"expected header 'n=<int>; k=<int>', got {lines[0]!r}")
    n, k = int(head.group(1)), int(head.group(2))
    comps: dict[FormIndex, Polynomial] = {}
    for ln in lines[1:]:
        m = _LINE.match(ln)
        if not m:
            raise ValueError(f"cannot parse component line {ln!r}")
        raw = m.group(1).strip()
        axes = tuple(int(a) - 1 for a in raw.split(",")) if raw else ()
        idx = FormIndex(axes, n)
        if idx.degree != k:
            raise ValueError(f"component {list(a + 1 for a in axes)} has degree {idx.degree}, expected {k}")
        if idx in comps:
            raise ValueError(f"duplicate component {idx}")
        comps[idx] = parse_polynomial(m.group(2), n)
    return PolyForm(n, k, comps)


def iter_components(f: PolyForm) -> Iterable[tuple[FormIndex, Polynomial]]:
    for idx in basis(f.n, f.k):
        yield idx, f[idx]
