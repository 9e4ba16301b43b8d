"""Multivariate polynomials with exact rational coefficients.

Terms are stored as ``{exponent tuple: Fraction}`` with no zero entries.
Arithmetic is deliberately plain dict manipulation; degrees stay small
(<= 10) so there is nothing to gain from a sparse-vector backend.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
import math
import re
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class Polynomial:
    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple, Number] | None = None):
        if n < 1:
            raise ValueError(f"dimension must be positive, got {n}")
        self.n = n
        clean: dict[tuple, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for n={n}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c: Number) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        exp = [0] * n
        exp[i] = 1
        return cls(n, {tuple(exp): 1})

    @classmethod
    def monomial(cls, exp: Iterable[int], c: Number = 1) -> "Polynomial":
        exp = tuple(exp)
        return cls(len(exp), {exp: c})

    @classmethod
    def norm_squared(cls, n: int, power: int = 1) -> "Polynomial":
        """|x|^(2*power)."""
        r2 = cls(n, {tuple(2 if j == i else 0 for j in range(n)): 1 for i in range(n)})
        out = cls.constant(n, 1)
        for _ in range(power):
            out = out * r2
        return out

    # -- structure ----------------------------------------------------------
    @property
    def degree(self) -> float:
        if not self.terms:
            return -math.inf
        return max(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.n, {e: c for e, c in self.terms.items() if sum(e) == d})

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Polynomial(self.n, t) for d, t in sorted(parts.items())}

    def coefficient(self, exp: tuple) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def leading_term(self) -> tuple[tuple, Fraction]:
        """Largest exponent under (total degree, lexicographic) order."""
        exp = max(self.terms, key=lambda e: (sum(e), e))
        return exp, self.terms[exp]

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ValueError(f"dimension mismatch: {self.n} != {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.n, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.n, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus -----------------------------------------------------------
    def diff(self, i: int) -> "Polynomial":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return Polynomial(self.n, terms)

    def flat_laplacian(self) -> "Polynomial":
        """sum_i d^2/dx_i^2 (no sign flip)."""
        terms: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            for i, a in enumerate(e):
                if a >= 2:
                    ne = list(e)
                    ne[i] -= 2
                    ne = tuple(ne)
                    terms[ne] = terms.get(ne, Fraction(0)) + c * a * (a - 1)
        return Polynomial(self.n, terms)

    def laplacian(self) -> "Polynomial":
        """Positive Laplacian -sum_i d^2/dx_i^2."""
        return -self.flat_laplacian()

    def __call__(self, *x):
        total = 0
        for e, c in self.terms.items():
            t = c
            for xi, a in zip(x, e):
                t = t * xi**a
            total = total + t
        return total

    # -- text ---------------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial(n={self.n}, '{format_polynomial(self)}')"


def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponents of all degree-d monomials in n variables, lexicographically descending."""
    return _monomials(n, d)


@lru_cache(maxsize=None)
def _monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    if d < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(sorted(out, reverse=True))


# -- text format ---------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    """``c1*x1^a*x2^b + ...`` with exact ``p/q`` coefficients; ``0`` when empty."""
    if not p.terms:
        return "0"
    pieces = []
    for e in sorted(p.terms, key=lambda e: (sum(e), e), reverse=True):
        c = p.terms[e]
        factors = [f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(e) if a]
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")


def parse_polynomial(text: str, n: int) -> Polynomial:
    """Inverse of :func:`format_polynomial`."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    terms: dict[tuple, Fraction] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign, body = m.group(1), m.group(2).strip()
        if sign is None and not first:
            raise ValueError(f"missing operator before {body!r}")
        first = False
        coeff = Fraction(-1 if sign == "-" else 1)
        exp = [0] * n
        for factor in body.split("*"):
            factor = factor.strip()
            if _NUMBER.match(factor):
                coeff *= Fraction(factor)
                continue
            fm = _FACTOR.match(factor)
            if not fm:
                raise ValueError(f"bad factor {factor!r}")
            i = int(fm.group(1)) - 1
            if not 0 <= i < n:
                raise ValueError(f"variable x{i + 1} out of range for n={n}")
            exp[i] += int(fm.group(2) or 1)
        exp = tuple(exp)
        terms[exp] = terms.get(exp, Fraction(0)) + coeff
        pos = m.end()
    return Polynomial(n, terms)


# -- exact linear algebra --------------------------------------------------------

def rank(rows: list[list[Fraction]]) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    r = 0
    ncols = len(m[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def solve(matrix: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve ``matrix @ X = rhs`` exactly for square nonsingular ``matrix``."""
    size = len(matrix)
    aug = [list(map(Fraction, row)) + list(map(Fraction, b)) for row, b in zip(matrix, rhs)]
    for col in range(size):
        piv = next((i for i in range(col, size) if aug[i][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [a / p for a in aug[col]]
        for i in range(size):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[size:] for row in aug]
