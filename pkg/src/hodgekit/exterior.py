"""Combinatorial exterior algebra on the basis of Lambda^k(R^n*).

Basis covectors dx_{i1} ^ ... ^ dx_{ik} are labelled by :class:`FormIndex`
(strictly increasing 0-based axes). Every basis operation returns a
:class:`SignedIndex`; the ``apply_*`` helpers lift them to sparse forms
stored as ``{FormIndex: coefficient}`` dicts, where the coefficient can be
anything supporting ``+`` and multiplication by ``+-1`` (Fractions,
polynomials, numpy arrays).

Sign conventions
----------------
* ``star(a)`` is fixed by ``a ^ star(a) = dx_0 ^ ... ^ dx_{n-1}``.
* ``interior(mu, a)`` removes ``mu`` with sign ``(-1)**pos`` where ``pos``
  is the 0-based slot of ``mu`` in ``a``.
* With these, ``star(star(a)) = (-1)**(k*(n-k)) a`` and on k-forms
  ``interior(mu) = (-1)**(n*k + n) * star o exterior(mu) o star``; the
  second exponent is the one confirmed by exhaustive enumeration for
  n <= 5 (the alternative ``(-1)**(n-k+n)`` fails, e.g. n=3, k=2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, NamedTuple, Optional


@dataclass(frozen=True, order=True)
class FormIndex:
    """Sorted k-subset of the axes {0, ..., n-1}."""

    axes: tuple[int, ...]
    n: int

    def __post_init__(self):
        axes = tuple(int(a) for a in self.axes)
        object.__setattr__(self, "axes", axes)
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got {self.n}")
        if any(b <= a for a, b in zip(axes, axes[1:])):
            raise ValueError(f"axes must be strictly increasing: {axes}")
        if axes and (axes[0] < 0 or axes[-1] >= self.n):
            raise ValueError(f"axes {axes} out of range for n={self.n}")

    @property
    def degree(self) -> int:
        return len(self.axes)

    def complement(self) -> "FormIndex":
        return FormIndex(tuple(i for i in range(self.n) if i not in self.axes), self.n)

    def __str__(self) -> str:
        if not self.axes:
            return "1"
        return "^".join(f"dx{i + 1}" for i in self.axes)


class SignedIndex(NamedTuple):
    sign: int
    index: Optional[FormIndex]

    def __bool__(self) -> bool:
        return self.sign != 0


ZERO = SignedIndex(0, None)


@lru_cache(maxsize=None)
def basis(n: int, k: int) -> tuple[FormIndex, ...]:
    """Canonical (lexicographic) basis of Lambda^k(R^n*)."""
    if k < 0 or k > n:
        return ()
    return tuple(FormIndex(c, n) for c in combinations(range(n), k))


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    # parity of the shuffle sorting a + b: count pairs (x in a, y in b) with x > y
    inversions = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inversions += j
    return -1 if inversions % 2 else 1


def wedge_basis(a: FormIndex, b: FormIndex) -> SignedIndex:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} != {b.n}")
    if set(a.axes) & set(b.axes):
        return ZERO
    return SignedIndex(_merge_sign(a.axes, b.axes), FormIndex(tuple(sorted(a.axes + b.axes)), a.n))


def hodge_star_basis(a: FormIndex) -> SignedIndex:
    comp = a.complement()
    return SignedIndex(wedge_basis(a, comp).sign, comp)


def interior_basis(mu: int, a: FormIndex) -> SignedIndex:
    if not 0 <= mu < a.n:
        raise ValueError(f"axis {mu} out of range for n={a.n}")
    if mu not in a.axes:
        return ZERO
    pos = a.axes.index(mu)
    rest = a.axes[:pos] + a.axes[pos + 1:]
    return SignedIndex(-1 if pos % 2 else 1, FormIndex(rest, a.n))


def exterior_basis(mu: int, a: FormIndex) -> SignedIndex:
    if not 0 <= mu < a.n:
        raise ValueError(f"axis {mu} out of range for n={a.n}")
    return wedge_basis(FormIndex((mu,), a.n), a)


# -- lifting to sparse forms ---------------------------------------------------

def apply_basis_map(form: dict, op: Callable[[FormIndex], SignedIndex]) -> dict:
    """Apply a signed basis map linearly to ``{FormIndex: coeff}``."""
    out: dict = {}
    for idx, coeff in form.items():
        sign, target = op(idx)
        if not sign:
            continue
        term = coeff if sign > 0 else -coeff
        if target in out:
            out[target] = out[target] + term
        else:
            out[target] = term
    return out


def apply_star(form: dict) -> dict:
    return apply_basis_map(form, hodge_star_basis)


def apply_interior(mu: int, form: dict) -> dict:
    return apply_basis_map(form, lambda a: interior_basis(mu, a))


def apply_exterior(mu: int, form: dict) -> dict:
    return apply_basis_map(form, lambda a: exterior_basis(mu, a))


def iter_forms(n_max: int) -> Iterable[FormIndex]:
    for n in range(1, n_max + 1):
        for k in range(n + 1):
            yield from basis(n, k)
