"""Exhaustive sign-lemma and exact-calculus suites behind ``hodgekit verify-algebra``.

``fault`` names one identity whose expected value gets its sign flipped;
it exists so the failure path of the command can be exercised.
"""

from __future__ import annotations

from dataclasses import dataclass
import random
import time

from hodgekit.exterior import (
    apply_exterior,
    apply_interior,
    apply_star,
    basis,
    hodge_star_basis,
    wedge_basis,
)
from hodgekit.polyform import (
    PolyForm,
    harmonic_decompose,
    poly_d,
    poly_delta,
    poly_inverse_laplacian,
    poly_laplacian,
    poly_star,
)
from hodgekit.corpus import random_polyform

EXTERIOR_IDENTITIES = (
    "star_star",
    "interior_star",
    "wedge_star_volume",
    "exterior_anticommute",
    "interior_anticommute",
    "exterior_interior_anticommutator",
)
POLY_IDENTITIES = (
    "d_squared",
    "delta_squared",
    "hodge_laplacian",
    "delta_star_d_star",
    "inverse_laplacian",
    "harmonic_reconstruction",
)
IDENTITIES = EXTERIOR_IDENTITIES + POLY_IDENTITIES


@dataclass
class IdentityResult:
    name: str
    cases: int
    failures: int
    first_failure: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


class _Tally:
    def __init__(self, name: str, fault: str | None):
        self.result = IdentityResult(name, 0, 0)
        self.flip = -1 if fault == name else 1

    def expect(self, got, want, label):
        self.result.cases += 1
        if self.flip < 0:
            want = _negate(want)
        if got != want:
            self.result.failures += 1
            if not self.result.first_failure:
                self.result.first_failure = label


def _negate(x):
    if isinstance(x, dict):
        return {i: -c for i, c in x.items()}
    return -x


def _clean(form: dict) -> dict:
    return {i: c for i, c in form.items() if c != 0}


def exterior_suite(n_max: int, fault: str | None = None) -> list[IdentityResult]:
    if not 1 <= n_max <= 5:
        raise ValueError(f"n_max must be in 1..5, got {n_max}")
    t = {name: _Tally(name, fault) for name in EXTERIOR_IDENTITIES}
    for n in range(1, n_max + 1):
        for k in range(n + 1):
            for a in basis(n, k):
                e = {a: 1}
                label = f"n={n} {a}"
                t["star_star"].expect(_clean(apply_star(apply_star(e))), {a: (-1) ** (k * (n - k))}, label)
                s, b = hodge_star_basis(a)
                t["wedge_star_volume"].expect(s * wedge_basis(a, b).sign, 1, label)
                for mu in range(n):
                    lhs = _clean(apply_interior(mu, e))
                    rhs = {i: (-1) ** (n * k + n) * c
                           for i, c in _clean(apply_star(apply_exterior(mu, apply_star(e)))).items()}
                    t["interior_star"].expect(lhs, rhs, f"{label} mu={mu}")
                    for nu in range(n):
                        ee = _clean(apply_exterior(mu, apply_exterior(nu, e)))
                        t["exterior_anticommute"].expect(
                            ee, _negate(_clean(apply_exterior(nu, apply_exterior(mu, e)))), f"{label} {mu},{nu}")
                        ii = _clean(apply_interior(mu, apply_interior(nu, e)))
                        t["interior_anticommute"].expect(
                            ii, _negate(_clean(apply_interior(nu, apply_interior(mu, e)))), f"{label} {mu},{nu}")
                        ei = apply_exterior(mu, apply_interior(nu, e))
                        for i, c in apply_interior(nu, apply_exterior(mu, e)).items():
                            ei[i] = ei.get(i, 0) + c
                        t["exterior_interior_anticommutator"].expect(
                            _clean(ei), {a: 1} if mu == nu else {}, f"{label} {mu},{nu}")
    return [t[name].result for name in EXTERIOR_IDENTITIES]


def poly_identity_sign(n: int, k: int) -> int:
    """delta = sign * star d star on k-forms."""
    return (-1) ** (n * k + n + 1)


def polyform_suite(forms: list[PolyForm], fault: str | None = None) -> list[IdentityResult]:
    t = {name: _Tally(name, fault) for name in POLY_IDENTITIES}
    for i, f in enumerate(forms):
        label = f"form #{i} (n={f.n}, k={f.k})"
        df = poly_d(f)
        sf = poly_delta(f)
        t["d_squared"].expect(poly_d(df).is_zero(), True, label)
        t["delta_squared"].expect(poly_delta(sf).is_zero(), True, label)
        t["hodge_laplacian"].expect(poly_d(sf) + poly_delta(df), poly_laplacian(f), label)
        t["delta_star_d_star"].expect(poly_star(poly_d(poly_star(f))) * poly_identity_sign(f.n, f.k), sf, label)
        t["inverse_laplacian"].expect(poly_laplacian(poly_inverse_laplacian(f)), f, label)
        for idx, p in f.components.items():
            exp = harmonic_decompose(p)
            t["harmonic_reconstruction"].expect(exp.reconstruct(), p, f"{label} {idx}")
            for term in exp.terms:
                t["harmonic_reconstruction"].expect(term.h.laplacian().is_zero(), True, f"{label} {idx} harmonic")
    return [t[name].result for name in POLY_IDENTITIES]


def algebra_suite(n_max: int = 5, corpus_size: int = 60, seed: int = 0, deg_max: int = 4,
                  fault: str | None = None) -> tuple[list[IdentityResult], float]:
    if fault is not None and fault not in IDENTITIES:
        raise ValueError(f"unknown identity {fault!r}; choose from {', '.join(IDENTITIES)}")
    t0 = time.perf_counter()
    results = exterior_suite(n_max, fault)
    gen = random.Random(seed)
    forms = []
    for _ in range(corpus_size):
        n = gen.randint(1, min(n_max, 4))
        forms.append(random_polyform(n, gen.randint(0, n), gen.randint(0, deg_max), gen))
    results += polyform_suite(forms, fault)
    return results, time.perf_counter() - t0
