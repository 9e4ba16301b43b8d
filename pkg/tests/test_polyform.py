from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from hodgekit.corpus import polyform_corpus, random_polyform
from hodgekit.polyform import (
    PolyForm,
    format_polyform,
    harmonic_decompose,
    harmonic_dimension,
    inverse_laplacian,
    is_polynomial_nilpotent,
    kernel_dimension_audit,
    laplacian_constant,
    parse_polyform,
    poly_d,
    poly_delta,
    poly_inverse_laplacian,
    poly_laplacian,
    poly_star,
)
from hodgekit.polynomial import Polynomial, parse_polynomial
from hodgekit.verify import polyform_suite, poly_identity_sign


def P(text, n):
    return parse_polynomial(text, n)


def form(n, k, comps):
    return PolyForm.from_dict(n, k, {tuple(a - 1 for a in axes): P(t, n) for axes, t in comps.items()})


def test_d_examples():
    assert poly_d(form(2, 1, {(2,): "x1"})) == form(2, 2, {(1, 2): "1"})
    assert poly_d(PolyForm.scalar(P("x1*x2", 2))) == form(2, 1, {(1,): "x2", (2,): "x1"})
    assert poly_d(poly_d(form(3, 1, {(3,): "x1^2*x2"}))).is_zero()


def test_delta_examples():
    assert poly_delta(form(2, 1, {(1,): "x1"})) == PolyForm.scalar(P("-1", 2))
    assert poly_delta(form(2, 1, {(1,): "1"})).is_zero()
    assert poly_delta(form(2, 1, {(1,): "x2"})).is_zero()


def test_laplacian_examples():
    assert poly_laplacian(PolyForm.scalar(P("x1^2", 2))) == PolyForm.scalar(P("-2", 2))
    assert poly_laplacian(PolyForm.scalar(P("x1*x2", 2))).is_zero()


@pytest.mark.parametrize("text,n,m", [("x1*x2", 2, 1), ("x1^2 + x2^2 + x3^2", 3, 2), ("0", 2, 0),
                                      ("x1^4", 1, 3)])
def test_nilpotent(text, n, m):
    assert is_polynomial_nilpotent(P(text, n)) == m


def test_harmonic_examples():
    exp = harmonic_decompose(P("x1^2 + x2^2 + x3^2", 3))
    assert [(t.m, t.nu, t.h, t.weight) for t in exp.terms] == [(1, 0, P("1", 3), 1)]
    exp = harmonic_decompose(P("x1^2", 2))
    got = {(t.m, t.nu): (t.h, t.weight) for t in exp.terms}
    assert got == {(0, 2): (P("x1^2 - x2^2", 2), Fraction(1, 2)), (1, 0): (P("1", 2), Fraction(1, 2))}
    h = P("x1*x2*x3", 3)
    exp = harmonic_decompose(h)
    assert [(t.m, t.nu, t.weight) for t in exp.terms] == [(0, 3, 1)]


def test_inverse_laplacian_examples():
    assert inverse_laplacian(P("1", 2)) == P("-1/4*x1^2 - 1/4*x2^2", 2)
    assert inverse_laplacian(P("x1", 3)) == P("-1/10*x1^3 - 1/10*x1*x2^2 - 1/10*x1*x3^2", 3)


@pytest.mark.parametrize("n,m,nu", [(2, 0, 0), (3, 0, 1), (3, 2, 3), (4, 1, 2)])
def test_laplacian_constant_and_sign(n, m, nu):
    # Delta(|x|^(2m+2) h) = -c |x|^(2m) h for harmonic h of degree nu
    h = next(t.h for t in harmonic_decompose(Polynomial.monomial((1,) * min(nu, n) + (0,) * (n - min(nu, n)))
                                              if nu <= n else P("1", n)).terms)
    if h.degree != nu:
        pytest.skip("no simple harmonic of that degree")
    c = laplacian_constant(n, m, nu)
    assert c == 2 * (m + 1) * (2 * m + 2 * nu + n)
    lhs = (Polynomial.norm_squared(n, m + 1) * h).laplacian()
    assert lhs == Polynomial.norm_squared(n, m) * h * (-c)


def test_inverse_roundtrip_modulo_harmonics():
    g = P("x1^3*x2 + x2^2", 2)
    back = inverse_laplacian(g.laplacian())
    assert (back - g).laplacian().is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dimension_audit(n):
    audit = kernel_dimension_audit(n, 8)
    for nu, row in audit.items():
        assert row["kernel"] == row["dim"] - row["rank"] == harmonic_dimension(n, nu)
    if n == 2:
        assert [audit[nu]["kernel"] for nu in range(5)] == [1, 2, 2, 2, 2]
    if n == 3:
        assert audit[2]["kernel"] == 5
    assert audit[1]["kernel"] == n


def test_corpus_identities():
    results = polyform_suite(polyform_corpus(120, seed=11))
    for r in results:
        assert r.passed, (r.name, r.first_failure)


def test_star_d_star_sign_is_the_verified_one():
    f = form(3, 1, {(1,): "x1*x2", (3,): "x3^2"})
    assert poly_star(poly_d(poly_star(f))) * poly_identity_sign(3, 1) == poly_delta(f)
    assert poly_star(poly_d(poly_star(f))) * -poly_identity_sign(3, 1) != poly_delta(f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_hypothesis_identities(seed):
    import random
    gen = random.Random(seed)
    n = gen.randint(1, 4)
    f = random_polyform(n, gen.randint(0, n), gen.randint(0, 5), gen)
    assert poly_d(poly_d(f)).is_zero()
    assert poly_delta(poly_delta(f)).is_zero()
    assert poly_d(poly_delta(f)) + poly_delta(poly_d(f)) == poly_laplacian(f)
    assert poly_laplacian(poly_inverse_laplacian(f)) == f


def test_text_roundtrip_and_errors():
    f = form(3, 2, {(1, 2): "x1 - 1/2", (2, 3): "x3^2*x1"})
    text = format_polyform(f)
    assert text.splitlines()[1].startswith("idx=[1,2]")
    assert parse_polyform("# comment\n" + text) == f
    for bad in ["", "n=2\nidx=[1]; poly=x1", "n=2; k=1\nidx=[1,2]; poly=x1", "n=2; k=1\nidx=[1]; poly=x1\nidx=[1]; poly=1",
                "n=2; k=1\nidx=[3]; poly=1", "n=2; k=1\nfoo"]:
        with pytest.raises(ValueError):
            parse_polyform(bad)


def test_edge_degrees_are_empty():
    top = form(2, 2, {(1, 2): "x1"})
    assert poly_d(top) == PolyForm.zero(2, 3)
    assert poly_delta(PolyForm.scalar(P("x1", 2))) == PolyForm.zero(2, -1)
    with pytest.raises(ValueError):
        PolyForm(2, 4)
