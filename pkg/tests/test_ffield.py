import itertools
import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dlcurve.errors import FieldTooLarge, InvalidPrime, NoEmbedding
from dlcurve.ffield import (FiniteField, embed, frobenius, is_irreducible,
                            lex_smallest_irreducible, make_field, nth_power_fiber_count)

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)]
# every field of size <= 2^12 used in the exhaustive checks
EXHAUSTIVE = [(p, k) for p in (2, 3, 5, 7, 11, 13) for k in range(1, 13) if p ** k <= 1 << 12]


def test_prime_field_two():
    F = make_field(2, 1)
    assert F.order == 2
    assert {x.code for x in F.elements()} == {0, 1}


def test_f9_has_nine_elements():
    F = make_field(3, 2)
    els = list(F.elements())
    assert len(els) == 9 and len(set(els)) == 9


def test_f16_frobenius_order_four():
    F = make_field(2, 4)
    for x in F.elements():
        assert frobenius(x, 4) == x
    assert any(frobenius(x, 1) != x for x in F.elements())


def test_make_field_is_deterministic():
    assert make_field(5, 3).defining_poly == make_field(5, 3).defining_poly
    assert FiniteField(5, make_field(5, 3).defining_poly) == make_field(5, 3)


def test_make_field_errors():
    with pytest.raises(InvalidPrime):
        make_field(6, 1)
    with pytest.raises(FieldTooLarge):
        make_field(2, 25)
    with pytest.raises(FieldTooLarge):
        make_field(1009, 7)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (2, 6)])
def test_defining_poly_is_lex_smallest(p, k):
    # brute-force oracle: sympy irreducibility over all monic candidates
    x = sympy.symbols("x")
    want = None
    for tail in itertools.product(range(p), repeat=k):
        # constant term is the most significant digit of the order
        coeffs = list(tail) + [1]
        poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        if poly.is_irreducible:
            want = tuple(coeffs)
            break
    assert lex_smallest_irreducible(p, k) == want
    assert make_field(p, k).defining_poly == list(want)


def test_is_irreducible_small_cases():
    assert is_irreducible([1, 1, 1], 2)
    assert not is_irreducible([1, 0, 1], 2)  # (x + 1)^2
    assert is_irreducible([2, 2, 1], 3)


def test_f9_generator_cube():
    # x^2 - x - 1 over F_3, written constant term first
    F = FiniteField(3, [2, 2, 1])
    g = F.gen
    assert g * g == g + 1
    assert g ** 3 == 2 * g + 1
    assert frobenius(g, 1) == 2 * g + 1


def test_prime_subfield_fixed_by_frobenius():
    F = make_field(3, 2)
    for a in range(3):
        assert frobenius(F(a), 1) == F(a)
    for x in F.elements():
        assert frobenius(frobenius(x, 1), 1) == x


def test_embed_prime_field():
    e = embed(make_field(3, 1), make_field(3, 2))
    assert e(2) == make_field(3, 2)(2)


def test_embed_compose_from_prime_field():
    F2, F4, F16 = make_field(2, 1), make_field(2, 2), make_field(2, 4)
    a, b, c = embed(F2, F4), embed(F4, F16), embed(F2, F16)
    for x in F2.elements():
        assert b(a(x)) == c(x)


def test_embed_generator_is_root():
    F4, F16 = make_field(2, 2), make_field(2, 4)
    assert F4.defining_poly == [1, 1, 1]
    g = embed(F4, F16).image
    assert g * g + g + 1 == F16.zero
    # first root in code order, found by exhaustive search
    roots = [x for x in F16.elements() if x * x + x + 1 == F16.zero]
    assert g == min(roots, key=lambda x: x.code)


def test_embed_rejects_non_dividing_degree():
    with pytest.raises(NoEmbedding):
        embed(make_field(2, 2), make_field(2, 3))
    with pytest.raises(NoEmbedding):
        embed(make_field(2, 1), make_field(3, 2))


@pytest.mark.parametrize("src,dst", [((2, 2), (2, 4)), ((2, 3), (2, 6)), ((3, 2), (3, 4)),
                                     ((2, 4), (2, 8)), ((5, 1), (5, 3)), ((2, 6), (2, 12))])
def test_embed_is_injective_homomorphism(src, dst):
    S, T = make_field(*src), make_field(*dst)
    e = embed(S, T)
    els = list(S.elements())
    images = [e(x) for x in els]
    assert len(set(images)) == len(els)
    for x in els:
        assert e(x ** S.p) == e(x) ** S.p
    sample = els if S.order <= 16 else els[:: max(1, S.order // 40)]
    for x, y in itertools.product(sample, repeat=2):
        assert e(x + y) == e(x) + e(y)
        assert e(x * y) == e(x) * e(y)


@pytest.mark.parametrize("p,k", EXHAUSTIVE)
def test_frobenius_additive_exhaustive(p, k):
    import numpy as np

    F = make_field(p, k)
    codes = np.arange(F.order, dtype=np.int64)
    xp = F.vpow(codes, p)
    for y in range(F.order):
        s = F.vadd(codes, np.full_like(codes, y))
        assert np.array_equal(F.vpow(s, p), F.vadd(xp, np.full_like(codes, xp[y])))


@pytest.mark.parametrize("p,k", SMALL)
def test_field_axioms(p, k):
    F = make_field(p, k)
    els = list(F.elements())
    for x in els:
        assert x + (-x) == F.zero
        if x:
            assert x * x.inverse() == F.one
    for x, y in itertools.product(els[:12], repeat=2):
        assert x * y == y * x
        assert (x + y) * x == x * x + y * x


@pytest.mark.parametrize("p,k", EXHAUSTIVE)
def test_multiplicative_group_cyclic(p, k):
    F = make_field(p, k)
    g = F.primitive_element()
    n = F.order - 1
    assert g ** n == F.one
    assert all(g ** (n // r) != F.one for r in sympy.primefactors(n)) if n > 1 else True
    assert len(list(F.elements())) == F.order


def test_mul_matches_sympy_oracle():
    F = make_field(3, 3)
    x = sympy.symbols("x")
    mod = sympy.Poly(list(reversed(F.defining_poly)), x, modulus=3)
    for a, b in itertools.product(range(0, 27, 2), range(1, 27, 3)):
        A, B = F.element(a), F.element(b)
        pa = sympy.Poly(list(reversed(A.coeffs)), x, modulus=3)
        pb = sympy.Poly(list(reversed(B.coeffs)), x, modulus=3)
        r = (pa * pb).rem(mod)
        want = [int(c) % 3 for c in reversed(r.all_coeffs())]
        want += [0] * (3 - len(want))
        assert list((A * B).coeffs) == want


def test_fiber_count_examples():
    F = make_field(3, 2)
    assert nth_power_fiber_count(F, 4, 0) == 1
    assert nth_power_fiber_count(F, 4, 1) == sum(1 for c in F.elements() if c ** 4 == F.one) == 4
    g = F.primitive_element()
    assert nth_power_fiber_count(F, 4, g) == sum(1 for c in F.elements() if c ** 4 == g) == 0


@pytest.mark.parametrize("p,k", [pk for pk in EXHAUSTIVE if pk[0] ** pk[1] <= 1 << 10])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 9])
def test_fiber_counts_sum_to_field_size(p, k, n):
    F = make_field(p, k)
    assert sum(nth_power_fiber_count(F, n, v) for v in F.elements()) == F.order


@pytest.mark.parametrize("p,k", [(2, 12), (3, 7), (5, 5), (7, 4), (13, 3), (11, 3)])
def test_fiber_counts_sum_large(p, k):
    import collections

    import numpy as np

    F = make_field(p, k)

    codes = np.arange(F.order, dtype=np.int64)
    for n in (2, 3, 4):
        images = collections.Counter(F.vpow(codes, n).tolist())
        assert all(nth_power_fiber_count(F, n, F.element(v)) == c for v, c in images.items())
        d = math.gcd(n, F.order - 1)
        assert sum(images.values()) == F.order and max(images.values()) == max(d, 1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 40))
def test_pow_and_frobenius_properties(pk, a, b, n):
    F = make_field(*pk)
    x, y = F.element(a % F.order), F.element(b % F.order)
    assert (x * y) ** n == x ** n * y ** n
    assert frobenius(x + y, 1) == frobenius(x, 1) + frobenius(y, 1)
    assert frobenius(x, F.k) == x


def test_int_coercion_and_repr():
    F = make_field(3, 2)
    assert F(4) == F(1)
    assert F(-1) == F(2)
    assert repr(F.gen) == "x"
    assert repr(F.zero) == "0"
