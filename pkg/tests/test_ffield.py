"""Field arithmetic: deterministic moduli, Frobenius, subfields, roots."""

import itertools

import pytest

from isocensus.ffield import (FieldElement, enumerate_subfield, factorize,
                              frobenius_power, in_subfield, is_prime, kth_root,
                              make_field, subfield_generator)


def sieve_smallest_irreducible(p, degree):
    """Independent oracle: lexicographic sieve with trial-division tests."""
    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
        return out

    def divides(d, f):
        f = list(f)
        while True:
            while f and f[-1] == 0:
                f.pop()
            if len(f) < len(d):
                break
            c = f[-1]
            shift = len(f) - len(d)
            for i, di in enumerate(d):
                f[shift + i] = (f[shift + i] - c * di) % p
        return not any(f)

    divisors = [list(c) + [1] for deg in range(1, degree // 2 + 1)
                for c in itertools.product(range(p), repeat=deg)]
    for coeffs in itertools.product(range(p), repeat=degree):
        cand = list(coeffs) + [1]
        if not any(divides(d, cand) for d in divisors):
            return tuple(cand)
    raise AssertionError


def test_prime_field_modulus_is_x():
    assert make_field(2, 1).modulus == (0, 1)


def test_unique_quadratic_modulus_over_f2():
    assert make_field(2, 2).modulus == (1, 1, 1)


def test_smallest_quartic_modulus_over_f3():
    field = make_field(3, 4)
    # frozen from the trial-division sieve oracle below
    assert field.modulus == (1, 0, 1, 1, 1)
    assert field.modulus == sieve_smallest_irreducible(3, 4)


@pytest.mark.parametrize("p,degree", [(2, 5), (3, 3), (5, 2), (7, 2)])
def test_modulus_matches_sieve_oracle(p, degree):
    assert make_field(p, degree).modulus == sieve_smallest_irreducible(p, degree)


def test_construction_is_reproducible():
    a, b = make_field(3, 4), make_field(3, 4)
    assert a.modulus == b.modulus
    assert a.one == b.one


def test_make_field_rejects_bad_input():
    with pytest.raises(ValueError):
        make_field(6, 2)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(ValueError):
        make_field(2, 40, size_limit=2**24)


@pytest.mark.parametrize("p,degree", [(2, 4), (3, 2), (5, 2), (2, 6)])
def test_field_axioms_on_full_grid(p, degree):
    field = make_field(p, degree)
    elements = list(field.iter_elements())
    assert len(elements) == p**degree
    one, zero = field.one, field.zero
    for a in elements:
        assert field.add(a, zero) == a
        assert field.mul(a, one) == a
        assert field.add(a, field.neg(a)) == zero
        if any(a):
            assert field.mul(a, field.inv(a)) == one
            # x^(p^D) = x for every element
            assert field.frobenius(a, degree) == a


def test_inverse_of_zero_raises():
    field = make_field(5, 2)
    with pytest.raises(ZeroDivisionError):
        field.inv(field.zero)


@pytest.mark.parametrize("p,degree,e", [(2, 4, 1), (2, 4, 2), (3, 2, 1), (5, 2, 1)])
def test_frobenius_is_an_automorphism(p, degree, e):
    field = make_field(p, degree)
    elements = list(field.iter_elements())
    for a in elements:
        for b in elements:
            assert field.frobenius(field.mul(a, b), e) == \
                field.mul(field.frobenius(a, e), field.frobenius(b, e))
            assert field.frobenius(field.add(a, b), e) == \
                field.add(field.frobenius(a, e), field.frobenius(b, e))


def test_frobenius_fixes_prime_field():
    field = make_field(7, 2)
    for c in range(7):
        x = FieldElement(field, field.from_int(c))
        assert frobenius_power(x, 1) == x


def test_frobenius_squares_f4_generator():
    field = make_field(2, 2)
    x = field.element((0, 1))
    assert frobenius_power(x, 1).coeffs == (1, 1)
    assert frobenius_power(x, 1) == x * x
    assert frobenius_power(x, 2) == x


def test_subfield_membership_counts():
    field = make_field(2, 4)
    members = [a for a in field.iter_elements() if field.in_subfield(a, 2)]
    assert len(members) == 4
    gen = subfield_generator(field, 4)
    # a generator of F_16* has order 15, which does not divide 3
    assert not in_subfield(FieldElement(field, gen), 2)
    assert in_subfield(FieldElement(field, field.one), 2)


@pytest.mark.parametrize("p,degree", [(2, 4), (2, 6), (3, 2), (3, 4), (5, 2)])
def test_subfield_sizes_for_all_divisors(p, degree):
    field = make_field(p, degree)
    for d in range(1, degree + 1):
        if degree % d:
            continue
        sub = field.enumerate_subfield(d)
        assert len(sub) == p**d
        assert sub == sorted(sub)
        assert all(field.in_subfield(a, d) for a in sub)
        count = sum(1 for a in field.iter_elements() if field.in_subfield(a, d))
        assert count == p**d


def test_subfield_rejects_non_divisor():
    field = make_field(2, 4)
    with pytest.raises(ValueError):
        field.in_subfield(field.one, 3)
    with pytest.raises(ValueError):
        field.enumerate_subfield(3)


def test_enumerate_subfield_wrapper():
    field = make_field(2, 4)
    subfield = enumerate_subfield(field, 2)
    assert len(subfield) == 4
    assert all(isinstance(x, FieldElement) for x in subfield)


def test_subfield_generator_has_full_order():
    field = make_field(3, 4)
    for d in (1, 2, 4):
        g = subfield_generator(field, d)
        order = 3**d - 1
        assert field.pow(g, order) == field.one
        for ell in factorize(order):
            assert field.pow(g, order // ell) != field.one


def test_field_element_operators():
    field = make_field(5, 1)
    two, three = field.element([2]), field.element([3])
    assert (two + three).coeffs == (0,)
    assert (two * three).coeffs == (1,)
    assert (two - three).coeffs == (4,)
    assert (three / two).coeffs == (4,)
    assert (two**3).coeffs == (3,)
    assert (-two).coeffs == (3,)


def test_pow_handles_negative_exponents():
    field = make_field(7, 1)
    a = field.from_int(3)
    assert field.mul(field.pow(a, -1), a) == field.one


@pytest.mark.parametrize("p,degree,k", [(3, 2, 2), (5, 2, 2), (2, 4, 3),
                                        (5, 2, 4), (7, 2, 3)])
def test_kth_root_full_scan(p, degree, k):
    field = make_field(p, degree)
    elements = [a for a in field.iter_elements() if any(a)]
    powers = {field.pow(a, k) for a in elements}
    for x in elements:
        root = kth_root(field, x, k)
        if x in powers:
            assert root is not None and field.pow(root, k) == x
        else:
            assert root is None


def test_kth_root_of_zero_and_one():
    field = make_field(3, 2)
    assert kth_root(field, field.zero, 5) == field.zero
    assert field.pow(kth_root(field, field.one, 4), 4) == field.one


def test_is_prime_and_factorize():
    assert is_prime(2) and is_prime(97) and not is_prime(91) and not is_prime(1)
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}
