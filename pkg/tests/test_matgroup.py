"""Rational-point enumeration: orders, strategies, canonical structure."""

import random

import pytest

from isocensus import orderform
from isocensus.census import invariant_factors_abelian
from isocensus.ffield import make_field
from isocensus.matgroup import (EnumerationBound, GaSpec, GLSpec, GmSpec,
                                Matrix, NormTorusCoverSpec, NormTorusSpec,
                                SLSpec, SOSpec, SpSpec, SUSpec, builtin_specs,
                                direct_product, fixed_subgroup, frobenius_map,
                                from_generators, make_spec, rational_points)

F2 = make_field(2, 1)
F3 = make_field(3, 1)
F4 = make_field(2, 2)
F5 = make_field(5, 1)
F7 = make_field(7, 1)
F8 = make_field(2, 3)
F9 = make_field(3, 2)
F25 = make_field(5, 2)


def test_catalog_names():
    assert sorted(builtin_specs()) == ["GL", "Ga", "Gm", "NormTorus",
                                       "NormTorusCover", "SL", "SO", "SU", "Sp"]
    assert make_spec("SL", 2, m=2).q == 2
    with pytest.raises(ValueError):
        make_spec("E8", 2)


@pytest.mark.parametrize("spec,field,n,expected", [
    (GmSpec(2), F8, 3, 7),            # |F_8*| = 7
    (GmSpec(2), F2, 1, 1),            # degenerate: trivial group is allowed
    (GaSpec(2), F8, 3, 8),
    (SLSpec(2, 2), F2, 1, 6),
    (SLSpec(2, 3), F3, 1, 24),
    (SLSpec(2, 2), F4, 2, 60),
    (SLSpec(2, 5), F5, 1, 120),
    (GLSpec(2, 2), F2, 1, 6),
    (GLSpec(2, 3), F3, 1, 48),
    (NormTorusSpec(7), F7, 1, 36),    # split: (7-1)^2
    (NormTorusSpec(5), F25, 1, 24),   # non-split: 5^2 - 1
    (NormTorusSpec(3), F3, 1, 6),     # characteristic 3: q(q-1)
    (NormTorusCoverSpec(7), F7, 1, 36),
    (SpSpec(2, 2), F2, 1, 6),         # Sp_2 = SL_2
    (SOSpec(3, 3), F3, 1, 24),
    (SUSpec(2, 2), F4, 1, 6),
    (SUSpec(2, 3), F9, 1, 24),
])
def test_point_group_orders(spec, field, n, expected):
    group = rational_points(spec, n, field)
    assert len(group) == expected


@pytest.mark.parametrize("tag,q,n,m", [
    ("Gm", 2, 3, 1), ("Ga", 2, 3, 2), ("SL", 2, 1, 2), ("SL", 3, 1, 2),
    ("SL", 5, 1, 2), ("GL", 3, 1, 2), ("Sp", 2, 1, 2), ("NormTorus", 7, 1, 2),
    ("NormTorus", 5, 1, 2), ("NormTorus", 3, 1, 2), ("NormTorusCover", 7, 1, 3),
    ("SU", 2, 1, 2),
])
def test_orders_match_closed_formulas(tag, q, n, m):
    spec = make_spec(tag, q, m=m)
    degree = spec.entry_degree(n)
    if tag == "NormTorus" and (q**n - 1) % 3 != 0 and q % 3 != 0:
        degree *= 2
    field = make_field(q, degree) if q in (2, 3, 5, 7) else None
    group = rational_points(spec, n, field)
    assert len(group) == orderform.closed_order(tag, q, n, m)


@pytest.mark.parametrize("spec,field,n", [
    (SLSpec(2, 2), F2, 1),
    (SLSpec(2, 3), F3, 1),
    (GLSpec(2, 2), F2, 1),
    (SLSpec(2, 2), F4, 2),
    (GmSpec(3), F9, 2),
    (GaSpec(3), F9, 2),
    (NormTorusSpec(5), F5, 1),
    (NormTorusSpec(7), F7, 1),
    (NormTorusCoverSpec(3), F3, 1),
])
def test_strategy_agreement_with_full_scan(spec, field, n):
    by_strategy = rational_points(spec, n, field)
    by_scan = rational_points(spec, n, field,
                              strategy="scan", scan_limit=2**21)
    assert by_strategy.elements == by_scan.elements


def test_sp4_full_scan_order():
    group = rational_points(SpSpec(4, 2), 1, F2)
    assert len(group) == 720


def test_tower_monotonicity():
    amb = make_field(2, 6)
    spec = GmSpec(2)
    levels = {n: set(rational_points(spec, n, amb).elements) for n in (1, 2, 3, 6)}
    assert levels[1] <= levels[2] <= levels[6]
    assert levels[1] <= levels[3] <= levels[6]
    spec_a = GaSpec(2)
    ga = {n: set(rational_points(spec_a, n, amb).elements) for n in (1, 3, 6)}
    assert ga[1] <= ga[3] <= ga[6]


@pytest.mark.parametrize("spec,field,n", [
    (SLSpec(2, 5), F5, 1),
    (NormTorusSpec(7), F7, 1),
    (NormTorusCoverSpec(5), F5, 1),
    (GaSpec(2), make_field(2, 4), 4),
    (SUSpec(2, 3), F9, 1),
])
def test_closure_audit_random_pairs(spec, field, n):
    group = rational_points(spec, n, field)
    rng = random.Random(0)
    table = set(group.elements)
    for _ in range(1000):
        g = group.elements[rng.randrange(len(group))]
        h = group.elements[rng.randrange(len(group))]
        assert g * h.inv() in table


def test_lagrange_on_samples():
    group = rational_points(SLSpec(2, 3), 1, F3)
    rng = random.Random(1)
    for _ in range(20):
        i = rng.randrange(len(group))
        assert len(group) % group.element_order(i) == 0


def test_canonical_order_is_deterministic():
    a = rational_points(NormTorusSpec(7), 1, make_field(7, 1))
    b = rational_points(NormTorusSpec(7), 1, make_field(7, 1))
    assert a.elements == b.elements
    assert a.gens_hint == b.gens_hint


def test_determinant_multiplicative_and_associativity():
    group = rational_points(GLSpec(2, 3), 1, F3)
    rng = random.Random(2)
    f = F3
    for _ in range(50):
        g = group.elements[rng.randrange(len(group))]
        h = group.elements[rng.randrange(len(group))]
        k = group.elements[rng.randrange(len(group))]
        assert (g * h).det() == f.mul(g.det(), h.det())
        assert (g * h) * k == g * (h * k)


def test_matrix_inverse_roundtrip():
    group = rational_points(SLSpec(2, 3, 2), 1, F9)
    rng = random.Random(3)
    ident = Matrix.identity(F9, 2)
    for _ in range(25):
        g = group.elements[rng.randrange(len(group))]
        assert g * g.inv() == ident


def test_frobenius_map_examples():
    ident = Matrix.identity(F4, 2)
    assert frobenius_map(ident, 1) == ident
    group = rational_points(SLSpec(2, 2), 2, F4)
    x = F4.element((0, 1))
    g = Matrix.from_entries(F4, ((x.coeffs, F4.one), (F4.one, F4.zero)))
    assert g in group.index
    mapped = frobenius_map(g, 1)
    assert mapped.rows[0][0] == F4.mul(x.coeffs, x.coeffs)
    # rational points are exactly the fixed points of their own Frobenius
    for h in group.elements:
        assert frobenius_map(h, 2) == h


def test_fixed_subgroup_of_extension():
    amb = make_field(2, 2)
    big = rational_points(SLSpec(2, 2), 2, amb)
    small = fixed_subgroup(big, 1)
    assert len(small) == 6
    direct = rational_points(SLSpec(2, 2), 1, amb)
    assert set(small.elements) == set(direct.elements)


def test_su_needs_quadratic_subextension():
    with pytest.raises(ValueError):
        rational_points(SUSpec(2, 2), 1, F2)


def test_enumeration_bounds_raise():
    with pytest.raises(EnumerationBound):
        rational_points(SLSpec(2, 31), 1, make_field(31, 1), order_bound=100)
    with pytest.raises(EnumerationBound):
        rational_points(SpSpec(4, 3), 1, F3, scan_limit=1000)
    with pytest.raises(ValueError):
        rational_points(GmSpec(2), 2, F2)  # subfield unavailable


def test_identity_must_satisfy_predicate():
    spec = SLSpec(2, 2)
    spec.predicate = lambda mat, field, n: False
    with pytest.raises(ValueError):
        rational_points(spec, 1, F2)


def test_from_generators_and_direct_product():
    gm4 = rational_points(GmSpec(2), 2, F4)
    prod = direct_product(gm4, gm4)
    assert len(prod) == 9
    assert invariant_factors_abelian(prod) == [3, 3]
    # dihedral-like: torus normalizer in GL_2
    f = F7
    gm7 = rational_points(GmSpec(7), 1, F7)
    gamma = gm7.elements[gm7.gens_hint[0]]
    diag = Matrix.from_entries(f, ((gamma.rows[0][0], f.zero),
                                   (f.zero, f.inv(gamma.rows[0][0]))))
    flip = Matrix.from_entries(f, ((f.zero, f.one), (f.one, f.zero)))
    dihedral = from_generators([diag, flip], Matrix.__mul__,
                               Matrix.identity(f, 2), inv=Matrix.inv)
    assert len(dihedral) == 2 * 6


def test_norm_torus_structures():
    split = rational_points(NormTorusSpec(7), 1, F7)
    assert invariant_factors_abelian(split) == [6, 6]
    nonsplit = rational_points(NormTorusSpec(5), 1, F25)
    assert invariant_factors_abelian(nonsplit) == [24]
    char3 = rational_points(NormTorusSpec(3), 2, make_field(3, 2))
    assert invariant_factors_abelian(char3) == [3, 24]
