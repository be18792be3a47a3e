"""Tests for finite abelian groups, divisibility, purity, and summands."""

from __future__ import annotations

import itertools
import random
from math import lcm

import pytest

from cohomolab.abelian import (
    AbHom,
    Element,
    FinAbGroup,
    Subgroup,
    TRIVIAL,
    ab_group_new,
    all_subgroups,
    canonicalize_orders,
    complement_by_search,
    direct_sum,
    image_subgroup,
    intersection,
    is_direct_summand,
    is_divisible,
    is_pure_subgroup,
    kernel_subgroup,
    preimage_subgroup,
    preserves_divisibility,
    preserves_n_divisibility,
    quotient,
    random_element,
    random_embedding,
    random_group,
    random_hom,
    subgroup_abstract_form,
    torsion_subgroup,
)

Z2 = ab_group_new([2])
Z4 = ab_group_new([4])
Z8 = ab_group_new([8])
Z2Z4 = ab_group_new([2, 4])


# -- construction ------------------------------------------------------------


def test_group_canonicalization():
    assert ab_group_new([2, 4]).invariant_factors == (2, 4)
    assert ab_group_new([6, 4]).invariant_factors == (2, 12)
    assert ab_group_new([]).invariant_factors == ()
    assert ab_group_new([30, 12, 2]).order == 30 * 12 * 2


def test_group_rejects_bad_orders():
    with pytest.raises(ValueError):
        ab_group_new([1])
    with pytest.raises(ValueError):
        FinAbGroup((4, 2))


def test_canonicalization_iso_is_additive_bijection():
    pres = canonicalize_orders([6, 4])
    # the retained coordinate change is an isomorphism from the product form
    seen = set()
    for x in itertools.product(range(6), range(4)):
        seen.add(pres.apply(x).coords)
    assert len(seen) == 24
    for _ in range(50):
        rng = random.Random(_)
        x = (rng.randrange(6), rng.randrange(4))
        y = (rng.randrange(6), rng.randrange(4))
        s = ((x[0] + y[0]) % 6, (x[1] + y[1]) % 4)
        assert pres.apply(x) + pres.apply(y) == pres.apply(s)


def test_element_validation_and_order():
    e = Z2Z4.element([1, 3])
    assert e.order() == 4
    assert (e + e).coords == (0, 2)
    with pytest.raises(ValueError):
        Element(Z2Z4, (2, 0))


# -- homs --------------------------------------------------------------------


def test_hom_well_definedness_checked_eagerly():
    # 1 -> 1 is not a homomorphism Z/2 -> Z/4
    with pytest.raises(ValueError, match="homomorphism"):
        AbHom(Z2, Z4, ((1,),))
    # 1 -> 2 is fine
    AbHom(Z2, Z4, ((2,),))


def test_hom_composition_closed():
    rng = random.Random(3)
    for _ in range(40):
        A = random_group(16, rng)
        B = random_group(16, rng)
        C = random_group(16, rng)
        f = random_hom(A, B, rng)
        h = random_hom(B, C, rng)
        fh = f.then(h)  # constructor re-checks well-definedness
        for _ in range(5):
            x = random_element(A, rng)
            assert fh.apply(x) == h.apply(f.apply(x))


# -- divisibility ------------------------------------------------------------


def test_is_divisible_examples():
    assert is_divisible(Z4, Z4.element([2]), 2).coords == (1,)
    assert is_divisible(Z2Z4, Z2Z4.element([1, 0]), 2) is None
    assert is_divisible(Z8, Z8.zero(), 5).coords == (0,)


def test_is_divisible_matches_exhaustive_search():
    rng = random.Random(9)
    for _ in range(100):
        A = random_group(36, rng)
        if A.order > 10**4:
            continue
        a = random_element(A, rng)
        m = rng.randrange(1, 13)
        w = is_divisible(A, a, m)
        brute = [x for x in A.elements() if x.scale(m) == a]
        if w is None:
            assert not brute
        else:
            assert w.scale(m) == a
            assert w in brute


def test_preserves_n_divisibility_examples():
    f = AbHom.from_rows(Z2, Z4, [[2]])
    ok, ce = preserves_n_divisibility(f, 4)
    assert not ok and ce[0] == 2 and ce[1].coords == (1,)
    g = AbHom.from_rows(Z2, Z2Z4, [[1, 0]])
    assert preserves_n_divisibility(g, 4) == (True, None)
    assert preserves_n_divisibility(AbHom.identity(Z2Z4), 4) == (True, None)


def test_divisor_modes_agree():
    rng = random.Random(21)
    for _ in range(100):
        B = random_group(32, rng)
        A, f = random_embedding(B, rng)
        n = B.exponent if not B.is_trivial() else 1
        full = preserves_n_divisibility(f, n, divisors="all")[0]
        pp = preserves_n_divisibility(f, n, divisors="prime_powers")[0]
        assert full == pp


# -- purity ------------------------------------------------------------------


def test_is_pure_subgroup_examples():
    assert not is_pure_subgroup(Z4, Subgroup(Z4, [Z4.element([2])]), 4)
    assert is_pure_subgroup(Z2Z4, Subgroup(Z2Z4, [Z2Z4.element([1, 0])]), 4)
    assert is_pure_subgroup(Z4, Subgroup(Z4, []), 4)


def test_purity_equals_divisibility_preservation_for_embeddings():
    rng = random.Random(5)
    checked = 0
    for _ in range(150):
        B = random_group(48, rng)
        if B.is_trivial():
            continue
        A, f = random_embedding(B, rng)
        n = B.exponent
        pure = is_pure_subgroup(B, image_subgroup(f), n)
        pres = preserves_n_divisibility(f, n)[0]
        assert pure == pres
        checked += 1
    assert checked > 100


# -- subgroups, kernels, images, quotients ------------------------------------


def test_kernel_image_quotient_examples():
    red = AbHom.from_rows(Z8, Z4, [[1]])
    assert [g.coords for g in kernel_subgroup(red).generators] == [(4,)]
    f = AbHom.from_rows(Z2, Z4, [[2]])
    assert sorted(e.coords for e in image_subgroup(f).element_list()) == [(0,), (2,)]
    Q, proj = quotient(Z8, Subgroup(Z8, [Z8.element([4])]))
    assert Q.invariant_factors == (4,)
    assert proj.apply(Z8.element([1])).order() == 4


def test_quotient_order_identity():
    rng = random.Random(17)
    for _ in range(80):
        B = random_group(64, rng)
        gens = [random_element(B, rng) for _ in range(rng.randrange(0, 3))]
        S = Subgroup(B, gens)
        Q, _ = quotient(B, S)
        assert S.order * Q.order == B.order


def test_quotient_rejects_foreign_subgroup():
    S = Subgroup(Z8, [Z8.element([4])])
    with pytest.raises(ValueError):
        quotient(Z4, S)


def test_torsion_subgroup_examples():
    assert [g.coords for g in torsion_subgroup(Z8, 2).generators] == [(4,)]
    assert torsion_subgroup(Z8, 8).order == 8
    assert torsion_subgroup(ab_group_new([3]), 2).order == 1


def test_preimage_subgroup():
    f = AbHom.from_rows(Z8, Z4, [[1]])
    pre = preimage_subgroup(f, Subgroup(Z4, [Z4.element([2])]))
    assert sorted(e.coords for e in pre.element_list()) == [(0,), (2,), (4,), (6,)]


def test_subgroup_abstract_form_round_trip():
    rng = random.Random(31)
    for _ in range(60):
        B = random_group(64, rng)
        gens = [random_element(B, rng) for _ in range(rng.randrange(0, 3))]
        S = Subgroup(B, gens)
        A, inc = subgroup_abstract_form(S)
        assert A.order == S.order
        assert inc.is_injective()
        assert image_subgroup(inc) == S


def test_direct_sum():
    S, i1, i2 = direct_sum(Z2, Z4)
    assert S.invariant_factors == (2, 4)
    assert i1.is_injective() and i2.is_injective()
    assert intersection(image_subgroup(i1), image_subgroup(i2)).is_trivial()


# -- subgroup lattice and summands --------------------------------------------


def test_all_subgroups_counts():
    assert len(all_subgroups(Z4)) == 3
    assert len(all_subgroups(ab_group_new([2, 2]))) == 5
    assert len(all_subgroups(ab_group_new([2, 2, 2]))) == 16
    assert len(all_subgroups(Z2Z4)) == 8
    assert len(all_subgroups(TRIVIAL)) == 1


def test_summand_examples():
    assert is_direct_summand(Z4, Subgroup(Z4, [Z4.element([2])])) is None
    S = Subgroup(Z2Z4, [Z2Z4.element([1, 0])])
    C = is_direct_summand(Z2Z4, S)
    assert C is not None and C.order == 4
    whole = Subgroup(Z4, [Z4.element([1])])
    assert is_direct_summand(Z4, whole).is_trivial()


def test_summand_fast_path_matches_oracle():
    rng = random.Random(41)
    for _ in range(120):
        B = random_group(48, rng)
        gens = [random_element(B, rng) for _ in range(rng.randrange(0, 3))]
        S = Subgroup(B, gens)
        fast = is_direct_summand(B, S)
        slow = complement_by_search(B, S)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert intersection(S, fast).is_trivial()
            assert S.order * fast.order == B.order


# -- randomized generators -----------------------------------------------------


def test_random_group_edge_cases():
    rng = random.Random(0)
    assert random_group(1, rng).is_trivial()
    assert random_hom(Z4, TRIVIAL, rng).is_zero()
    A, f = random_embedding(TRIVIAL, rng)
    assert A.is_trivial() and f.is_zero()


def test_random_hom_images_have_compatible_order():
    rng = random.Random(12)
    for _ in range(60):
        A = random_group(24, rng)
        B = random_group(24, rng)
        f = random_hom(A, B, rng)
        for j, d in enumerate(A.invariant_factors):
            img = Element(B, f.matrix[j])
            assert d % img.order() == 0


def test_composition_preserves_n_divisibility():
    # if f and h preserve n-divisibility then so does the composite
    rng = random.Random(77)
    hits = 0
    for _ in range(200):
        B = random_group(24, rng)
        A, f = random_embedding(B, rng)
        C = random_group(24, rng)
        h = random_hom(B, C, rng)
        n = lcm(max(B.exponent, 1), max(C.exponent, 1))
        if preserves_n_divisibility(f, n)[0] and preserves_n_divisibility(h, n)[0]:
            hits += 1
            assert preserves_n_divisibility(f.then(h), n)[0]
    assert hits > 10


def test_json_round_trips():
    assert FinAbGroup.from_json(Z2Z4.to_json()) == Z2Z4
    f = AbHom.from_rows(Z2, Z4, [[2]])
    assert AbHom.from_json(f.to_json()) == f
