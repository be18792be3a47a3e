"""Tests for matrix-group closure and the explicit p-adic tower."""

from __future__ import annotations

import pytest

from cohomolab import modmat
from cohomolab.matgroup import (
    ClosureCapExceeded,
    GModule,
    build_g,
    build_g2,
    build_g3,
    build_h2,
    build_n,
    closure,
    cyclic_subgroups,
    element_order,
    fixed_points,
    is_normal,
    preimage_under_reduction,
    reduction_map,
    subgroup_from_keys,
)
from cohomolab.modmat import ZModMatrix


def test_closure_identity_only():
    G = closure([ZModMatrix.identity(4, 2)])
    assert G.order == 1
    assert G.identity_key == (1, 0, 0, 1)


def test_closure_order_three_generator():
    g = ZModMatrix.from_rows(25, [[1, -3], [1, -2]])
    G = closure([g])
    assert G.order == 3


def test_closure_rejects_singular_generator():
    with pytest.raises(ValueError, match="invertible"):
        closure([ZModMatrix.from_rows(4, [[2, 0], [0, 1]])])


def test_closure_cap():
    g = ZModMatrix.from_rows(25, [[1, 1], [0, 1]])
    with pytest.raises(ClosureCapExceeded):
        closure([g], cap=10)


def test_closure_words_are_witnesses():
    G = build_g2(2)
    for i in range(G.order):
        w = G.word(i)
        key = G.identity_key
        for gi in w:
            key = G.mul_keys(key, G.generators[gi].entries)
        assert key == G.keys[i]


def test_group_axioms_on_table():
    G = build_g2(2)
    ident = G.identity_key
    for k in list(G.keys)[:6]:
        inv = G.inverse_key(k)
        assert G.contains_key(inv)
        assert G.mul_keys(k, inv) == ident
    # associativity spot check
    ks = list(G.keys)
    for a, b, c in [(0, 1, 2), (3, 5, 7), (11, 2, 9)]:
        left = G.mul_keys(G.mul_keys(ks[a], ks[b]), ks[c])
        right = G.mul_keys(ks[a], G.mul_keys(ks[b], ks[c]))
        assert left == right


# -- the tower ---------------------------------------------------------------


def test_tower_cardinalities_p2():
    assert build_h2(2).order == 4
    assert build_g2(2).order == 12
    assert build_n(2).order == 16
    assert build_g3(2).order == 192


def test_tower_rejects_bad_primes():
    with pytest.raises(ValueError, match="p = 7"):
        build_h2(7)
    with pytest.raises(ValueError, match="p = 3"):
        build_g2(3)
    with pytest.raises(ValueError, match="not prime"):
        build_g(4)


@pytest.mark.parametrize("p", [2, 5])
def test_h2_element_structure(p):
    H2 = build_h2(p)
    ident = ZModMatrix.identity(p * p, 2)
    scaled_rows = modmat.howell_form(
        ZModMatrix.from_rows(p * p, [[p, 0], [0, p]])
    )
    for i in range(H2.order):
        h = H2.matrix(i)
        if h == ident:
            continue
        assert element_order(h) == p
        diff = h.sub(ident)
        # h - 1 = p * M with M invertible mod p
        assert all(e % p == 0 for e in diff.entries)
        M = ZModMatrix.from_rows(p, [[e // p for e in diff.row(0)], [e // p for e in diff.row(1)]])
        assert modmat.is_invertible(M)
        # the image of h - 1 on the module is exactly the p-scaled module
        assert modmat.howell_form(diff.transpose()) == scaled_rows


def test_h2_is_normal_in_g2():
    for p in [2, 5]:
        H2 = build_h2(p)
        G2 = build_g2(p)
        assert is_normal(G2, H2)


@pytest.mark.parametrize("p", [2, 5])
def test_g_commutes_with_h2_as_sets(p):
    H2 = build_h2(p)
    G2 = build_g2(p)
    gk = build_g(p).entries
    left = {G2.mul_keys(gk, h) for h in H2.keys}
    right = {G2.mul_keys(h, gk) for h in H2.keys}
    assert left == right


def test_cyclic_subgroups():
    g = ZModMatrix.from_rows(25, [[1, -3], [1, -2]])
    G = closure([g])
    subs = cyclic_subgroups(G)
    assert sorted(s.order for s in subs) == [1, 3]
    subs2 = cyclic_subgroups(build_g2(2))
    assert all(len(s.generators) <= 1 for s in subs2)


@pytest.mark.parametrize("p", [2, 5])
def test_p_part_of_cyclic_subgroups_lies_in_h2(p):
    H2 = build_h2(p)
    G2 = build_g2(p)
    for i in range(G2.order):
        mat = G2.matrix(i)
        c = element_order(mat)
        if c % p == 0:
            while c % p == 0:
                c //= p
            y = mat
            for _ in range(c - 1):
                y = y.mul(mat)
            # y = mat^c generates the p-part of the cyclic subgroup
            sub = closure([y])
            assert all(H2.contains_key(k) for k in sub.keys)


def test_reduction_and_preimage():
    G2 = build_g2(2)
    G3 = build_g3(2)
    red = reduction_map(G3, 4)
    assert set(red.values()) == set(G2.keys)
    kernel_keys = [k for k, v in red.items() if v == G2.identity_key]
    N = build_n(2)
    assert frozenset(kernel_keys) == N.element_set()
    assert is_normal(G3, N)


def test_preimage_of_trivial_group_is_kernel():
    triv = closure([], modulus=4, dim=2)
    pre = preimage_under_reduction(triv, 3)
    N = build_n(2)
    assert pre.element_set() == N.element_set()
    assert pre.order == 16


def test_preimage_tower_bounds():
    G2 = build_g2(2)
    with pytest.raises(ValueError, match="reduction tower"):
        preimage_under_reduction(G2, 5)
    with pytest.raises(ValueError, match="reduction tower"):
        preimage_under_reduction(G2, 2)


def test_n_is_abelian_and_congruent_to_identity():
    for p in [2, 5]:
        N = build_n(p)
        m = p**3
        for k in list(N.keys):
            assert all((e - i) % (p * p) == 0 for e, i in zip(k, (1, 0, 0, 1)))
        ks = list(N.keys)[:8]
        for a in ks:
            for b in ks:
                assert N.mul_keys(a, b) == N.mul_keys(b, a)


def test_subgroup_from_keys():
    G2 = build_g2(2)
    H2 = build_h2(2)
    sub = subgroup_from_keys(G2, list(H2.keys))
    assert sub.element_set() == H2.element_set()
    with pytest.raises(ValueError, match="not closed"):
        subgroup_from_keys(G2, [G2.keys[1]] if G2.keys[1] != G2.identity_key else [G2.keys[2]])


# -- fixed points --------------------------------------------------------------


def test_fixed_points_of_tower():
    p = 2
    N = build_n(p)
    G3 = build_g3(p)
    M3 = GModule(p**3, 2)
    fp = fixed_points(N, M3)
    # p * M3, isomorphic to (Z/p^2)^2
    assert fp.order == p**4
    amb = M3.ambient_group()
    expected = {amb.element([p * a, p * b]).coords for a in range(p * p) for b in range(p * p)}
    assert {e.coords for e in fp.element_list()} == expected
    assert fixed_points(G3, M3).order == 1


def test_fixed_points_trivial_group_is_everything():
    M = GModule(4, 2)
    triv = closure([], modulus=4, dim=2)
    assert fixed_points(triv, M).order == 16
