"""Tests for the lemma lab: gadget instances, samplers, campaigns."""

from __future__ import annotations

import json
import random

import pytest

from cohomolab.abelian import (
    AbHom,
    Subgroup,
    ab_group_new,
    image_subgroup,
    kernel_subgroup,
    quotient,
    random_embedding,
)
from cohomolab.lemma_lab import (
    DiagramInstance,
    check_diagram_summand,
    check_non_summand,
    check_summand_equivalence,
    groups_up_to,
    run_campaign,
    sample_diagram,
    search_non_summand_instances,
    sweep_summand_equivalence,
)

Z2 = ab_group_new([2])
Z4 = ab_group_new([4])
GADGET = AbHom.from_rows(Z2, Z4, [[2]])  # 1 -> 2, image not a summand


def test_summand_equivalence_gadget():
    rep = check_summand_equivalence(GADGET, 4)
    assert rep.applicable
    assert rep.conclusion is True  # the three conditions agree (all false)
    assert rep.details["summand"] is False
    assert not rep.violated


def test_summand_equivalence_direct_factor():
    Z2Z4 = ab_group_new([2, 4])
    inc = AbHom.from_rows(Z2, Z2Z4, [[1, 0]])
    rep = check_summand_equivalence(inc, 4)
    assert rep.applicable and rep.conclusion is True
    assert rep.details["summand"] is True


def test_summand_equivalence_reports_unmet_hypotheses():
    # not an embedding
    z = AbHom.zero(Z4, Z4)
    rep = check_summand_equivalence(z, 4)
    assert not rep.applicable
    assert rep.hypotheses["embedding"] is False
    assert rep.conclusion is None


def test_non_summand_gadget():
    rep = check_non_summand(GADGET, 2, Z2.element([1]))
    assert rep.applicable
    assert rep.conclusion is True
    assert rep.proof_step is True


def test_non_summand_identity_not_applicable():
    rep = check_non_summand(AbHom.identity(Z4), 2, Z4.element([1]))
    assert not rep.applicable
    assert rep.hypotheses["p_not_divisible_but_image_is"] is False


def test_trivial_diagram_passes_vacuously():
    t = ab_group_new([])
    z = AbHom.zero(t, t)
    d = DiagramInstance(t, t, t, t, t, z, z, z, z, z, 1)
    rep = check_diagram_summand(d)
    assert rep.applicable and rep.conclusion is True


def test_identity_shaped_diagram():
    B = ab_group_new([2, 4])
    A, f = random_embedding(B, random.Random(5))
    Q, proj = quotient(B, image_subgroup(f))
    d = DiagramInstance(
        A, B, Q, B, Q, f, proj, AbHom.identity(B), AbHom.identity(Q), proj, 4
    )
    rep = check_diagram_summand(d)
    assert rep.applicable and rep.conclusion is True and rep.proof_step is True


def test_diagram_with_broken_hypothesis_is_flagged():
    # beta = the gadget embedding breaks (6): report flags it, no error
    B = Z2
    Bp = Z4
    t = ab_group_new([])
    d = DiagramInstance(
        B,
        B,
        t,
        Bp,
        t,
        AbHom.identity(B),
        AbHom.zero(B, t),
        GADGET,
        AbHom.zero(t, t),
        AbHom.zero(Bp, t),
        4,
    )
    hyps = d.hypotheses()
    assert hyps["beta_f_preserves_n_div"] is False
    rep = check_diagram_summand(d)
    assert not rep.applicable and rep.conclusion is None


def test_diagram_commutativity_enforced():
    with pytest.raises(ValueError, match="commute"):
        DiagramInstance(
            Z2,
            Z2,
            Z2,
            Z2,
            Z2,
            AbHom.identity(Z2),
            AbHom.identity(Z2),
            AbHom.identity(Z2),
            AbHom.zero(Z2, Z2),
            AbHom.identity(Z2),
            2,
        )


# -- samplers ------------------------------------------------------------------


def test_sampler_s2_soundness():
    rng = random.Random(11)
    seen = 0
    for _ in range(120):
        d = sample_diagram(rng, 16, 4, "S2")
        if d is None:
            continue
        seen += 1
        # exactness built in: ker g = im f, re-verified independently
        assert image_subgroup(d.f) == Subgroup(
            d.B, [g for g in kernel_subgroup(d.g).generators]
        )
        assert all(d.hypotheses().values())
    assert seen >= 20


def test_sampler_s1_accepted_instances_recheck():
    rng = random.Random(3)
    seen = 0
    for _ in range(400):
        d = sample_diagram(rng, 8, 4, "S1")
        if d is None:
            continue
        seen += 1
        assert all(d.hypotheses().values())
    assert seen >= 1


def test_trivial_diagram_from_max_order_one():
    rng = random.Random(0)
    d = sample_diagram(rng, 1, 4, "S2")
    # all-trivial diagrams satisfy the hypotheses vacuously
    if d is not None:
        assert d.B.is_trivial()


# -- campaigns -----------------------------------------------------------------


def test_campaigns_zero_violations_and_deterministic():
    cfgs = [
        dict(lemma="summand_criterion", trials=120, seed=42, max_order=32, n=8),
        dict(lemma="diagram_summand", trials=120, seed=42, max_order=16, n=4, sampler="S2"),
        dict(lemma="non_summand", trials=120, seed=42, max_order=16, n=8),
    ]
    for cfg in cfgs:
        rep1 = run_campaign(cfg)
        rep2 = run_campaign(cfg)
        assert rep1["violations"] == []
        assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)


def test_campaign_rejects_unknown_lemma():
    with pytest.raises(ValueError, match="unknown lemma"):
        run_campaign(dict(lemma="nope", trials=1, seed=0))
    with pytest.raises(ValueError, match="missing field"):
        run_campaign(dict(lemma="non_summand", trials=1))


# -- exhaustive sweeps -----------------------------------------------------------


def test_groups_up_to():
    gs = groups_up_to(8)
    factors = sorted(g.invariant_factors for g in gs)
    assert () in factors
    assert (8,) in factors and (2, 4) in factors and (2, 2, 2) in factors
    assert (4, 2) not in factors
    assert all(g.order <= 8 for g in gs)


def test_sweep_summand_equivalence_small():
    rep = sweep_summand_equivalence(16)
    assert rep["violations"] == []
    assert rep["checked"] > 100


def test_search_non_summand_small():
    rep = search_non_summand_instances(12, 512)
    assert rep["violations"] == []
    assert rep["instances_found"] > 10
    # the gadget's pattern is among the found instances by construction
    assert rep["homs_scanned"] > 100
