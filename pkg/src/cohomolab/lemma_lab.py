"""Exhaustive and randomized verification of summand/divisibility facts.

Three statements about finite abelian groups are exercised over
generated instances, each judged against the exhaustive subgroup-lattice
oracle rather than the fast divisibility criterion (using the criterion
to check itself would be circular):

* the summand criterion: for an embedding f of n-torsion groups,
  "f(A) is a direct summand" / "f preserves divisibility" /
  "f preserves n-divisibility" are all equivalent;
* the diagram descent: in a commutative square over an exact-ish row
  A -> B -> C with (1) B, B' n-torsion, (2) beta an embedding,
  (3) gamma preserving n-divisibility, (4) C[n] inside im g,
  (5) ker g inside im f, (6) beta . f preserving n-divisibility,
  the image beta(B) is a direct summand of B';
* the non-summand test: if some P is not m-divisible while f(P) is, and
  every element of ker f is m-divisible, then f(A) is not a summand.

These are theorems, so any hypothesis-satisfying instance violating a
conclusion is a build-failing bug in this package, never a finding.
Hypothesis failures yield structured "not applicable" reports instead of
errors so campaigns can tell "vacuous here" from "false here".

Two diagram samplers are provided: S1 draws everything at random and
keeps commutative hypothesis-satisfying draws (unbiased, low yield), S2
builds the exact row constructively and closes the square by a pushout
(high yield).  Neither consults the conclusion.  Campaigns are
deterministic: trial t of seed s uses the generator seeded by "s:t".
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Optional

from .abelian import (
    AbHom,
    Element,
    FinAbGroup,
    Subgroup,
    TRIVIAL,
    ab_group_new,
    complement_by_search,
    direct_sum,
    image_subgroup,
    is_divisible,
    is_pure_subgroup,
    kernel_subgroup,
    preserves_divisibility,
    preserves_n_divisibility,
    quotient,
    random_element,
    random_embedding,
    random_hom,
    random_n_torsion_group,
    subgroup_abstract_form,
    torsion_subgroup,
)

__all__ = [
    "LemmaReport",
    "DiagramInstance",
    "check_summand_equivalence",
    "check_diagram_summand",
    "check_non_summand",
    "sample_diagram",
    "run_campaign",
    "groups_up_to",
    "sweep_summand_equivalence",
    "search_non_summand_instances",
    "CAMPAIGN_NAMES",
]

CAMPAIGN_NAMES = ("summand_criterion", "diagram_summand", "non_summand")

ORACLE_CAP = 64


@dataclass
class LemmaReport:
    lemma: str
    applicable: bool
    hypotheses: dict
    conclusion: Optional[bool] = None
    proof_step: Optional[bool] = None
    counterexample: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        if not self.applicable:
            return False
        bad = self.conclusion is False or self.proof_step is False
        return bad

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "applicable": self.applicable,
            "hypotheses": self.hypotheses,
            "conclusion": self.conclusion,
            "proof_step": self.proof_step,
            "counterexample": self.counterexample,
            "details": self.details,
        }


def _require_oracle_size(B: FinAbGroup) -> None:
    if B.order > ORACLE_CAP:
        raise ValueError(f"oracle needs |B| <= {ORACLE_CAP}, got {B.order}")


def check_summand_equivalence(f: AbHom, n: int) -> LemmaReport:
    """Three-way equivalence for an embedding of n-torsion groups.

    (1) image a summand, by the exhaustive lattice oracle;
    (2) f preserves divisibility (every m);
    (3) f preserves n-divisibility.
    """
    A, B = f.domain, f.codomain
    _require_oracle_size(B)
    hyps = {
        "embedding": f.is_injective(),
        "domain_n_torsion": n % max(A.exponent, 1) == 0,
        "codomain_n_torsion": n % max(B.exponent, 1) == 0,
    }
    if not all(hyps.values()):
        return LemmaReport("summand_criterion", False, hyps)
    S = image_subgroup(f)
    summand = complement_by_search(B, S) is not None
    pres_all, ce_all = preserves_divisibility(f)
    pres_n, ce_n = preserves_n_divisibility(f, n)
    agree = summand == pres_all == pres_n
    ce = None
    if not agree:
        ce = {
            "summand": summand,
            "preserves_divisibility": pres_all,
            "preserves_n_divisibility": pres_n,
            "hom": f.to_json(),
            "n": n,
        }
    return LemmaReport(
        "summand_criterion",
        True,
        hyps,
        conclusion=agree,
        details={"summand": summand, "witness_all": _ce_json(ce_all), "witness_n": _ce_json(ce_n)},
        counterexample=ce,
    )


def _ce_json(ce) -> Optional[dict]:
    if ce is None:
        return None
    m, a = ce
    return {"m": m, "element": list(a.coords)}


@dataclass
class DiagramInstance:
    """Commutative square over a row A -> B -> C, with torsion bound n.

    Commutativity of gamma . g = g' . beta is validated eagerly.
    """

    A: FinAbGroup
    B: FinAbGroup
    C: FinAbGroup
    Bp: FinAbGroup
    Cp: FinAbGroup
    f: AbHom
    g: AbHom
    beta: AbHom
    gamma: AbHom
    gp: AbHom
    n: int

    def __post_init__(self) -> None:
        wiring = [
            (self.f, self.A, self.B),
            (self.g, self.B, self.C),
            (self.beta, self.B, self.Bp),
            (self.gamma, self.C, self.Cp),
            (self.gp, self.Bp, self.Cp),
        ]
        for hom, dom, cod in wiring:
            if hom.domain != dom or hom.codomain != cod:
                raise ValueError("diagram arrows do not match the stated groups")
        if self.g.then(self.gamma) != self.beta.then(self.gp):
            raise ValueError("diagram does not commute")

    def hypotheses(self) -> dict:
        n = self.n
        return {
            "b_and_bp_n_torsion": n % max(self.B.exponent, 1) == 0
            and n % max(self.Bp.exponent, 1) == 0,
            "beta_embedding": self.beta.is_injective(),
            "gamma_preserves_n_div": preserves_n_divisibility(self.gamma, n)[0],
            "torsion_of_c_in_image_g": image_subgroup(self.g).contains_subgroup(
                torsion_subgroup(self.C, n)
            ),
            "kernel_g_in_image_f": image_subgroup(self.f).contains_subgroup(
                kernel_subgroup(self.g)
            ),
            "beta_f_preserves_n_div": preserves_n_divisibility(self.f.then(self.beta), n)[0],
        }

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "groups": {
                name: g.to_json()
                for name, g in [("A", self.A), ("B", self.B), ("C", self.C), ("Bp", self.Bp), ("Cp", self.Cp)]
            },
            "maps": {
                name: h.to_json()
                for name, h in [("f", self.f), ("g", self.g), ("beta", self.beta), ("gamma", self.gamma), ("gp", self.gp)]
            },
        }


def check_diagram_summand(d: DiagramInstance) -> LemmaReport:
    """Hypotheses (1)-(6), then: beta(B) is a summand of B' (oracle).

    Also asserts the proof-step invariant that beta itself ends up
    preserving n-divisibility.
    """
    _require_oracle_size(d.Bp)
    hyps = d.hypotheses()
    if not all(hyps.values()):
        return LemmaReport("diagram_summand", False, hyps)
    summand = complement_by_search(d.Bp, image_subgroup(d.beta)) is not None
    beta_pres = preserves_n_divisibility(d.beta, d.n)[0]
    ce = None
    if not (summand and beta_pres):
        ce = {"instance": d.to_json(), "summand": summand, "beta_preserves": beta_pres}
    return LemmaReport(
        "diagram_summand",
        True,
        hyps,
        conclusion=summand,
        proof_step=beta_pres,
        counterexample=ce,
    )


def check_non_summand(f: AbHom, m: int, P: Element) -> LemmaReport:
    """(i) P not m-divisible but f(P) is; (ii) ker f all m-divisible.

    Conclusion: f(A) is not a summand of B (oracle).  The mechanism is
    verified too: the induced embedding of A/ker f fails to preserve
    divisibility at (m, image of P).
    """
    A, B = f.domain, f.codomain
    _require_oracle_size(B)
    n = lcm(max(A.exponent, 1), max(B.exponent, 1))
    hyps = {
        "m_divides_n": n % m == 0,
        "p_not_divisible_but_image_is": is_divisible(A, P, m) is None
        and is_divisible(B, f.apply(P), m) is not None,
        "kernel_m_divisible": all(
            is_divisible(A, k, m) is not None for k in kernel_subgroup(f).generators
        ),
    }
    if not all(hyps.values()):
        return LemmaReport("non_summand", False, hyps)
    not_summand = complement_by_search(B, image_subgroup(f)) is None
    # mechanism: the induced embedding does not preserve m-divisibility
    Q, proj = quotient(A, kernel_subgroup(f))
    from . import modmat
    from .abelian import _embed_rows

    M0 = max(lcm(A.exponent, Q.exponent), 2)
    proj_emb = _embed_rows(Q, proj.matrix, M0)
    rows = []
    for j in range(Q.rank):
        x = modmat.solve(proj_emb, _embed_rows(Q, [Q.generator(j).coords], M0).row(0))
        assert x is not None
        rows.append(f.apply(A.element(x)).coords)
    induced = AbHom.from_rows(Q, B, rows)
    mech = (
        induced.is_injective()
        and is_divisible(Q, proj.apply(P), m) is None
        and is_divisible(B, induced.apply(proj.apply(P)), m) is not None
    )
    ce = None
    if not (not_summand and mech):
        ce = {"hom": f.to_json(), "m": m, "P": list(P.coords), "not_summand": not_summand, "mechanism": mech}
    return LemmaReport(
        "non_summand",
        True,
        hyps,
        conclusion=not_summand,
        proof_step=mech,
        counterexample=ce,
    )


# -- samplers ------------------------------------------------------------------


def _sample_diagram_s1(rng: random.Random, max_order: int, n: int) -> Optional[DiagramInstance]:
    B = random_n_torsion_group(n, max_order, rng)
    Bp = random_n_torsion_group(n, max_order, rng)
    A = random_n_torsion_group(n, max_order, rng)
    C = random_n_torsion_group(n, max_order, rng)
    Cp = random_n_torsion_group(n, max_order, rng)
    try:
        d = DiagramInstance(
            A,
            B,
            C,
            Bp,
            Cp,
            random_hom(A, B, rng),
            random_hom(B, C, rng),
            random_hom(B, Bp, rng),
            random_hom(C, Cp, rng),
            random_hom(Bp, Cp, rng),
            n,
        )
    except ValueError:
        return None
    if not all(d.hypotheses().values()):
        return None
    return d


def _coprime_padding(n: int, rng: random.Random) -> FinAbGroup:
    opts = [c for c in (2, 3, 5, 7) if gcd(c, n) == 1]
    if not opts or rng.random() < 0.5:
        return TRIVIAL
    return ab_group_new([rng.choice(opts)])


def _sample_diagram_s2(rng: random.Random, max_order: int, n: int) -> Optional[DiagramInstance]:
    B = random_n_torsion_group(n, max_order, rng)
    A, f = random_embedding(B, rng)
    Q, proj = quotient(B, image_subgroup(f))
    C, iQ, iD = direct_sum(Q, _coprime_padding(n, rng))
    g = proj.then(iQ)
    Bp = random_n_torsion_group(n, max_order, rng)
    beta = None
    for _ in range(20):
        cand = random_hom(B, Bp, rng)
        if cand.is_injective():
            beta = cand
            break
    if beta is None:
        return None
    # close the square with the pushout of (g, beta)
    S, iC, iB = direct_sum(C, Bp)
    rels = [
        iC.apply(g.apply(B.generator(j))) - iB.apply(beta.apply(B.generator(j)))
        for j in range(B.rank)
    ]
    Cp, pr = quotient(S, Subgroup(S, rels))
    gamma = iC.then(pr)
    gp = iB.then(pr)
    if rng.random() < 0.4 and not Cp.is_trivial():
        extra = Subgroup(Cp, [random_element(Cp, rng)])
        Cp2, pr2 = quotient(Cp, extra)
        gamma = gamma.then(pr2)
        gp = gp.then(pr2)
        Cp = Cp2
    d = DiagramInstance(A, B, C, Bp, Cp, f, g, beta, gamma, gp, n)
    if not all(d.hypotheses().values()):
        return None
    return d


def sample_diagram(
    rng: random.Random, max_order: int, n: int, sampler: str = "S1"
) -> Optional[DiagramInstance]:
    """One attempt at a hypothesis-satisfying diagram, or None on rejection."""
    if max_order < 1 or n < 1:
        raise ValueError("max_order and n must be >= 1")
    if sampler == "S1":
        return _sample_diagram_s1(rng, max_order, n)
    if sampler == "S2":
        return _sample_diagram_s2(rng, max_order, n)
    raise ValueError(f"unknown sampler {sampler!r}")


# -- campaigns -----------------------------------------------------------------


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


def run_campaign(config: dict) -> dict:
    """Run a fuzz campaign from a config dict and return the report.

    Config keys: lemma (one of CAMPAIGN_NAMES), trials, seed, max_order,
    n, sampler (diagram campaigns only).  Identical configs give
    byte-identical reports.
    """
    for key in ("lemma", "trials", "seed"):
        if key not in config:
            raise ValueError(f"campaign config missing field '{key}'")
    lemma = config["lemma"]
    if lemma not in CAMPAIGN_NAMES:
        raise ValueError(f"unknown lemma campaign '{lemma}'")
    trials = int(config["trials"])
    seed = int(config["seed"])
    max_order = int(config.get("max_order", 32))
    n = int(config.get("n", 0)) or None
    sampler = config.get("sampler", "S2")
    accepted = 0
    rejected = 0
    violations = []
    outcomes = []
    for t in range(trials):
        rng = _trial_rng(seed, t)
        if lemma == "summand_criterion":
            B = random_n_torsion_group(n or 8, min(max_order, ORACLE_CAP), rng)
            A, f = random_embedding(B, rng)
            nn = n or max(B.exponent, 1)
            rep = check_summand_equivalence(f, nn)
        elif lemma == "diagram_summand":
            d = sample_diagram(rng, min(max_order, ORACLE_CAP), n or 8, sampler)
            if d is None:
                rejected += 1
                outcomes.append("rejected")
                continue
            rep = check_diagram_summand(d)
        else:
            rep = _non_summand_trial(rng, min(max_order, ORACLE_CAP), n)
            if rep is None:
                rejected += 1
                outcomes.append("rejected")
                continue
        if not rep.applicable:
            rejected += 1
            outcomes.append("not_applicable")
            continue
        accepted += 1
        if rep.violated:
            payload = rep.to_json()
            payload["trial"] = t
            payload["trial_seed"] = f"{seed}:{t}"
            violations.append(payload)
            outcomes.append("violation")
        else:
            outcomes.append("ok")
    return {
        "lemma": lemma,
        "trials": trials,
        "seed": seed,
        "max_order": max_order,
        "n": n,
        "sampler": sampler if lemma == "diagram_summand" else None,
        "accepted": accepted,
        "rejected": rejected,
        "violations": violations,
        "outcomes": outcomes,
    }


def _non_summand_trial(rng: random.Random, max_order: int, n: Optional[int]) -> Optional[LemmaReport]:
    nn = n or 8
    A = random_n_torsion_group(nn, max_order, rng)
    B = random_n_torsion_group(nn, max_order, rng)
    if A.is_trivial() or B.is_trivial():
        return None
    f = random_hom(A, B, rng)
    bound = lcm(max(A.exponent, 1), max(B.exponent, 1))
    kgens = kernel_subgroup(f).generators
    for m in range(2, bound + 1):
        if bound % m:
            continue
        if not all(is_divisible(A, k, m) is not None for k in kgens):
            continue
        for P in A.elements():
            if is_divisible(A, P, m) is None and is_divisible(B, f.apply(P), m) is not None:
                return check_non_summand(f, m, P)
    return None


# -- exhaustive sweeps -----------------------------------------------------------


def groups_up_to(max_order: int) -> list[FinAbGroup]:
    """Every invariant-factor group of order 1..max_order, sorted."""
    out = [()]

    def extend(prefix: tuple[int, ...], product: int) -> None:
        start = prefix[-1] if prefix else 2
        d = start
        while product * d <= max_order:
            if not prefix or d % prefix[-1] == 0:
                chain = prefix + (d,)
                out.append(chain)
                extend(chain, product * d)
            d += 1

    extend((), 1)
    uniq = sorted(set(out))
    return [FinAbGroup(fs) for fs in uniq]


def sweep_summand_equivalence(max_b: int = 32, iso_stride: int = 7) -> dict:
    """All subgroup inclusions S <= B for |B| <= max_b, three-way checked.

    Every embedding factors as an isomorphism onto its image followed by
    an inclusion, and all three conditions only depend on the image, so
    inclusions cover the general case; to exercise that, every
    ``iso_stride``-th instance is re-checked through its abstract-form
    embedding with a permuted generator order.  Purity is cross-checked
    against divisibility preservation on each instance.
    """
    from .abelian import all_subgroups

    checked = 0
    violations = []
    for B in groups_up_to(max_b):
        nB = max(B.exponent, 1)
        for S in all_subgroups(B):
            A, inc = subgroup_abstract_form(S)
            rep = check_summand_equivalence(inc, nB)
            assert rep.applicable
            checked += 1
            if rep.violated:
                violations.append(rep.to_json())
            if not B.is_trivial():
                pure = is_pure_subgroup(B, S, nB)
                pres = preserves_n_divisibility(inc, nB)[0]
                if pure != pres:
                    violations.append(
                        {"lemma": "purity_link", "group": B.to_json(), "sub": str(S)}
                    )
            if checked % iso_stride == 0 and A.rank > 0:
                # same image through the negated domain generators (always
                # an automorphism: d_j - 1 = -1 modulo the generator order)
                twisted = tuple(
                    tuple((c * (d - 1)) % e for c, e in zip(row, B.invariant_factors))
                    for row, d in zip(inc.matrix, A.invariant_factors)
                )
                rep2 = check_summand_equivalence(AbHom(A, B, twisted), nB)
                if rep2.applicable and rep2.details["summand"] != rep.details["summand"]:
                    violations.append({"lemma": "iso_stability", "group": B.to_json()})
    return {"checked": checked, "violations": violations, "max_b": max_b}


def search_non_summand_instances(max_order: int = 32, hom_cap: int = 4096) -> dict:
    """Exhaustive search for hypothesis-satisfying non-summand instances.

    Scans all pairs (A, B) with orders up to max_order and every
    homomorphism between them whenever |Hom(A, B)| <= hom_cap (pairs over
    the cap are reported as skipped); for each hom, all usable m and all
    P in A.  Each instance found is fully checked: the oracle must
    report "not a summand" and the induced-embedding mechanism must
    fire.
    """
    groups = [G for G in groups_up_to(max_order) if not G.is_trivial()]
    found = 0
    skipped_pairs = []
    violations = []
    homs_scanned = 0
    for A in groups:
        for B in groups:
            count = 1
            for d in A.invariant_factors:
                for e in B.invariant_factors:
                    count *= gcd(d, e)
            if count > hom_cap:
                skipped_pairs.append([list(A.invariant_factors), list(B.invariant_factors), count])
                continue
            homs_scanned += count
            n = lcm(A.exponent, B.exponent)
            divisors = [m for m in range(2, n + 1) if n % m == 0]
            import itertools as it

            choice_sets = []
            for d in A.invariant_factors:
                row_choices = []
                for e in B.invariant_factors:
                    g = gcd(d, e)
                    row_choices.append([(e // g) * t for t in range(g)])
                choice_sets.append(row_choices)
            flat = [c for row in choice_sets for c in row]
            rB = B.rank
            for combo in it.product(*flat) if flat else [()]:
                rows = [combo[i * rB : (i + 1) * rB] for i in range(A.rank)]
                f = AbHom(A, B, tuple(tuple(r) for r in rows))
                kgens = kernel_subgroup(f).generators
                for m in divisors:
                    if not all(is_divisible(A, k, m) is not None for k in kgens):
                        continue
                    hit = None
                    for P in A.elements():
                        if (
                            is_divisible(A, P, m) is None
                            and is_divisible(B, f.apply(P), m) is not None
                        ):
                            hit = P
                            break
                    if hit is None:
                        continue
                    rep = check_non_summand(f, m, hit)
                    assert rep.applicable
                    found += 1
                    if rep.violated:
                        violations.append(rep.to_json())
    return {
        "instances_found": found,
        "homs_scanned": homs_scanned,
        "skipped_pairs": skipped_pairs,
        "violations": violations,
        "max_order": max_order,
        "hom_cap": hom_cap,
    }
