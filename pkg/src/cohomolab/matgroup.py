"""Finite subgroups of GL_n(Z/p^k) built by generator closure.

A ``MatGroup`` carries the complete element table of the group generated
by a list of invertible matrices, produced by breadth-first closure.
Elements are canonically encoded as row-major entry tuples and live in a
hash table, so membership during closure is O(1); each element keeps one
witness word in the generators through a parent link.  Tables are
immutable once built and all queries afterwards are read-only.

The explicit tower used throughout the test pipeline, for a prime
p = 2 (mod 3):

* ``build_h2(p)``: the abelian subgroup of GL_2(Z/p^2) of matrices
  1 + p * [[a-2b, 3(b-a)], [-b, -(a-2b)]], isomorphic to (Z/p)^2;
* ``build_g2(p)``: its extension by the order-3 matrix [[1,-3],[1,-2]];
* ``build_n(p)``: the matrices congruent to the identity modulo p^2
  inside GL_2(Z/p^3), of order p^4;
* ``build_g3(p)``: the full preimage of the level-2 group under the
  entrywise reduction GL_2(Z/p^3) -> GL_2(Z/p^2), of order 3 p^6.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import modmat
from .abelian import FinAbGroup, Subgroup
from .modmat import ZModMatrix

__all__ = [
    "ClosureCapExceeded",
    "MatGroup",
    "GModule",
    "closure",
    "element_order",
    "cyclic_subgroups",
    "is_normal",
    "subgroup_from_keys",
    "act",
    "fixed_points",
    "reduction_map",
    "preimage_under_reduction",
    "build_h2",
    "build_g",
    "build_g2",
    "build_n",
    "build_g3",
    "is_prime",
]

DEFAULT_CAP = 10**6


class ClosureCapExceeded(RuntimeError):
    """Raised when generator closure would exceed its element cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _mul_key(a: tuple[int, ...], b: tuple[int, ...], n: int, m: int) -> tuple[int, ...]:
    out = [0] * (n * n)
    for i in range(n):
        base = i * n
        for j in range(n):
            s = 0
            for t in range(n):
                s += a[base + t] * b[t * n + j]
            out[base + j] = s % m
    return tuple(out)


def _identity_key(n: int) -> tuple[int, ...]:
    out = [0] * (n * n)
    for i in range(n):
        out[i * n + i] = 1
    return tuple(out)


class MatGroup:
    """Complete element table of a finite matrix group over Z/m."""

    __slots__ = ("modulus", "dim", "generators", "keys", "index", "parent", "gen_of", "gen_action")

    def __init__(
        self,
        modulus: int,
        dim: int,
        generators: tuple[ZModMatrix, ...],
        keys: tuple[tuple[int, ...], ...],
        index: dict,
        parent: tuple[int, ...],
        gen_of: tuple[int, ...],
        gen_action: tuple[tuple[int, ...], ...],
    ):
        self.modulus = modulus
        self.dim = dim
        self.generators = generators
        self.keys = keys
        self.index = index
        self.parent = parent
        self.gen_of = gen_of
        self.gen_action = gen_action

    @property
    def order(self) -> int:
        return len(self.keys)

    @property
    def identity_key(self) -> tuple[int, ...]:
        return self.keys[0]

    def matrix(self, i: int) -> ZModMatrix:
        return ZModMatrix(self.modulus, self.dim, self.dim, self.keys[i])

    def contains_key(self, key: tuple[int, ...]) -> bool:
        return key in self.index

    def contains_matrix(self, mat: ZModMatrix) -> bool:
        return mat.entries in self.index

    def mul_keys(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return _mul_key(a, b, self.dim, self.modulus)

    def inverse_key(self, key: tuple[int, ...]) -> tuple[int, ...]:
        ident = self.identity_key
        prev = key
        cur = self.mul_keys(key, key)
        while cur != ident:
            prev = cur
            cur = self.mul_keys(cur, key)
        return prev if key != ident else ident

    def word(self, i: int) -> tuple[int, ...]:
        """Witness word of element i as generator indices, identity = ()."""
        out = []
        while i > 0:
            out.append(self.gen_of[i])
            i = self.parent[i]
        return tuple(reversed(out))

    def element_set(self) -> frozenset:
        return frozenset(self.keys)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "dim": self.dim,
            "generators": [g.tolists() for g in self.generators],
        }

    def __str__(self) -> str:
        return f"matrix group of order {self.order} in GL_{self.dim}(Z/{self.modulus})"


def closure(
    generators: Sequence[ZModMatrix],
    *,
    modulus: Optional[int] = None,
    dim: Optional[int] = None,
    cap: int = DEFAULT_CAP,
) -> MatGroup:
    """Breadth-first closure of the generated group.

    Raises ClosureCapExceeded when the table would pass ``cap``; silent
    truncation is never an option because later cohomology would be
    wrong.  Non-invertible generators are rejected.
    """
    if generators:
        g0 = generators[0]
        modulus, dim = g0.modulus, g0.rows
        for g in generators:
            if g.rows != g.cols:
                raise ValueError("generators must be square")
            if g.modulus != modulus or g.rows != dim:
                raise ValueError("generators must share modulus and dimension")
            if not modmat.is_invertible(g):
                raise ValueError("generator is not invertible")
    elif modulus is None or dim is None:
        raise ValueError("empty generator list needs explicit modulus and dim")
    m, n = modulus, dim
    ident = _identity_key(n)
    keys = [ident]
    index = {ident: 0}
    parent = [-1]
    gen_of = [-1]
    gen_mats = [g.entries for g in generators]
    gen_action: list[tuple[int, ...]] = []
    qi = 0
    while qi < len(keys):
        x = keys[qi]
        row = []
        for gi, gm in enumerate(gen_mats):
            y = _mul_key(x, gm, n, m)
            idx = index.get(y)
            if idx is None:
                if len(keys) >= cap:
                    raise ClosureCapExceeded(f"closure exceeded cap of {cap} elements")
                idx = len(keys)
                index[y] = idx
                keys.append(y)
                parent.append(qi)
                gen_of.append(gi)
            row.append(idx)
        gen_action.append(tuple(row))
        qi += 1
    return MatGroup(
        m, n, tuple(generators), tuple(keys), index, tuple(parent), tuple(gen_of), tuple(gen_action)
    )


def element_order(g: ZModMatrix, cap: int = DEFAULT_CAP) -> int:
    """Multiplicative order of an invertible matrix."""
    if g.rows != g.cols:
        raise ValueError("order of a non-square matrix")
    ident = ZModMatrix.identity(g.modulus, g.rows)
    cur = g
    k = 1
    while cur != ident:
        cur = cur.mul(g)
        k += 1
        if k > cap:
            raise ClosureCapExceeded("element order exceeded cap")
    return k


def cyclic_subgroups(G: MatGroup) -> list[MatGroup]:
    """Each distinct cyclic subgroup of G once, in first-seen table order."""
    seen: set[frozenset] = set()
    out = []
    for i in range(G.order):
        sub = closure([G.matrix(i)]) if i else closure([], modulus=G.modulus, dim=G.dim)
        key = sub.element_set()
        if key not in seen:
            seen.add(key)
            out.append(sub)
    return out


def is_normal(G: MatGroup, H: MatGroup) -> bool:
    """Whether the subgroup H (same table space) is normal in G."""
    if H.modulus != G.modulus or H.dim != G.dim:
        raise ValueError("subgroup lives in a different matrix space")
    for k in H.keys:
        if not G.contains_key(k):
            raise ValueError("H is not contained in G")
    for g in G.generators:
        gk = g.entries
        gk_inv = G.inverse_key(gk)
        for h in H.keys:
            conj = G.mul_keys(G.mul_keys(gk, h), gk_inv)
            if not H.contains_key(conj):
                return False
    return True


def subgroup_from_keys(G: MatGroup, keys: Sequence[tuple[int, ...]]) -> MatGroup:
    """A MatGroup for the subgroup of G with the given element keys.

    Picks a small generating subset greedily in deterministic order and
    verifies the closure reproduces exactly the given set.
    """
    target = frozenset(keys)
    gens: list[ZModMatrix] = []
    current = closure([], modulus=G.modulus, dim=G.dim)
    for k in sorted(target):
        if not current.contains_key(k):
            gens.append(ZModMatrix(G.modulus, G.dim, G.dim, k))
            current = closure(gens)
    if current.element_set() != target:
        raise ValueError("key set is not closed under multiplication")
    return current


# -- modules and fixed points --------------------------------------------------


@dataclass(frozen=True)
class GModule:
    """The module (Z/modulus)^rank acted on by matrices of a MatGroup."""

    modulus: int
    rank: int

    def __post_init__(self) -> None:
        if self.modulus < 2 or self.rank < 1:
            raise ValueError("module needs modulus >= 2 and rank >= 1")

    def ambient_group(self) -> FinAbGroup:
        return FinAbGroup((self.modulus,) * self.rank)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def elements(self):
        return itertools.product(range(self.modulus), repeat=self.rank)

    def check_group(self, G: MatGroup) -> None:
        if G.modulus != self.modulus or G.dim != self.rank:
            raise ValueError("group and module do not match")

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "rank": self.rank}

    @classmethod
    def from_json(cls, obj: dict) -> "GModule":
        for field in ("modulus", "rank"):
            if field not in obj:
                raise ValueError(f"module literal missing field '{field}'")
        return cls(obj["modulus"], obj["rank"])


def act(mat_entries: tuple[int, ...], v: Sequence[int], modulus: int) -> tuple[int, ...]:
    """Left action of a square matrix on a module vector."""
    n = len(v)
    out = []
    for i in range(n):
        s = 0
        base = i * n
        for j in range(n):
            s += mat_entries[base + j] * v[j]
        out.append(s % modulus)
    return tuple(out)


def fixed_points(G: MatGroup, M: GModule) -> Subgroup:
    """The submodule of vectors fixed by every element of G.

    Computed as the joint kernel of (g - 1) over the generators, which
    suffices because fixed vectors of generators are fixed by all
    products and inverses.
    """
    M.check_group(G)
    amb = M.ambient_group()
    if not G.generators:
        return Subgroup(amb, amb.generators())
    ident = ZModMatrix.identity(M.modulus, M.rank)
    blocks = [g.transpose().sub(ident) for g in G.generators]
    stacked = modmat.hstack_all(blocks)
    ker = modmat.kernel(stacked)
    return Subgroup(amb, [amb.element(ker.row(i)) for i in range(ker.rows)])


# -- reduction and preimage -----------------------------------------------------


def _reduce_key(key: tuple[int, ...], m: int) -> tuple[int, ...]:
    return tuple(e % m for e in key)


def reduction_map(G: MatGroup, target_modulus: int) -> dict:
    """The entrywise-reduction homomorphism as a key-to-key mapping.

    Requires the target modulus to divide the group modulus.
    """
    if G.modulus % target_modulus or target_modulus >= G.modulus:
        raise ValueError("target modulus must properly divide the group modulus")
    return {k: _reduce_key(k, target_modulus) for k in G.keys}


def _prime_power(m: int) -> tuple[int, int]:
    p = 2
    while m % p:
        p += 1
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError("modulus is not a prime power")
    return p, k


def preimage_under_reduction(G: MatGroup, k: int, cap: int = DEFAULT_CAP) -> MatGroup:
    """Full preimage of G under GL_n(Z/p^k) -> GL_n(Z/p^j).

    Built generatively from entrywise lifts of the generators together
    with the reduction-kernel generators 1 + p^j E_ab, rather than by
    scanning GL_n(Z/p^k).  Requires j < k <= 2j so the kernel is the
    abelian group generated by those matrices; the construction is
    verified by reducing every element and counting.
    """
    p, j = _prime_power(G.modulus)
    if not (j < k <= 2 * j):
        raise ValueError("need j < k <= 2j for the reduction tower")
    big = p**k
    n = G.dim
    lifts = [ZModMatrix(big, n, n, g.entries) for g in G.generators]
    kern = []
    step = p**j
    for a in range(n):
        for b in range(n):
            ent = list(_identity_key(n))
            ent[a * n + b] = (ent[a * n + b] + step) % big
            kern.append(ZModMatrix(big, n, n, tuple(ent)))
    result = closure(lifts + kern, cap=cap)
    expected = G.order * p ** (n * n * (k - j))
    if result.order != expected:
        raise RuntimeError(
            f"preimage order {result.order} does not match product formula {expected}"
        )
    for key in result.keys:
        if not G.contains_key(_reduce_key(key, G.modulus)):
            raise RuntimeError("preimage element does not reduce into the base group")
    return result


# -- the explicit tower ----------------------------------------------------------


def _check_tower_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if p % 3 != 2:
        raise ValueError(f"p = {p} is rejected: need p = 2 (mod 3)")


def _h2_matrix(p: int, a: int, b: int) -> ZModMatrix:
    m = p * p
    return ZModMatrix.from_rows(
        m,
        [
            [1 + p * (a - 2 * b), 3 * p * (b - a)],
            [-p * b, 1 - p * (a - 2 * b)],
        ],
    )


def build_h2(p: int) -> MatGroup:
    """The order-p^2 abelian subgroup of GL_2(Z/p^2) of shifted scaled shears.

    Parameters (a, b) are canonicalized modulo p since the matrix entries
    only depend on them modulo p; the group is (Z/p)^2 under (a, b).
    """
    _check_tower_prime(p)
    G = closure([_h2_matrix(p, 1, 0), _h2_matrix(p, 0, 1)])
    if G.order != p * p:
        raise RuntimeError(f"level-2 subgroup has order {G.order}, expected {p*p}")
    expected = {_h2_matrix(p, a, b).entries for a in range(p) for b in range(p)}
    if G.element_set() != frozenset(expected):
        raise RuntimeError("closure does not match the parameter enumeration")
    return G


def build_g(p: int) -> ZModMatrix:
    """The order-3 companion matrix [[1,-3],[1,-2]] over Z/p^2."""
    _check_tower_prime(p)
    return ZModMatrix.from_rows(p * p, [[1, -3], [1, -2]])


def build_g2(p: int) -> MatGroup:
    """The order 3p^2 group generated by the order-3 matrix and the level-2 subgroup."""
    _check_tower_prime(p)
    G = closure([build_g(p), _h2_matrix(p, 1, 0), _h2_matrix(p, 0, 1)])
    if G.order != 3 * p * p:
        raise RuntimeError(f"level-2 extension has order {G.order}, expected {3*p*p}")
    return G


def build_n(p: int) -> MatGroup:
    """The kernel of GL_2(Z/p^3) -> GL_2(Z/p^2): matrices 1 + p^2 X, order p^4."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    m = p**3
    gens = []
    for a in range(2):
        for b in range(2):
            ent = list(_identity_key(2))
            ent[a * 2 + b] = (ent[a * 2 + b] + p * p) % m
            gens.append(ZModMatrix(m, 2, 2, tuple(ent)))
    N = closure(gens)
    if N.order != p**4:
        raise RuntimeError(f"congruence kernel has order {N.order}, expected {p**4}")
    return N


def build_g3(p: int, cap: int = DEFAULT_CAP) -> MatGroup:
    """Preimage of the level-2 group in GL_2(Z/p^3), of order 3 p^6."""
    G2 = build_g2(p)
    G3 = preimage_under_reduction(G2, 3, cap=cap)
    if G3.order != 3 * p**6:
        raise RuntimeError(f"level-3 group has order {G3.order}, expected {3 * p**6}")
    return G3
