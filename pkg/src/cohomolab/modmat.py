"""Exact linear algebra over Z/mZ.

This module is the computational substrate for everything else: matrices
with entries in Z/mZ for an arbitrary modulus m >= 2, together with the
canonical forms and solvers that stay correct in the presence of zero
divisors.

Conventions, fixed once and for all:

* Row-vector convention.  Vectors multiply matrices from the left,
  ``x . A``, so ``kernel(A)`` always means the left kernel
  ``{x : x A = 0}`` and the row span of ``A`` is its image as a map on
  row vectors.  Column users transpose at the boundary.
* Every entry of a ``ZModMatrix`` is stored reduced to ``[0, modulus)``.
* Empty matrices (0 rows or 0 columns) are legal everywhere and behave
  as the obvious degenerate cases.

The canonical row form is the Howell normal form rather than a plain
echelon form: over Z/mZ two matrices have the same row span if and only
if they have the same Howell form, which turns span comparisons into
tuple comparisons.  The form used here is characterised by

* echelon shape with strictly increasing pivot columns and no zero rows,
* each pivot entry divides the modulus,
* entries above a pivot are reduced modulo that pivot,
* the span property: any span element whose leading coordinate sits in
  column j lies in the span of the rows with pivot column >= j (this is
  what fails for naive echelon forms over rings with zero divisors, and
  is enforced by closing the row set under ``(m // pivot) * row``).

All values are immutable after construction and all operations are pure
functions, so concurrent use needs no synchronisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

__all__ = [
    "ZModMatrix",
    "egcd",
    "modinv",
    "lifting_unit",
    "mat_mul",
    "howell_form",
    "kernel",
    "solve",
    "is_invertible",
    "smith_normal_form",
    "integer_snf",
    "span_size",
    "row_span_equal",
]


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def modinv(a: int, m: int) -> int:
    """Inverse of a unit a modulo m."""
    if m == 1:
        return 0
    g, s, _ = egcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    return s % m


def lifting_unit(a: int, m: int) -> int:
    """A unit u modulo m with u*a == gcd(a, m) (mod m).

    This is the scaling that normalises a pivot entry to a divisor of the
    modulus.  For a == 0 the answer is 1 by convention.
    """
    a %= m
    if a == 0:
        return 1
    g = gcd(a, m)
    b = a // g
    m1 = m // g
    # b is invertible mod m1; any lift of its inverse that is coprime to m
    # does the job, and such a lift exists within g steps of size m1.
    u = modinv(b % m1, m1) if m1 > 1 else 1
    while gcd(u, m) != 1:
        u += m1
    return u % m


@dataclass(frozen=True)
class ZModMatrix:
    """Dense immutable matrix over Z/mZ, entries row-major and reduced."""

    modulus: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError("modulus must be an integer >= 2")
        if self.rows < 0 or self.cols < 0:
            raise ValueError("rows and cols must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} does not match "
                f"{self.rows}x{self.cols}"
            )
        m = self.modulus
        for e in self.entries:
            if not (0 <= e < m):
                raise ValueError(f"entry {e} is not reduced modulo {m}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_rows(cls, modulus: int, rows_data: Sequence[Sequence[int]]) -> "ZModMatrix":
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        ent = []
        for r in rows_data:
            if len(r) != cols:
                raise ValueError("ragged rows")
            ent.extend(int(e) % modulus for e in r)
        return cls(modulus, rows, cols, tuple(ent))

    @classmethod
    def identity(cls, modulus: int, n: int) -> "ZModMatrix":
        ent = [0] * (n * n)
        for i in range(n):
            ent[i * n + i] = 1 % modulus
        return cls(modulus, n, n, tuple(ent))

    @classmethod
    def zeros(cls, modulus: int, rows: int, cols: int) -> "ZModMatrix":
        return cls(modulus, rows, cols, (0,) * (rows * cols))

    @classmethod
    def from_json(cls, obj: dict) -> "ZModMatrix":
        for field in ("modulus", "rows", "cols", "entries"):
            if field not in obj:
                raise ValueError(f"matrix literal missing field '{field}'")
        m, r, c = obj["modulus"], obj["rows"], obj["cols"]
        ent = obj["entries"]
        if len(ent) != r:
            raise ValueError("entries: row count does not match 'rows'")
        flat: list[int] = []
        for i, row in enumerate(ent):
            if len(row) != c:
                raise ValueError(f"entries[{i}]: length does not match 'cols'")
            for j, e in enumerate(row):
                if not isinstance(e, int) or not (0 <= e < m):
                    raise ValueError(f"entries[{i}][{j}]: {e} is not reduced modulo {m}")
            flat.extend(row)
        return cls(m, r, c, tuple(flat))

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.tolists(),
        }

    # -- access ---------------------------------------------------------

    def row(self, i: int) -> tuple[int, ...]:
        c = self.cols
        return self.entries[i * c : (i + 1) * c]

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def rows_list(self) -> list[tuple[int, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def tolists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == ZModMatrix.identity(self.modulus, self.rows)

    def __str__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"[{body}] (mod {self.modulus})"

    # -- arithmetic -----------------------------------------------------

    def _check_same_shape(self, other: "ZModMatrix") -> None:
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def add(self, other: "ZModMatrix") -> "ZModMatrix":
        self._check_same_shape(other)
        m = self.modulus
        ent = tuple((a + b) % m for a, b in zip(self.entries, other.entries))
        return ZModMatrix(m, self.rows, self.cols, ent)

    def sub(self, other: "ZModMatrix") -> "ZModMatrix":
        self._check_same_shape(other)
        m = self.modulus
        ent = tuple((a - b) % m for a, b in zip(self.entries, other.entries))
        return ZModMatrix(m, self.rows, self.cols, ent)

    def neg(self) -> "ZModMatrix":
        m = self.modulus
        return ZModMatrix(m, self.rows, self.cols, tuple((-a) % m for a in self.entries))

    def scale(self, k: int) -> "ZModMatrix":
        m = self.modulus
        k %= m
        return ZModMatrix(m, self.rows, self.cols, tuple((k * a) % m for a in self.entries))

    def mul(self, other: "ZModMatrix") -> "ZModMatrix":
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch: {self.rows}x{self.cols} times {other.rows}x{other.cols}")
        m = self.modulus
        n, k, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [0] * (n * p)
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for j in range(p):
                s = 0
                for t in range(k):
                    s += arow[t] * b[t * p + j]
                out[i * p + j] = s % m
        return ZModMatrix(m, n, p, tuple(out))

    def transpose(self) -> "ZModMatrix":
        r, c = self.rows, self.cols
        ent = tuple(self.entries[i * c + j] for j in range(c) for i in range(r))
        return ZModMatrix(self.modulus, c, r, ent)

    def hstack(self, other: "ZModMatrix") -> "ZModMatrix":
        if self.modulus != other.modulus or self.rows != other.rows:
            raise ValueError("hstack mismatch")
        ent: list[int] = []
        for i in range(self.rows):
            ent.extend(self.row(i))
            ent.extend(other.row(i))
        return ZModMatrix(self.modulus, self.rows, self.cols + other.cols, tuple(ent))

    def vstack(self, other: "ZModMatrix") -> "ZModMatrix":
        if self.modulus != other.modulus or self.cols != other.cols:
            raise ValueError("vstack mismatch")
        return ZModMatrix(
            self.modulus, self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        """Row vector times matrix: returns x . A of length cols."""
        if len(x) != self.rows:
            raise ValueError("vector length does not match row count")
        m = self.modulus
        c = self.cols
        out = [0] * c
        for i, xi in enumerate(x):
            if xi % m == 0:
                continue
            base = i * c
            for j in range(c):
                out[j] += xi * self.entries[base + j]
        return tuple(v % m for v in out)


def mat_mul(a: ZModMatrix, b: ZModMatrix) -> ZModMatrix:
    """Matrix product a . b with shared modulus."""
    return a.mul(b)


def hstack_all(mats: Sequence[ZModMatrix]) -> ZModMatrix:
    if not mats:
        raise ValueError("need at least one matrix")
    out = mats[0]
    for m in mats[1:]:
        out = out.hstack(m)
    return out


# -- Howell normal form ----------------------------------------------------


def _lead(row: Sequence[int], start: int = 0) -> Optional[int]:
    for j in range(start, len(row)):
        if row[j]:
            return j
    return None


class _HowellBuilder:
    """Incremental Howell form over Z/m.

    Rows are inserted one at a time; the builder keeps one pivot row per
    pivot column.  When a pivot is created or strengthened, the row
    ``(m // pivot) * row`` is queued for insertion, which is exactly what
    upgrades an echelon basis to one with the Howell span property.
    """

    def __init__(self, modulus: int, width: int):
        self.m = modulus
        self.width = width
        self.pivots: dict[int, list[int]] = {}

    def insert(self, row: Iterable[int]) -> None:
        m = self.m
        width = self.width
        pending: list[list[int]] = [[e % m for e in row]]
        while pending:
            r = pending.pop()
            j = _lead(r)
            while j is not None:
                if j in self.pivots:
                    b = self.pivots[j]
                    d = b[j]
                    a = r[j]
                    if a % d == 0:
                        q = a // d
                        for t in range(j, width):
                            r[t] = (r[t] - q * b[t]) % m
                    else:
                        g, s, tt = egcd(d, a)
                        new = [(s * b[t] + tt * r[t]) % m for t in range(width)]
                        u_row = [((a // g) * b[t] - (d // g) * r[t]) % m for t in range(width)]
                        self._set_pivot(j, new, pending)
                        r = u_row
                    j = _lead(r, j + 1)
                else:
                    self._set_pivot(j, r, pending)
                    break

    def _set_pivot(self, j: int, row: list[int], pending: list[list[int]]) -> None:
        m = self.m
        a = row[j]
        g = gcd(a, m)
        if a != g:
            u = lifting_unit(a, m)
            row = [(u * e) % m for e in row]
        self.pivots[j] = row
        ann = m // g
        ann_row = [(ann * e) % m for e in row]
        if any(ann_row):
            pending.append(ann_row)

    def finalize(self) -> list[list[int]]:
        m = self.m
        width = self.width
        cols = sorted(self.pivots)
        rows = [self.pivots[j] for j in cols]
        for pi, j in enumerate(cols):
            d = rows[pi][j]
            prow = rows[pi]
            for ki in range(pi):
                q = rows[ki][j] // d
                if q:
                    krow = rows[ki]
                    for t in range(j, width):
                        krow[t] = (krow[t] - q * prow[t]) % m
        return rows


def howell_form(a: ZModMatrix) -> ZModMatrix:
    """Canonical Howell normal form of the row span of ``a``.

    Two matrices over the same Z/mZ have equal row spans exactly when
    their Howell forms are equal; zero rows are dropped.
    """
    builder = _HowellBuilder(a.modulus, a.cols)
    for i in range(a.rows):
        builder.insert(a.row(i))
    rows = builder.finalize()
    flat = tuple(e for r in rows for e in r)
    return ZModMatrix(a.modulus, len(rows), a.cols, flat)


def _augmented_howell(a: ZModMatrix) -> list[list[int]]:
    """Howell form of [A | I], used for kernels and solving."""
    builder = _HowellBuilder(a.modulus, a.cols + a.rows)
    for i in range(a.rows):
        r = list(a.row(i)) + [0] * a.rows
        r[a.cols + i] = 1 % a.modulus
        builder.insert(r)
    return builder.finalize()


def kernel(a: ZModMatrix) -> ZModMatrix:
    """Left kernel {x : x A = 0}, returned in Howell form.

    Computed from the Howell form of [A | I]: the rows whose A-part is
    zero carry kernel generators in the I-part, and the span property
    guarantees they generate the whole kernel.
    """
    rows = _augmented_howell(a)
    c = a.cols
    ker = [r[c:] for r in rows if not any(r[:c])]
    flat = tuple(e for r in ker for e in r)
    return ZModMatrix(a.modulus, len(ker), a.rows, flat)


def solve(a: ZModMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some x with x A = b, or None when no solution exists.

    The full solution set is x + kernel(a).
    """
    if len(b) != a.cols:
        raise ValueError("right-hand side length does not match column count")
    m = a.modulus
    rows = _augmented_howell(a)
    piv = {_lead(r): r for r in rows}
    width = a.cols + a.rows
    r = [e % m for e in b] + [0] * a.rows
    for j in range(a.cols):
        if r[j] == 0:
            continue
        prow = piv.get(j)
        if prow is None or r[j] % prow[j] != 0:
            return None
        q = r[j] // prow[j]
        for t in range(j, width):
            r[t] = (r[t] - q * prow[t]) % m
    return tuple((-t) % m for t in r[a.cols :])


def is_invertible(a: ZModMatrix) -> bool:
    """True iff the square matrix ``a`` is invertible over Z/m.

    Equivalent to the determinant being a unit; decided by checking that
    the Howell form of the rows is the identity.
    """
    if a.rows != a.cols:
        raise ValueError("is_invertible requires a square matrix")
    return howell_form(a).is_identity()


def span_size(h: ZModMatrix) -> int:
    """Number of vectors in the row span of a Howell-form matrix."""
    m = h.modulus
    size = 1
    for i in range(h.rows):
        j = _lead(h.row(i))
        assert j is not None
        size *= m // h.entry(i, j)
    return size


def row_span_equal(a: ZModMatrix, b: ZModMatrix) -> bool:
    return howell_form(a) == howell_form(b)


# -- Smith normal form -----------------------------------------------------


def integer_snf(
    mat: Sequence[Sequence[int]], nrows: int, ncols: int
) -> tuple[list[int], list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form over the integers with transforms.

    Returns (d, U, V, Vinv) where U * mat * V is diagonal with diagonal
    ``d`` satisfying d[0] | d[1] | ..., U and V are unimodular, and
    Vinv = V^{-1}.  Intended for the small relation matrices that present
    finite abelian groups.
    """
    A = [list(r) for r in mat]
    assert len(A) == nrows and all(len(r) == ncols for r in A)
    U = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    V = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    Vinv = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def row_add(i: int, j: int, q: int) -> None:
        for t in range(ncols):
            A[i][t] += q * A[j][t]
        for t in range(nrows):
            U[i][t] += q * U[j][t]

    def col_add(i: int, j: int, q: int) -> None:
        # column i += q * column j; inverse applied to Vinv on the left
        for r in range(nrows):
            A[r][i] += q * A[r][j]
        for r in range(ncols):
            V[r][i] += q * V[r][j]
        for t in range(ncols):
            Vinv[j][t] -= q * Vinv[i][t]

    def row_swap(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i: int, j: int) -> None:
        for r in range(nrows):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(ncols):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_neg(i: int) -> None:
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    n = min(nrows, ncols)
    t = 0
    while t < n:
        # locate a nonzero entry of minimal absolute value in the block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = abs(A[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            row_swap(t, bi)
        if bj != t:
            col_swap(t, bj)
        while True:
            if A[t][t] < 0:
                row_neg(t)
            p = A[t][t]
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    q = A[i][t] // p
                    row_add(i, t, -q)
                    if A[i][t]:
                        row_swap(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            # clear row t to the right of the pivot
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // p
                    col_add(j, t, -q)
                    if A[t][j]:
                        col_swap(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            # enforce divisibility of the remaining block by the pivot
            fixed = True
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if A[i][j] % p:
                        row_add(t, i, 1)
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        t += 1
    d = [A[i][i] for i in range(n)]
    return d, U, V, Vinv


def smith_normal_form(a: ZModMatrix) -> tuple[ZModMatrix, ZModMatrix, ZModMatrix]:
    """Smith normal form over Z/m: returns (D, U, V) with U A V = D.

    D is diagonal with d1 | d2 | ... (zero entries trailing), each nonzero
    diagonal entry divides the modulus, and U, V are invertible over Z/m.
    """
    m = a.modulus
    lifted = [list(a.row(i)) for i in range(a.rows)]
    d, U, V, _ = integer_snf(lifted, a.rows, a.cols)
    # normalise each diagonal entry to gcd(d_i, m) by a unit row scaling
    units = []
    for i in range(min(a.rows, a.cols)):
        di = d[i] % m
        u = lifting_unit(di, m)
        units.append(u)
        d[i] = (u * di) % m
    dent = [0] * (a.rows * a.cols)
    for i in range(min(a.rows, a.cols)):
        dent[i * a.cols + i] = d[i]
    uent = []
    for i in range(a.rows):
        u = units[i] if i < len(units) else 1
        uent.extend((u * x) % m for x in U[i])
    vent = [x % m for row in V for x in row]
    D = ZModMatrix(m, a.rows, a.cols, tuple(dent))
    Umat = ZModMatrix(m, a.rows, a.rows, tuple(uent))
    Vmat = ZModMatrix(m, a.cols, a.cols, tuple(vent))
    return D, Umat, Vmat
