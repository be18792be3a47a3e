"""Vectorized Howell reduction over Z/m for bulk row sets.

The cocycle machinery produces constraint matrices with a few hundred
thousand rows but modest width.  Reducing those row sets with the pure
Python builder in :mod:`cohomolab.modmat` would dominate the runtime, so
this module keeps the same canonical form but reduces whole blocks of
rows with numpy.  The slow gcd pivot path only runs for rows that
actually change the basis, which happens at most width * log2(m) times.

``howell_rows`` must agree bit for bit with ``modmat.howell_form``; the
test suite cross-checks the two implementations on random inputs.
Moduli are assumed to fit comfortably in int64 (everything here uses
m <= a few thousand).
"""

from __future__ import annotations

from math import gcd

import numpy as np

from .modmat import egcd, lifting_unit

__all__ = ["HowellReducer", "howell_rows"]


class HowellReducer:
    """Incremental canonical Howell form over Z/m, numpy-backed.

    The working dtype narrows with the modulus (int8 up to m = 8, int16
    up to m = 127): every intermediate value is bounded by 2 (m-1)^2,
    and narrower rows cut the memory traffic that dominates bulk
    reduction.  Powers of two additionally reduce through a bitmask
    instead of the much slower modulo kernel.
    """

    def __init__(self, modulus: int, width: int):
        self.m = modulus
        self.width = width
        # intermediate values are bounded by 2 (m-1)^2, which picks the dtype
        if modulus <= 8:
            self.dtype = np.int8
        elif modulus <= 127:
            self.dtype = np.int16
        else:
            self.dtype = np.int64
        self.mask = modulus - 1 if modulus & (modulus - 1) == 0 else None
        self.pivots: dict[int, np.ndarray] = {}

    def _reduce_inplace(self, arr: np.ndarray) -> np.ndarray:
        if self.mask is not None:
            arr &= self.mask
        else:
            arr %= self.m
        return arr

    def insert_block(self, block: np.ndarray, batch: int = 32) -> None:
        m = self.m
        block = (np.array(block, dtype=np.int64) % m).astype(self.dtype)
        if block.ndim != 2 or block.shape[1] != self.width:
            raise ValueError("block width mismatch")
        while block.shape[0]:
            block = self._sweep(block)
            block = block[np.any(block, axis=1)]
            if not block.shape[0]:
                break
            # rows that survive the vectorized sweep go through the exact
            # gcd path in small batches, then the rest is re-swept
            take = min(block.shape[0], batch)
            for i in range(take):
                self._insert_single(block[i].copy())
            block = block[take:]

    def _sweep(self, block: np.ndarray) -> np.ndarray:
        for j in sorted(self.pivots):
            b = self.pivots[j]
            d = int(b[j])
            q = block[:, j] // d
            if q.any():
                block -= q[:, None] * b[None, :]
                self._reduce_inplace(block)
        return block

    def insert_row(self, row: np.ndarray) -> None:
        self.insert_block(np.asarray(row, dtype=np.int64).reshape(1, -1))

    def _insert_single(self, row: np.ndarray) -> None:
        m = self.m
        pending = [(row % m).astype(self.dtype)]
        while pending:
            r = pending.pop()
            j = self._lead(r)
            while j is not None:
                if j in self.pivots:
                    b = self.pivots[j]
                    d = int(b[j])
                    a = int(r[j])
                    if a % d == 0:
                        r = (r - (a // d) * b) % m
                    else:
                        g, s, t = egcd(d, a)
                        new = (s * b + t * r) % m
                        u_row = ((a // g) * b - (d // g) * r) % m
                        self._set_pivot(j, new, pending)
                        r = u_row
                    j = self._lead(r, j + 1)
                else:
                    self._set_pivot(j, r, pending)
                    break

    def _set_pivot(self, j: int, row: np.ndarray, pending: list[np.ndarray]) -> None:
        m = self.m
        a = int(row[j])
        g = gcd(a, m)
        if a != g:
            row = (lifting_unit(a, m) * row) % m
        self.pivots[j] = row
        ann_row = ((m // g) * row) % m
        if ann_row.any():
            pending.append(ann_row)

    @staticmethod
    def _lead(row: np.ndarray, start: int = 0) -> int | None:
        nz = np.nonzero(row[start:])[0]
        if nz.size == 0:
            return None
        return start + int(nz[0])

    def finalize(self) -> np.ndarray:
        m = self.m
        cols = sorted(self.pivots)
        if not cols:
            return np.zeros((0, self.width), dtype=np.int64)
        rows = np.stack([self.pivots[j] for j in cols]).astype(np.int64)
        for pi, j in enumerate(cols):
            if pi == 0:
                continue
            d = int(rows[pi, j])
            q = rows[:pi, j] // d
            if q.any():
                rows[:pi] = (rows[:pi] - q[:, None] * rows[pi][None, :]) % m
        return rows


def howell_rows(rows: np.ndarray, modulus: int) -> np.ndarray:
    """Canonical Howell form of the row span of a (possibly huge) row set."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        raise ValueError("expected a 2d array")
    red = HowellReducer(modulus, rows.shape[1])
    red.insert_block(rows)
    return red.finalize()


def kernel_rows(rows: np.ndarray, modulus: int) -> np.ndarray:
    """Left kernel {x : x A = 0} of a row matrix, in canonical Howell form.

    Same [A | I] construction as ``modmat.kernel``, on numpy rows.
    """
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim != 2:
        raise ValueError("expected a 2d array")
    nr, nc = rows.shape
    aug = np.concatenate([rows % modulus, np.eye(nr, dtype=np.int64) % modulus], axis=1)
    red = HowellReducer(modulus, nc + nr)
    red.insert_block(aug)
    out = red.finalize()
    mask = ~np.any(out[:, :nc], axis=1)
    return out[mask][:, nc:]
