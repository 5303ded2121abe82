"""Dense linear algebra over GF(p), numpy-backed.

Matrices are numpy int64 arrays with entries reduced into [0, p).  With
p < 2**16 a full row elimination step stays far below 2**63, so a single
mod per update keeps everything exact.
"""

from __future__ import annotations

import numpy as np


def as_matrix(rows, p: int) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return np.mod(a, p)


def rref(a: np.ndarray, p: int, inv=None):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    a = np.mod(a.astype(np.int64, copy=True), p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = int(a[r, c])
        a[r] = a[r] * pow(piv, p - 2, p) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    _, piv = rref(a, p)
    return len(piv)


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel, one solution per row."""
    rows, cols = a.shape
    if rows == 0 or a.size == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for bi, fc in enumerate(free):
        basis[bi, fc] = 1
        for ri, pc in enumerate(piv):
            basis[bi, pc] = (-int(r[ri, fc])) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """One solution x of a @ x = b, or None if inconsistent."""
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(rows, -1)], axis=1) % p
    r, piv = rref(aug, p)
    width = b.reshape(rows, -1).shape[1]
    for ri in range(r.shape[0] - 1, -1, -1):
        lead = np.nonzero(r[ri])[0]
        if lead.size and lead[0] >= cols:
            return None
    x = np.zeros((cols, width), dtype=np.int64)
    for ri, pc in enumerate(piv):
        if pc < cols:
            x[pc] = r[ri, cols:]
    return x if b.ndim > 1 else x[:, 0]


def row_space_rank_stream(blocks, cols: int, p: int) -> int:
    """Rank of a tall matrix fed in row blocks (memory-friendly)."""
    ech = np.zeros((0, cols), dtype=np.int64)
    for blk in blocks:
        if blk.size == 0:
            continue
        stacked = np.vstack([ech, np.mod(blk, p)])
        ech, _ = rref(stacked, p)
        if ech.shape[0] == cols:
            return cols
    return ech.shape[0]
