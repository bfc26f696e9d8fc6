"""Numeric inner loops: orthogonal-row enumeration and vanishing-minor counts.

Each kernel has a numba implementation and a pure-numpy one. The numba path is
used when numba imports and the environment variable ``BUTSON_NUMBA`` is not
set to ``0``/``off``/``false``; both paths return identical results.
"""

from __future__ import annotations

import itertools
import math
import os
from functools import lru_cache

import numpy as np

from .cyclotomic import power_basis_table

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("BUTSON_NUMBA", "1").lower() not in ("0", "off", "false", "no")


@lru_cache(maxsize=None)
def _basis(q: int) -> np.ndarray:
    return np.array(power_basis_table(q), dtype=np.int64).reshape(q, -1)


@lru_cache(maxsize=None)
def _trig(q: int) -> tuple[np.ndarray, np.ndarray]:
    g = np.arange(q)
    return np.cos(2 * np.pi * g / q), np.sin(2 * np.pi * g / q)


@lru_cache(maxsize=None)
def _gauss_table(q: int) -> np.ndarray:
    # integer (re, im) of zeta_q^g for q in {1, 2, 4}
    if q == 1:
        return np.array([[1, 0]], dtype=np.int64)
    if q == 2:
        return np.array([[1, 0], [-1, 0]], dtype=np.int64)
    return np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=np.int64)


@lru_cache(maxsize=None)
def permutations_with_sign(k: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.int64).reshape(-1, k)
    signs = np.empty(len(perms), dtype=np.int64)
    for t, p in enumerate(perms):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if p[a] > p[b])
        signs[t] = -1 if inv % 2 else 1
    return perms, signs


@lru_cache(maxsize=None)
def combinations_array(n: int, k: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), k)), dtype=np.int64).reshape(-1, k)


# --------------------------------------------------------------------------
# orthogonal row enumeration

def _extend_rows_numpy(L: np.ndarray, q: int) -> np.ndarray:
    m, n = L.shape
    gauss = q in (1, 2, 4)
    if gauss:
        tab = _gauss_table(q)
        re_t, im_t = tab[:, 0], tab[:, 1]
    else:
        re_t, im_t = _trig(q)
    prefixes = np.zeros((1, 1), dtype=np.int64)
    d = (0 - L[:, 0]) % q
    re = re_t[d][None, :]
    im = im_t[d][None, :]
    for j in range(1, n):
        rem = n - j - 1
        P = prefixes.shape[0]
        vals = np.tile(np.arange(q), P)
        idx = np.repeat(np.arange(P), q)
        diff = (vals[:, None] - L[None, :, j]) % q
        nre = re[idx] + re_t[diff]
        nim = im[idx] + im_t[diff]
        if gauss:
            l1 = np.abs(nre) + np.abs(nim)
            ok = np.all((l1 <= rem) & ((rem - l1) % 2 == 0), axis=1)
        else:
            ok = np.all(nre * nre + nim * nim <= (rem + 0.5) ** 2, axis=1)
        prefixes = np.concatenate([prefixes[idx[ok]], vals[ok, None]], axis=1)
        re, im = nre[ok], nim[ok]
        if not prefixes.shape[0]:
            break
    if not prefixes.shape[0]:
        return np.zeros((0, n), dtype=np.int64)
    # exact zero test of every inner product
    B = _basis(q)
    diffs = (prefixes[:, None, :] - L[None, :, :]) % q
    counts = np.zeros(diffs.shape[:2] + (q,), dtype=np.int64)
    for g in range(q):
        counts[..., g] = (diffs == g).sum(axis=2)
    red = counts @ B
    keep = ~np.any(red != 0, axis=(1, 2))
    return prefixes[keep]


if HAVE_NUMBA:

    @njit(cache=True)
    def _extend_rows_nb(L, q, re_t, im_t, gauss, B):
        m, n = L.shape
        nb = B.shape[1]
        cap = 1024
        out = np.empty((cap, n), dtype=np.int64)
        cnt = 0
        row = np.zeros(n, dtype=np.int64)
        re = np.zeros((n + 1, m))
        im = np.zeros((n + 1, m))
        counts = np.zeros((m, q), dtype=np.int64)
        for r in range(m):
            d = (0 - L[r, 0]) % q
            re[1, r] = re_t[d]
            im[1, r] = im_t[d]
            counts[r, d] += 1
        # value being tried at each column; -1 = not started
        val = np.full(n, -1, dtype=np.int64)
        j = 1
        while j >= 1:
            if j == n:
                ok = True
                for r in range(m):
                    for t in range(nb):
                        s = 0
                        for g in range(q):
                            s += counts[r, g] * B[g, t]
                        if s != 0:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    if cnt == cap:
                        cap *= 2
                        new = np.empty((cap, n), dtype=np.int64)
                        new[:cnt] = out[:cnt]
                        out = new
                    out[cnt] = row
                    cnt += 1
                j -= 1
                continue
            if val[j] >= 0:
                for r in range(m):
                    counts[r, (val[j] - L[r, j]) % q] -= 1
            val[j] += 1
            if val[j] == q:
                val[j] = -1
                j -= 1
                continue
            v = val[j]
            row[j] = v
            rem = n - j - 1
            ok = True
            for r in range(m):
                d = (v - L[r, j]) % q
                counts[r, d] += 1
                a = re[j, r] + re_t[d]
                b = im[j, r] + im_t[d]
                re[j + 1, r] = a
                im[j + 1, r] = b
                if ok:
                    if gauss:
                        l1 = abs(a) + abs(b)
                        if l1 > rem or (rem - l1) % 2 != 0:
                            ok = False
                    elif a * a + b * b > (rem + 0.5) * (rem + 0.5):
                        ok = False
            if ok:
                j += 1
        return out[:cnt]


def extend_rows(L, q: int, use_numba: bool | None = None) -> np.ndarray:
    """All rows v with v[0] = 0 orthogonal to every row of L, in lexicographic order."""
    L = np.ascontiguousarray(L, dtype=np.int64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba and HAVE_NUMBA:
        gauss = q in (1, 2, 4)
        if gauss:
            tab = _gauss_table(q).astype(np.float64)
            re_t, im_t = tab[:, 0].copy(), tab[:, 1].copy()
        else:
            re_t, im_t = _trig(q)
        return _extend_rows_nb(L, q, re_t, im_t, gauss, _basis(q))
    return _extend_rows_numpy(L, q)


# --------------------------------------------------------------------------
# vanishing minors

def _minor_counts_numpy(L: np.ndarray, q: int, k: int) -> int:
    m, n = L.shape
    perms, signs = permutations_with_sign(k)
    rows = combinations_array(m, k)
    cols = combinations_array(n, k)
    B = _basis(q)
    colsel = cols[:, perms]  # (nC, nP, k): column used by row i under each permutation
    nC, nP = colsel.shape[:2]
    offsets = np.arange(nC)[:, None] * q
    total = 0
    for R in rows:
        sub = L[R]  # (k, n)
        s = np.zeros((nC, nP), dtype=np.int64)
        for i in range(k):
            s += sub[i][colsel[:, :, i]]
        s %= q
        counts = np.bincount((offsets + s).ravel(), weights=np.broadcast_to(signs, s.shape).ravel(), minlength=nC * q)
        red = counts.reshape(nC, q).astype(np.int64) @ B
        total += int(np.count_nonzero(~np.any(red != 0, axis=1)))
    return total


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _minor_counts_nb(L, q, rows, cols, perms, signs, B):
        nR, k = rows.shape
        nC = cols.shape[0]
        nP = perms.shape[0]
        nb = B.shape[1]
        total = 0
        for a in prange(nR):
            counts = np.zeros(q, dtype=np.int64)
            sub = np.empty((k, L.shape[1]), dtype=np.int64)
            for i in range(k):
                sub[i] = L[rows[a, i]]
            local = 0
            for c in range(nC):
                counts[:] = 0
                for p in range(nP):
                    s = 0
                    for i in range(k):
                        s += sub[i, cols[c, perms[p, i]]]
                    counts[s % q] += signs[p]
                zero = True
                for t in range(nb):
                    acc = 0
                    for g in range(q):
                        acc += counts[g] * B[g, t]
                    if acc != 0:
                        zero = False
                        break
                if zero:
                    local += 1
            total += local
        return total


def count_vanishing_minors(L, q: int, k: int, use_numba: bool | None = None) -> int:
    """Number of (row set, column set) pairs of size k with zero determinant."""
    L = np.ascontiguousarray(L, dtype=np.int64)
    m, n = L.shape
    if not 1 <= k <= min(m, n):
        raise ValueError(f"minor size {k} out of range for a {m}x{n} matrix")
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba and HAVE_NUMBA:
        perms, signs = permutations_with_sign(k)
        return int(_minor_counts_nb(L, q, combinations_array(m, k), combinations_array(n, k), perms, signs, _basis(q)))
    return _minor_counts_numpy(L, q, k)


def minor_counts_by_rowset(L, q: int, k: int) -> np.ndarray:
    """Per-row-set vanishing counts (numpy path); used to check the parallel reduction."""
    L = np.ascontiguousarray(L, dtype=np.int64)
    rows = combinations_array(L.shape[0], k)
    return np.array([_minor_counts_numpy(L[R], q, k) for R in rows], dtype=np.int64)
