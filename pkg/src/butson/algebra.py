"""Butson matrices as exponent arrays over Z_q, monomial transformations, and
exact primitives (inner products, orthogonality, determinants)."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cyclotomic import CyclotomicInt


class NotSquareWarning(UserWarning):
    """Raised as a warning when a Hadamard test is asked of a non-square matrix."""


class ButsonMatrix:
    """An m x n matrix H = EXP(2 pi i L / q) stored through its exponents L.

    Exponents are reduced mod q on construction and the array is read-only, so
    instances are hashable and safe to share.
    """

    __slots__ = ("q", "L", "_key")

    def __init__(self, q: int, L):
        if q < 1:
            raise ValueError("q must be >= 1")
        arr = np.array(L, dtype=np.int64, ndmin=2) % q
        if arr.ndim != 2:
            raise ValueError("exponent array must be two-dimensional")
        arr = arr.astype(np.int16 if q > 127 else np.int8)
        arr.setflags(write=False)
        self.q = int(q)
        self.L = arr
        self._key = None

    @property
    def m(self) -> int:
        return self.L.shape[0]

    @property
    def n(self) -> int:
        return self.L.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.L.shape

    def key(self) -> bytes:
        if self._key is None:
            self._key = bytes([self.q & 0xFF, self.m, self.n]) + self.L.astype(np.int16).tobytes()
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, ButsonMatrix):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and np.array_equal(self.L, other.L)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"ButsonMatrix(q={self.q}, shape={self.shape})"

    def to_complex(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.L.astype(float) / self.q)

    def row(self, i: int) -> np.ndarray:
        return self.L[i]

    def delete_row(self, i: int) -> "ButsonMatrix":
        return ButsonMatrix(self.q, np.delete(self.L, i, axis=0))

    def append_row(self, row) -> "ButsonMatrix":
        return ButsonMatrix(self.q, np.vstack([self.L, np.asarray(row, dtype=np.int64)[None, :]]))

    def tolist(self) -> list[list[int]]:
        return self.L.astype(int).tolist()


@dataclass(frozen=True)
class MonomialPair:
    """A pair (P, Q) of monomial matrices acting by H -> P H Q.

    Row i moves to row_perm[i] and gains phase row_phase[i]; column j moves to
    col_perm[j] and gains col_phase[j]:
    L'[row_perm[i]][col_perm[j]] = L[i][j] + row_phase[i] + col_phase[j] (mod q).
    """

    q: int
    row_perm: tuple[int, ...]
    row_phase: tuple[int, ...]
    col_perm: tuple[int, ...]
    col_phase: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.row_perm) != list(range(len(self.row_perm))):
            raise ValueError("row_perm is not a permutation")
        if sorted(self.col_perm) != list(range(len(self.col_perm))):
            raise ValueError("col_perm is not a permutation")
        if len(self.row_phase) != len(self.row_perm) or len(self.col_phase) != len(self.col_perm):
            raise ValueError("phase vector length does not match permutation")

    @classmethod
    def identity(cls, q: int, m: int, n: int) -> "MonomialPair":
        return cls(q, tuple(range(m)), (0,) * m, tuple(range(n)), (0,) * n)

    @classmethod
    def random(cls, q: int, m: int, n: int, rng: np.random.Generator) -> "MonomialPair":
        return cls(
            q,
            tuple(int(x) for x in rng.permutation(m)),
            tuple(int(x) for x in rng.integers(0, q, m)),
            tuple(int(x) for x in rng.permutation(n)),
            tuple(int(x) for x in rng.integers(0, q, n)),
        )

    @property
    def m(self) -> int:
        return len(self.row_perm)

    @property
    def n(self) -> int:
        return len(self.col_perm)

    def then(self, h: "MonomialPair") -> "MonomialPair":
        """The pair h o self (apply self first, then h)."""
        if (self.q, self.m, self.n) != (h.q, h.m, h.n):
            raise ValueError("monomial pairs of different shapes")
        q = self.q
        return MonomialPair(
            q,
            tuple(h.row_perm[s] for s in self.row_perm),
            tuple((a + h.row_phase[s]) % q for a, s in zip(self.row_phase, self.row_perm)),
            tuple(h.col_perm[t] for t in self.col_perm),
            tuple((b + h.col_phase[t]) % q for b, t in zip(self.col_phase, self.col_perm)),
        )

    def inverse(self) -> "MonomialPair":
        q = self.q
        rinv = [0] * self.m
        for i, s in enumerate(self.row_perm):
            rinv[s] = i
        cinv = [0] * self.n
        for j, t in enumerate(self.col_perm):
            cinv[t] = j
        return MonomialPair(
            q,
            tuple(rinv),
            tuple((-self.row_phase[rinv[k]]) % q for k in range(self.m)),
            tuple(cinv),
            tuple((-self.col_phase[cinv[k]]) % q for k in range(self.n)),
        )


def apply(M: ButsonMatrix, g: MonomialPair) -> ButsonMatrix:
    if (g.m, g.n) != M.shape:
        raise ValueError(f"monomial pair of shape {(g.m, g.n)} applied to matrix of shape {M.shape}")
    if g.q != M.q:
        raise ValueError("monomial pair and matrix use different q")
    L = M.L.astype(np.int64) + np.asarray(g.row_phase)[:, None] + np.asarray(g.col_phase)[None, :]
    out = np.empty_like(L)
    out[np.ix_(np.asarray(g.row_perm), np.asarray(g.col_perm))] = L
    return ButsonMatrix(M.q, out)


def inner_product(u: Sequence[int], v: Sequence[int], q: int) -> CyclotomicInt:
    """<u, v> = sum_k zeta^(u_k - v_k), linear in u and conjugate-linear in v."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError("rows must be one-dimensional and of equal length")
    counts = np.bincount((u - v) % q, minlength=q)
    return CyclotomicInt(q, counts.tolist())


def rows_orthogonal(M: ButsonMatrix) -> bool:
    """True iff all pairs of distinct rows have zero inner product."""
    q = M.q
    L = M.L.astype(np.int64)
    for i in range(M.m):
        for j in range(i + 1, M.m):
            if not inner_product(L[i], L[j], q).is_zero():
                return False
    return True


def is_hadamard(M: ButsonMatrix) -> bool:
    if M.m != M.n:
        warnings.warn(f"is_hadamard called on a {M.m}x{M.n} matrix", NotSquareWarning, stacklevel=2)
        return False
    return rows_orthogonal(M)


def dephase(M: ButsonMatrix) -> ButsonMatrix:
    """Equivalent matrix whose first row and first column are all ones."""
    L = M.L.astype(np.int64)
    return ButsonMatrix(M.q, L - L[:, :1] - L[:1, :] + L[0, 0])


def is_dephased(M: ButsonMatrix) -> bool:
    return not M.L[0].any() and not M.L[:, 0].any()


def act_variants(M: ButsonMatrix) -> tuple[ButsonMatrix, ButsonMatrix, ButsonMatrix]:
    """(adjoint, conjugate, transpose) of a square matrix."""
    if M.m != M.n:
        raise ValueError("ACT variants need a square matrix")
    L = M.L.astype(np.int64)
    return ButsonMatrix(M.q, (-L).T), ButsonMatrix(M.q, -L), ButsonMatrix(M.q, L.T)


def submatrix(M: ButsonMatrix, rows: Sequence[int], cols: Sequence[int]) -> list[list[CyclotomicInt]]:
    q = M.q
    return [[CyclotomicInt.root(q, int(M.L[i, j])) for j in cols] for i in rows]


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def determinant(S: Sequence[Sequence[CyclotomicInt]]) -> CyclotomicInt:
    """Exact determinant over Z[zeta_q].

    Leibniz expansion up to 4 x 4, fraction-free Bareiss elimination above that.
    """
    k = len(S)
    if any(len(r) != k for r in S):
        raise ValueError("determinant of a non-square array")
    if k == 0:
        raise ValueError("empty matrix")
    q = S[0][0].q
    if k <= 4:
        total = CyclotomicInt.zero(q)
        for p in itertools.permutations(range(k)):
            term = CyclotomicInt.from_int(q, _perm_sign(p))
            for i in range(k):
                term = term * S[i][p[i]]
            total = total + term
        return total
    A = [list(r) for r in S]
    sign = 1
    prev = CyclotomicInt.from_int(q, 1)
    for c in range(k - 1):
        if A[c][c].is_zero():
            for r in range(c + 1, k):
                if not A[r][c].is_zero():
                    A[c], A[r] = A[r], A[c]
                    sign = -sign
                    break
            else:
                return CyclotomicInt.zero(q)
        piv = A[c][c]
        for i in range(c + 1, k):
            for j in range(c + 1, k):
                A[i][j] = (A[i][j] * piv - A[i][c] * A[c][j]).exact_div(prev)
            A[i][c] = CyclotomicInt.zero(q)
        prev = piv
    det = A[k - 1][k - 1]
    return det if sign > 0 else -det


def fourier_matrix(n: int) -> ButsonMatrix:
    i = np.arange(n)
    return ButsonMatrix(n, np.outer(i, i) % n)
