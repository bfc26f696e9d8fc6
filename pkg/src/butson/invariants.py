"""Exact equivalence invariants: vanishing minors, Z_q-rank, defect and the assembled profile."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import flint
import numpy as np

from .algebra import ButsonMatrix, dephase
from .cyclotomic import euler_phi, power_basis_table
from .equivalence import act_class, automorphism_order, flags_string
from .kernels import count_vanishing_minors

DEFAULT_MINORS = {10: (3,), 12: (4, 5), 14: (4,)}


def default_minor_sizes(n: int) -> tuple[int, ...]:
    return DEFAULT_MINORS.get(n, (3,) if n >= 5 else ())


def vanishing_minors(M: ButsonMatrix, k: int, use_numba: bool | None = None) -> int:
    """Number of k x k submatrices with exactly zero determinant."""
    if not 2 <= k <= min(M.m, M.n) - 2:
        raise ValueError(f"minor size {k} outside [2, {min(M.m, M.n) - 2}]")
    return count_vanishing_minors(M.L, M.q, k, use_numba=use_numba)


# --------------------------------------------------------------------------
# Z_q-rank

def _factorize(q: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= q:
        while q % p == 0:
            out[p] = out.get(p, 0) + 1
            q //= p
        p += 1
    if q > 1:
        out[q] = out.get(q, 0) + 1
    return out


def _valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def smith_diagonal(L) -> list[int]:
    A = np.asarray(L, dtype=np.int64)
    r, c = A.shape
    S = flint.fmpz_mat(r, c, [int(x) for x in A.ravel()]).snf()
    return [int(S[i, i]) for i in range(min(r, c))]


def matrix_zq_rank(L, q: int) -> int:
    """Least r with L = S T (mod q) for integer S, T; 0 for the zero matrix.

    For each prime power p^e exactly dividing q this is the number of Smith
    invariants with p-adic valuation below e; the ranks of the CRT components
    combine by maximum.
    """
    if q == 1:
        return 0
    diag = smith_diagonal(L)
    best = 0
    for p, e in _factorize(q).items():
        best = max(best, sum(1 for d in diag if d != 0 and _valuation(d, p) < e))
    return best


def zq_rank(M: ButsonMatrix) -> int:
    """Z_q-rank of the dephased exponent matrix.

    The rank of an arbitrary exponent matrix is not an equivalence invariant
    (adding a_i + b_j can change it by one); the dephased one is.
    """
    return matrix_zq_rank(dephase(M).L, M.q)


# --------------------------------------------------------------------------
# defect

@dataclass
class PhasingBasis:
    """Basis of phasing matrices R (first row and column zero) solving the linearised unitarity system."""

    n: int
    matrices: list[np.ndarray] = field(default_factory=list)
    exact: bool = True

    def __len__(self) -> int:
        return len(self.matrices)

    @property
    def dimension(self) -> int:
        return len(self.matrices)


def _regular_blocks(q: int) -> np.ndarray:
    """blocks[d] is the matrix of multiplication by zeta^d on the power basis."""
    tab = np.array(power_basis_table(q), dtype=np.int64).reshape(q, -1)
    phi = tab.shape[1]
    blocks = np.empty((q, phi, phi), dtype=np.int64)
    for d in range(q):
        for t in range(phi):
            blocks[d, :, t] = tab[(d + t) % q]
    return blocks


def defect_system(M: ButsonMatrix, ordered: bool = True) -> np.ndarray:
    """Integer matrix of the linearised system over the regular representation.

    Unknown R[i,k] occupies the phi columns ``(i*n + k)*phi ...``. With
    ``ordered`` every ordered pair (i,j) contributes an equation block,
    otherwise only i < j.
    """
    q, n = M.q, M.n
    L = M.L.astype(np.int64)
    blocks = _regular_blocks(q)
    phi = blocks.shape[1]
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j and (ordered or i < j)]
    A = np.zeros((len(pairs) * phi, n * n * phi), dtype=np.int64)
    for e, (i, j) in enumerate(pairs):
        r0 = e * phi
        for k in range(n):
            B = blocks[(L[i, k] - L[j, k]) % q]
            ci = (i * n + k) * phi
            cj = (j * n + k) * phi
            A[r0:r0 + phi, ci:ci + phi] += B
            A[r0:r0 + phi, cj:cj + phi] -= B
    return A


def _rank(A: np.ndarray) -> int:
    r, c = A.shape
    if not r or not c:
        return 0
    return flint.fmpz_mat(r, c, [int(x) for x in A.ravel()]).rank()


def defect(M: ButsonMatrix) -> int:
    """d(H) = (n^2 - rank) - (2n - 1) for the linearised unitarity system.

    The ordered-pair system is closed under complex conjugation, so its real
    solution dimension equals the dimension of its solution space over Q(zeta);
    that rank is the rational rank of the regular representation divided by phi(q).
    """
    if M.m != M.n:
        raise ValueError("defect requires a square matrix")
    n = M.n
    phi = euler_phi(M.q)
    rank = _rank(defect_system(M))
    if rank % phi:
        raise ArithmeticError("regular representation rank not divisible by phi(q)")
    return n * n - rank // phi - (2 * n - 1)


def _real_system(mats: list[ButsonMatrix]) -> np.ndarray:
    rows = []
    for M in mats:
        n, q = M.n, M.q
        H = M.to_complex()
        for i in range(n):
            for j in range(i + 1, n):
                c = H[i] * np.conj(H[j])
                row = np.zeros((n, n), dtype=complex)
                row[i] += c
                row[j] -= c
                rows.append(row.real.ravel())
                rows.append(row.imag.ravel())
    return np.array(rows)


def _dephased_columns(n: int) -> np.ndarray:
    idx = np.arange(n * n).reshape(n, n)
    return idx[1:, 1:].ravel()


def _basis_from_kernel(n: int, K: np.ndarray, exact: bool) -> PhasingBasis:
    cols = _dephased_columns(n)
    mats = []
    for v in K:
        R = np.zeros(n * n, dtype=v.dtype)
        R[cols] = v
        mats.append(R.reshape(n, n))
    return PhasingBasis(n, mats, exact)


def _joint_basis(mats: list[ButsonMatrix]) -> PhasingBasis:
    n = mats[0].n
    cols = _dephased_columns(n)
    if all(euler_phi(M.q) <= 2 for M in mats):
        # for phi <= 2 the power-basis coordinates are a rational change of basis
        # from real and imaginary parts, so the kernel is exact over Q. A rational
        # R sits in the first power-basis coordinate of every unknown.
        A = np.vstack([defect_system(M, ordered=False)[:, ::euler_phi(M.q)] for M in mats])[:, cols]
        r, c = A.shape
        X, nullity = flint.fmpz_mat(r, c, [int(x) for x in A.ravel()]).nullspace()
        K = np.array([[int(X[i, t]) for i in range(c)] for t in range(nullity)], dtype=np.int64).reshape(nullity, c)
        K = np.array([v // math.gcd(*v.tolist()) for v in K], dtype=np.int64).reshape(nullity, c)
        return _basis_from_kernel(n, K, True)
    A = _real_system(mats)[:, cols]
    _, s, Vt = np.linalg.svd(A)
    tol = 1e-8 * (s[0] if len(s) else 1.0)
    rank = int(np.sum(s > tol))
    return _basis_from_kernel(n, Vt[rank:], False)


def defect_basis(M: ButsonMatrix) -> PhasingBasis:
    """Basis of dephased phasing matrices R; its size equals defect(M)."""
    if M.m != M.n:
        raise ValueError("defect_basis requires a square matrix")
    return _joint_basis([M])


def joint_defect_directions(samples: list[ButsonMatrix]) -> PhasingBasis:
    """Common dephased solutions R of the linearised system for every sample."""
    if not samples:
        raise ValueError("no samples")
    n = samples[0].n
    for M in samples:
        if M.m != M.n or M.n != n:
            raise ValueError("samples must be square matrices of one size")
    return _joint_basis(list(samples))


# --------------------------------------------------------------------------
# profile

@dataclass
class InvariantProfile:
    autOrder: int
    defect: int
    zqRank: int
    minorCounts: dict[int, int]
    actFlags: tuple[bool, bool, bool]
    orbitDimension: int | None = None

    @property
    def act(self) -> str:
        return flags_string(self.actFlags)

    def to_dict(self) -> dict:
        d = {
            "autOrder": self.autOrder,
            "defect": self.defect,
            "zqRank": self.zqRank,
            "minors": {str(k): v for k, v in sorted(self.minorCounts.items())},
            "act": self.act,
        }
        if self.orbitDimension is not None:
            d["orbit"] = self.orbitDimension
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def profile(M: ButsonMatrix, minor_sizes=None) -> InvariantProfile:
    if M.m != M.n:
        raise ValueError("profile requires a square matrix")
    sizes = default_minor_sizes(M.n) if minor_sizes is None else tuple(minor_sizes)
    flags, _ = act_class(M)
    return InvariantProfile(
        autOrder=automorphism_order(M),
        defect=defect(M),
        zqRank=zq_rank(M),
        minorCounts={k: vanishing_minors(M, k) for k in sizes},
        actFlags=flags,
    )
