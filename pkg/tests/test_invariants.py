import numpy as np
import pytest

from butson.algebra import ButsonMatrix, MonomialPair, act_variants, apply, fourier_matrix
from butson.families import evaluate, load_bundled
from butson.invariants import (
    defect,
    defect_basis,
    defect_system,
    matrix_zq_rank,
    profile,
    vanishing_minors,
    zq_rank,
)

from oracles import brute_zq_rank_3x3, float_defect


def table1_matrices(table10):
    return [(r, r.matrix()) for r in table10]


def test_vanishing_minor_examples():
    assert vanishing_minors(evaluate(load_bundled("D10"), [0, 0, 0], 4), 3) == 3600
    H = evaluate(load_bundled("H12B"), [0, 2, 2, 2, 0, 2, 0, 0, 2, 0], 4)
    assert vanishing_minors(H, 4) == 109890
    assert vanishing_minors(H, 5) == 205920


def test_vanishing_minor_range():
    with pytest.raises(ValueError):
        vanishing_minors(fourier_matrix(6), 5)
    with pytest.raises(ValueError):
        vanishing_minors(fourier_matrix(6), 1)


def test_two_by_two_minors_against_scan(rng):
    for _ in range(5):
        M = ButsonMatrix(4, rng.integers(0, 4, (6, 6)))
        L = M.L.astype(int)
        scan = sum(
            (L[a, c] + L[b, d] - L[a, d] - L[b, c]) % 4 == 0
            for a in range(6) for b in range(a + 1, 6) for c in range(6) for d in range(c + 1, 6)
        )
        assert vanishing_minors(M, 2) == scan


def test_zq_rank_zero_and_diagonal():
    assert matrix_zq_rank(np.zeros((3, 3), dtype=int), 4) == 0
    assert matrix_zq_rank(np.diag([1, 3, 2, 0]), 4) == 3
    assert matrix_zq_rank(np.diag([1, 1, 2]), 2) == 2
    # diag(3, 2) has rank one modulo both 2 and 3; s = (3, 4), t = (3, 2) realise it
    assert matrix_zq_rank(np.diag([3, 2]), 6) == 1
    assert (np.outer([3, 4], [3, 2]) % 6 == np.diag([3, 2])).all()
    assert matrix_zq_rank(np.diag([2, 2]), 6) == 2
    assert matrix_zq_rank(np.diag([3, 3]), 6) == 2


def test_zq_rank_against_factorisation_oracle(rng):
    for _ in range(1000):
        L = rng.integers(0, 4, (3, 3))
        assert matrix_zq_rank(L, 4) == brute_zq_rank_3x3(L, 4), L


def test_zq_rank_is_equivalence_invariant(table10, rng):
    for row in table10:
        M = row.matrix()
        ranks = {zq_rank(apply(M, MonomialPair.random(4, 10, 10, rng))) for _ in range(50)}
        assert ranks == {9}


def test_defect_examples():
    assert defect(evaluate(load_bundled("D10"), [0, 0, 0], 4)) == 16
    assert defect(evaluate(load_bundled("L14A"), [], 4)) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_fourier_defect_against_float_rank(n):
    F = fourier_matrix(n)
    assert defect(F) == float_defect(F.to_complex())


def test_fourier_defect_known_values():
    # prime order Fourier matrices are isolated; F_4 has a one-parameter family
    assert defect(fourier_matrix(5)) == 0
    assert defect(fourier_matrix(4)) == 1
    assert defect(fourier_matrix(6)) == 4


def test_defect_matches_float_on_table1(table10):
    for row in table10:
        M = row.matrix()
        assert defect(M) == float_defect(M.to_complex()) == row.defect


def test_defect_act_invariance(table10):
    for row in table10:
        M = row.matrix()
        assert {defect(V) for V in act_variants(M)} == {row.defect}


def test_defect_system_rank_independent_of_row_order(rng):
    import flint

    M = evaluate(load_bundled("N10B"), [1, 0, 0], 4)
    A = defect_system(M)
    B = A[rng.permutation(A.shape[0])]
    rank = lambda X: flint.fmpz_mat(X.shape[0], X.shape[1], [int(x) for x in X.ravel()]).rank()
    assert rank(A) == rank(B)


def test_defect_basis_size_and_exactness(table10):
    for row in table10[:3]:
        M = row.matrix()
        B = defect_basis(M)
        assert len(B) == row.defect and B.exact
        H = M.to_complex()
        n = M.n
        for R in B.matrices:
            assert not R[0].any() and not R[:, 0].any()
            for i in range(n):
                for j in range(i + 1, n):
                    assert abs(np.sum(H[i] * np.conj(H[j]) * (R[i] - R[j]))) < 1e-9
        stack = np.array([R.ravel() for R in B.matrices], dtype=float)
        assert np.linalg.matrix_rank(stack) == row.defect


def test_defect_basis_empty_for_isolated():
    assert len(defect_basis(evaluate(load_bundled("L14A"), [], 4))) == 0


def test_defect_basis_float_path_for_large_phi():
    F = fourier_matrix(5)  # phi(5) = 4 uses the SVD path
    B = defect_basis(F)
    assert not B.exact and len(B) == defect(F) == 0
    F8 = ButsonMatrix(8, fourier_matrix(4).L * 2)
    assert len(defect_basis(F8)) == defect(F8) == 1


def test_profile_examples():
    p = profile(evaluate(load_bundled("G10"), [2], 4))
    assert (p.autOrder, p.defect, p.zqRank, p.minorCounts, p.act) == (80, 8, 9, {3: 1600}, "NYN")
    p = profile(evaluate(load_bundled("L12B"), [0], 4))
    assert (p.autOrder, p.defect, p.zqRank, p.minorCounts[4], p.minorCounts[5]) == (24, 9, 9, 13440, 8640)
    d = profile(evaluate(load_bundled("D10"), [0, 0, 1], 4)).to_dict()
    assert d == {"autOrder": 64, "defect": 10, "zqRank": 9, "minors": {"3": 2032}, "act": "YYY"}


def test_profile_invariant_under_transforms(rng):
    M = evaluate(load_bundled("N10B"), [1, 0, 0], 4)
    base = profile(M)
    for _ in range(5):
        assert profile(apply(M, MonomialPair.random(4, 10, 10, rng))) == base
