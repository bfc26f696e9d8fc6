import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from butson.algebra import (
    ButsonMatrix,
    MonomialPair,
    NotSquareWarning,
    act_variants,
    apply,
    dephase,
    determinant,
    fourier_matrix,
    inner_product,
    is_dephased,
    is_hadamard,
    submatrix,
)
from butson.cyclotomic import CyclotomicInt


def random_matrix(rng, q, m, n):
    return ButsonMatrix(q, rng.integers(0, q, (m, n)))


def test_exponents_are_reduced_and_read_only():
    M = ButsonMatrix(4, [[5, -1], [0, 2]])
    assert M.tolist() == [[1, 3], [0, 2]]
    with pytest.raises(ValueError):
        M.L[0, 0] = 1


def test_apply_identity(rng):
    M = random_matrix(rng, 4, 3, 5)
    assert apply(M, MonomialPair.identity(4, 3, 5)) == M


def test_apply_row_phase_and_swap():
    M = ButsonMatrix(4, [[0, 1], [2, 3]])
    g = MonomialPair(4, (1, 0), (1, 0), (0, 1), (0, 0))
    assert apply(M, g).tolist() == [[2, 3], [1, 2]]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4]), st.integers(1, 5), st.integers(1, 5))
def test_group_action_composition(seed, q, m, n):
    rng = np.random.default_rng(seed)
    M = random_matrix(rng, q, m, n)
    g, h = MonomialPair.random(q, m, n, rng), MonomialPair.random(q, m, n, rng)
    assert apply(apply(M, g), h) == apply(M, g.then(h))
    assert apply(apply(M, g), g.inverse()) == M


def test_monomial_pair_validation():
    with pytest.raises(ValueError):
        MonomialPair(4, (0, 0), (0, 0), (0,), (0,))


def test_inner_product_examples():
    assert inner_product([0, 0], [0, 2], 4).is_zero()
    assert inner_product([0, 1, 2, 3], [0, 0, 0, 0], 4).is_zero()
    assert inner_product([0, 0, 0], [0, 0, 0], 3) == CyclotomicInt.from_int(3, 3)


def test_fourier_matrices_are_hadamard():
    for n in range(1, 8):
        assert is_hadamard(fourier_matrix(n))


def test_is_hadamard_rejects():
    assert not is_hadamard(ButsonMatrix(4, [[0, 0], [0, 1]]))
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert not is_hadamard(ButsonMatrix(2, [[0, 0]]))
        assert any(issubclass(x.category, NotSquareWarning) for x in w)


def test_dephase(rng):
    M = random_matrix(rng, 4, 4, 6)
    D = dephase(M)
    assert is_dephased(D)
    assert not D.L[0].any() and not D.L[:, 0].any()
    g = MonomialPair(4, tuple(range(4)), tuple(rng.integers(0, 4, 4)), tuple(range(6)), tuple(rng.integers(0, 4, 6)))
    assert dephase(apply(M, g)) == D


def test_act_variants():
    M = ButsonMatrix(4, [[0, 1], [3, 2]])
    adj, conj, tr = act_variants(M)
    assert conj.tolist() == [[0, 3], [1, 2]]
    assert tr.tolist() == [[0, 3], [1, 2]]
    assert adj.tolist() == [[0, 1], [3, 2]]


def _leibniz(S):
    k = len(S)
    q = S[0][0].q
    total = CyclotomicInt.zero(q)
    for p in itertools.permutations(range(k)):
        sign = (-1) ** sum(1 for a in range(k) for b in range(a + 1, k) if p[a] > p[b])
        term = CyclotomicInt.from_int(q, sign)
        for i in range(k):
            term = term * S[i][p[i]]
        total = total + term
    return total


@pytest.mark.parametrize("q,k", [(4, 2), (4, 3), (4, 5), (3, 5), (6, 5), (8, 6)])
def test_determinant_matches_leibniz_and_float(rng, q, k):
    for _ in range(5):
        M = random_matrix(rng, q, k, k)
        S = submatrix(M, range(k), range(k))
        d = determinant(S)
        assert d == _leibniz(S)
        assert abs(complex(d) - np.linalg.det(M.to_complex())) < 1e-6


def test_fourier_determinant_nonzero():
    F = fourier_matrix(6)
    assert not determinant(submatrix(F, range(6), range(6))).is_zero()


def test_singular_determinant_is_exact_zero():
    M = ButsonMatrix(4, [[0, 1, 2], [0, 1, 2], [1, 3, 0]])
    assert determinant(submatrix(M, range(3), range(3))).is_zero()
