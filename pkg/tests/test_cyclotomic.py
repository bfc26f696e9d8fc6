import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from butson.cyclotomic import CyclotomicInt, cyclotomic_polynomial, euler_phi, reduce_coefficients

QS = [1, 2, 3, 4, 5, 6, 8, 12]


def elements(q):
    return st.lists(st.integers(-5, 5), min_size=q, max_size=q).map(lambda c: CyclotomicInt(q, c))


@pytest.mark.parametrize("q,poly", [(1, (-1, 1)), (2, (1, 1)), (3, (1, 1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)), (8, (1, 0, 0, 0, 1))])
def test_cyclotomic_polynomials(q, poly):
    assert cyclotomic_polynomial(q) == poly
    assert len(poly) - 1 == euler_phi(q)


def test_sum_of_all_roots_vanishes():
    for q in QS[1:]:
        assert CyclotomicInt(q, [1] * q).is_zero()


def test_reduction_q4():
    assert reduce_coefficients(4, [1, 0, 1, 0]) == (0, 0)
    assert reduce_coefficients(4, [0, 1, 0, 0]) == (0, 1)
    assert reduce_coefficients(4, [0, 0, 0, 1]) == (0, -1)


@pytest.mark.parametrize("q", QS)
def test_complex_embedding_matches(q):
    z = CyclotomicInt.root(q, 1)
    assert abs(complex(z) - cmath.exp(2j * cmath.pi / q)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(QS).flatmap(lambda q: st.tuples(elements(q), elements(q), elements(q))))
def test_ring_axioms(xyz):
    x, y, z = xyz
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-6
    assert (x - x).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 8]).flatmap(lambda q: st.tuples(elements(q), elements(q))))
def test_exact_division_and_norm(xy):
    x, y = xy
    if y.is_zero():
        return
    assert (x * y).exact_div(y) == x
    prod = 1
    for k in range(1, y.q):
        if math.gcd(k, y.q) == 1:
            prod *= complex(y.galois(k))
    assert abs(y.norm() - prod) < 1e-6 * max(1, abs(prod))


def test_norm_small_cases():
    assert CyclotomicInt(4, [1, 1]).norm() == 2  # 1 + i
    assert CyclotomicInt(3, [2, 1]).norm() == 3  # 2 + w
    assert CyclotomicInt(4, [3, 0]).norm() == 9


def test_inexact_division_raises():
    with pytest.raises(ArithmeticError):
        CyclotomicInt(4, [1, 0]).exact_div(CyclotomicInt(4, [1, 1]))


def test_equality_uses_reduced_form():
    a = CyclotomicInt(4, [1, 0, 1, 0])
    assert a.is_zero() and a == CyclotomicInt.zero(4)
    assert hash(CyclotomicInt(4, [0, 1, 0, 0])) == hash(CyclotomicInt(4, [1, 2, 1, 1]))
