"""Exact arithmetic in the ring of cyclotomic integers Z[zeta_q]."""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import Iterable, Sequence


def _poly_divmod(num: list[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    # coefficient lists, lowest degree first; den must be monic
    num = list(num)
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [0], num
    quot = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            quot[k - dn] = c
            for t in range(dn + 1):
                num[k - dn + t] -= c * den[t]
    return quot, num[:dn]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> tuple[int, ...]:
    """Coefficients of the q-th cyclotomic polynomial, lowest degree first."""
    if q < 1:
        raise ValueError("q must be positive")
    poly = [-1] + [0] * (q - 1) + [1]
    for d in range(1, q):
        if q % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    return tuple(poly)


def euler_phi(q: int) -> int:
    return len(cyclotomic_polynomial(q)) - 1


def reduce_coefficients(q: int, coeffs: Iterable[int]) -> tuple[int, ...]:
    """Remainder of sum c_g x^g modulo Phi_q; the canonical power-basis vector."""
    phi = cyclotomic_polynomial(q)
    c = list(coeffs)
    if len(c) <= len(phi) - 1:
        return tuple(c + [0] * (len(phi) - 1 - len(c)))
    _, rem = _poly_divmod(c, phi)
    return tuple(rem)


@lru_cache(maxsize=None)
def power_basis_table(q: int) -> tuple[tuple[int, ...], ...]:
    """Row g holds the reduced coordinates of zeta^g (g = 0..q-1)."""
    return tuple(reduce_coefficients(q, [0] * g + [1]) for g in range(q))


class CyclotomicInt:
    """Element sum_g coeffs[g] * zeta_q^g of Z[zeta_q].

    The coefficient vector is kept as given (length q); equality and hashing go
    through the reduction modulo Phi_q so they do not depend on the representative.
    """

    __slots__ = ("q", "coeffs", "_reduced")

    def __init__(self, q: int, coeffs: Iterable[int]):
        c = [0] * q
        for g, v in enumerate(coeffs):
            c[g % q] += int(v)
        self.q = q
        self.coeffs = tuple(c)
        self._reduced: tuple[int, ...] | None = None

    @classmethod
    def from_int(cls, q: int, value: int) -> "CyclotomicInt":
        return cls(q, [value])

    @classmethod
    def root(cls, q: int, g: int, coefficient: int = 1) -> "CyclotomicInt":
        c = [0] * q
        c[g % q] = coefficient
        return cls(q, c)

    @classmethod
    def zero(cls, q: int) -> "CyclotomicInt":
        return cls(q, ())

    @property
    def reduced(self) -> tuple[int, ...]:
        if self._reduced is None:
            self._reduced = reduce_coefficients(self.q, self.coeffs)
        return self._reduced

    def is_zero(self) -> bool:
        return not any(self.reduced)

    def _check(self, other: "CyclotomicInt") -> None:
        if self.q != other.q:
            raise ValueError(f"root orders differ: {self.q} vs {other.q}")

    def _coerce(self, other) -> "CyclotomicInt":
        if isinstance(other, CyclotomicInt):
            self._check(other)
            return other
        if isinstance(other, int):
            return CyclotomicInt.from_int(self.q, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicInt(self.q, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.q, (-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CyclotomicInt(self.q, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        q = self.q
        out = [0] * q
        for g, a in enumerate(self.coeffs):
            if a:
                for h, b in enumerate(other.coeffs):
                    if b:
                        out[(g + h) % q] += a * b
        return CyclotomicInt(q, out)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicInt":
        q = self.q
        return CyclotomicInt(q, [self.coeffs[(-g) % q] for g in range(q)])

    def galois(self, k: int) -> "CyclotomicInt":
        """Image under the automorphism zeta -> zeta^k (gcd(k, q) = 1)."""
        q = self.q
        out = [0] * q
        for g, a in enumerate(self.coeffs):
            out[(g * k) % q] += a
        return CyclotomicInt(q, out)

    def norm(self) -> int:
        """Field norm down to Q: product of all Galois conjugates."""
        prod = CyclotomicInt.from_int(self.q, 1)
        for k in range(1, self.q + 1):
            if math.gcd(k, self.q) == 1:
                prod = prod * self.galois(k)
        r = prod.reduced
        assert not any(r[1:])
        return r[0]

    def exact_div(self, other: "CyclotomicInt") -> "CyclotomicInt":
        """Quotient self / other, which must lie in Z[zeta_q]."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero cyclotomic integer")
        cofactor = CyclotomicInt.from_int(self.q, 1)
        for k in range(2, self.q + 1):
            if math.gcd(k, self.q) == 1:
                cofactor = cofactor * other.galois(k)
        nrm = (other * cofactor).reduced[0]
        num = (self * cofactor).reduced
        if any(c % nrm for c in num):
            raise ArithmeticError("quotient is not a cyclotomic integer")
        return CyclotomicInt(self.q, [c // nrm for c in num])

    def __complex__(self) -> complex:
        w = cmath.exp(2j * cmath.pi / self.q)
        return complex(sum(a * w**g for g, a in enumerate(self.coeffs) if a))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CyclotomicInt.from_int(self.q, other)
        if not isinstance(other, CyclotomicInt) or other.q != self.q:
            return NotImplemented
        return self.reduced == other.reduced

    def __hash__(self) -> int:
        return hash((self.q, self.reduced))

    def __repr__(self) -> str:
        terms = [f"{a}*z^{g}" if g else str(a) for g, a in enumerate(self.reduced) if a]
        return f"CyclotomicInt(q={self.q}: {' + '.join(terms) or '0'})"
