"""Arithmetic in GF(p^f) using a polynomial basis.

Elements are coefficient tuples ``(c0, c1, ..., c_{f-1})`` for
``c0 + c1 x + ... + c_{f-1} x^{f-1}``.  The canonical element order is by the
integer ``c0 + c1 p + ... + c_{f-1} p^{f-1}``, so 0 comes first and the prime
subfield comes next.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int):
    """Return ``(p, f)`` with ``q == p**f``, or ``None`` if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    f = 0
    while q % p == 0:
        q //= p
        f += 1
    return (p, f) if q == 1 else None


# polynomials over GF(p): coefficient lists, low degree first, no trailing zeros

def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list, m: list, p: int) -> list:
    a = _trim(list(a))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mul(a: list, b: list, p: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_sub(a: list, b: list, p: int) -> list:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_divmod(a: list, m: list, p: int):
    a = _trim(list(a))
    q = [0] * max(0, len(a) - len(m) + 1)
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        q[shift] = c
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return _trim(q), a


def is_irreducible(m: list, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    n = len(m) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(m, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FiniteField:
    p: int
    f: int
    modulus: tuple  # monic, low degree first, length f + 1

    @property
    def q(self) -> int:
        return self.p ** self.f

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def element(self, value) -> "FieldElement":
        """Build an element from its integer code or a coefficient sequence."""
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, int):
            if not 0 <= value < self.q:
                raise ValueError(f"{value} is not an element code of {self!r}")
            coeffs = []
            for _ in range(self.f):
                value, c = divmod(value, self.p)
                coeffs.append(c)
            return FieldElement(self, tuple(coeffs))
        coeffs = [c % self.p for c in value]
        if len(coeffs) > self.f:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        coeffs += [0] * (self.f - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @cached_property
    def elements(self) -> tuple:
        return tuple(self.element(i) for i in range(self.q))


@dataclass(frozen=True)
class FieldElement:
    field: FiniteField
    coefficients: tuple

    @property
    def code(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coefficients))

    def __int__(self) -> int:
        return self.code

    def __lt__(self, other: "FieldElement") -> bool:
        return self.code < other.code

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.field.element([other])
        if other.field != self.field:
            raise ValueError("elements of different fields")
        return other

    def __add__(self, other) -> "FieldElement":
        other = self._coerce(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coefficients, other.coefficients)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coefficients))

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "FieldElement":
        other = self._coerce(other)
        F = self.field
        prod = _poly_mul(list(self.coefficients), list(other.coefficients), F.p)
        return F.element(_poly_mod(prod, list(F.modulus), F.p))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other) -> "FieldElement":
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        F = self.field
        p = F.p
        r0, r1 = list(F.modulus), _trim(list(self.coefficients))
        s0, s1 = [], [1]
        while r1:
            quo, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1, p), p)
        # r0 is a nonzero constant
        c = pow(r0[0], -1, p)
        return F.element([x * c for x in s0])

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        one = self.field.one
        x, k = self, 1
        while x != one:
            x = x * self
            k += 1
        return k

    def __repr__(self) -> str:
        return f"<{self.code} in {self.field!r}>"


def make_field(p: int, f: int = 1) -> FiniteField:
    """GF(p^f) with the lexicographically least monic irreducible modulus.

    Candidate moduli are compared on their coefficient sequences, low degree
    first.  For ``f == 1`` the modulus is ``x``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if f < 1:
        raise ValueError("extension degree must be at least 1")
    for low in itertools.product(range(p), repeat=f):
        m = list(low) + [1]
        if is_irreducible(m, p):
            return FiniteField(p, f, tuple(m))
    raise AssertionError("no irreducible polynomial found")  # unreachable


def field_of_order(q: int) -> FiniteField:
    pf = prime_power(q)
    if pf is None:
        raise ValueError(f"{q} is not a prime power")
    return make_field(*pf)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def enumerate_field(F: FiniteField) -> list:
    return list(F.elements)


def primitive_element(F: FiniteField) -> FieldElement:
    """Least element (canonical order) of multiplicative order ``q - 1``."""
    for a in F.elements[1:]:
        if a.multiplicative_order() == F.q - 1:
            return a
    raise AssertionError("multiplicative group is cyclic")  # unreachable
