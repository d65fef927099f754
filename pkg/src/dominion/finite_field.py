"""Arithmetic in GF(p^e), just enough to build projective and affine planes.

Elements are coefficient vectors (low degree first) of polynomials over Z_p
reduced modulo a fixed monic irreducible polynomial. Each field also exposes
an integer index per element (``sum(c_i * p**i)``) so plane constructions can
work on small ints through precomputed tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

DEFAULT_CAPACITY = 64


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q == p**e, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            return (p, e) if q == 1 else None
    return None


def _trim(poly: list[int]) -> list[int]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def poly_mod(num: tuple[int, ...], den: tuple[int, ...], p: int) -> list[int]:
    """Remainder of num / den over Z_p; den must have a nonzero leading coefficient."""
    rem = _trim(list(num))
    den = _trim(list(den))
    lead_inv = pow(den[-1], -1, p)
    while len(rem) >= len(den):
        shift = len(rem) - len(den)
        factor = rem[-1] * lead_inv % p
        for i, c in enumerate(den):
            rem[shift + i] = (rem[shift + i] - factor * c) % p
        _trim(rem)
    return rem


def _monic_polys(p: int, degree: int):
    # lexicographic order on coefficients, low degree first
    for low in itertools.product(range(p), repeat=degree):
        yield low + (1,)


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Brute-force test: no monic divisor of degree 1..deg//2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, d):
            if not poly_mod(poly, cand, p):
                return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    if e == 1:
        return (0, 1)
    for cand in _monic_polys(p, e):
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {e} over Z_{p}")  # unreachable


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.e

    def element(self, value: int | tuple[int, ...] | list[int]) -> FieldElement:
        if isinstance(value, int):
            return FieldElement(self, self._coeffs_of(value))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.e:
            coeffs = tuple(poly_mod(coeffs, self.modulus, self.p))
        coeffs = coeffs + (0,) * (self.e - len(coeffs))
        return FieldElement(self, coeffs)

    def _coeffs_of(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.q:
            raise FieldError(f"element index {index} outside GF({self.q})")
        out = []
        for _ in range(self.e):
            index, c = divmod(index, self.p)
            out.append(c)
        return tuple(out)

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def one(self) -> FieldElement:
        return self.element(1)

    # Integer-index tables. Built on first use; the dataclass stays logically immutable.

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        q, p = self.q, self.p
        coeffs = [self._coeffs_of(i) for i in range(q)]
        return tuple(
            tuple(_index(tuple((x + y) % p for x, y in zip(coeffs[a], coeffs[b])), p) for b in range(q))
            for a in range(q)
        )

    @cached_property
    def mul_table(self) -> tuple[tuple[int, ...], ...]:
        q = self.q
        coeffs = [self._coeffs_of(i) for i in range(q)]
        return tuple(
            tuple(_index(self._mul_coeffs(coeffs[a], coeffs[b]), self.p) for b in range(q)) for a in range(q)
        )

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(_index(tuple(-c % self.p for c in self._coeffs_of(a)), self.p) for a in range(self.q))

    @cached_property
    def inv_table(self) -> tuple[int | None, ...]:
        table: list[int | None] = [None] * self.q
        for a in range(1, self.q):
            row = self.mul_table[a]
            table[a] = row.index(1)
        return tuple(table)

    def _mul_coeffs(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = poly_mod(tuple(prod), self.modulus, p)
        return tuple(rem) + (0,) * (self.e - len(rem))


def _index(coeffs: tuple[int, ...], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec = field(repr=False)
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        return _index(self.coeffs, self.field.p)

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldError("operands belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> FieldElement:
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return self + (-other)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, self.field._mul_coeffs(self.coeffs, other.coeffs))

    def inverse(self) -> FieldElement:
        if not any(self.coeffs):
            raise ZeroDivisionError("zero has no inverse")
        # a^(q-2) == a^-1 in the multiplicative group of order q-1
        result = self.field.one
        base = self
        n = self.field.q - 2
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return self * other.inverse()

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(coef + mono)
        return " + ".join(reversed(terms)) or "0"


def make_field(p: int, e: int = 1, capacity: int = DEFAULT_CAPACITY) -> FieldSpec:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if p**e > capacity:
        raise FieldError(f"GF({p}^{e}) exceeds capacity {capacity}")
    return FieldSpec(p, e, least_irreducible(p, e))


def field_of_order(q: int, capacity: int = DEFAULT_CAPACITY) -> FieldSpec:
    pe = prime_power(q)
    if pe is None:
        raise FieldError(f"{q} is not a prime power")
    return make_field(*pe, capacity=capacity)


def arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    if op == "inv":
        return a.inverse()
    if b is None:
        raise FieldError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown operation {op!r}")


def elements(f: FieldSpec) -> list[FieldElement]:
    """All q elements ordered by integer index: 0, 1, ..., p-1, x, x+1, ..."""
    return [f.element(i) for i in range(f.q)]
