"""Arithmetic in GF(p) for small primes, plus prime selection.

Residues are plain Python ints kept in ``[0, p)``.  Primes are capped below
2**31 so every product of two residues fits in a signed 64-bit word, which
lets the dense numpy paths share these moduli without overflow.
"""

from __future__ import annotations

PRIME_CAP = 1 << 31

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ModulusMismatch(ValueError):
    """Two field elements from different fields were combined."""


class NotInvertible(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Prime(int):
    """An odd prime modulus below :data:`PRIME_CAP`."""

    def __new__(cls, value: int) -> "Prime":
        value = int(value)
        if value < 3 or not is_prime(value):
            raise ValueError(f"{value} is not an odd prime")
        if value >= PRIME_CAP:
            raise OverflowError(f"prime {value} exceeds the 2**31 cap")
        return super().__new__(cls, value)


def next_prime(bound: int) -> Prime:
    """Smallest prime strictly greater than ``bound``."""
    if bound < 2:
        raise ValueError("bound must be at least 2")
    candidate = bound + 1
    while not is_prime(candidate):
        candidate += 1
    if candidate >= PRIME_CAP:
        raise OverflowError(f"no prime above {bound} below the 2**31 cap")
    return Prime(candidate)


class FieldElement:
    __slots__ = ("residue", "modulus")

    def __init__(self, value: int, modulus: int):
        self.modulus = modulus
        self.residue = value % modulus

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot mix GF({self.modulus}) with GF({other.modulus})")
            return other.residue
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def _new(self, value: int) -> "FieldElement":
        return FieldElement(value, self.modulus)

    def __add__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return self._new(self.residue + r)

    __radd__ = __add__

    def __neg__(self):
        return self._new(self.modulus - self.residue)

    def __sub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        # addition of the additive complement keeps every residue non-negative
        return self._new(self.residue + (self.modulus - r))

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return self._new(r + (self.modulus - self.residue))

    def __mul__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return r
        return self._new(self.residue * r)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = 1, self.residue
        while k:
            if k & 1:
                result = result * base % self.modulus
            base = base * base % self.modulus
            k >>= 1
        return self._new(result)

    def inverse(self) -> "FieldElement":
        """Fermat inverse a**(p-2); only multiplications are used."""
        if self.residue == 0:
            raise NotInvertible(f"0 has no inverse in GF({self.modulus})")
        return self ** (self.modulus - 2)

    def is_zero(self) -> bool:
        return self.residue == 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __int__(self):
        return self.residue

    __index__ = __int__

    def __bool__(self):
        return self.residue != 0

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"


class GF:
    """Factory for elements of one prime field."""

    def __init__(self, p: int):
        self.p = Prime(p)

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self.p)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self.p)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self.p)

    def __repr__(self):
        return f"GF({self.p})"


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def ff_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def ff_pow(a: FieldElement, k: int) -> FieldElement:
    if k < 0:
        raise ValueError("exponent must be non-negative")
    return a ** k


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()
