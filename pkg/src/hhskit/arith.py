"""Integer and modular arithmetic shared by every other module.

Python integers are arbitrary precision, so nothing here needs a bignum
backend.  ``ModInt`` is a small immutable residue type; the heavy loops in
other modules work on bare ints and only wrap results at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence


class ArithmeticDomainError(ValueError):
    """Raised when an operation is asked outside its mathematical domain."""


@dataclass(frozen=True)
class ModInt:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ArithmeticDomainError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, ModInt):
            if other.modulus != self.modulus:
                raise ArithmeticDomainError(
                    f"moduli differ: {self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(-self.value, self.modulus)

    def inverse(self) -> "ModInt":
        try:
            return ModInt(pow(self.value, -1, self.modulus), self.modulus)
        except ValueError:
            raise ZeroDivisionError(
                f"{self.value} is not invertible mod {self.modulus}") from None

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModInt(o, self.modulus).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModInt(o, self.modulus) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return mod_pow(self.inverse(), -exponent)
        return mod_pow(self, exponent)

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self):
        return f"ModInt({self.value}, {self.modulus})"


def mod_pow(base: ModInt, exponent: int, counter: list | None = None) -> ModInt:
    """Left-to-right square-and-multiply; at most 2*log2(exponent) products.

    If ``counter`` is a one-element list, the number of modular
    multiplications performed is added to it.
    """
    if exponent < 0:
        raise ArithmeticDomainError("negative exponent; invert the base first")
    m = base.modulus
    if exponent == 0:
        return ModInt(1, m)
    b = base.value
    result = b
    mults = 0
    for bit in bin(exponent)[3:]:
        result = result * result % m
        mults += 1
        if bit == "1":
            result = result * b % m
            mults += 1
    if counter is not None:
        counter[0] += mults
    return ModInt(result, m)


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def crt_combine(residues: Sequence[tuple[int | ModInt, int]]) -> ModInt:
    """Combine ``(residue, modulus)`` pairs with pairwise coprime moduli."""
    if not residues:
        return ModInt(0, 1)
    value, modulus = 0, 1
    for r, m in residues:
        r = int(r)
        g, inv, _ = egcd(modulus % m, m)
        if g != 1:
            raise ArithmeticDomainError(f"moduli {modulus} and {m} are not coprime")
        value = value + modulus * ((r - value) * inv % m)
        modulus *= m
        value %= modulus
    return ModInt(value, modulus)


# -- primes and factorizations ------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin below 3.3e24, strong probable prime above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as strictly increasing ``(prime, exponent)`` pairs."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ArithmeticDomainError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise ArithmeticDomainError("exponents must be positive")

    @property
    def value(self) -> int:
        return math.prod(p ** e for p, e in self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticDomainError(f"could not split {n}")


_SMALL_PRIMES: tuple[int, ...] = ()


def factorize(n: int) -> Factorization:
    """Trial division then Pollard rho; fine for the desk-scale sizes used here."""
    global _SMALL_PRIMES
    if n < 1:
        raise ArithmeticDomainError("factorize expects a positive integer")
    if not _SMALL_PRIMES:
        _SMALL_PRIMES = tuple(primes_up_to(1000))
    counts: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return Factorization(tuple(sorted(counts.items())))


def euler_phi(n: int) -> int:
    return math.prod((p - 1) * p ** (e - 1) for p, e in factorize(n))


def multiplicative_order(a: int, n: int, fac: Factorization | None = None) -> int:
    """Order of ``a`` in (Z/nZ)*, given (or computing) the factorization of the group order."""
    if math.gcd(a, n) != 1:
        raise ArithmeticDomainError(f"{a} is not a unit mod {n}")
    group_order = euler_phi(n)
    fac = fac or factorize(group_order)
    order = group_order
    for p, e in fac:
        for _ in range(e):
            if order % p == 0 and pow(a, order // p, n) == 1 % n:
                order //= p
            else:
                break
    return order


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(abs(n)))


# -- quadratic residues -------------------------------------------------------

def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """Tonelli-Shanks square root modulo an odd prime; None for non-residues."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if legendre(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# -- cyclotomic values --------------------------------------------------------

def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def cyclotomic_value(d: int, q: int) -> int:
    """Phi_d(q) via the Moebius product over divisors of d.

    The product is taken as a polynomial identity, then evaluated, so q = 1
    and q = -1 (where some factors vanish) are handled correctly.
    """
    if d < 1:
        raise ArithmeticDomainError("cyclotomic index must be positive")
    num = [1]
    den = [1]
    for e in divisors(d):
        mu = mobius(d // e)
        if mu == 0:
            continue
        factor = [-1] + [0] * (e - 1) + [1]  # X^e - 1, low degree first
        if mu == 1:
            num = _int_poly_mul(num, factor)
        else:
            den = _int_poly_mul(den, factor)
    quotient = _int_poly_exact_div(num, den)
    return reduce(lambda acc, c: acc * q + c, reversed(quotient), 0)


def _int_poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _int_poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    quotient = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(quotient) - 1, -1, -1):
        c, rem = divmod(num[i + len(den) - 1], lead)
        if rem:
            raise ArithmeticDomainError("inexact polynomial division")
        quotient[i] = c
        for j, y in enumerate(den):
            num[i + j] -= c * y
    if any(num):
        raise ArithmeticDomainError("inexact polynomial division")
    return quotient


def parse_int(text: str | int) -> int:
    """Decimal or 0x-prefixed hexadecimal, optional sign."""
    if isinstance(text, int):
        return text
    return int(text.strip(), 0)


def to_hex(n: int) -> str:
    return hex(n)


def from_hex(text: str) -> int:
    return int(text, 16)


def all_units(n: int) -> Iterable[int]:
    return (a for a in range(n) if math.gcd(a, n) == 1)
