"""Prime fields and their extensions F_{p^r} = F_p[X]/(m(X)).

Polynomials over F_p are plain lists of ints, lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).  Field elements keep their
coefficients as a tuple of ints of length r.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .arith import ArithmeticDomainError, ModInt, factorize, is_probable_prime


# -- F_p[X] helpers -----------------------------------------------------------

def poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return poly_trim(out)


def poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return poly_trim(out)


def poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim([c % p for c in out])


def poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(a) <= db:
        return [], poly_trim(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * y) % p
    return poly_trim(q), poly_trim(a[:db])


def poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    return poly_divmod(a, b, p)[1]


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), mod, p)
        base = poly_mod(poly_mul(base, base, p), mod, p)
        e >>= 1
    return poly_mod(result, mod, p)


def poly_eval(a: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def is_irreducible(m: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    r = len(m) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    x = [0, 1]
    if poly_powmod(x, p ** r, m, p) != x:
        return False
    for q in factorize(r).primes:
        h = poly_sub(poly_powmod(x, p ** (r // q), m, p), x, p)
        if len(poly_gcd(h, m, p)) != 1:
            return False
    return True


def find_irreducible(p: int, r: int) -> list[int]:
    """First monic irreducible of degree r in lexicographic coefficient order.

    Coefficients are read from the constant term upward, so the search is
    deterministic for a given (p, r).
    """
    if r == 1:
        return [0, 1]
    for c0 in range(1, p):
        for tail in itertools.product(range(p), repeat=r - 1):
            m = [c0] + list(tail) + [1]
            if is_irreducible(m, p):
                return m
    raise ArithmeticDomainError(f"no irreducible polynomial of degree {r} over F_{p}")


# -- extension fields ---------------------------------------------------------

class ExtField:
    """F_{p^r} built from a monic irreducible modulus over F_p."""

    def __init__(self, p: int, r: int = 1, modulus: list[int] | None = None):
        if not is_probable_prime(p):
            raise ArithmeticDomainError(f"{p} is not prime")
        if modulus is None:
            modulus = find_irreducible(p, r) if r > 1 else [0, 1]
        modulus = [c % p for c in modulus]
        if modulus[-1] != 1:
            raise ArithmeticDomainError("modulus polynomial must be monic")
        if len(modulus) - 1 != r:
            r = len(modulus) - 1
        if r > 1 and not is_irreducible(modulus, p):
            raise ArithmeticDomainError(f"{modulus} is reducible over F_{p}")
        self.p = p
        self.degree = r
        self.modulus = tuple(modulus)
        self.order = p ** r

    def __eq__(self, other):
        return isinstance(other, ExtField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"ExtField(p={self.p}, r={self.degree}, modulus={list(self.modulus)})"

    def __call__(self, value) -> "ExtFieldElement":
        if isinstance(value, ExtFieldElement):
            if value.field != self:
                raise ArithmeticDomainError("element belongs to another field")
            return value
        if isinstance(value, ModInt):
            value = value.value
        if isinstance(value, int):
            return ExtFieldElement(self, (value % self.p,) + (0,) * (self.degree - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.degree:
            coeffs = poly_mod(poly_trim(coeffs), list(self.modulus), self.p)
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        return ExtFieldElement(self, tuple(coeffs))

    def zero(self) -> "ExtFieldElement":
        return self(0)

    def one(self) -> "ExtFieldElement":
        return self(1)

    def gen(self) -> "ExtFieldElement":
        """The class of X (a root of the modulus)."""
        return self([0, 1])

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.degree):
            yield ExtFieldElement(self, tuple(coeffs))

    @cached_property
    def _unit_group_factors(self) -> list[int]:
        return factorize(self.order - 1).primes

    def multiplicative_generator(self) -> "ExtFieldElement":
        n = self.order - 1
        for x in self.elements():
            if x.is_zero():
                continue
            if all(x ** (n // q) != 1 for q in self._unit_group_factors):
                return x
        raise ArithmeticDomainError("no generator found")

    @cached_property
    def nonresidue(self) -> "ExtFieldElement":
        return next(x for x in self.elements() if not x.is_zero() and not x.is_square())

    @cached_property
    def frobenius_matrix(self) -> list[list[int]]:
        """Column j holds the coefficients of (X^j)^p, so Frobenius is linear."""
        xp = self.gen() ** self.p
        cols = []
        acc = self.one()
        for _ in range(self.degree):
            cols.append(list(acc.coeffs))
            acc = acc * xp
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]


@dataclass(frozen=True)
class ExtFieldElement:
    field: ExtField
    coeffs: tuple[int, ...]

    def _coerce(self, other):
        if isinstance(other, ExtFieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ArithmeticDomainError("elements of different fields")
            return other
        if isinstance(other, (int, ModInt)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return ExtFieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return ExtFieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        p = self.field.p
        return ExtFieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        f = self.field
        p, r, m = f.p, f.degree, f.modulus
        prod = [0] * (2 * r - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        # m is monic: X^r = -(m_0 + ... + m_{r-1} X^{r-1})
        for i in range(2 * r - 2, r - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(r):
                    prod[i - r + j] -= c * m[j]
        return ExtFieldElement(f, tuple(c % p for c in prod[:r]))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "ExtFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in extension field")
        p = self.field.p
        # extended Euclid in F_p[X]
        r0, r1 = list(self.field.modulus), poly_trim(list(self.coeffs))
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, rem = poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
        inv_c = pow(r1[0], -1, p)
        return self.field([c * inv_c for c in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, ExtFieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, ModInt)):
            return self.coeffs == self.field(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def frobenius(self, power: int = 1) -> "ExtFieldElement":
        """x -> x^(p^power), applied as a linear map."""
        mat = self.field.frobenius_matrix
        p, r = self.field.p, self.field.degree
        v = list(self.coeffs)
        for _ in range(power % r if r else 0):
            v = [sum(mat[i][j] * v[j] for j in range(r)) % p for i in range(r)]
        return ExtFieldElement(self.field, tuple(v))

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        return self ** ((self.field.order - 1) // 2) == 1

    def sqrt(self) -> "ExtFieldElement | None":
        """Tonelli-Shanks in F_{p^r}^*; None if not a square."""
        if self.is_zero():
            return self
        if not self.is_square():
            return None
        q = self.field.order
        if q % 4 == 3:
            return self ** ((q + 1) // 4)
        s, t = 0, q - 1
        while t % 2 == 0:
            t //= 2
            s += 1
        z = self.field.nonresidue
        m, c, tt, r = s, z ** t, self ** t, self ** ((t + 1) // 2)
        while tt != 1:
            i, t2 = 0, tt
            while t2 != 1:
                t2 = t2 * t2
                i += 1
            b = c ** (1 << (m - i - 1))
            m, c = i, b * b
            tt, r = tt * c, r * b
        return r

    def __repr__(self):
        return f"ExtFieldElement({list(self.coeffs)})"


def relative_norm(x: ExtFieldElement, subfield_degree: int) -> ExtFieldElement:
    """N_{F_{p^r}/F_{p^a}}(x) as the product of the r/a conjugates x^(p^(a*i))."""
    r = x.field.degree
    a = subfield_degree
    if a < 1 or r % a:
        raise ArithmeticDomainError(f"subfield degree {a} does not divide {r}")
    result = x
    conj = x
    for _ in range(r // a - 1):
        conj = conj.frobenius(a)
        result = result * conj
    if result.frobenius(a) != result:
        raise ArithmeticDomainError("norm escaped the subfield")
    return result


def prime_field(p: int) -> ExtField:
    return ExtField(p, 1)
