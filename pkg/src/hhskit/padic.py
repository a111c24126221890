"""Truncated p-adic numbers with a pessimistic precision ledger.

A nonzero value is stored as ``p**valuation * unit`` where ``unit`` is known
modulo ``p**(abs_precision - valuation)``.  A value with no known nonzero
digit is the zero of absolute precision ``abs_precision`` and carries the
valuation sentinel ``INFINITE_VALUATION``.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .arith import ArithmeticDomainError


INFINITE_VALUATION = math.inf


class PrecisionError(ArithmeticDomainError):
    """Not enough p-adic digits are known to carry out the operation."""


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _ilog(n: int, p: int) -> int:
    """floor(log_p(n)) for n >= 1."""
    k = 0
    while n >= p:
        n //= p
        k += 1
    return k


class PadicNumber:
    __slots__ = ("p", "valuation", "unit", "abs_precision")

    def __init__(self, p: int, valuation, unit: int, abs_precision):
        self.p = p
        self.abs_precision = abs_precision
        if valuation == INFINITE_VALUATION or unit == 0:
            self.valuation = INFINITE_VALUATION
            self.unit = 0
            return
        rel = abs_precision - valuation
        if rel <= 0:
            self.valuation = INFINITE_VALUATION
            self.unit = 0
            return
        if unit % p == 0:
            raise ArithmeticDomainError("unit digits must not be divisible by p")
        self.valuation = valuation
        self.unit = unit % p ** rel if rel != math.inf else unit

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_int(cls, n: int, p: int, precision=math.inf) -> "PadicNumber":
        """``n`` known to absolute precision ``precision`` (exact by default)."""
        if n == 0:
            return cls(p, INFINITE_VALUATION, 0, precision)
        v = _vp(n, p)
        return cls(p, v, n // p ** v, precision)

    @classmethod
    def from_rational(cls, q: Fraction | int, p: int, precision) -> "PadicNumber":
        q = Fraction(q)
        if q.numerator == 0:
            return cls(p, INFINITE_VALUATION, 0, precision)
        vn, vd = _vp(q.numerator, p), _vp(q.denominator, p)
        v = vn - vd
        rel = precision - v
        if rel <= 0:
            return cls(p, INFINITE_VALUATION, 0, precision)
        mod = p ** rel
        u = (q.numerator // p ** vn) * pow(q.denominator // p ** vd, -1, mod)
        return cls(p, v, u, precision)

    @classmethod
    def zero(cls, p: int, precision=math.inf) -> "PadicNumber":
        return cls(p, INFINITE_VALUATION, 0, precision)

    @classmethod
    def from_digits(cls, p: int, digits: list[int], valuation: int = 0) -> "PadicNumber":
        """Base-p digits, least significant first, starting at p**valuation."""
        n = sum(d * p ** i for i, d in enumerate(digits))
        return cls.from_int(n, p, len(digits)).shift(valuation)

    # -- inspection -----------------------------------------------------------

    @property
    def rel_precision(self):
        if self.is_zero():
            return 0
        return self.abs_precision - self.valuation

    def is_zero(self) -> bool:
        return self.valuation == INFINITE_VALUATION

    def is_exact(self) -> bool:
        return self.abs_precision == math.inf

    def digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        if self.is_zero():
            return []
        n = self.unit
        out = []
        count = self.rel_precision
        while (count == math.inf and n) or (count != math.inf and len(out) < count):
            n, d = divmod(n, self.p)
            out.append(d)
        return out

    def leading_digit(self) -> int:
        if self.is_zero():
            raise PrecisionError("no known nonzero digit")
        return self.unit % self.p

    def to_int(self) -> int:
        """Integer representative in [0, p**abs_precision); needs valuation >= 0."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ArithmeticDomainError("value is not integral")
        n = self.unit * self.p ** self.valuation
        if self.abs_precision != math.inf:
            n %= self.p ** self.abs_precision
        return n

    def residue(self) -> int:
        """Reduction mod p of an integral value."""
        if self.abs_precision < 1:
            raise PrecisionError("residue undetermined at this precision")
        return self.to_int() % self.p

    def shift(self, k: int) -> "PadicNumber":
        """Multiply by p**k exactly."""
        if self.is_zero():
            return PadicNumber(self.p, INFINITE_VALUATION, 0, self.abs_precision + k)
        return PadicNumber(self.p, self.valuation + k, self.unit, self.abs_precision + k)

    def with_precision(self, precision) -> "PadicNumber":
        precision = min(precision, self.abs_precision)
        return PadicNumber(self.p, self.valuation, self.unit, precision)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ArithmeticDomainError("p-adic numbers over different primes")
            return other
        if isinstance(other, int):
            return PadicNumber.from_int(other, self.p)
        if isinstance(other, Fraction):
            q = other
            v = (_vp(q.numerator, self.p) - _vp(q.denominator, self.p)) if q else 0
            rel = max(self.rel_precision, 1)
            prec = max(self.abs_precision, v + rel) if self.abs_precision != math.inf else v + 64
            return PadicNumber.from_rational(q, self.p, prec)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = min(self.abs_precision, o.abs_precision)
        if self.is_zero():
            return o.with_precision(prec)
        if o.is_zero():
            return self.with_precision(prec)
        p = self.p
        vmin = min(self.valuation, o.valuation)
        total = self.unit * p ** (self.valuation - vmin) + o.unit * p ** (o.valuation - vmin)
        if prec != math.inf:
            total %= p ** (prec - vmin)
        if total == 0:
            return PadicNumber.zero(p, prec)
        v = _vp(total, p)
        return PadicNumber(p, vmin + v, total // p ** v, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNumber(self.p, self.valuation, -self.unit, self.abs_precision)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        if self.is_zero() or o.is_zero():
            if self.is_zero() and o.is_zero():
                prec = self.abs_precision + o.abs_precision
            elif self.is_zero():
                prec = self.abs_precision + o.valuation
            else:
                prec = o.abs_precision + self.valuation
            return PadicNumber.zero(p, prec)
        v = self.valuation + o.valuation
        rel = min(self.rel_precision, o.rel_precision)
        return PadicNumber(p, v, self.unit * o.unit, v + rel)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise PrecisionError("division by a p-adic number with no known nonzero digit")
        p = self.p
        if self.is_zero():
            return PadicNumber.zero(p, self.abs_precision - o.valuation)
        v = self.valuation - o.valuation
        rel = min(self.rel_precision, o.rel_precision)
        if rel == math.inf:
            # both exact: fall back to a generous finite precision
            rel = 64
        inv = pow(o.unit, -1, p ** rel)
        return PadicNumber(p, v, self.unit * inv, v + rel)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            return PadicNumber.from_int(1, self.p) / (self ** (-e))
        result = PadicNumber.from_int(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        """Equality up to the smaller of the two absolute precisions."""
        if isinstance(other, (int, Fraction, PadicNumber)):
            try:
                return (self - other).is_zero()
            except ArithmeticDomainError:
                return False
        return NotImplemented

    def __hash__(self):
        raise TypeError("PadicNumber is unhashable: equality is precision-dependent")

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.abs_precision})"
        return (f"PadicNumber(p={self.p}, v={self.valuation}, unit={self.unit}, "
                f"prec={self.abs_precision})")

    def to_json(self) -> dict:
        return {
            "p": hex(self.p),
            "valuation": None if self.is_zero() else self.valuation,
            "digits": [hex(d) for d in self.digits()],
            "precision": None if self.abs_precision == math.inf else self.abs_precision,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PadicNumber":
        p = int(data["p"], 16)
        prec = math.inf if data["precision"] is None else data["precision"]
        if data["valuation"] is None:
            return cls.zero(p, prec)
        digits = [int(d, 16) for d in data["digits"]]
        unit = sum(d * p ** i for i, d in enumerate(digits))
        return cls(p, data["valuation"], unit, prec)


# -- analytic functions -------------------------------------------------------

def _check_log_domain(u: PadicNumber):
    p = u.p
    need = 2 if p == 2 else 1
    w = u - 1
    if not w.is_zero() and w.valuation < need:
        raise ArithmeticDomainError(
            f"Log converges on 1 + {p}^{need} Z_{p}; argument has v(u-1) = {w.valuation}")
    return w


def padic_log(u: PadicNumber, target_precision: int) -> PadicNumber:
    """Log(u) = sum_{n>=1} (-1)^(n+1) (u-1)^n / n, to absolute precision N."""
    p = u.p
    w = _check_log_domain(u)
    prec = min(target_precision, u.abs_precision)
    if w.is_zero():
        return PadicNumber.zero(p, prec)
    a = w.valuation
    # smallest n_max with n*a - v_p(n) >= prec for every n > n_max
    n_max = 1
    while True:
        bound = (n_max + 1) * a - _ilog(n_max + 1, p)
        if bound >= prec:
            break
        n_max += 1
    slack = _ilog(n_max, p) + 1
    mod = p ** (prec + slack)
    x = w.to_int() % mod
    total = 0
    power = 1
    for n in range(1, n_max + 1):
        power = power * x % mod
        vn = _vp(n, p)
        term = (power // p ** vn) * pow(n // p ** vn, -1, mod)
        total += term if n % 2 else -term
    return PadicNumber.from_int(total % p ** prec, p, prec)


def padic_exp(z: PadicNumber, target_precision: int) -> PadicNumber:
    """exp(z) = sum z^n / n!, to absolute precision N."""
    p = z.p
    need = 2 if p == 2 else 1
    if not z.is_zero() and z.valuation < need:
        raise ArithmeticDomainError(
            f"exp converges on {p}^{need} Z_{p}; argument has valuation {z.valuation}")
    prec = min(target_precision, z.abs_precision)
    if z.is_zero():
        return PadicNumber.from_int(1, p, prec)
    a = z.valuation
    # v(z^n/n!) >= n*a - (n-1)/(p-1)
    n_max = 1
    while (n_max + 1) * a - n_max / (p - 1) < prec:
        n_max += 1
    fact_v = sum(n_max // p ** i for i in range(1, n_max.bit_length() + 1))
    mod = p ** (prec + fact_v)
    x = z.to_int() % mod
    total = 1
    power = 1
    fact_unit = 1
    fact_val = 0
    for n in range(1, n_max + 1):
        power = power * x % mod
        vn = _vp(n, p)
        fact_val += vn
        fact_unit = fact_unit * (n // p ** vn) % mod
        total += (power // p ** fact_val) * pow(fact_unit, -1, mod)
    return PadicNumber.from_int(total % p ** prec, p, prec)
