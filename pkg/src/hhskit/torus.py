"""The Lucas torus x^2 - D y^2 = 1 over F_q and the cyclotomic subgroups
T_d(F_q) of F_{q^d}^*.

Coordinates are elements of an ``ExtField`` (degree 1 for prime q).  On the
compressed u-line the point at infinity is written ``None``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .arith import ArithmeticDomainError, cyclotomic_value, divisors, factorize, is_probable_prime
from .fields import ExtField, ExtFieldElement, relative_norm


class OffTorusError(ArithmeticDomainError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    fac = factorize(q)
    if len(fac.factors) != 1:
        raise ArithmeticDomainError(f"{q} is not a prime power")
    return fac.factors[0]


@dataclass(frozen=True)
class TorusParams:
    field: ExtField
    D: ExtFieldElement

    @classmethod
    def create(cls, q: int, D=None) -> "TorusParams":
        p, e = _prime_power(q)
        if p == 2:
            raise ArithmeticDomainError("the Lucas torus needs odd characteristic")
        field = ExtField(p, e)
        if D is None:
            D = next(x for x in field.elements() if not x.is_zero() and not x.is_square())
        D = field(D)
        if D.is_zero() or D.is_square():
            raise ArithmeticDomainError(f"D = {D} must be a nonsquare in F_{q}^*")
        return cls(field, D)

    @property
    def q(self) -> int:
        return self.field.order

    def element(self, v) -> ExtFieldElement:
        return self.field(v)


@dataclass(frozen=True)
class TorusPointXY:
    x: ExtFieldElement
    y: ExtFieldElement


# u-coordinate: a field element, or None for the point (-1, 0)
TorusPointU = ExtFieldElement | None


def on_torus(P: TorusPointXY, params: TorusParams) -> bool:
    return P.x * P.x - params.D * P.y * P.y == 1


def _check(P: TorusPointXY, params: TorusParams) -> TorusPointXY:
    if not on_torus(P, params):
        raise OffTorusError(f"({P.x}, {P.y}) is not on x^2 - D y^2 = 1")
    return P


def point(params: TorusParams, x, y) -> TorusPointXY:
    return _check(TorusPointXY(params.element(x), params.element(y)), params)


def identity(params: TorusParams) -> TorusPointXY:
    return TorusPointXY(params.field.one(), params.field.zero())


def mul_xy(P1: TorusPointXY, P2: TorusPointXY, params: TorusParams) -> TorusPointXY:
    _check(P1, params)
    _check(P2, params)
    D = params.D
    return TorusPointXY(P1.x * P2.x + D * P1.y * P2.y, P1.y * P2.x + P1.x * P2.y)


def inv_xy(P: TorusPointXY) -> TorusPointXY:
    return TorusPointXY(P.x, -P.y)


def pow_xy(P: TorusPointXY, k: int, params: TorusParams) -> TorusPointXY:
    """[k]P by iterating the group law (the oracle for the closed formulas)."""
    acc = identity(params)
    for _ in range(k):
        acc = mul_xy(acc, P, params)
    return acc


def u_from_xy(P: TorusPointXY, params: TorusParams) -> TorusPointU:
    _check(P, params)
    if P.y.is_zero():
        return params.field.zero() if P.x == 1 else None
    return (P.x - 1) / P.y


def xy_from_u(u: TorusPointU, params: TorusParams) -> TorusPointXY:
    f = params.field
    if u is None:
        return TorusPointXY(-f.one(), f.zero())
    u = f(u)
    den = params.D - u * u  # nonzero: D is not a square
    return TorusPointXY((params.D + u * u) / den, (u + u) / den)


def mul_u(u1: TorusPointU, u2: TorusPointU, params: TorusParams) -> TorusPointU:
    """u3 = D(u1 + u2) / (u1 u2 + D), extended to the point at infinity."""
    D = params.D
    if u1 is None and u2 is None:
        return params.field.zero()
    if u1 is None or u2 is None:
        other = params.field(u2 if u1 is None else u1)
        return None if other.is_zero() else D / other
    u1, u2 = params.field(u1), params.field(u2)
    den = u1 * u2 + D
    if den.is_zero():
        return None
    return D * (u1 + u2) / den


def exp_x(x, k: int, params: TorusParams) -> ExtFieldElement:
    """x-coordinate of [k]P from the x-coordinate of P alone."""
    x = params.field(x)
    if k < 0:
        raise ArithmeticDomainError("exponent must be nonnegative")
    s = x * x - 1
    total = params.field.zero()
    s_pow = params.field.one()
    for l in range(k // 2 + 1):
        total = total + comb(k, 2 * l) * s_pow * x ** (k - 2 * l)
        s_pow = s_pow * s
    return total


def exp_xy(P: TorusPointXY, k: int, params: TorusParams) -> TorusPointXY:
    """[k]P by the closed binomial formula.

    The y-component uses x^(k-2l-1); that is the exponent forced by
    expanding (x + y sqrt(D))^k.
    """
    _check(P, params)
    f = params.field
    s = P.x * P.x - 1
    ysum = f.zero()
    s_pow = f.one()
    for l in range((k - 1) // 2 + 1 if k >= 1 else 0):
        ysum = ysum + comb(k, 2 * l + 1) * s_pow * P.x ** (k - 2 * l - 1)
        s_pow = s_pow * s
    return TorusPointXY(exp_x(P.x, k, params), P.y * ysum)


def all_points(params: TorusParams) -> list[TorusPointXY]:
    """Every F_q-rational point, by scanning all (x, y) pairs."""
    f = params.field
    elems = list(f.elements())
    squares: dict[ExtFieldElement, list[ExtFieldElement]] = {}
    for x in elems:
        squares.setdefault(x * x, []).append(x)
    pts = []
    for y in elems:
        for x in squares.get(params.D * y * y + 1, []):
            pts.append(TorusPointXY(x, y))
    return pts


def t2_order(params: TorusParams) -> int:
    return len(all_points(params))


def element_order(P: TorusPointXY, params: TorusParams) -> int:
    n = params.q + 1
    order = n
    for q in factorize(n).primes:
        while order % q == 0 and exp_xy(P, order // q, params) == identity(params):
            order //= q
    return order


def find_generator(params: TorusParams) -> TorusPointXY:
    for P in all_points(params):
        if element_order(P, params) == params.q + 1:
            return P
    raise ArithmeticDomainError("torus has no generator; it should be cyclic")


# -- cyclotomic subgroups ----------------------------------------------------

ENUMERATION_BUDGET = 10 ** 6


class BudgetExceeded(ArithmeticDomainError):
    pass


@dataclass(frozen=True)
class CyclotomicSubgroup:
    q: int
    d: int
    field: ExtField
    members: tuple[ExtFieldElement, ...]

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def contains(self, x: ExtFieldElement) -> bool:
        """Norm 1 down to every proper intermediate field F_{q^a}."""
        if x.is_zero():
            return False
        e = self.field.degree // self.d
        return all(relative_norm(x, e * a) == 1 for a in divisors(self.d) if a < self.d)


def _np_mulmod(A, B, modulus, p):
    """Product of field elements stored coefficient-major: shape (n, count)."""
    n = A.shape[0]
    C = np.zeros((2 * n - 1, A.shape[1]), dtype=np.int32)
    tmp = np.empty(A.shape[1], dtype=np.int32)
    for i in range(n):
        for j in range(n):
            np.multiply(A[i], B[j], out=tmp)
            C[i + j] += tmp
    for k in range(2 * n - 2, n - 1, -1):
        c = C[k] % p
        for j in range(n):
            if modulus[j]:
                np.multiply(c, modulus[j], out=tmp)
                C[k - n + j] -= tmp
    return C[:n] % p


def td_subgroup(q: int, d: int, budget: int = ENUMERATION_BUDGET) -> CyclotomicSubgroup:
    """Enumerate F_{q^d}^* and keep elements of norm 1 to each proper subfield.

    Vectorised over all field elements with numpy; Frobenius is applied as
    its F_p-linear matrix.
    """
    p, e = _prime_power(q)
    n = e * d
    size = p ** n
    if size - 1 > budget:
        raise BudgetExceeded(f"|F_{q}^{d}*| = {size - 1} exceeds budget {budget}")
    field = ExtField(p, n)
    index = np.arange(1, size, dtype=np.int64)  # every nonzero element once
    elems = np.stack([(index // p ** j) % p for j in range(n)]).astype(np.int32)
    frob = np.array(field.frobenius_matrix, dtype=np.int64)
    keep = np.ones(size - 1, dtype=bool)
    for a in divisors(d):
        if a == d:
            continue
        sigma = _matpow_mod(frob, e * a, p).astype(np.float64)
        prod = elems
        conj = elems
        for _ in range(d // a - 1):
            conj = ((sigma @ conj.astype(np.float64)) % p).astype(np.int32)
            prod = _np_mulmod(prod, conj, field.modulus, p)
        keep &= (prod[0] == 1) & np.all(prod[1:] == 0, axis=0)
    members = tuple(ExtFieldElement(field, tuple(int(c) for c in col))
                    for col in elems[:, keep].T)
    sub = CyclotomicSubgroup(q, d, field, members)
    expected = cyclotomic_value(d, q)
    if sub.cardinality != expected:
        raise ArithmeticDomainError(
            f"|T_{d}(F_{q})| = {sub.cardinality}, expected Phi_{d}({q}) = {expected}")
    return sub


def _matpow_mod(M, k, p):
    R = np.eye(M.shape[0], dtype=np.int64)
    B = M % p
    while k:
        if k & 1:
            R = R @ B % p
        B = B @ B % p
        k >>= 1
    return R


def is_odd_prime(q: int) -> bool:
    return q > 2 and is_probable_prime(q)
