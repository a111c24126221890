"""Long-Weierstrass elliptic curves over finite fields and truncated Q_p.

    y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6

The coefficient domain is any object that coerces ints into elements
supporting + - * / and ==: an ``ExtField`` (use degree 1 for F_p) or a
``PadicField``.  Points are ``CurvePoint`` values, with ``INFINITY`` the
neutral element.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .arith import ArithmeticDomainError, legendre
from .fields import ExtField, ExtFieldElement
from .padic import PadicNumber, PrecisionError


class NotOnCurveError(ArithmeticDomainError):
    pass


class BudgetExceeded(ArithmeticDomainError):
    pass


class PadicField:
    """Coercion helper for Q_p truncated at a working absolute precision."""

    def __init__(self, p: int, precision: int = 8):
        self.p = p
        self.precision = precision

    def __call__(self, value) -> PadicNumber:
        if isinstance(value, PadicNumber):
            return value
        return PadicNumber.from_int(int(value), self.p, self.precision)

    def __eq__(self, other):
        return isinstance(other, PadicField) and (self.p, self.precision) == (other.p, other.precision)

    def __hash__(self):
        return hash((self.p, self.precision))

    def __repr__(self):
        return f"PadicField(p={self.p}, precision={self.precision})"


@dataclass(frozen=True)
class CurvePoint:
    x: Any = None
    y: Any = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(infinity)"
        return f"CurvePoint({self.x}, {self.y})"


INFINITY = CurvePoint()


def _is_zero(v) -> bool:
    return v.is_zero() if hasattr(v, "is_zero") else v == 0


class WeierstrassCurve:
    def __init__(self, field, a1=0, a2=0, a3=0, a4=0, a6=0, check: bool = True):
        self.field = field
        self.a1, self.a2, self.a3, self.a4, self.a6 = (field(a) for a in (a1, a2, a3, a4, a6))
        if check:
            disc = self.discriminant
            if isinstance(disc, PadicNumber):
                if disc.is_zero() or disc.valuation != 0:
                    raise ArithmeticDomainError("discriminant is not a p-adic unit (bad reduction)")
            elif _is_zero(disc):
                raise ArithmeticDomainError("singular curve: discriminant is zero")

    @property
    def coefficients(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __eq__(self, other):
        return (isinstance(other, WeierstrassCurve) and self.field == other.field
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.field, self.coefficients))

    def __repr__(self):
        return "WeierstrassCurve(a1={}, a2={}, a3={}, a4={}, a6={})".format(*self.coefficients)

    # -- invariants ---------------------------------------------------------

    @property
    def b_invariants(self) -> tuple:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def c4(self):
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def j_invariant(self):
        c4 = self.c4
        return c4 * c4 * c4 / self.discriminant

    # -- points -------------------------------------------------------------

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(self.field(x), self.field(y))
        if not self.contains(P):
            raise NotOnCurveError(f"{P} is not on {self}")
        return P

    def equation_residual(self, P: CurvePoint):
        x, y = P.x, P.y
        a1, a2, a3, a4, a6 = self.coefficients
        return y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return _is_zero(self.equation_residual(P))

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, a6 = self.coefficients
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if _is_zero(y1 + y2 + a1 * x2 + a3):
                return INFINITY
            den = 2 * y1 + a1 * x1 + a3
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
            nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / den
        else:
            den = x2 - x1
            lam = (y2 - y1) / den
            nu = (y1 * x2 - y2 * x1) / den
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(x3, y3)

    def sub(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        return self.add(P, self.neg(Q))

    def scalar_mul(self, k: int, P: CurvePoint) -> CurvePoint:
        """Left-to-right double-and-add in affine coordinates."""
        if k < 0:
            return self.scalar_mul(-k, self.neg(P))
        result = INFINITY
        for bit in bin(k)[2:]:
            result = self.add(result, result)
            if bit == "1":
                result = self.add(result, P)
        return result

    # -- base change ----------------------------------------------------------

    def base_change(self, field) -> "WeierstrassCurve":
        return WeierstrassCurve(field, *(_embed(field, a) for a in self.coefficients), check=False)

    def frobenius(self, P: CurvePoint, power: int = 1) -> CurvePoint:
        """(x, y) -> (x^(p^power), y^(p^power)) for curves over F_p."""
        if P.is_infinity:
            return P
        return CurvePoint(P.x.frobenius(power), P.y.frobenius(power))

    def random_point(self, rng: random.Random) -> CurvePoint:
        """Uniform-x sampling over a finite field (y chosen by a coin flip)."""
        f = self.field
        a1, a2, a3, a4, a6 = self.coefficients
        while True:
            x = f([rng.randrange(f.p) for _ in range(f.degree)])
            b = a1 * x + a3
            c = x * x * x + a2 * x * x + a4 * x + a6
            disc = b * b + 4 * c
            s = disc.sqrt()
            if s is None:
                continue
            if rng.randrange(2):
                s = -s
            y = (s - b) / 2
            return CurvePoint(x, y)

    def to_json(self) -> dict:
        return {"domain": _domain_tag(self.field),
                **{name: _encode_elem(a) for name, a in
                   zip(("a1", "a2", "a3", "a4", "a6"), self.coefficients)}}

    def point_to_json(self, P: CurvePoint):
        if P.is_infinity:
            return "infinity"
        return {"x": _encode_elem(P.x), "y": _encode_elem(P.y)}


def _embed(field, a):
    if isinstance(a, ExtFieldElement) and isinstance(field, ExtField) and a.field != field:
        if a.field.degree != 1 or a.field.p != field.p:
            raise ArithmeticDomainError("only prime-field coefficients can be embedded")
        return field(a.coeffs[0])
    return field(a)


def _domain_tag(field) -> str:
    if isinstance(field, PadicField):
        return f"Qp:{field.p:#x}:{field.precision}"
    if field.degree == 1:
        return f"Fp:{field.p:#x}"
    return f"Fq:{field.p:#x}:" + ",".join(hex(c) for c in field.modulus)


def _encode_elem(a):
    if isinstance(a, PadicNumber):
        return a.to_json()
    if a.field.degree == 1:
        return hex(a.coeffs[0])
    return [hex(c) for c in a.coeffs]


def curve_from_json(data: dict) -> WeierstrassCurve:
    parts = data["domain"].split(":")
    if parts[0] == "Fp":
        field = ExtField(int(parts[1], 16), 1)
    elif parts[0] == "Fq":
        field = ExtField(int(parts[1], 16), modulus=[int(c, 16) for c in parts[2].split(",")])
    elif parts[0] == "Qp":
        field = PadicField(int(parts[1], 16), int(parts[2]))
    else:
        raise ValueError(f"unknown domain {data['domain']!r}")

    def dec(v):
        if isinstance(v, dict):
            return PadicNumber.from_json(v)
        if isinstance(v, list):
            return field([int(c, 16) for c in v])
        return field(int(v, 16))

    return WeierstrassCurve(field, *(dec(data[k]) for k in ("a1", "a2", "a3", "a4", "a6")))


def point_from_json(E: WeierstrassCurve, data) -> CurvePoint:
    if data == "infinity":
        return INFINITY

    def dec(v):
        if isinstance(v, dict):
            return PadicNumber.from_json(v)
        if isinstance(v, list):
            return E.field([int(c, 16) for c in v])
        return E.field(int(v, 16))

    return CurvePoint(dec(data["x"]), dec(data["y"]))


def curve_over_fp(p: int, a1=0, a2=0, a3=0, a4=0, a6=0) -> WeierstrassCurve:
    return WeierstrassCurve(ExtField(p, 1), a1, a2, a3, a4, a6)


# -- point counting -----------------------------------------------------------

COUNT_BUDGET = 10 ** 6


def _int_coeffs(E: WeierstrassCurve) -> tuple[int, ...]:
    return tuple(a.coeffs[0] for a in E.coefficients)


def count_points_naive(E: WeierstrassCurve, budget: int = COUNT_BUDGET) -> int:
    """|E(F_q)|: for each x count the roots y of a quadratic, plus infinity."""
    f = E.field
    if f.order > budget:
        raise BudgetExceeded(f"q = {f.order} exceeds the naive counting budget {budget}")
    if f.degree == 1:
        p = f.p
        a1, a2, a3, a4, a6 = _int_coeffs(E)
        if p == 2:
            return 1 + sum(1 for x in range(2) for y in range(2)
                           if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0)
        chi = _quadratic_character_table(p)
        total = 1
        for x in range(p):
            b = a1 * x + a3
            disc = (b * b + 4 * (((x + a2) * x + a4) * x + a6)) % p
            total += 1 + chi[disc]
        return total
    a1, a2, a3, a4, a6 = E.coefficients
    total = 1
    for x in f.elements():
        b = a1 * x + a3
        disc = b * b + 4 * (x * x * x + a2 * x * x + a4 * x + a6)
        total += 1 if disc.is_zero() else (2 if disc.is_square() else 0)
    return total


_CHI_CACHE: dict[int, list[int]] = {}


def _quadratic_character_table(p: int) -> list[int]:
    table = _CHI_CACHE.get(p)
    if table is None:
        table = [-1] * p
        table[0] = 0
        for y in range(1, (p + 1) // 2):
            table[y * y % p] = 1
        if len(_CHI_CACHE) > 64:
            _CHI_CACHE.clear()
        _CHI_CACHE[p] = table
    return table


def all_points(E: WeierstrassCurve) -> list[CurvePoint]:
    """Every rational point of a curve over a small prime field."""
    f = E.field
    if f.degree != 1 or f.p > COUNT_BUDGET:
        raise BudgetExceeded("enumeration only for small prime fields")
    p = f.p
    a1, a2, a3, a4, a6 = _int_coeffs(E)
    roots: dict[int, list[int]] = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    pts = [INFINITY]
    inv2 = pow(2, -1, p) if p != 2 else None
    for x in range(p):
        b = (a1 * x + a3) % p
        disc = (b * b + 4 * (x ** 3 + a2 * x * x + a4 * x + a6)) % p
        for s in roots.get(disc, []):
            pts.append(CurvePoint(f(x), f((s - b) * inv2)))
    return pts


def trace_of_frobenius(E: WeierstrassCurve) -> int:
    return E.field.order + 1 - count_points_naive(E)


def extension_count(p: int, t: int, r: int) -> int:
    """|E(F_{p^r})| from the trace t of E over F_p."""
    s_prev, s = 2, t
    for _ in range(r - 1):
        s_prev, s = s, t * s - p * s_prev
    return p ** r + 1 - (s if r >= 1 else 2)


# -- p-adic lifting and reduction --------------------------------------------

def lift_curve(E: WeierstrassCurve, precision: int = 8) -> WeierstrassCurve:
    """Same integer coefficients, read in Q_p."""
    field = PadicField(E.field.p, precision)
    return WeierstrassCurve(field, *(int(a.coeffs[0]) for a in E.coefficients))


def reduce_mod_p(E: WeierstrassCurve, P: CurvePoint, target: WeierstrassCurve | None = None) -> CurvePoint:
    """Reduction of a Q_p point; points near the origin map to infinity."""
    if P.is_infinity:
        return INFINITY
    x, y = P.x, P.y
    vx = x.valuation if not x.is_zero() else None
    vy = y.valuation if not y.is_zero() else None
    if vx is not None and vx < 0 or vy is not None and vy < 0:
        if vx is None or vy is None or vx % 2 or 2 * vy != 3 * vx:
            raise PrecisionError(f"valuations (v(x), v(y)) = ({vx}, {vy}) are inconsistent")
        return INFINITY
    if x.abs_precision < 1 or y.abs_precision < 1:
        raise PrecisionError("coordinates not known modulo p")
    field = target.field if target is not None else ExtField(E.field.p, 1)
    return CurvePoint(field(x.residue()), field(y.residue()))


def hensel_lift_point(E: WeierstrassCurve, P: CurvePoint, precision: int | None = None) -> CurvePoint:
    """Lift a point over F_p to E over Q_p.

    x is the integer lift of P.x; y is the root of the y-quadratic congruent
    to P.y mod p, refined by Newton iteration.
    """
    if P.is_infinity:
        return INFINITY
    p = E.field.p
    N = precision or E.field.precision
    mod = p ** N
    a1, a2, a3, a4, a6 = (a.to_int() % mod for a in E.coefficients)
    x = int(P.x.coeffs[0]) if isinstance(P.x, ExtFieldElement) else int(P.x)
    y = int(P.y.coeffs[0]) if isinstance(P.y, ExtFieldElement) else int(P.y)
    rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % mod
    b = (a1 * x + a3) % mod
    if (2 * y + b) % p == 0:
        raise ArithmeticDomainError("y is a double root mod p; Hensel lifting does not apply")
    if (y * y + b * y - rhs) % p:
        raise NotOnCurveError("point does not reduce onto the curve")
    k = 1
    while k < N:
        k = min(2 * k, N)
        m = p ** k
        g = (y * y + b * y - rhs) % m
        dg = (2 * y + b) % m
        y = (y - g * pow(dg, -1, m)) % m
    return CurvePoint(PadicNumber.from_int(x, p, N), PadicNumber.from_int(y, p, N))


def z_coord(P: CurvePoint):
    """Local parameter z = -x/y at the origin."""
    if P.is_infinity:
        raise ArithmeticDomainError("z is a local parameter at O; evaluate it at affine points")
    if _is_zero(P.y):
        raise ArithmeticDomainError("z = -x/y is undefined when y = 0")
    return -P.x / P.y


# -- division polynomials -----------------------------------------------------

def _pzero(E):
    return E.field(0)


def _ptrim(a: list) -> list:
    while a and _is_zero(a[-1]):
        a.pop()
    return a


def _padd(a, b, zero):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)])


def _psub(a, b, zero):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero) for i in range(n)])


def _pmul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def poly_eval(poly: list, x):
    acc = x * 0
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def division_polynomials(E: WeierstrassCurve, n: int) -> list[list]:
    """f_0..f_n with f_m = psi_m for odd m and psi_m / psi_2 for even m.

    Polynomials are coefficient lists in x (lowest degree first).  With
    F = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 everything stays in x alone.
    """
    z = _pzero(E)
    one = E.field(1)
    b2, b4, b6, b8 = E.b_invariants
    F = _ptrim([b6, 2 * b4, b2, 4 * one])
    F2 = _pmul(F, F, z)
    f = [[], [one], [one],
         _ptrim([b8, 3 * b6, 3 * b4, b2, 3 * one]),
         _ptrim([b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2 * one])]
    for m in range(5, n + 1):
        k = m // 2
        if m % 2:
            a = _pmul(f[k + 2], _pmul(f[k], _pmul(f[k], f[k], z), z), z)
            b = _pmul(f[k - 1], _pmul(f[k + 1], _pmul(f[k + 1], f[k + 1], z), z), z)
            if k % 2 == 0:
                a = _pmul(F2, a, z)
            else:
                b = _pmul(F2, b, z)
            f.append(_psub(a, b, z))
        else:
            a = _pmul(f[k + 2], _pmul(f[k - 1], f[k - 1], z), z)
            b = _pmul(f[k - 2], _pmul(f[k + 1], f[k + 1], z), z)
            f.append(_pmul(f[k], _psub(a, b, z), z))
    return f[:n + 1]


def division_polynomial(E: WeierstrassCurve, n: int) -> list:
    """psi_n in x for odd n (psi_n / psi_2 for even n)."""
    if n < 0:
        raise ArithmeticDomainError("division polynomial index must be nonnegative")
    return division_polynomials(E, max(n, 4))[n]


def roots_in_field(poly: list, elements: Iterable) -> list:
    """Exhaustive root scan."""
    return [x for x in elements if _is_zero(poly_eval(poly, x))]


# -- Velu isogenies -----------------------------------------------------------

class KernelError(ArithmeticDomainError):
    pass


@dataclass(frozen=True)
class Isogeny:
    domain: WeierstrassCurve
    codomain: WeierstrassCurve
    kernel: tuple[CurvePoint, ...]
    _terms: tuple  # (xQ, yQ, gxQ, gyQ, vQ, uQ) per representative of K \ {O} / +-1

    @property
    def degree(self) -> int:
        return len(self.kernel)

    def __call__(self, P: CurvePoint, curve: WeierstrassCurve | None = None) -> CurvePoint:
        """Image of P; ``curve`` is the codomain model P's field should land in."""
        if P.is_infinity:
            return INFINITY
        field = P.x.field
        a1, _, a3, _, _ = (_embed(field, a) for a in self.domain.coefficients)
        x, y = P.x, P.y
        X, Y = x, y
        for xq, yq, gx, gy, v, u in self._terms:
            xq, yq, gx, gy, v, u = (_embed(field, t) for t in (xq, yq, gx, gy, v, u))
            d = x - xq
            if d.is_zero():
                return INFINITY
            inv = 1 / d
            inv2 = inv * inv
            X = X + v * inv + u * inv2
            Y = Y - (u * (2 * y + a1 * x + a3) * inv2 * inv
                     + v * (a1 * d + y - yq) * inv2
                     + (a1 * u - gx * gy) * inv2)
        return CurvePoint(X, Y)


def _in_group(P: CurvePoint, pts: list[CurvePoint]) -> bool:
    return any(P == Q for Q in pts)


def velu_quotient(E: WeierstrassCurve, kernel: list[CurvePoint],
                  ext_curve: WeierstrassCurve | None = None) -> Isogeny:
    """Quotient of E (over F_p) by a finite subgroup of odd order.

    ``kernel`` may live over an extension F_{p^r}; ``ext_curve`` is E base
    changed to that extension.  The subgroup must be closed under addition
    and under Frobenius, so the codomain is defined over F_p.
    """
    ext = ext_curve or E
    pts = [P for P in kernel if not P.is_infinity]
    if not pts:
        return Isogeny(E, E, (INFINITY,), ())
    full = [INFINITY] + pts
    for P in pts:
        if not ext.contains(P):
            raise KernelError(f"{P} is not on the curve")
        for Q in pts:
            if not _in_group(ext.add(P, Q), full):
                raise KernelError("kernel is not closed under addition")
        if isinstance(P.x, ExtFieldElement) and not _in_group(ext.frobenius(P), full):
            raise KernelError("kernel is not stable under Frobenius")
    if len(full) % 2 == 0:
        raise KernelError("only odd-order kernels are supported")
    a1, a2, a3, a4, a6 = ext.coefficients
    reps: list[CurvePoint] = []
    for P in pts:
        if not any(P.x == R.x for R in reps):
            reps.append(P)
    v = w = ext.field(0)
    terms = []
    for Q in reps:
        xq, yq = Q.x, Q.y
        gx = 3 * xq * xq + 2 * a2 * xq + a4 - a1 * yq
        gy = -2 * yq - a1 * xq - a3
        vq = 2 * gx - a1 * gy
        uq = gy * gy
        v = v + vq
        w = w + uq + xq * vq
        terms.append((xq, yq, gx, gy, vq, uq))
    A4 = a4 - 5 * v
    A6 = a6 - (a1 * a1 + 4 * a2) * v - 7 * w
    coeffs = [a1, a2, a3, A4, A6]
    base_field = E.field
    if ext is not E:
        if not all(c.in_prime_field() for c in coeffs):
            raise KernelError("codomain is not defined over the base field")
        coeffs = [base_field(c.coeffs[0]) for c in coeffs]
    codomain = WeierstrassCurve(base_field, *coeffs)
    return Isogeny(E, codomain, tuple(full), tuple(terms))
