"""Discrete logarithms in weak groups.

- additive groups: one modular inversion
- smooth orders: Pohlig-Hellman (re-exported from ``hhs``)
- (Z/p^k Z)^*: Riesel's p-adic logarithm method
- anomalous curves (#E(F_p) = p): the Smart / Araki-Satoh / Semaev lift
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .arith import ArithmeticDomainError, egcd, factorize, multiplicative_order
from .elliptic import (
    COUNT_BUDGET, CurvePoint, INFINITY, WeierstrassCurve, count_points_naive,
    hensel_lift_point, lift_curve, z_coord, PadicField,
)
from .formal import formal_log
from .hhs import NotFoundError, bsgs_dlog, exhaustive_dlog, pohlig_hellman  # noqa: F401
from .padic import PadicNumber, PrecisionError, padic_log


class Cancelled(RuntimeError):
    pass


class CancelToken:
    """Cooperative cancellation flag polled by long exhaustive searches."""

    def __init__(self):
        self.cancelled = False

    def cancel(self):
        self.cancelled = True

    def check(self):
        if self.cancelled:
            raise Cancelled("search cancelled")


def additive_dlog(g: int, h: int, p: int) -> int:
    """k with k*g = h in Z/pZ."""
    g %= p
    if g == 0:
        raise ArithmeticDomainError("g is zero modulo p; the logarithm is undefined")
    d, u, _ = egcd(g, p)
    if d != 1:
        raise ArithmeticDomainError(f"gcd(g, {p}) = {d}")
    return u * h % p


# -- Riesel -------------------------------------------------------------------

@dataclass(frozen=True)
class RieselInstance:
    p: int
    k: int
    b: int
    c: int

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    @property
    def group_order(self) -> int:
        return (self.p - 1) * self.p ** (self.k - 1)

    def validate(self) -> "RieselInstance":
        p, k = self.p, self.k
        if p < 3 or len(factorize(p).factors) != 1 or factorize(p).factors[0][1] != 1:
            raise ArithmeticDomainError(f"p = {p} must be an odd prime")
        if k < 2:
            raise ArithmeticDomainError("k must be at least 2")
        for name, v in (("b", self.b), ("c", self.c)):
            if v % p == 0:
                raise ArithmeticDomainError(f"{name} = {v} is not a unit mod {p}^{k}")
        if multiplicative_order(self.b % p, p) != p - 1:
            raise ArithmeticDomainError(f"b = {self.b} is not a generator modulo {p}")
        if pow(self.b, p - 1, p * p) == 1:
            raise ArithmeticDomainError("b^(p-1) lies in U_2, so b does not generate (Z/p^k Z)^*")
        return self


@dataclass(frozen=True)
class RieselResult:
    log: int
    l1: int
    B: int
    C: int
    L: int

    def to_json(self) -> dict:
        return {"log": self.log, "l1": self.l1, "B": self.B, "C": self.C, "L": self.L,
                "checks": {"b^log == c": True}}


def riesel_dlog(inst: RieselInstance, cancel: CancelToken | None = None) -> RieselResult:
    """log_b(c) in (Z/p^k Z)^*.

    l1 is the exhaustive logarithm mod p, taken in [0, p-1).  Both
    C = c b^(-l1) and B = b^(p-1) lie in U_1, and L = Log C / Log B is read
    modulo p^(k-1).
    """
    inst.validate()
    p, k = inst.p, inst.k
    mod = inst.modulus
    b, c = inst.b % mod, inst.c % mod
    target = c % p
    acc = 1
    for l1 in range(p - 1):
        if cancel is not None and l1 % 4096 == 0:
            cancel.check()
        if acc == target:
            break
        acc = acc * b % p
    else:
        raise NotFoundError("no logarithm modulo p; c is not in <b>")
    C = c * pow(b, -l1, mod) % mod
    B = pow(b, p - 1, mod)
    log_B = padic_log(PadicNumber.from_int(B, p, k), k)
    log_C = padic_log(PadicNumber.from_int(C, p, k), k)
    if log_B.is_zero() or log_B.valuation != 1:
        raise ArithmeticDomainError("Log B must have valuation exactly 1")
    # both logs are divisible by p; divide them out and work mod p^(k-1)
    m = p ** (k - 1)
    if log_C.is_zero():
        L = 0
    else:
        L = (log_C.to_int() // p) * pow(log_B.to_int() // p, -1, m) % m
    ell = (l1 + (p - 1) * L) % inst.group_order
    if pow(b, ell, mod) != c:
        raise ArithmeticDomainError("consistency check b^log == c failed")
    return RieselResult(ell, l1, B, C, L)


# -- SASS ---------------------------------------------------------------------

@dataclass(frozen=True)
class AnomalousInstance:
    curve: WeierstrassCurve  # over F_p
    P: CurvePoint
    Q: CurvePoint

    @property
    def p(self) -> int:
        return self.curve.field.p

    def validate(self) -> "AnomalousInstance":
        E, p = self.curve, self.p
        if self.P.is_infinity:
            raise ArithmeticDomainError("P must not be the point at infinity")
        for R in (self.P, self.Q):
            if not E.contains(R):
                raise ArithmeticDomainError(f"{R} is not on the curve")
        if p <= COUNT_BUDGET:
            if count_points_naive(E) != p:
                raise ArithmeticDomainError("curve is not anomalous: #E(F_p) != p")
        elif not E.scalar_mul(p, self.P).is_infinity:
            raise ArithmeticDomainError("[p]P != O; the curve is not anomalous")
        return self


@dataclass
class SassResult:
    log: int
    checks: dict = field(default_factory=dict)
    lifts_tried: int = 1

    def to_json(self) -> dict:
        return {"log": self.log, "checks": self.checks, "lifts_tried": self.lifts_tried}


class CanonicalLiftError(ArithmeticDomainError):
    pass


def _lift_with_offset(E: WeierstrassCurve, offsets: tuple[int, ...], precision: int) -> WeierstrassCurve:
    p = E.field.p
    field = PadicField(p, precision)
    coeffs = [int(a.coeffs[0]) + p * r for a, r in zip(E.coefficients, offsets)]
    return WeierstrassCurve(field, *coeffs)


def _sass_once(inst: AnomalousInstance, E: WeierstrassCurve, precision: int, order: int | None):
    p = inst.p
    PL = hensel_lift_point(E, inst.P, precision)
    pP = E.scalar_mul(p, PL)
    if pP.is_infinity or pP.x.is_zero() or pP.x.valuation >= 0:
        raise PrecisionError("[p]P did not land in the kernel of reduction")
    checks = {
        "hensel_digit_y_P": (PL.y.digits() + [0, 0])[1],
        "valuation_x_pP": pP.x.valuation,
        "valuation_y_pP": pP.y.valuation,
    }
    if (pP.x.valuation, pP.y.valuation) != (-2, -3):
        raise CanonicalLiftError(
            f"v(x([p]P)), v(y([p]P)) = {pP.x.valuation}, {pP.y.valuation}; expected -2, -3")
    zP = z_coord(pP)
    logP = zP if order is None else formal_log(E, zP, order)
    if inst.Q.is_infinity:
        return 0, checks
    QL = hensel_lift_point(E, inst.Q, precision)
    pQ = E.scalar_mul(p, QL)
    if pQ.is_infinity:
        return 0, checks
    zQ = z_coord(pQ)
    logQ = zQ if order is None else formal_log(E, zQ, order)
    if not logQ.is_zero():
        checks["log_pQ_leading_digit"] = logQ.leading_digit() if logQ.valuation == 1 else 0
    if logQ.is_zero() or logQ.valuation > logP.valuation:
        return 0, checks
    ratio = logQ / logP
    return ratio.residue(), checks


def sass_dlog(inst: AnomalousInstance, precision: int = 8, order: int | None = None,
              max_lifts: int = 8, seed=0) -> SassResult:
    """log_P(Q) on an anomalous curve.

    The curve is lifted with the same integer coefficients; ``order`` switches
    from the first-order logarithm (z itself) to the truncated series.  If
    the lift behaves like the canonical lift the coefficients are perturbed
    by random multiples of p and the computation is retried.
    """
    if precision < 4:
        raise ArithmeticDomainError("working precision must be at least 4")
    inst.validate()
    rng = random.Random(seed)
    offsets = (0, 0, 0, 0, 0)
    for attempt in range(1, max_lifts + 1):
        E = _lift_with_offset(inst.curve, offsets, precision)
        try:
            m, checks = _sass_once(inst, E, precision, order)
        except CanonicalLiftError:
            offsets = tuple(rng.randrange(inst.p) for _ in range(5))
            continue
        ok = inst.curve.scalar_mul(m, inst.P) == inst.Q
        checks["mP_equals_Q"] = ok
        if not ok:
            raise ArithmeticDomainError(f"[m]P != Q for m = {m}")
        return SassResult(m, checks, attempt)
    raise CanonicalLiftError(f"no usable lift found in {max_lifts} attempts")


def find_anomalous_curves(p: int, limit: int | None = None, seed=0) -> list[WeierstrassCurve]:
    """Short-form curves y^2 = x^3 + a x + b over F_p with exactly p points."""
    from .elliptic import curve_over_fp
    out = []
    for a in range(p):
        for b in range(p):
            if (4 * a ** 3 + 27 * b * b) % p == 0:
                continue
            E = curve_over_fp(p, 0, 0, 0, a, b)
            if count_points_naive(E) == p:
                out.append(E)
                if limit is not None and len(out) >= limit:
                    return out
    return out
