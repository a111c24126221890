"""Formal group of a Weierstrass curve in the local parameter z = -x/y.

All series are truncated power series whose coefficients live in the
curve's coefficient domain.  Only ring operations are needed to build the
group law; the logarithm and exponential also divide by small integers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import ArithmeticDomainError
from .elliptic import WeierstrassCurve, _is_zero
from .padic import PadicNumber

MAX_ORDER = 8


@dataclass(frozen=True)
class FormalSeries:
    """Truncated series in one or two variables.

    ``coeffs`` maps exponent tuples to coefficients; terms of total degree
    above ``order`` are dropped by every operation.
    """
    nvars: int
    order: int
    coeffs: dict
    zero: object

    @classmethod
    def constant(cls, c, nvars, order, zero) -> "FormalSeries":
        return cls(nvars, order, {} if _is_zero(c) else {(0,) * nvars: c}, zero)

    @classmethod
    def variable(cls, index, nvars, order, one, zero) -> "FormalSeries":
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, order, {tuple(e): one}, zero)

    def coefficient(self, *exps):
        return self.coeffs.get(tuple(exps), self.zero)

    def _new(self, coeffs) -> "FormalSeries":
        return FormalSeries(self.nvars, self.order,
                            {k: v for k, v in coeffs.items() if not _is_zero(v)}, self.zero)

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            other = FormalSeries.constant(self.zero + other, self.nvars, self.order, self.zero)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return self._new(out)

    __radd__ = __add__

    def _const(self, n: int) -> "FormalSeries":
        return FormalSeries.constant(self.zero + n, self.nvars, self.order, self.zero)

    def __neg__(self):
        return self._new({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, FormalSeries) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return self._new({k: v * other for k, v in self.coeffs.items()})
        out: dict = {}
        for k1, v1 in self.coeffs.items():
            d1 = sum(k1)
            for k2, v2 in other.coeffs.items():
                if d1 + sum(k2) > self.order:
                    continue
                k = tuple(a + b for a, b in zip(k1, k2))
                t = v1 * v2
                out[k] = out[k] + t if k in out else t
        return self._new(out)

    __rmul__ = __mul__

    def valuation(self) -> int:
        return min((sum(k) for k in self.coeffs), default=self.order + 1)

    def unit_inverse(self) -> "FormalSeries":
        """1/(c + s) for a unit constant c and s without constant term."""
        c = self.coefficient(*(0,) * self.nvars)
        if _is_zero(c):
            raise ArithmeticDomainError("series has no constant term; not invertible")
        cinv = 1 / c
        s = self * cinv - 1
        term = self._const(1)
        total = self._const(1)
        for _ in range(self.order):
            term = term * (-s)
            total = total + term
        return total * cinv

    def compose_univariate(self, inner: "FormalSeries") -> "FormalSeries":
        """self(inner) for univariate self and any ``inner`` without constant term."""
        if self.nvars != 1:
            raise ArithmeticDomainError("composition target must be univariate")
        result = inner._const(0)
        power = inner._const(1)
        for n in range(self.order + 1):
            c = self.coefficient(n)
            if not _is_zero(c):
                result = result + power * c
            power = power * inner
        return result

    def __call__(self, *values):
        """Evaluate at domain elements (truncated sum)."""
        total = None
        for k, c in self.coeffs.items():
            term = c
            for v, e in zip(values, k):
                term = term * v ** e if e else term
            total = term if total is None else total + term
        return self.zero if total is None else total


def _one_zero(E: WeierstrassCurve):
    return E.field(1), E.field(0)


def w_series(E: WeierstrassCurve, order: int) -> FormalSeries:
    """w(z) = -1/y as a series in z, solving w = z^3 + a1 z w + a2 z^2 w
    + a3 w^2 + a4 z w^2 + a6 w^3 by fixed-point iteration."""
    one, zero = _one_zero(E)
    z = FormalSeries.variable(0, 1, order, one, zero)
    a1, a2, a3, a4, a6 = E.coefficients
    z3 = z * z * z
    w = z3
    for _ in range(order):
        w = z3 + z * w * a1 + z * z * w * a2 + w * w * a3 + z * w * w * a4 + w * w * w * a6
    return w


def formal_group_series(E: WeierstrassCurve, order: int = 6) -> FormalSeries:
    """F(z1, z2) = z(P + Q) in terms of z(P), z(Q), up to total degree ``order``."""
    if order > MAX_ORDER:
        raise ArithmeticDomainError(f"formal group order is limited to {MAX_ORDER}")
    one, zero = _one_zero(E)
    a1, a2, a3, a4, a6 = E.coefficients
    m = order
    w = w_series(E, m + 1)
    z1 = FormalSeries.variable(0, 2, m, one, zero)
    z2 = FormalSeries.variable(1, 2, m, one, zero)
    # slope of the chord through (z1, w(z1)) and (z2, w(z2))
    lam = z1._const(0)
    for n in range(3, m + 2):
        a_n = w.coefficient(n)
        if _is_zero(a_n):
            continue
        h = z1._const(0)
        for i in range(n):
            mono = FormalSeries(2, m, {(i, n - 1 - i): one}, zero)
            h = h + mono
        lam = lam + h * a_n
    w1 = w.compose_univariate(z1)
    nu = w1 - lam * z1
    A = 1 + lam * a2 + lam * lam * a4 + lam * lam * lam * a6
    B = lam * a1 + nu * a2 + lam * lam * a3 + lam * nu * (2 * a4) + lam * lam * nu * (3 * a6)
    z3 = -z1 - z2 - B * A.unit_inverse()
    w3 = lam * z3 + nu
    return -z3 * (1 - z3 * a1 - w3 * a3).unit_inverse()


def invariant_differential(E: WeierstrassCurve, order: int = 6) -> FormalSeries:
    """omega / dz = 1 / (dF/dz2)(z, 0)."""
    F = formal_group_series(E, order)
    one, zero = _one_zero(E)
    deriv = FormalSeries(1, order, {(i,): c for (i, j), c in F.coeffs.items() if j == 1}, zero)
    return deriv.unit_inverse()


def log_series(E: WeierstrassCurve, order: int = 6) -> FormalSeries:
    """Log_F(z) = sum b_n / n z^n where omega = sum b_n z^(n-1)."""
    omega = invariant_differential(E, order)
    one, zero = _one_zero(E)
    coeffs = {}
    for n in range(1, order + 1):
        b = omega.coefficient(n - 1)
        if not _is_zero(b):
            coeffs[(n,)] = b / n
    return FormalSeries(1, order, coeffs, zero)


def reversion(f: FormalSeries) -> FormalSeries:
    """Compositional inverse of f = z + higher terms."""
    one = f.coefficient(1)
    if not one == 1 or not _is_zero(f.coefficient(0)):
        raise ArithmeticDomainError("reversion needs f = z + O(z^2)")
    z = FormalSeries.variable(0, 1, f.order, one, f.zero)
    tail = f - z
    g = z
    for _ in range(f.order):
        g = z - tail.compose_univariate(g)
    return g


def exp_series(E: WeierstrassCurve, order: int = 6) -> FormalSeries:
    return reversion(log_series(E, order))


def _check_convergence(z):
    if isinstance(z, PadicNumber) and not z.is_zero() and z.valuation <= 0:
        raise ArithmeticDomainError(f"formal series converge only for v(z) > 0; got v = {z.valuation}")


def formal_log(E: WeierstrassCurve, z, order: int = 6):
    _check_convergence(z)
    return log_series(E, order)(z)


def formal_exp(E: WeierstrassCurve, z, order: int = 6):
    _check_convergence(z)
    return exp_series(E, order)(z)
