"""Hard homogeneous spaces: a finite abelian group G acting freely and
transitively on a set H.

Vectors (elements of G) and points (elements of H) are plain hashable
Python values whose meaning is owned by the instance.  Equal encodings mean
equal elements, so ``==`` is the equality test of the underlying problems.
"""

from __future__ import annotations

import math
import random
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator

from .arith import (
    ArithmeticDomainError, Factorization, ModInt, crt_combine, euler_phi, factorize,
    is_probable_prime,
)

Vector = Hashable
Point = Hashable


class InconsistentInstanceError(RuntimeError):
    """The instance violated the free-and-transitive contract."""


class NotFoundError(ArithmeticDomainError):
    """A discrete logarithm does not exist (target outside the subgroup)."""


def make_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


class HhsInstance(ABC):
    """Group-plus-set-plus-action bundle.

    Subclasses supply the group law on vectors, the action, and sampling.
    ``size`` is None when the cardinality is not known.
    """

    kind: str = "abstract"
    size: int | None = None

    # group G
    @abstractmethod
    def compose(self, g1: Vector, g2: Vector) -> Vector: ...

    @abstractmethod
    def invert(self, g: Vector) -> Vector: ...

    @abstractmethod
    def identity(self) -> Vector: ...

    def vectors_equal(self, g1: Vector, g2: Vector) -> bool:
        return g1 == g2

    @abstractmethod
    def sample_vector(self, rng: random.Random) -> Vector: ...

    # set H and the action
    @abstractmethod
    def act(self, g: Vector, h: Point) -> Point: ...

    @abstractmethod
    def base_point(self) -> Point: ...

    def points_equal(self, h1: Point, h2: Point) -> bool:
        return h1 == h2

    def sample_point(self, rng: random.Random) -> Point:
        return self.act(self.sample_vector(rng), self.base_point())

    def check_vector(self, g: Vector) -> Vector:
        return g

    def check_point(self, h: Point) -> Point:
        return h

    # enumeration (desk-scale instances only)
    def enumerable(self) -> bool:
        return False

    def vectors(self) -> Iterator[Vector]:
        raise NotImplementedError(f"{self.kind} instance is not enumerable")

    def sampler_distribution(self) -> dict[Vector, Fraction]:
        """Exact law of ``sample_vector`` on enumerable instances."""
        raise NotImplementedError(f"{self.kind} instance does not expose its sampler law")

    # serialization
    def describe(self) -> dict:
        return {"type": self.kind}

    def encode_vector(self, g: Vector) -> Any:
        return _encode(g)

    def encode_point(self, h: Point) -> Any:
        return _encode(h)

    def decode_vector(self, data: Any) -> Vector:
        return self.check_vector(_decode(data))

    def decode_point(self, data: Any) -> Point:
        return self.check_point(_decode(data))


def _encode(value):
    if isinstance(value, int):
        return hex(value)
    if isinstance(value, tuple):
        return [_encode(v) for v in value]
    raise TypeError(f"cannot encode {value!r}")


def _decode(data):
    if isinstance(data, str):
        return int(data, 16)
    if isinstance(data, list):
        return tuple(_decode(v) for v in data)
    raise TypeError(f"cannot decode {data!r}")


# -- problem-level operations ------------------------------------------------

def act(instance: HhsInstance, g: Vector, h: Point) -> Point:
    return instance.act(instance.check_vector(g), instance.check_point(h))


def sample_vector(instance: HhsInstance, seed) -> Vector:
    return instance.sample_vector(make_rng(seed))


def vector_between_bruteforce(instance: HhsInstance, h1: Point, h2: Point) -> Vector:
    """The unique g with g.h1 = h2, by scanning all of G.

    This is a correctness oracle for enumerable instances, not an attack.
    """
    h1, h2 = instance.check_point(h1), instance.check_point(h2)
    for g in instance.vectors():
        if instance.points_equal(instance.act(g, h1), h2):
            return g
    raise InconsistentInstanceError("no vector joins the two points; action is not transitive")


def complete_parallelogram(instance: HhsInstance, h1: Point, h2: Point, h3: Point,
                           g_known: Vector | None = None) -> Point:
    if g_known is None:
        g_known = vector_between_bruteforce(instance, h1, h2)
    elif not instance.points_equal(instance.act(g_known, h1), h2):
        raise ArithmeticDomainError("supplied vector does not send h1 to h2")
    return instance.act(g_known, h3)


def verify_parallelogram(instance: HhsInstance, h1: Point, h2: Point, h3: Point, h4: Point) -> bool:
    g12 = vector_between_bruteforce(instance, h1, h2)
    g34 = vector_between_bruteforce(instance, h3, h4)
    return instance.vectors_equal(g12, g34)


def orbit(instance: HhsInstance, h0: Point) -> dict[Point, Vector]:
    """Map every point reached from h0 to the first vector reaching it."""
    seen: dict[Point, Vector] = {}
    for g in instance.vectors():
        seen.setdefault(instance.act(g, h0), g)
    return seen


def check_free_transitive(instance: HhsInstance, h0: Point | None = None) -> bool:
    """True iff g -> g.h0 is a bijection from G onto H (enumerable instances)."""
    h0 = instance.base_point() if h0 is None else h0
    images = [instance.act(g, h0) for g in instance.vectors()]
    if len(set(images)) != len(images):
        return False
    if instance.size is not None and len(images) != instance.size:
        return False
    points = getattr(instance, "points", None)
    if points is not None:
        return set(images) == set(points())
    return True


def statistical_distance_from_uniform(instance: HhsInstance) -> Fraction:
    dist = instance.sampler_distribution()
    group = list(instance.vectors())
    uniform = Fraction(1, len(group))
    return sum((abs(dist.get(g, Fraction(0)) - uniform) for g in group), Fraction(0)) / 2


# -- generic discrete-log solvers --------------------------------------------

@dataclass(frozen=True)
class GroupOps:
    """Operations of a cyclic group written multiplicatively."""

    mul: Callable[[Any, Any], Any]
    power: Callable[[Any, int], Any]
    identity: Any


def modular_group(modulus: int) -> GroupOps:
    return GroupOps(
        mul=lambda a, b: a * b % modulus,
        power=lambda a, e: pow(a, e, modulus),
        identity=1 % modulus,
    )


def exhaustive_dlog(c, d, n: int, ops: GroupOps) -> int:
    acc = ops.identity
    for k in range(n):
        if acc == d:
            return k
        acc = ops.mul(acc, c)
    raise NotFoundError("target is not a power of the base")


def bsgs_dlog(c, d, n: int, ops: GroupOps | None = None) -> int:
    """k in [0, n) with c^k = d, using ceil(sqrt(n)) stored baby steps."""
    if ops is None:
        if isinstance(c, ModInt):
            ops = modular_group(c.modulus)
            c, d = c.value, int(d)
        else:
            raise TypeError("pass GroupOps for non-ModInt elements")
    m = math.isqrt(n - 1) + 1 if n > 1 else 1
    table: dict[Any, int] = {}
    acc = ops.identity
    for j in range(m):
        table.setdefault(acc, j)
        acc = ops.mul(acc, c)
    giant = ops.power(c, (n - m) % n) if n else ops.identity  # c^(-m)
    gamma = d
    for i in range(m + 1):
        j = table.get(gamma)
        if j is not None:
            return (i * m + j) % n
        gamma = ops.mul(gamma, giant)
    raise NotFoundError("target is not in the subgroup generated by the base")


def pohlig_hellman(c, d, n: int, factorization: Factorization | None = None,
                   ops: GroupOps | None = None) -> int:
    """Discrete log through prime-power sub-problems recombined by CRT."""
    if ops is None:
        if isinstance(c, ModInt):
            ops = modular_group(c.modulus)
            c, d = c.value, int(d)
        else:
            raise TypeError("pass GroupOps for non-ModInt elements")
    factorization = factorization or factorize(n)
    if factorization.value != n:
        raise ArithmeticDomainError("factorization does not match the order")
    residues = []
    for q, e in factorization:
        qe = q ** e
        cofactor = n // qe
        c_i = ops.power(c, cofactor)
        d_i = ops.power(d, cofactor)
        gamma = ops.power(c_i, q ** (e - 1))  # order q
        x = 0
        for k in range(e):
            # strip the known low digits, then project onto the order-q subgroup
            h = ops.mul(ops.power(c_i, (qe - x) % qe), d_i)
            h = ops.power(h, q ** (e - 1 - k))
            digit = bsgs_dlog(gamma, h, q, ops)
            x += digit * q ** k
        if ops.power(c_i, x) != d_i:
            raise NotFoundError("target is not in the subgroup generated by the base")
        residues.append((x, qe))
    result = int(crt_combine(residues)) if residues else 0
    if ops.power(c, result) != d:
        raise NotFoundError("target is not in the subgroup generated by the base")
    return result


# -- instances ---------------------------------------------------------------

class AffineHhs(HhsInstance):
    """k^d acting on the affine space A^d(k) by translation, k = F_p.

    Included because it is homogeneous but easy: the vector between two
    points is a coordinatewise difference.
    """

    kind = "affine"

    def __init__(self, p: int, dim: int):
        if not is_probable_prime(p):
            raise ArithmeticDomainError(f"{p} is not prime")
        if dim < 1:
            raise ArithmeticDomainError("dimension must be positive")
        self.p = p
        self.dim = dim
        self.size = p ** dim

    def compose(self, g1, g2):
        return tuple((a + b) % self.p for a, b in zip(g1, g2))

    def invert(self, g):
        return tuple(-a % self.p for a in g)

    def identity(self):
        return (0,) * self.dim

    def sample_vector(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.dim))

    def act(self, g, h):
        return tuple((a + b) % self.p for a, b in zip(g, h))

    def base_point(self):
        return (0,) * self.dim

    def check_vector(self, g):
        return self._check(g)

    def check_point(self, h):
        return self._check(h)

    def _check(self, v):
        if not isinstance(v, tuple) or len(v) != self.dim or not all(
                isinstance(a, int) and 0 <= a < self.p for a in v):
            raise ArithmeticDomainError(f"malformed affine coordinates {v!r}")
        return v

    def vector_between(self, h1, h2):
        return tuple((b - a) % self.p for a, b in zip(h1, h2))

    def enumerable(self):
        return True

    def vectors(self):
        import itertools
        return (tuple(v) for v in itertools.product(range(self.p), repeat=self.dim))

    points = vectors

    def sampler_distribution(self):
        w = Fraction(1, self.size)
        return {g: w for g in self.vectors()}

    def describe(self):
        return {"type": self.kind, "p": hex(self.p), "dim": self.dim}


class DlogHhs(HhsInstance):
    """(Z/nZ)^* acting on the generators of a cyclic group C by exponentiation.

    C is the order-n subgroup of the cyclic group (Z/mZ)^*; a point is a
    generator c of C and the vector a sends c to c^a.
    """

    kind = "dlog"

    def __init__(self, modulus: int, order: int | None = None,
                 factorization: Factorization | None = None):
        group_order = euler_phi(modulus)
        order = group_order if order is None else order
        if group_order % order:
            raise ArithmeticDomainError(f"{order} does not divide |(Z/{modulus}Z)*| = {group_order}")
        self.modulus = modulus
        self.order = order
        self.factorization = factorization or factorize(order)
        if self.factorization.value != order:
            raise ArithmeticDomainError("factorization does not match the order")
        self.size = euler_phi(order) if order > 1 else 1
        self._units = [a for a in range(order) if math.gcd(a, order) == 1] if order <= 10 ** 6 else None
        self._base = None

    def compose(self, g1, g2):
        return g1 * g2 % self.order

    def invert(self, g):
        return pow(g, -1, self.order)

    def identity(self):
        return 1 % self.order

    def sample_vector(self, rng):
        while True:
            a = rng.randrange(self.order)
            if math.gcd(a, self.order) == 1:
                return a

    def is_generator(self, c: int) -> bool:
        """Order exactly n, checked through the prime-power quotients of n."""
        m, n = self.modulus, self.order
        if math.gcd(c, m) != 1 or pow(c, n, m) != 1 % m:
            return False
        return all(pow(c, n // q, m) != 1 for q in self.factorization.primes)

    def check_vector(self, g):
        if not isinstance(g, int) or not 0 <= g < self.order or math.gcd(g, self.order) != 1:
            raise ArithmeticDomainError(f"{g!r} is not a unit mod {self.order}")
        return g

    def check_point(self, h):
        if not isinstance(h, int) or not 0 <= h < self.modulus or not self.is_generator(h):
            raise ArithmeticDomainError(f"{h!r} does not generate the order-{self.order} subgroup")
        return h

    def act(self, g, h):
        return pow(h, g, self.modulus)

    def base_point(self):
        if self._base is None:
            self._base = next(c for c in range(1, self.modulus) if self.is_generator(c))
        return self._base

    def points(self):
        return [c for c in range(1, self.modulus) if self.is_generator(c)]

    def enumerable(self):
        return self._units is not None

    def vectors(self):
        if self._units is None:
            raise NotImplementedError("order too large to enumerate")
        return iter(self._units)

    def sampler_distribution(self):
        w = Fraction(1, len(self._units))
        return {g: w for g in self._units}

    def describe(self):
        return {"type": self.kind, "modulus": hex(self.modulus), "order": hex(self.order)}


def dl_hhs(modulus: int, order: int | None = None,
           factorization: Factorization | None = None) -> DlogHhs:
    return DlogHhs(modulus, order, factorization)


def affine_hhs(p: int, dim: int) -> AffineHhs:
    return AffineHhs(p, dim)


def action_axioms_hold(instance: HhsInstance, trials: int, seed) -> bool:
    rng = make_rng(seed)
    for _ in range(trials):
        g1, g2 = instance.sample_vector(rng), instance.sample_vector(rng)
        h = instance.sample_point(rng)
        lhs = instance.act(instance.compose(g1, g2), h)
        rhs = instance.act(g1, instance.act(g2, h))
        if not instance.points_equal(lhs, rhs):
            return False
        if not instance.points_equal(instance.act(instance.identity(), h), h):
            return False
    return True


def empirical_counts(instance: HhsInstance, samples: int, seed) -> Counter:
    rng = make_rng(seed)
    return Counter(instance.sample_vector(rng) for _ in range(samples))


def iter_quadruples(points: Iterable[Point]):
    pts = list(points)
    for a in pts:
        for b in pts:
            for c in pts:
                for d in pts:
                    yield a, b, c, d
