"""The class group of an imaginary quadratic order acting on ordinary curves
over F_p, its Cayley graph, and a hash function built on walks in it.

A vertex is a j-invariant; its model is the curve with that j and Frobenius
trace t.  The ideal (l, Phi - lam) acts by the l-isogeny whose kernel is the
lam-eigenspace of Frobenius on E[l].  Frobenius on the trace-t model fixes
the orientation, so the action on j-invariants is well defined.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .arith import (
    ArithmeticDomainError, divisors, factorize, is_probable_prime, is_squarefree, legendre,
    multiplicative_order,
)
from .elliptic import (
    INFINITY, CurvePoint, WeierstrassCurve, count_points_naive, curve_over_fp,
    extension_count, velu_quotient,
)
from .fields import ExtField
from .hhs import HhsInstance, InconsistentInstanceError, make_rng

DEFAULT_ELLS = (3, 5, 7, 11, 13)
MAX_EXTENSION_DEGREE = 6


class BudgetExhausted(ArithmeticDomainError):
    pass


@dataclass(frozen=True)
class IdealGenerator:
    """l = (ell, Phi - lam) and its conjugate (ell, Phi - mu)."""
    ell: int
    lam: int
    mu: int

    def eigenvalue(self, sign: int) -> int:
        return self.lam if sign > 0 else self.mu


@dataclass(frozen=True)
class CmParams:
    p: int
    t: int
    generators: tuple[IdealGenerator, ...]
    base_j: int

    @property
    def disc(self) -> int:
        return self.t * self.t - 4 * self.p

    @property
    def curve_order(self) -> int:
        return self.p + 1 - self.t

    @property
    def ells(self) -> tuple[int, ...]:
        return tuple(g.ell for g in self.generators)

    def to_json(self) -> dict:
        return {"p": self.p, "t": self.t, "disc": self.disc, "base_j": self.base_j,
                "curve_order": self.curve_order,
                "generators": [{"ell": g.ell, "lambda": g.lam, "mu": g.mu} for g in self.generators]}


@dataclass(frozen=True)
class CurveVertex:
    j: int
    curve: WeierstrassCurve

    def __eq__(self, other):
        return isinstance(other, CurveVertex) and self.j == other.j

    def __hash__(self):
        return hash(self.j)


def split_generator(p: int, t: int, ell: int) -> IdealGenerator | None:
    """Roots of X^2 - tX + p mod ell when there are two distinct ones."""
    if ell == 2 or ell == p:
        return None
    roots = [x for x in range(ell) if (x * x - t * x + p) % ell == 0]
    if len(roots) != 2:
        return None
    return IdealGenerator(ell, roots[0], roots[1])


def _int(a) -> int:
    return int(a.coeffs[0])


def curve_with_j(p: int, j: int, t: int) -> WeierstrassCurve:
    """The model with j-invariant j and trace t (j != 0, 1728)."""
    j %= p
    if j in (0, 1728 % p):
        raise ArithmeticDomainError("j = 0 and j = 1728 have extra automorphisms and are excluded")
    k = j * pow(1728 - j, -1, p) % p
    a4, a6 = 3 * k % p, 2 * k % p
    E = curve_over_fp(p, 0, 0, 0, a4, a6)
    n = count_points_naive(E)
    if n == p + 1 - t:
        return E
    if n != p + 1 + t:
        raise ArithmeticDomainError(f"j = {j} has trace {p + 1 - n}, not +-{t}")
    c = next(c for c in range(2, p) if legendre(c, p) == -1)
    E = curve_over_fp(p, 0, 0, 0, a4 * c * c, a6 * c ** 3)
    if count_points_naive(E) != p + 1 - t:
        raise ArithmeticDomainError("quadratic twist has the wrong point count")
    return E


def vertex(params: CmParams, j: int) -> CurveVertex:
    return CurveVertex(j % params.p, curve_with_j(params.p, j, params.t))


def base_vertex(params: CmParams) -> CurveVertex:
    return vertex(params, params.base_j)


def find_instance(p: int, t: int | None = None, ells: Iterable[int] | None = None,
                  budget: int = 2000, seed=0, max_degree: int = MAX_EXTENSION_DEGREE) -> CmParams:
    """Pick curves until the trace gives a squarefree discriminant.

    Split odd primes ell from ``ells`` (default 3..13) whose eigenvalues have
    multiplicative order at most ``max_degree`` become generators.
    """
    if not is_probable_prime(p) or p < 5:
        raise ArithmeticDomainError(f"p = {p} must be a prime >= 5")
    if p > 10 ** 4:
        raise ArithmeticDomainError("naive point counting limits p to 10^4")
    rng = make_rng(seed)
    ells = tuple(DEFAULT_ELLS if ells is None else ells)
    for _ in range(budget):
        a, b = rng.randrange(p), rng.randrange(p)
        if (4 * a ** 3 + 27 * b * b) % p == 0:
            continue
        E = curve_over_fp(p, 0, 0, 0, a, b)
        j = _int(E.j_invariant)
        if j in (0, 1728 % p):
            continue
        tr = p + 1 - count_points_naive(E)
        if t is not None and abs(tr) != abs(t):
            continue
        tr = tr if t is None else t
        D = tr * tr - 4 * p
        if tr % p == 0 or D in (-3, -4) or not is_squarefree(-D):
            if t is not None:
                raise ArithmeticDomainError(f"t = {t} gives a non-squarefree or degenerate discriminant {D}")
            continue
        gens = []
        for ell in ells:
            g = split_generator(p, tr, ell)
            if g is None:
                continue
            if max(multiplicative_order(g.lam, ell), multiplicative_order(g.mu, ell)) > max_degree:
                continue
            gens.append(g)
        if not gens:
            if t is not None:
                raise ArithmeticDomainError(f"no usable split primes among {ells}")
            continue
        return CmParams(p, tr, tuple(gens), j)
    raise BudgetExhausted(f"no suitable curve found in {budget} attempts")


# -- the ideal action ---------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _ext_field(p: int, r: int) -> ExtField:
    return ExtField(p, r)


def eigen_kernel(E: WeierstrassCurve, t: int, ell: int, lam: int, mu: int,
                 rng: random.Random, attempts: int = 200) -> tuple[WeierstrassCurve, list[CurvePoint]]:
    """The order-ell subgroup on which Frobenius acts as lam.

    It is defined over F_{p^r} with r the order of lam mod ell.  A random
    point of E(F_{p^r}) is pushed into the ell-torsion by the cofactor, then
    (Phi - mu) projects it onto the lam-eigenspace.
    """
    p = E.field.p
    r = multiplicative_order(lam % ell, ell)
    F = _ext_field(p, r)
    Er = E.base_change(F)
    n = extension_count(p, t, r)
    if n % ell:
        raise InconsistentInstanceError(f"ell = {ell} does not divide #E(F_p^{r}) = {n}")
    cof = n
    while cof % ell == 0:
        cof //= ell
    for _ in range(attempts):
        P = Er.scalar_mul(cof, Er.random_point(rng))
        if P.is_infinity:
            continue
        Q = Er.scalar_mul(ell, P)
        while not Q.is_infinity:
            P, Q = Q, Er.scalar_mul(ell, Q)
        K = Er.sub(Er.frobenius(P), Er.scalar_mul(mu, P))
        if K.is_infinity:
            continue
        if Er.frobenius(K) != Er.scalar_mul(lam, K):
            raise InconsistentInstanceError("projected point is not a Frobenius eigenvector")
        kernel = [INFINITY, K]
        for _ in range(ell - 2):
            kernel.append(Er.add(kernel[-1], K))
        return Er, kernel
    raise InconsistentInstanceError(f"no {lam}-eigenvector of order {ell} found")


@functools.lru_cache(maxsize=None)
def _step_j(p: int, t: int, j: int, ell: int, lam: int, mu: int) -> int:
    E = curve_with_j(p, j, t)
    rng = random.Random(hash((p, t, j, ell, lam)))
    Er, kernel = eigen_kernel(E, t, ell, lam, mu, rng)
    phi = velu_quotient(E, kernel, Er)
    if count_points_naive(phi.codomain) != p + 1 - t:
        raise InconsistentInstanceError("isogeny changed the point count")
    return _int(phi.codomain.j_invariant)


def apply_ideal_step(params: CmParams, v: CurveVertex | int, ell: int, eigenvalue: int) -> CurveVertex:
    """Apply (ell, Phi - eigenvalue) to a vertex."""
    gen = next((g for g in params.generators if g.ell == ell), None)
    if gen is None:
        raise ArithmeticDomainError(f"ell = {ell} is not a generator of this instance")
    eigenvalue %= ell
    if eigenvalue not in (gen.lam, gen.mu):
        raise ArithmeticDomainError(f"{eigenvalue} is not a Frobenius eigenvalue mod {ell}")
    other = gen.mu if eigenvalue == gen.lam else gen.lam
    j = v.j if isinstance(v, CurveVertex) else v
    return vertex(params, _step_j(params.p, params.t, j % params.p, ell, eigenvalue, other))


def step_j(params: CmParams, j: int, gen: IdealGenerator, sign: int) -> int:
    lam, mu = (gen.lam, gen.mu) if sign > 0 else (gen.mu, gen.lam)
    return _step_j(params.p, params.t, j, gen.ell, lam, mu)


def act_class_j(params: CmParams, j: int, e: tuple[int, ...]) -> int:
    if len(e) != len(params.generators):
        raise ArithmeticDomainError("exponent vector length does not match the generators")
    for gen, k in zip(params.generators, e):
        sign = 1 if k > 0 else -1
        for _ in range(abs(k)):
            j = step_j(params, j, gen, sign)
    return j


def act_class(params: CmParams, v: CurveVertex, e: tuple[int, ...]) -> CurveVertex:
    """Apply prod l_i^e_i, using the conjugate ideal for negative exponents."""
    return vertex(params, act_class_j(params, v.j, tuple(e)))


def class_number(disc: int) -> int:
    """Number of reduced primitive forms ax^2 + bxy + cy^2 of discriminant disc."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ArithmeticDomainError(f"{disc} is not a negative discriminant")
    if -disc > 10 ** 8:
        raise ArithmeticDomainError("|disc| exceeds the enumeration budget")
    h = 0
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def orbit_js(params: CmParams, start: int | None = None) -> dict[int, tuple[int, ...]]:
    """Breadth-first orbit; each j maps to a shortest exponent vector reaching it."""
    start = params.base_j if start is None else start
    r = len(params.generators)
    seen = {start: (0,) * r}
    queue = deque([start])
    while queue:
        j = queue.popleft()
        for i, gen in enumerate(params.generators):
            for sign in (1, -1):
                k = step_j(params, j, gen, sign)
                if k not in seen:
                    e = list(seen[j])
                    e[i] += sign
                    seen[k] = tuple(e)
                    queue.append(k)
    return seen


# -- the HHS wrapper ----------------------------------------------------------

class CmHhs(HhsInstance):
    """Pic(O) acting on the j-invariants of trace-t curves.

    Vectors are exponent tuples reduced to the canonical representative
    found by the orbit search, so equal classes have equal encodings.
    Points are j-invariants.  Sampling draws exponents uniformly from
    [-h, h), which pushes forward to the uniform law on Pic(O).
    """

    kind = "cm"

    def __init__(self, params: CmParams):
        self.params = params
        self.h = class_number(params.disc)
        self._canon = orbit_js(params)
        self.size = len(self._canon)
        if self.size != self.h:
            raise InconsistentInstanceError(
                f"orbit has {self.size} curves but h({params.disc}) = {self.h}; "
                "the generators do not generate the class group")

    def reduce(self, e) -> tuple[int, ...]:
        return self._canon[act_class_j(self.params, self.params.base_j, tuple(e))]

    def compose(self, g1, g2):
        return self.reduce(tuple(a + b for a, b in zip(g1, g2)))

    def invert(self, g):
        return self.reduce(tuple(-a for a in g))

    def identity(self):
        return (0,) * len(self.params.generators)

    def sample_vector(self, rng):
        h = self.h
        return self.reduce(tuple(rng.randrange(-h, h) for _ in self.params.generators))

    def act(self, g, h):
        return act_class_j(self.params, h, tuple(g))

    def base_point(self):
        return self.params.base_j

    def check_vector(self, g):
        if not isinstance(g, tuple) or len(g) != len(self.params.generators) or not all(
                isinstance(a, int) for a in g):
            raise ArithmeticDomainError(f"malformed exponent vector {g!r}")
        return self.reduce(g)

    def check_point(self, h):
        if h not in self._canon:
            raise ArithmeticDomainError(f"j = {h!r} is not in the orbit")
        return h

    def enumerable(self):
        return True

    def vectors(self):
        return iter(self._canon.values())

    def points(self):
        return list(self._canon)

    def sampler_distribution(self, box_limit: int = 10 ** 5):
        r = len(self.params.generators)
        box = 2 * self.h
        if box ** r > box_limit:
            raise NotImplementedError("exponent box too large to enumerate")
        law: dict = {}
        w = Fraction(1, box ** r)
        for e in itertools.product(range(-self.h, self.h), repeat=r):
            g = self.reduce(e)
            law[g] = law.get(g, Fraction(0)) + w
        return law

    def encode_vector(self, g):
        return list(g)

    def decode_vector(self, data):
        return self.check_vector(tuple(int(a) for a in data))

    def encode_point(self, h):
        return hex(h)

    def decode_point(self, data):
        return self.check_point(int(data, 16))

    def describe(self):
        return {"type": self.kind, "p": self.params.p, "t": self.params.t,
                "ells": list(self.params.ells)}


def cm_hhs(params: CmParams) -> CmHhs:
    return CmHhs(params)


# -- Cayley graph -------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    ell: int
    eigenvalue: int


@dataclass
class IsogenyGraph:
    vertices: list[int]
    edges: list[Edge]
    degree: int

    def index(self) -> dict[int, int]:
        return {j: i for i, j in enumerate(self.vertices)}

    def adjacency(self) -> np.ndarray:
        idx = self.index()
        n = len(self.vertices)
        M = np.zeros((n, n), dtype=np.int64)
        for e in self.edges:
            M[idx[e.src], idx[e.dst]] += 1
            M[idx[e.dst], idx[e.src]] += 1
        return M

    def is_regular(self) -> bool:
        return bool(np.all(self.adjacency().sum(axis=1) == self.degree))

    def is_connected(self) -> bool:
        M = self.adjacency()
        n = len(self.vertices)
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for k in np.nonzero(M[i])[0]:
                if int(k) not in seen:
                    seen.add(int(k))
                    queue.append(int(k))
        return len(seen) == n

    def to_dot(self) -> str:
        lines = ["graph isogenies {"]
        for j in self.vertices:
            lines.append(f'  "{j}";')
        for e in self.edges:
            lines.append(f'  "{e.src}" -- "{e.dst}" [label="{e.ell}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "degree": self.degree,
                "edges": [{"src": e.src, "dst": e.dst, "ell": e.ell, "eigenvalue": e.eigenvalue}
                          for e in self.edges]}


def build_graph(params: CmParams) -> IsogenyGraph:
    """One undirected edge per vertex per generator: j -- l.j.

    The conjugate ideal walks the same edge backwards, so every generator
    contributes 2 to the degree.
    """
    verts = sorted(orbit_js(params))
    edges = []
    for j in verts:
        for gen in params.generators:
            k = step_j(params, j, gen, 1)
            if step_j(params, k, gen, -1) != j:
                raise InconsistentInstanceError("conjugate step does not reverse the edge")
            edges.append(Edge(j, k, gen.ell, gen.lam))
    return IsogenyGraph(verts, edges, 2 * len(params.generators))


def spectrum(graph_or_matrix) -> np.ndarray:
    """Eigenvalues of the symmetric adjacency matrix, in decreasing order."""
    M = graph_or_matrix.adjacency() if isinstance(graph_or_matrix, IsogenyGraph) else graph_or_matrix
    M = np.asarray(M, dtype=float)
    if M.shape[0] > 2000:
        raise ArithmeticDomainError("graph too large for a dense eigensolver")
    if not np.array_equal(M, M.T):
        raise ArithmeticDomainError("adjacency matrix is not symmetric")
    return np.sort(np.linalg.eigvalsh(M))[::-1]


def uniform_residual(graph: IsogenyGraph) -> float:
    """|M u - k u| for the uniform vector u."""
    M = graph.adjacency().astype(float)
    u = np.ones(M.shape[0]) / math.sqrt(M.shape[0])
    return float(np.linalg.norm(M @ u - graph.degree * u))


def ramanujan_bound(k: int) -> float:
    return 2 * math.sqrt(k - 1)


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[float, ...]
    degree: int
    second: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.second <= self.bound + 1e-9

    def to_json(self) -> dict:
        return {"eigenvalues": list(self.eigenvalues), "degree": self.degree,
                "second": self.second, "ramanujan_bound": self.bound,
                "within_bound": self.within_bound}


def spectrum_report(graph: IsogenyGraph) -> SpectrumReport:
    ev = spectrum(graph)
    nontrivial = [abs(x) for x in ev[1:]]
    second = max(nontrivial) if nontrivial else 0.0
    return SpectrumReport(tuple(float(x) for x in ev), graph.degree, float(second),
                          ramanujan_bound(graph.degree))


# -- hash walk ----------------------------------------------------------------

def _letters(params: CmParams, message: bytes) -> list[int]:
    """Each byte becomes a fixed number of base-k digits, k = 2 * #generators."""
    k = 2 * len(params.generators)
    width = 1
    while k ** width < 256:
        width += 1
    out = []
    for byte in message:
        digits = []
        for _ in range(width):
            byte, d = divmod(byte, k)
            digits.append(d)
        out.extend(reversed(digits))
    return out


def hash_walk(params: CmParams, origin: int | CurveVertex, message: bytes) -> int:
    """Walk from ``origin``; letter 2i is l_i and letter 2i + 1 its conjugate."""
    j = origin.j if isinstance(origin, CurveVertex) else origin
    for letter in _letters(params, message):
        gen = params.generators[letter // 2]
        j = step_j(params, j, gen, 1 if letter % 2 == 0 else -1)
    return j


def find_collision(params: CmParams, origin: int, max_len: int = 2) -> tuple[bytes, bytes]:
    """Two distinct messages with the same hash, by exhaustive search."""
    seen: dict[int, bytes] = {}
    for n in range(max_len + 1):
        for msg in itertools.product(range(256), repeat=n):
            m = bytes(msg)
            h = hash_walk(params, origin, m)
            if h in seen:
                return seen[h], m
            seen[h] = m
    raise ArithmeticDomainError("no collision among the searched messages")
