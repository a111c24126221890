"""Acceptance suite: one test per criterion, each timed against its budget.

Every test records a PASS/FAIL line; conftest prints them after the run,
and ``python tests/test_acceptance.py`` prints them directly.
"""

import itertools
import math
import random
import sys
import time

import numpy as np

from hhskit.arith import cyclotomic_value, factorize, is_probable_prime, multiplicative_order
from hhskit.attacks import AnomalousInstance, RieselInstance, riesel_dlog, sass_dlog
from hhskit.elliptic import count_points_naive, curve_over_fp
from hhskit.hhs import (
    affine_hhs, bsgs_dlog, complete_parallelogram, dl_hhs, exhaustive_dlog, modular_group,
    pohlig_hellman, vector_between_bruteforce, verify_parallelogram,
)
from hhskit.isogeny import (
    build_graph, class_number, cm_hhs, curve_with_j, find_collision, find_instance,
    hash_walk, orbit_js, ramanujan_bound, spectrum, spectrum_report, step_j, uniform_residual,
)
from hhskit.padic import PadicNumber, padic_exp, padic_log
from hhskit.protocols import (
    CheatingProver, Prover, dhm_run, honest_transcript_distribution, schnorr_identify,
    schnorr_keygen, schnorr_round, simulated_transcript_distribution,
)
from hhskit.torus import (
    TorusParams, all_points, exp_x, identity, mul_u, mul_xy, t2_order, td_subgroup, u_from_xy,
)

RESULTS: dict[int, str] = {}


def record(number: int, title: str, budget: float | None, check):
    """Run ``check`` (returns a detail string, raises on failure) and log a line."""
    start = time.perf_counter()
    detail, ok = "", False
    try:
        detail = check() or ""
        ok = True
    except AssertionError as exc:
        detail = f"assertion failed: {exc}"
    except Exception as exc:  # still report a line for unexpected errors
        detail = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if ok and budget is not None and elapsed >= budget:
        ok = False
        detail += f"; over budget {budget:g} s"
    RESULTS[number] = (f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} "
                       f"({elapsed:.2f} s) {detail}").rstrip()
    assert ok, RESULTS[number]


# 1 --------------------------------------------------------------------------

def _riesel():
    res = riesel_dlog(RieselInstance(3, 10, 59045, 24731))
    assert res.log == 5013, res.log
    assert pow(59045, 5013, 3 ** 10) == 24731
    assert res.L % 3 ** 9 == 2506, res.L
    return f"log = {res.log}, L = {res.L}"


def test_criterion_1_riesel():
    record(1, "Riesel golden instance", 1.0, _riesel)


# 2 --------------------------------------------------------------------------

def _sass():
    p = 655387895585476301924777
    E = curve_over_fp(p, 1, 0, 0, 114287067913850793676921, 349073807889941681395769)
    P = E.point(170219448, 14643735815400225272219)
    Q = E.point(71434243993450257115004, 316317604915944437378529)
    res = sass_dlog(AnomalousInstance(E, P, Q))
    c = res.checks
    assert res.log == 123456789, res.log
    assert c["hensel_digit_y_P"] == 241062303587335366096866
    assert (c["valuation_x_pP"], c["valuation_y_pP"]) == (-2, -3)
    assert c["log_pQ_leading_digit"] == 169836480309236709243708
    assert c["mP_equals_Q"]
    return f"log = {res.log}"


def test_criterion_2_sass():
    record(2, "anomalous-curve golden instance", 10.0, _sass)


# 3 --------------------------------------------------------------------------

def _torus():
    primes = [q for q in range(3, 102) if is_probable_prime(q)]
    for q in primes:
        prm = TorusParams.create(q)
        assert t2_order(prm) == q + 1, q
    pairs = 0
    for q in [q for q in range(3, 32) if q % 2 and len(factorize(q).factors) == 1]:
        prm = TorusParams.create(q)
        pts = all_points(prm)
        for a, b in itertools.product(pts, repeat=2):
            assert mul_u(u_from_xy(a, prm), u_from_xy(b, prm), prm) == u_from_xy(mul_xy(a, b, prm), prm)
            pairs += 1
    for q in primes:
        prm = TorusParams.create(q)
        for P in all_points(prm)[:: max(1, q // 8)]:
            acc = identity(prm)
            for k in range(51):
                assert exp_x(P.x, k, prm) == acc.x, (q, k)
                acc = mul_xy(acc, P, prm)
    for q in (3, 5, 7, 9):
        for d in (1, 2, 3, 4, 6):
            assert td_subgroup(q, d).cardinality == cyclotomic_value(d, q), (q, d)
    return f"{len(primes)} fields, {pairs} u-law pairs"


def test_criterion_3_torus():
    record(3, "torus suite", 30.0, _torus)


# 4 --------------------------------------------------------------------------

def _padic():
    N = 10
    for p in (3, 5, 7):
        rng = random.Random(p)
        for _ in range(100):
            u = PadicNumber.from_int(1 + p * rng.randrange(p ** (N - 1)), p, N)
            v = PadicNumber.from_int(1 + p * rng.randrange(p ** (N - 1)), p, N)
            z = PadicNumber.from_int(p * rng.randrange(1, p ** (N - 1)), p, N)
            assert padic_log(u * v, N) == padic_log(u, N) + padic_log(v, N)
            assert padic_exp(padic_log(u, N), N) == u
            assert padic_log(padic_exp(z, N), N) == z
            w = PadicNumber.from_int(p * rng.randrange(1, p ** (N - 1)), p, N)
            assert padic_exp(z + w, N) == padic_exp(z, N) * padic_exp(w, N)
    return "p in {3, 5, 7}, 100 elements each"


def test_criterion_4_padic():
    record(4, "p-adic log/exp", None, _padic)


# 5 --------------------------------------------------------------------------

def _protocols(cm101_hhs):
    families = [affine_hhs(5, 2), dl_hhs(1009), cm101_hhs]
    for inst in families:
        for s in range(100):
            assert dhm_run(inst, s, 10 ** 4 + s).agreed
    inst = dl_hhs(1009)
    kp = schnorr_keygen(inst, 1)
    honest = Prover(inst, kp.public, kp.secret)
    acc = schnorr_identify(inst, kp.public, honest, 1000, 2, 3)
    assert acc.accepted and all(r.verdict for r in acc.rounds)
    cheat = CheatingProver(inst, kp.public)
    wins = sum(schnorr_identify(inst, kp.public, cheat, 1, s, 10 ** 6 + s).accepted for s in range(2000))
    rate = wins / 2000
    assert 0.45 <= rate <= 0.55, rate
    small = dl_hhs(23)
    assert small.size <= 20
    kp_small = schnorr_keygen(small, 4)
    assert honest_transcript_distribution(small, kp_small) == \
        simulated_transcript_distribution(small, kp_small.public)
    # Problems 4 to 6 against brute force over the group
    rng = random.Random(5)
    for inst in (affine_hhs(3, 2), dl_hhs(47), cm101_hhs):
        pts = list(inst.points())
        vecs = list(inst.vectors())
        for _ in range(10):
            h1, h2, h3 = (rng.choice(pts) for _ in range(3))
            g = vector_between_bruteforce(inst, h1, h2)
            assert [v for v in vecs if inst.act(v, h1) == h2] == [g]
            h4 = complete_parallelogram(inst, h1, h2, h3)
            assert h4 == inst.act(g, h3)
            for h in pts:
                assert verify_parallelogram(inst, h1, h2, h3, h) == (h == h4)
    return f"cheater rate {rate:.3f}"


def test_criterion_5_protocols(cm101_hhs):
    record(5, "protocols", None, lambda: _protocols(cm101_hhs))


# 6 --------------------------------------------------------------------------

def _cm_suite(params):
    orbit = sorted(orbit_js(params))
    h = class_number(params.disc)
    assert len(orbit) == h, (params.p, len(orbit), h)
    n = params.curve_order
    for j in orbit:
        for gen in params.generators:
            k = step_j(params, j, gen, 1)
            assert step_j(params, k, gen, -1) == j
            assert count_points_naive(curve_with_j(params.p, k, params.t)) == n
        for g1, g2 in itertools.combinations(params.generators, 2):
            assert step_j(params, step_j(params, j, g1, 1), g2, 1) == \
                step_j(params, step_j(params, j, g2, 1), g1, 1)
    return h


def _cm():
    p101 = find_instance(101, t=3, ells=(3, 7))
    assert p101.disc == -395 and p101.curve_order == 99
    assert _cm_suite(p101) == 8
    sizes = []
    for p, seed in ((307, 2), (401, 2), (499, 1)):
        params = find_instance(p, seed=seed)
        assert p <= 500
        sizes.append(f"p={p}: h={_cm_suite(params)}")
    return "p=101: h=8; " + ", ".join(sizes)


def test_criterion_6_cm_action():
    record(6, "class-group action", 60.0, _cm)


# 7 --------------------------------------------------------------------------

def _graph():
    notes = []
    for params in (find_instance(101, t=3, ells=(3, 7)), find_instance(307, seed=2),
                   find_instance(401, seed=2)):
        G = build_graph(params)
        assert G.is_regular() and G.is_connected()
        ev = spectrum(G)
        assert abs(ev[0] - G.degree) < 1e-9
        assert uniform_residual(G) < 1e-9
        rep = spectrum_report(G)
        notes.append(f"p={params.p}: second={rep.second:.3f} vs {rep.bound:.3f}")
    K5 = np.ones((5, 5)) - np.eye(5)
    assert np.allclose(spectrum(K5), [4, -1, -1, -1, -1], atol=1e-12)
    assert math.isclose(ramanujan_bound(4), 2 * math.sqrt(3))
    params = find_instance(101, t=3, ells=(3, 7))
    orbit = orbit_js(params)
    for msg in (b"", b"abc", bytes(range(32))):
        h = hash_walk(params, params.base_j, msg)
        assert h == hash_walk(params, params.base_j, msg) and h in orbit
    m1, m2 = find_collision(params, params.base_j)
    assert m1 != m2 and hash_walk(params, params.base_j, m1) == hash_walk(params, params.base_j, m2)
    return "; ".join(notes)


def test_criterion_7_graph():
    record(7, "graph, spectrum and hash", None, _graph)


# 8 --------------------------------------------------------------------------

def _solvers():
    rng = random.Random(8)
    done = 0
    while done < 100:
        p = rng.randrange(3, 10 ** 6)
        if not is_probable_prime(p):
            continue
        c = rng.randrange(2, p)
        n = multiplicative_order(c, p)
        k = rng.randrange(n)
        d = pow(c, k, p)
        ops = modular_group(p)
        assert exhaustive_dlog(c, d, n, ops) == k
        assert bsgs_dlog(c, d, n, ops) == k
        assert pohlig_hellman(c, d, n, factorize(n), ops) == k
        done += 1
    return "100 instances"


def test_criterion_8_solvers():
    record(8, "generic solvers", None, _solvers)


if __name__ == "__main__":
    from hhskit.isogeny import cm_hhs as _cm_hhs
    checks = [test_criterion_1_riesel, test_criterion_2_sass, test_criterion_3_torus,
              test_criterion_4_padic, lambda: test_criterion_5_protocols(
                  _cm_hhs(find_instance(101, t=3, ells=(3, 7)))),
              test_criterion_6_cm_action, test_criterion_7_graph, test_criterion_8_solvers]
    failed = 0
    for i, fn in enumerate(checks, 1):
        try:
            fn()
        except AssertionError:
            failed += 1
        print(RESULTS[i])
    sys.exit(1 if failed else 0)
