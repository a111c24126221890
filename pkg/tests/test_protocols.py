import json
import random
from fractions import Fraction

import pytest

from hhskit.hhs import affine_hhs, complete_parallelogram, dl_hhs
from hhskit.protocols import (
    Channel, CheatingProver, DhmTranscript, Message, Prover, SchnorrRound,
    alice_finish, alice_start, bob_respond, dhm_run, honest_transcript_distribution,
    schnorr_identify, schnorr_keygen, schnorr_round, schnorr_simulate, schnorr_verify,
    simulated_transcript_distribution, transcript_json,
)


@pytest.fixture(params=["affine", "dlog"])
def inst(request):
    return affine_hhs(5, 2) if request.param == "affine" else dl_hhs(101)


def test_dhm_agreement_many_seeds(inst):
    for s in range(100):
        assert dhm_run(inst, s, 1000 + s).agreed


def test_dhm_affine_key_is_sum():
    inst = affine_hhs(5, 2)
    tr = dhm_run(inst, 1, 2)
    rng_a, rng_b = random.Random(1), random.Random(2)
    h0 = inst.sample_point(rng_a)
    g1 = inst.sample_vector(rng_a)
    g2 = inst.sample_vector(rng_b)
    assert tr.h0 == h0
    assert tr.key_alice == tuple((a + b + c) % 5 for a, b, c in zip(h0, g1, g2))


def test_eavesdropper_completes_parallelogram():
    inst = dl_hhs(211, 35)
    for s in range(10):
        tr = dhm_run(inst, s, s + 50)
        assert complete_parallelogram(inst, tr.h0, tr.h1, tr.h2) == tr.key_bob


def test_parties_share_only_messages():
    inst = dl_hhs(101)
    alice, offer = alice_start(inst, random.Random(1))
    wire = json.loads(json.dumps(offer.to_json()))
    bob, reply = bob_respond(inst, Message.from_json(wire), random.Random(2))
    alice = alice_finish(inst, alice, Message.from_json(json.loads(json.dumps(reply.to_json()))))
    assert alice.key == bob.key


def test_transcript_json_round_trip(inst):
    tr = dhm_run(inst, 5, 6)
    data = json.loads(json.dumps(tr.to_json(inst)))
    back = DhmTranscript.from_json(inst, data)
    assert back == tr
    assert back.messages == tr.messages


def test_keygen():
    inst = dl_hhs(101)
    kp = schnorr_keygen(inst, 3, secret=inst.identity())
    assert kp.public.h_a == kp.public.h0
    assert schnorr_keygen(inst, 3) == schnorr_keygen(inst, 3)
    kp = schnorr_keygen(inst, 4)
    assert kp.public.h_a in inst.points()
    assert inst.act(kp.secret, kp.public.h0) == kp.public.h_a


def test_honest_rounds_verify(inst):
    kp = schnorr_keygen(inst, 1)
    for s in range(50):
        for eps in (0, 1):
            r = schnorr_round(inst, kp, s, eps)
            assert r.verdict
            g_r = inst.sample_vector(random.Random(s))
            assert r.commitment == inst.act(g_r, kp.public.h_a)
            assert r.response == (g_r if eps == 0 else inst.compose(g_r, kp.secret))


def test_answer0_cheater_caught_on_one():
    inst = dl_hhs(101)
    kp = schnorr_keygen(inst, 1)
    cheat = CheatingProver(inst, kp.public, "answer0")
    for s in range(20):
        assert schnorr_round(inst, kp, s, 0, cheat).verdict
        assert not schnorr_round(inst, kp, s, 1, cheat).verdict


def test_identify_honest_and_cheater():
    inst = dl_hhs(1009)
    kp = schnorr_keygen(inst, 2)
    honest = Prover(inst, kp.public, kp.secret)
    assert schnorr_identify(inst, kp.public, honest, 20, 1, 2).accepted
    cheat = CheatingProver(inst, kp.public)
    accepted = sum(schnorr_identify(inst, kp.public, cheat, 20, s, 10 ** 6 + s).accepted
                   for s in range(2000))
    assert accepted == 0


def test_single_round_cheater_rate():
    inst = dl_hhs(1009)
    kp = schnorr_keygen(inst, 2)
    cheat = CheatingProver(inst, kp.public)
    acc = sum(schnorr_identify(inst, kp.public, cheat, 1, s, 10 ** 6 + s).accepted
              for s in range(2000))
    assert 0.45 <= acc / 2000 <= 0.55


def test_wrong_secret_soundness():
    inst = dl_hhs(1009)
    kp = schnorr_keygen(inst, 2)
    wrong = [g for g in inst.vectors() if g != kp.secret][:50]
    for g in wrong:
        prover = Prover(inst, kp.public, g)
        outcomes = [schnorr_round(inst, kp, 7, eps, prover).verdict for eps in (0, 1)]
        assert outcomes.count(False) >= 1


def test_simulator():
    inst = dl_hhs(101)
    kp = schnorr_keygen(inst, 1)
    r = schnorr_simulate(inst, kp.public, 5)
    assert schnorr_verify(inst, kp.public, r.commitment, r.challenge, r.response)
    assert schnorr_simulate(inst, kp.public, 5) == r


@pytest.mark.parametrize("make", [lambda: dl_hhs(11), lambda: dl_hhs(23), lambda: affine_hhs(3, 2),
                                  lambda: affine_hhs(5, 1)])
def test_simulated_distribution_equals_honest(make):
    inst = make()
    assert inst.size <= 20
    kp = schnorr_keygen(inst, 3)
    honest = honest_transcript_distribution(inst, kp)
    sim = simulated_transcript_distribution(inst, kp.public)
    assert honest == sim
    assert sum(honest.values()) == Fraction(1)


def test_round_json_and_channel():
    inst = affine_hhs(5, 2)
    kp = schnorr_keygen(inst, 1)
    ch = Channel()
    res = schnorr_identify(inst, kp.public, Prover(inst, kp.public, kp.secret), 3, 1, 2, ch)
    assert len(ch.log) == 9
    data = json.loads(transcript_json(inst, ch))
    assert [m["type"] for m in data[:3]] == ["schnorr/commit", "schnorr/challenge", "schnorr/response"]
    r = res.rounds[0]
    assert SchnorrRound.from_json(inst, json.loads(json.dumps(r.to_json(inst)))) == r


def test_bad_challenge_rejected():
    inst = affine_hhs(5, 2)
    kp = schnorr_keygen(inst, 1)
    with pytest.raises(ValueError):
        schnorr_round(inst, kp, 1, 2)
    with pytest.raises(ValueError):
        CheatingProver(inst, kp.public, "lucky")
