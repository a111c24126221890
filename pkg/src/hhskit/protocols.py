"""Key exchange and zero-knowledge identification over any HHS instance.

Each party is an immutable state value; a transition takes the state and an
incoming message and returns the next state plus the outgoing message.
Parties share nothing except the message values, so they can run in
separate threads or processes.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

from .hhs import HhsInstance, Point, Vector, make_rng


@dataclass(frozen=True)
class Message:
    sender: str
    recipient: str
    type: str
    payload: dict

    def to_json(self) -> dict:
        return {"from": self.sender, "to": self.recipient, "type": self.type,
                "payload": self.payload}

    @classmethod
    def from_json(cls, data: dict) -> "Message":
        return cls(data["from"], data["to"], data["type"], data["payload"])


class Channel:
    """In-process channel that records every message it carries."""

    def __init__(self):
        self.log: list[Message] = []

    def send(self, message: Message) -> Message:
        self.log.append(message)
        return message

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self.log]


# -- Diffie-Hellman-Merkle ---------------------------------------------------

@dataclass(frozen=True)
class AliceKeyex:
    g1: Vector
    h0: Point
    h1: Point
    key: Point | None = None


@dataclass(frozen=True)
class BobKeyex:
    g2: Vector
    h2: Point
    key: Point


def alice_start(instance: HhsInstance, rng: random.Random) -> tuple[AliceKeyex, Message]:
    h0 = instance.sample_point(rng)
    g1 = instance.sample_vector(rng)
    h1 = instance.act(g1, h0)
    msg = Message("alice", "bob", "keyex/offer",
                  {"h0": instance.encode_point(h0), "h1": instance.encode_point(h1)})
    return AliceKeyex(g1, h0, h1), msg


def bob_respond(instance: HhsInstance, offer: Message,
                rng: random.Random) -> tuple[BobKeyex, Message]:
    h0 = instance.decode_point(offer.payload["h0"])
    h1 = instance.decode_point(offer.payload["h1"])
    g2 = instance.sample_vector(rng)
    h2 = instance.act(g2, h0)
    key = instance.act(g2, h1)
    msg = Message("bob", "alice", "keyex/reply", {"h2": instance.encode_point(h2)})
    return BobKeyex(g2, h2, key), msg


def alice_finish(instance: HhsInstance, state: AliceKeyex, reply: Message) -> AliceKeyex:
    h2 = instance.decode_point(reply.payload["h2"])
    return replace(state, key=instance.act(state.g1, h2))


@dataclass(frozen=True)
class DhmTranscript:
    h0: Point
    h1: Point
    h2: Point
    key_alice: Point
    key_bob: Point
    messages: tuple[Message, ...] = field(default=(), compare=False)

    @property
    def agreed(self) -> bool:
        return self.key_alice == self.key_bob

    def to_json(self, instance: HhsInstance) -> dict:
        enc = instance.encode_point
        return {
            "instance": instance.describe(),
            "messages": [m.to_json() for m in self.messages],
            "h0": enc(self.h0), "h1": enc(self.h1), "h2": enc(self.h2),
            "key_alice": enc(self.key_alice), "key_bob": enc(self.key_bob),
        }

    @classmethod
    def from_json(cls, instance: HhsInstance, data: dict) -> "DhmTranscript":
        dec = instance.decode_point
        return cls(dec(data["h0"]), dec(data["h1"]), dec(data["h2"]),
                   dec(data["key_alice"]), dec(data["key_bob"]),
                   tuple(Message.from_json(m) for m in data["messages"]))


def dhm_run(instance: HhsInstance, seed_alice, seed_bob) -> DhmTranscript:
    """Run the three steps of the exchange over an in-process channel."""
    rng_a, rng_b = make_rng(seed_alice), make_rng(seed_bob)
    channel = Channel()
    alice, offer = alice_start(instance, rng_a)
    channel.send(offer)
    bob, reply = bob_respond(instance, offer, rng_b)
    channel.send(reply)
    alice = alice_finish(instance, alice, reply)
    return DhmTranscript(alice.h0, alice.h1, bob.h2, alice.key, bob.key, tuple(channel.log))


# -- Schnorr identification --------------------------------------------------

@dataclass(frozen=True)
class PublicKey:
    h0: Point
    h_a: Point


@dataclass(frozen=True)
class SchnorrKeypair:
    public: PublicKey
    secret: Vector


@dataclass(frozen=True)
class SchnorrRound:
    commitment: Point
    challenge: int
    response: Vector
    verdict: bool

    def to_json(self, instance: HhsInstance) -> dict:
        return {"commitment": instance.encode_point(self.commitment),
                "challenge": self.challenge,
                "response": instance.encode_vector(self.response),
                "verdict": self.verdict}

    @classmethod
    def from_json(cls, instance: HhsInstance, data: dict) -> "SchnorrRound":
        return cls(instance.decode_point(data["commitment"]), data["challenge"],
                   instance.decode_vector(data["response"]), data["verdict"])


def schnorr_keygen(instance: HhsInstance, seed, secret: Vector | None = None) -> SchnorrKeypair:
    rng = make_rng(seed)
    h0 = instance.sample_point(rng)
    g_a = instance.sample_vector(rng) if secret is None else secret
    return SchnorrKeypair(PublicKey(h0, instance.act(g_a, h0)), g_a)


def schnorr_verify(instance: HhsInstance, public: PublicKey, commitment: Point,
                   challenge: int, response: Vector) -> bool:
    if challenge == 0:
        return instance.points_equal(instance.act(response, public.h_a), commitment)
    if challenge == 1:
        return instance.points_equal(instance.act(response, public.h0), commitment)
    raise ValueError(f"challenge must be 0 or 1, got {challenge!r}")


class Prover:
    """Honest prover: commits to g_r.h_A, answers g_r or g_r*g_A."""

    def __init__(self, instance: HhsInstance, public: PublicKey, secret: Vector | None):
        self.instance = instance
        self.public = public
        self.secret = secret

    def commit(self, rng: random.Random) -> tuple[Any, Point]:
        g_r = self.instance.sample_vector(rng)
        return g_r, self.instance.act(g_r, self.public.h_a)

    def respond(self, state: Any, challenge: int) -> Vector:
        if challenge == 0:
            return state
        return self.instance.compose(state, self.secret)


class CheatingProver(Prover):
    """Prover without the secret.

    ``strategy`` picks which challenge the commitment is prepared for:
    "answer0" and "answer1" always prepare the same one, "guess" flips a
    coin each round.  Preparing for 1 means committing to g_r.h_0.
    """

    def __init__(self, instance, public, strategy: str = "guess"):
        super().__init__(instance, public, None)
        if strategy not in ("guess", "answer0", "answer1"):
            raise ValueError(f"unknown cheating strategy {strategy!r}")
        self.strategy = strategy

    def commit(self, rng):
        g_r = self.instance.sample_vector(rng)
        target = {"answer0": 0, "answer1": 1}.get(self.strategy)
        if target is None:
            target = rng.randrange(2)
        base = self.public.h_a if target == 0 else self.public.h0
        return g_r, self.instance.act(g_r, base)

    def respond(self, state, challenge):
        return state


def schnorr_round(instance: HhsInstance, keypair: SchnorrKeypair, prover_seed,
                  challenge: int, prover: Prover | None = None) -> SchnorrRound:
    if challenge not in (0, 1):
        raise ValueError(f"challenge must be 0 or 1, got {challenge!r}")
    prover = prover or Prover(instance, keypair.public, keypair.secret)
    state, commitment = prover.commit(make_rng(prover_seed))
    response = prover.respond(state, challenge)
    verdict = schnorr_verify(instance, keypair.public, commitment, challenge, response)
    return SchnorrRound(commitment, challenge, response, verdict)


@dataclass(frozen=True)
class IdentificationResult:
    accepted: bool
    rounds: tuple[SchnorrRound, ...]

    def to_json(self, instance: HhsInstance) -> dict:
        return {"accepted": self.accepted,
                "rounds": [r.to_json(instance) for r in self.rounds]}


def schnorr_identify(instance: HhsInstance, public: PublicKey, prover: Prover,
                     rounds: int, prover_seed, verifier_seed,
                     channel: Channel | None = None) -> IdentificationResult:
    """Repeat the round t times; accept iff every round verifies.

    ``verifier_seed`` may be a ``random.Random`` such as ``SystemRandom``
    when real entropy is wanted for the challenges.
    """
    if rounds < 1:
        raise ValueError("at least one round is required")
    rng_p, rng_v = make_rng(prover_seed), make_rng(verifier_seed)
    out = []
    for _ in range(rounds):
        state, commitment = prover.commit(rng_p)
        challenge = rng_v.randrange(2)
        response = prover.respond(state, challenge)
        if channel is not None:
            channel.send(Message("alice", "bob", "schnorr/commit",
                                 {"h_r": instance.encode_point(commitment)}))
            channel.send(Message("bob", "alice", "schnorr/challenge", {"epsilon": challenge}))
            channel.send(Message("alice", "bob", "schnorr/response",
                                 {"g_p": instance.encode_vector(response)}))
        verdict = schnorr_verify(instance, public, commitment, challenge, response)
        out.append(SchnorrRound(commitment, challenge, response, verdict))
    return IdentificationResult(all(r.verdict for r in out), tuple(out))


def schnorr_simulate(instance: HhsInstance, public: PublicKey, seed) -> SchnorrRound:
    """Accepting transcript produced without the secret.

    The challenge and the response are drawn first; the commitment is then
    the only point that makes the verification equation hold.
    """
    rng = make_rng(seed)
    challenge = rng.randrange(2)
    response = instance.sample_vector(rng)
    base = public.h_a if challenge == 0 else public.h0
    commitment = instance.act(response, base)
    return SchnorrRound(commitment, challenge, response, True)


def honest_transcript_distribution(instance: HhsInstance,
                                   keypair: SchnorrKeypair) -> Counter:
    """Exact law of (h_r, eps, g_p) for an honest prover and a fair coin."""
    law: Counter = Counter()
    prover = Prover(instance, keypair.public, keypair.secret)
    for g_r, w in instance.sampler_distribution().items():
        commitment = instance.act(g_r, keypair.public.h_a)
        for eps in (0, 1):
            law[(commitment, eps, prover.respond(g_r, eps))] += w * Fraction(1, 2)
    return law


def simulated_transcript_distribution(instance: HhsInstance, public: PublicKey) -> Counter:
    law: Counter = Counter()
    for g_p, w in instance.sampler_distribution().items():
        for eps in (0, 1):
            base = public.h_a if eps == 0 else public.h0
            law[(instance.act(g_p, base), eps, g_p)] += w * Fraction(1, 2)
    return law


def transcript_json(instance: HhsInstance, channel: Channel) -> str:
    return json.dumps(channel.to_json(), sort_keys=True)
