"""In-process SCMS provisioning simulator (EE, RA, ACA).

Each actor keeps an append-only log of every value it generates, receives or
derives. Privacy checks are exact membership tests of the protocol's secrets
against those logs.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any

from . import ecc_bke, rsa_bke
from .curves import Point, get_curve
from .ec_crypto import EcKeyPair
from .errors import BKEError, FlowError
from .serialization import dumps, hexbytes, hexint

SCHEMES = ("ECC", "RSA")
STRENGTHS = (80, 112, 128, 192, 256)

# Messages each scheme sends, in order: (step, sender, receiver, per_index).
STEP_TABLE = {
    "ECC": [("2", "EE", "RA", False), ("4", "RA", "ACA", True), ("6", "ACA", "RA", True), ("7", "RA", "EE", True)],
    "RSA": [("2", "EE", "RA", False), ("4", "RA", "ACA", False)],
}

# Values each actor must never see in the clear.
FORBIDDEN = {
    "RSA": {"RA": ("beta", "s", "phi", "rho", "zeta"), "ACA": ("alpha", "s", "phi", "rho", "zeta")},
    "ECC": {"RA": ("c", "C"), "ACA": ("ck", "ek", "a", "p")},
}

FAULTS = ("alpha-to-aca", "c-to-ra")


@dataclass(frozen=True)
class Observation:
    step: str
    label: str
    value: Any
    kind: str  # generated | received | derived


@dataclass
class ActorState:
    role: str
    keypair: Any = None
    observed: list = field(default_factory=list)

    def note(self, step, label, value, kind):
        if isinstance(value, (list, tuple)) and not isinstance(value, Point):
            for v in value:
                self.observed.append(Observation(step, label, v, kind))
        else:
            self.observed.append(Observation(step, label, value, kind))

    def values(self, label, kind=None):
        return [o.value for o in self.observed if o.label == label and (kind is None or o.kind == kind)]


@dataclass(frozen=True)
class Message:
    step: str
    sender: str
    receiver: str
    payload: dict


@dataclass
class FlowTranscript:
    scheme: str
    strength: int
    batch: int
    parameters: dict
    messages: list
    outcome: list
    actors: dict = field(repr=False, default_factory=dict)

    def to_json(self) -> dict:
        """Wire view only; actor logs hold secrets and are never exported."""
        return {
            "scheme": self.scheme,
            "strength": self.strength,
            "batch": self.batch,
            "parameters": self.parameters,
            "messages": [
                {"step": m.step, "from": m.sender, "to": m.receiver, "payload": m.payload} for m in self.messages
            ],
            "outcome": self.outcome,
        }

    def dumps(self) -> str:
        return dumps(self.to_json())


@dataclass(frozen=True)
class Violation:
    actor: str
    label: str
    steps: tuple

    def __str__(self):
        return f"{self.actor} observed plaintext {self.label} at step(s) {', '.join(self.steps)}"


@dataclass(frozen=True)
class ProbeReport:
    gcd: int
    h_phi: int
    equals_h_phi: bool
    exposes_phi: bool
    degenerate: bool

    def to_json(self) -> dict:
        return {
            "gcd": hexint(self.gcd),
            "h_phi": hexint(self.h_phi),
            "equals_h_phi": self.equals_h_phi,
            "exposes_phi": self.exposes_phi,
            "degenerate": self.degenerate,
        }


class _Wire:
    def __init__(self, actors, encode):
        self.actors = actors
        self.encode = encode
        self.messages = []

    def send(self, step, sender, receiver, **fields):
        self.messages.append(Message(step, sender, receiver, {k: self.encode(v) for k, v in fields.items()}))
        for label, value in fields.items():
            self.actors[receiver].note(step, label, value, "received")


def _encoder(curve=None):
    def enc(v):
        if isinstance(v, Point):
            return curve.encode_point(v).hex()
        if isinstance(v, bool):
            return v
        if isinstance(v, int):
            return hexint(v)
        if isinstance(v, bytes):
            return hexbytes(v)
        if isinstance(v, (list, tuple)):
            return [enc(x) for x in v]
        return v

    return enc


def _step(step):
    """Re-raise sub-operation failures tagged with the protocol step."""

    class _Guard:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, (BKEError, ValueError)) and not isinstance(exc, FlowError):
                raise FlowError(step, exc) from exc
            return False

    return _Guard()


def run_flow(
    scheme: str,
    batch: int = 20,
    strength: int = 80,
    rng=None,
    *,
    seed: int | None = None,
    rsa_bits: int | None = None,
    expansion_bits: int = rsa_bke.DEFAULT_EXPANSION_PRIME_BITS,
    use_fixtures: bool | None = None,
    rsa_material: tuple | None = None,
    randomness: list | None = None,
    inject: tuple = (),
) -> FlowTranscript:
    """Run one provisioning flow for ``batch`` pseudonym keys.

    ``rsa_bits`` substitutes a small test modulus for the strength's size.
    ``rsa_material`` pins the EE's (caterpillar, expansion values) and
    ``randomness`` the per-index (r_i, o_i); both exist to replay the
    worked example. ``inject`` names deliberate protocol faults.
    """
    scheme = scheme.upper()
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if batch < 1:
        raise ValueError("batch must be >= 1")
    if strength not in STRENGTHS:
        raise ValueError(f"strength must be one of {STRENGTHS}")
    for f in inject:
        if f not in FAULTS:
            raise ValueError(f"unknown fault {f!r}")
    if rng is None:
        rng = random.Random(seed) if seed is not None else random.SystemRandom()
    actors = {role: ActorState(role) for role in ("EE", "RA", "ACA")}
    if scheme == "ECC":
        return _run_ecc(actors, batch, strength, rng, set(inject))
    return _run_rsa(
        actors, batch, strength, rng, set(inject), rsa_bits, expansion_bits, use_fixtures, rsa_material, randomness
    )


def _run_ecc(actors, batch, strength, rng, inject):
    curve = get_curve(ecc_bke.ECC_CURVES[strength])
    ee, ra, aca = actors["EE"], actors["RA"], actors["ACA"]
    wire = _Wire(actors, _encoder(curve))

    with _step("1"):
        ra.keypair = EcKeyPair.generate(curve, rng)
        aca.keypair = EcKeyPair.generate(curve, rng)
        cat = ecc_bke.gen_caterpillar_ecc(curve, rng)
        ee.keypair = cat
        for label in ("a", "A", "p", "P", "ck", "ek"):
            ee.note("1", label, getattr(cat, label), "generated")

    wire.send("2", "EE", "RA", ck=cat.ck, ek=cat.ek, A=cat.A, P=cat.P)

    with _step("3"):
        cocoons = [ecc_bke.expand_cocoon_ecc(cat.A, cat.P, cat.ck, cat.ek, i, curve) for i in range(batch)]
        for co in cocoons:
            ra.note("3", "B", co.B, "derived")
            ra.note("3", "Q", co.Q, "derived")

    for co in cocoons:
        wire.send("4", "RA", "ACA", i=co.i, B=co.B, Q=co.Q)

    results = []
    with _step("5"):
        for co in cocoons:
            c, C, res = ecc_bke._aca_contribution(co, curve, aca.keypair, rng)
            aca.note("5", "c", c, "generated")
            aca.note("5", "C", C, "generated")
            aca.note("5", "butterfly_public", res.butterfly_public, "derived")
            results.append((c, res))

    for c, res in results:
        extra = {"c": c} if "c-to-ra" in inject else {}
        wire.send("6", "ACA", "RA", i=res.i, c_ciphertext=res.c_ciphertext, signature=res.signature, **extra)
    for _, res in results:
        wire.send("7", "RA", "EE", i=res.i, c_ciphertext=res.c_ciphertext, signature=res.signature)

    outcome = []
    with _step("9"):
        for co, (_, res) in zip(cocoons, results):
            priv = ecc_bke.derive_private_ecc(
                cat, res.i, res.c_ciphertext, res.signature, aca.keypair.Q, curve, res.butterfly_public
            )
            ee.note("8", "b", priv.b, "derived")
            ee.note("8", "q", priv.q, "derived")
            ee.note("9", "butterfly_private", priv.butterfly_private, "derived")
            outcome.append(
                {
                    "i": hexint(res.i),
                    "B": curve.encode_point(co.B).hex(),
                    "Q": curve.encode_point(co.Q).hex(),
                    "butterfly_public": curve.encode_point(res.butterfly_public).hex(),
                    "consistent": True,
                }
            )

    params = {"curve": curve.name, "aca_public": curve.encode_point(aca.keypair.Q).hex()}
    return FlowTranscript("ECC", strength, batch, params, wire.messages, outcome, actors)


def _coprime_sample(N, rng):
    while True:
        x = rng.randrange(2, N - 1)
        if math.gcd(x, N) == 1:
            return x


def _run_rsa(actors, batch, strength, rng, inject, rsa_bits, expansion_bits, use_fixtures, material, randomness):
    bits = rsa_bits or rsa_bke.RSA_MODULUS_BITS[strength]
    if use_fixtures is None:
        use_fixtures = bits >= 7680 and bool(rsa_bke.fixture_primes(bits))
    if randomness is not None and len(randomness) != batch:
        raise ValueError("randomness must supply one (r_i, o_i) pair per index")
    ee, ra, aca = actors["EE"], actors["RA"], actors["ACA"]
    wire = _Wire(actors, _encoder())

    with _step("1"):
        ra.keypair = rsa_bke.gen_caterpillar_rsa(bits, rng, fixture_slot=1 if use_fixtures else None)
        aca.keypair = rsa_bke.gen_caterpillar_rsa(bits, rng, fixture_slot=2 if use_fixtures else None)
        if material is not None:
            cat, ev = material
        else:
            cat = rsa_bke.gen_caterpillar_rsa(bits, rng, fixture_slot=0 if use_fixtures else None)
            ev = rsa_bke.gen_expansion_values(cat, expansion_bits, rng)
        ee.keypair = cat
        for label in ("rho", "zeta", "N", "phi", "s", "S"):
            ee.note("1", label, getattr(cat, label), "generated")
        for label in ("g", "h", "v", "alpha", "beta"):
            ee.note("1", label, getattr(ev, label), "generated")
        alpha_ct = rsa_bke.wrap_expansion_value(ev.alpha, "RA", ra.keypair.N, ra.keypair.S, rng)
        beta_ct = rsa_bke.wrap_expansion_value(ev.beta, "ACA", aca.keypair.N, aca.keypair.S, rng)

    wire.send("2", "EE", "RA", N=cat.N, S=cat.S, alpha_ct=alpha_ct.ciphertext, beta_ct=beta_ct.ciphertext)

    with _step("3"):
        alpha = rsa_bke.unwrap_expansion_value(alpha_ct, ra.keypair)
        ra.note("3a", "alpha", alpha, "derived")
        cocoons = []
        for i in range(batch):
            r = randomness[i][0] if randomness else rsa_bke.draw_randomizer(rng)
            ra.note("3b", "r", r, "generated")
            co = rsa_bke.expand_cocoon_rsa(cat.S, alpha, r, i)
            ra.note("3b", "J", co.J, "derived")
            cocoons.append(co)

    extra = {"alpha": alpha} if "alpha-to-aca" in inject else {}
    wire.send("4", "RA", "ACA", N=cat.N, J=[co.J for co in cocoons], beta_ct=beta_ct.ciphertext, **extra)

    with _step("5"):
        beta = rsa_bke.unwrap_expansion_value(beta_ct, aca.keypair)
        aca.note("5a", "beta", beta, "derived")
        butterflies = []
        for co in cocoons:
            o = randomness[co.i][1] if randomness else rsa_bke.draw_randomizer(rng)
            aca.note("5b", "o", o, "generated")
            bf = rsa_bke.expand_butterfly_rsa(co.J, beta, o, co.i)
            aca.note("5b", "H", bf.H, "derived")
            butterflies.append(bf)

    # No message returns to the EE; decryption uses the retained s directly.
    outcome = []
    with _step("5"):
        for co, bf in zip(cocoons, butterflies):
            x = _coprime_sample(cat.N, rng)
            ok_j = rsa_bke.rsa_decrypt(rsa_bke.rsa_encrypt(x, co.J, cat.N), cat.s, cat.N) == x
            ok_h = rsa_bke.rsa_decrypt(rsa_bke.rsa_encrypt(x, bf.H, cat.N), cat.s, cat.N) == x
            congruent = rsa_bke.verify_exponent_congruence(bf.H, cat)
            if not (ok_j and ok_h and congruent):
                raise FlowError("5", BKEError(f"index {co.i}: butterfly key does not decrypt with s"))
            outcome.append(
                {
                    "i": hexint(co.i),
                    "r": hexint(co.r),
                    "J": hexint(co.J),
                    "o": hexint(bf.o),
                    "H": hexint(bf.H),
                    "congruent": congruent,
                    "roundtrip": ok_j and ok_h,
                }
            )

    params = {"rsa_bits": bits, "expansion_bits": ev.g.bit_length(), "N": hexint(cat.N)}
    return FlowTranscript("RSA", strength, batch, params, wire.messages, outcome, actors)


def _secret_values(transcript):
    """label -> set of plaintext secret values, taken from their owners' logs."""
    secrets: dict[str, set] = {}
    owners = {"ACA": ("c", "C")} if transcript.scheme == "ECC" else {}
    for label in {lbl for labels in FORBIDDEN[transcript.scheme].values() for lbl in labels}:
        owner = next((role for role, lbls in owners.items() if label in lbls), "EE")
        secrets[label] = set(transcript.actors[owner].values(label, kind="generated"))
    return secrets


def assert_privacy(transcript: FlowTranscript) -> list[Violation]:
    """Every (actor, secret) pair the actor saw in the clear; empty when private."""
    secrets = _secret_values(transcript)
    violations = []
    for role, labels in FORBIDDEN[transcript.scheme].items():
        seen = [o for o in transcript.actors[role].observed if o.kind != "generated"]
        for label in labels:
            steps = []
            for o in seen:
                try:
                    hit = o.value in secrets[label]
                except TypeError:
                    hit = False
                if hit and o.step not in steps:
                    steps.append(o.step)
            if steps:
                violations.append(Violation(role, label, tuple(steps)))
    return violations


def collusion_probe(transcript: FlowTranscript) -> ProbeReport:
    """What RA and ACA learn by pooling their unwrapped alpha and beta."""
    if transcript.scheme != "RSA":
        raise ValueError("collusion probe applies to the RSA scheme")
    (alpha,) = transcript.actors["RA"].values("alpha", kind="derived")
    (beta,) = transcript.actors["ACA"].values("beta", kind="derived")
    ee = transcript.actors["EE"]
    (h,) = ee.values("h")
    (phi,) = ee.values("phi")
    (g,) = ee.values("g")
    (v,) = ee.values("v")
    d = math.gcd(alpha, beta)
    return ProbeReport(
        gcd=d,
        h_phi=h * phi,
        equals_h_phi=d == h * phi,
        exposes_phi=d in (phi, 2 * phi),
        degenerate=g == v,
    )


def check_structure(transcript: FlowTranscript) -> list[str]:
    """Compare the message sequence with the scheme's step table."""
    expected = []
    for step, sender, receiver, per_index in STEP_TABLE[transcript.scheme]:
        expected += [(step, sender, receiver)] * (transcript.batch if per_index else 1)
    actual = [(m.step, m.sender, m.receiver) for m in transcript.messages]
    if actual == expected:
        return []
    problems = [f"expected {len(expected)} messages, got {len(actual)}"] if len(actual) != len(expected) else []
    for k, (e, a) in enumerate(zip(expected, actual)):
        if e != a:
            problems.append(f"message {k}: expected {e}, got {a}")
            break
    return problems
