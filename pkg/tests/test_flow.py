import math
import random

import pytest

from scmsbke import example, flow
from scmsbke.curves import get_curve
from scmsbke.errors import FlowError
from scmsbke.flow import assert_privacy, check_structure, collusion_probe, run_flow
from scmsbke.rsa_bke import ExpansionValues, RsaCaterpillar
from scmsbke.serialization import unhexint


def test_rsa_flow_replays_worked_example():
    cat, ev, randomness = example.material()
    tr = run_flow("RSA", batch=2, seed=0, rsa_bits=64, rsa_material=(cat, ev), randomness=randomness)
    got = [(unhexint(o["J"]), unhexint(o["H"])) for o in tr.outcome]
    assert got == [(917934476807, 3325430544707), (1376901682427, 4747396177487)]
    assert all(o["congruent"] and o["roundtrip"] for o in tr.outcome)
    assert assert_privacy(tr) == []
    assert collusion_probe(tr).gcd == 489826260


def test_ecc_batch_one_consistent():
    tr = run_flow("ECC", batch=1, strength=128, seed=4)
    curve = get_curve("P-256")
    (priv,) = tr.actors["EE"].values("butterfly_private")
    (b,) = tr.actors["EE"].values("b")
    (c,) = tr.actors["ACA"].values("c")
    (C,) = tr.actors["ACA"].values("C")
    B = curve.decode_point(bytes.fromhex(tr.outcome[0]["B"]))
    assert priv == (b + c) % curve.n
    assert curve.base_mul(priv) == curve.add(B, C)
    assert curve.base_mul(priv).x == int(tr.outcome[0]["butterfly_public"][: 2 * curve.coord_bytes], 16)


@pytest.mark.parametrize("scheme", ["ECC", "RSA"])
def test_batch_twenty_distinct_and_private(scheme):
    tr = run_flow(scheme, batch=20, seed=7)
    key = "butterfly_public" if scheme == "ECC" else "H"
    assert len({o[key] for o in tr.outcome}) == 20
    assert assert_privacy(tr) == []
    assert check_structure(tr) == []


def test_rsa_flow_has_no_downloads():
    tr = run_flow("RSA", batch=5, seed=1)
    assert not [m for m in tr.messages if m.receiver == "EE"]
    assert [m.step for m in tr.messages] == ["2", "4"]


def test_ecc_step7_per_index():
    tr = run_flow("ECC", batch=3, seed=1)
    step7 = [m for m in tr.messages if m.step == "7"]
    assert [(m.sender, m.receiver) for m in step7] == [("RA", "EE")] * 3
    assert all({"i", "c_ciphertext", "signature"} == set(m.payload) for m in step7)


@pytest.mark.parametrize(
    "scheme,fault,actor,label,step",
    [("RSA", "alpha-to-aca", "ACA", "alpha", "4"), ("ECC", "c-to-ra", "RA", "c", "6")],
)
def test_injected_fault_detected(scheme, fault, actor, label, step):
    tr = run_flow(scheme, batch=20, seed=3, inject=(fault,))
    (v,) = assert_privacy(tr)
    assert (v.actor, v.label, v.steps) == (actor, label, (step,))
    assert label in str(v) and step in str(v)


def test_collusion_probe_fresh_flow():
    tr = run_flow("RSA", batch=2, seed=9, rsa_bits=128, expansion_bits=64)
    rep = collusion_probe(tr)
    assert rep.equals_h_phi and not rep.exposes_phi and not rep.degenerate
    assert rep.gcd == rep.h_phi


def test_collusion_probe_degenerate():
    cat = RsaCaterpillar.from_primes(991, 827, 65567)
    ev = ExpansionValues.from_primes(cat.phi, 937, 599, 937, allow_degenerate=True)
    tr = run_flow("RSA", batch=1, seed=0, rsa_bits=64, rsa_material=(cat, ev))
    rep = collusion_probe(tr)
    assert rep.degenerate and not rep.equals_h_phi
    assert rep.gcd == 937 * 599 * cat.phi
    with pytest.raises(ValueError):
        collusion_probe(run_flow("ECC", batch=1, seed=0))


@pytest.mark.parametrize("scheme", ["ECC", "RSA"])
def test_replay_is_byte_identical(scheme):
    a = run_flow(scheme, batch=4, seed=123).dumps()
    b = run_flow(scheme, batch=4, seed=123).dumps()
    assert a == b
    assert run_flow(scheme, batch=4, seed=124).dumps() != a


def test_transcript_export_hides_actor_logs():
    tr = run_flow("RSA", batch=2, seed=5)
    text = tr.dumps()
    cat = tr.actors["EE"].keypair
    assert format(cat.s, "x") not in text and format(cat.phi, "x") not in text
    assert list(tr.to_json()) == ["scheme", "strength", "batch", "parameters", "messages", "outcome"]


def test_structure_check_flags_reordering():
    tr = run_flow("ECC", batch=2, seed=5)
    tr.messages = tr.messages[::-1]
    assert check_structure(tr)


def test_argument_validation():
    with pytest.raises(ValueError):
        run_flow("DSA")
    with pytest.raises(ValueError):
        run_flow("RSA", batch=0)
    with pytest.raises(ValueError):
        run_flow("RSA", strength=100)
    with pytest.raises(ValueError):
        run_flow("RSA", inject=("nothing",))


def test_failing_step_is_reported():
    cat = RsaCaterpillar.from_primes(991, 827, 65567)
    ev = ExpansionValues.from_primes(cat.phi, 937, 599, 983)
    with pytest.raises(FlowError) as info:
        run_flow("RSA", batch=1, seed=0, rsa_bits=64, rsa_material=(cat, ev), randomness=[(0, 5)])
    assert info.value.step == "3"


def test_observations_are_labeled():
    tr = run_flow("RSA", batch=2, seed=2)
    kinds = {o.kind for a in tr.actors.values() for o in a.observed}
    assert kinds <= {"generated", "received", "derived"}
    assert all(o.step for a in tr.actors.values() for o in a.observed)
    (alpha,) = tr.actors["RA"].values("alpha", kind="derived")
    assert math.gcd(alpha, tr.actors["EE"].keypair.phi) == tr.actors["EE"].keypair.phi
