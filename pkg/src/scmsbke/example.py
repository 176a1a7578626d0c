"""Recompute the 10-bit worked example of the RSA expansion scheme.

The fixture uses the keygen file layout (``caterpillar`` and ``expansion``
blocks) plus the example's multipliers and expected values, so it can be
fed straight to ``scmsbke expand``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .rsa_bke import (
    ExpansionValues,
    RsaCaterpillar,
    expand_butterfly_rsa,
    expand_cocoon_rsa,
    rsa_decrypt,
    rsa_encrypt,
)
from .serialization import unhexint

FIXTURE = "data/worked_example.json"


@dataclass(frozen=True)
class Check:
    name: str
    expected: int
    actual: int | None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.actual == self.expected


def load_fixture(path=None) -> dict:
    if path is None:
        return json.loads(resources.files("scmsbke").joinpath(FIXTURE).read_text())
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def verify_example(fixture: dict | None = None) -> list[Check]:
    fixture = fixture or load_fixture()
    cat, ev, rnd = fixture["caterpillar"], fixture["expansion"], fixture["randomness"]
    rho, zeta, S, s = (unhexint(cat[k]) for k in ("rho", "zeta", "S", "s"))
    g, h, v = (unhexint(ev[k]) for k in ("g", "h", "v"))
    (r1, r2), (o1, o2) = ([unhexint(t) for t in rnd[k]] for k in ("r", "o"))
    x = unhexint(rnd["x"])

    N = rho * zeta
    phi = (rho - 1) * (zeta - 1)
    alpha = g * h * phi
    beta = v * h * phi
    J1 = expand_cocoon_rsa(S, alpha, r1, 1).J
    J2 = expand_cocoon_rsa(S, alpha, r2, 2).J
    H1 = expand_butterfly_rsa(J1, beta, o1, 1).H
    H2 = expand_butterfly_rsa(J2, beta, o2, 2).H
    try:
        roundtrip = rsa_decrypt(rsa_encrypt(x, H1, N), s, N)
    except ValueError:
        roundtrip = None

    actual = {
        "N": N,
        "phi": phi,
        "sS_mod_phi": s * S % phi,
        "alpha": alpha,
        "beta": beta,
        "J_1": J1,
        "J_2": J2,
        "H_1": H1,
        "H_2": H2,
        "roundtrip_H_1": roundtrip,
    }
    expected = {k: unhexint(val) for k, val in fixture["expected"].items()}
    notes = fixture.get("notes", {})
    return [Check(name, expected[name], actual[name], notes.get(name, "")) for name in actual]


def material(fixture: dict | None = None):
    """``(caterpillar, expansion values, [(r_i, o_i), ...])`` for replaying the example."""
    fixture = fixture or load_fixture()
    cat = RsaCaterpillar.from_json(fixture["caterpillar"])
    ev = ExpansionValues.from_json(fixture["expansion"])
    rnd = fixture["randomness"]
    return cat, ev, [(unhexint(r), unhexint(o)) for r, o in zip(rnd["r"], rnd["o"])]
