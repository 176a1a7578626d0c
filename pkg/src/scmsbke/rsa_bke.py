"""RSA-based butterfly key expansion.

The end entity holds one RSA keypair ``(s, S)`` modulo ``N``. Two expansion
values that are multiples of the totient,

    alpha = g * h * phi        beta = v * h * phi

let the RA and ACA shift the public exponent by plain integer arithmetic,

    J_i = S + r_i * alpha      H_i = J_i + o_i * beta

while ``s`` stays a valid inverse modulo ``phi``: every cocoon and butterfly
public key decrypts with the caterpillar private key.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import NamedTuple

from . import kernels, symmetric
from .errors import DecryptionError
from .primes import random_prime
from .serialization import hexint, unhexint

# Security strength (bits) -> RSA modulus size.
RSA_MODULUS_BITS = {80: 1024, 112: 2048, 128: 3072, 192: 7680, 256: 15360}
DEFAULT_EXPANSION_PRIME_BITS = 256
RANDOMIZER_BITS = 64
MIN_TEST_BITS = 16


@dataclass(frozen=True)
class RsaCaterpillar:
    rho: int
    zeta: int
    N: int
    phi: int
    s: int
    S: int

    def __post_init__(self):
        if self.rho == self.zeta:
            raise ValueError("rho and zeta must differ")
        if self.N != self.rho * self.zeta:
            raise ValueError("N != rho * zeta")
        if self.phi != (self.rho - 1) * (self.zeta - 1):
            raise ValueError("phi != (rho - 1)(zeta - 1)")
        if self.s * self.S % self.phi != 1:
            raise ValueError("s * S is not 1 mod phi")

    @classmethod
    def from_primes(cls, rho: int, zeta: int, S: int) -> "RsaCaterpillar":
        phi = (rho - 1) * (zeta - 1)
        return cls(rho, zeta, rho * zeta, phi, pow(S, -1, phi), S)

    @property
    def bits(self) -> int:
        return self.N.bit_length()

    def public(self) -> dict:
        return {"N": hexint(self.N), "S": hexint(self.S)}

    def to_json(self, include_secrets: bool = False) -> dict:
        out = self.public()
        if include_secrets:
            out.update(
                rho=hexint(self.rho), zeta=hexint(self.zeta), phi=hexint(self.phi), s=hexint(self.s)
            )
        return out

    @classmethod
    def from_json(cls, d: dict) -> "RsaCaterpillar":
        missing = {"rho", "zeta", "S"} - d.keys()
        if missing:
            raise KeyError(f"caterpillar secrets missing: {sorted(missing)}")
        cat = cls.from_primes(unhexint(d["rho"]), unhexint(d["zeta"]), unhexint(d["S"]))
        if "s" in d and unhexint(d["s"]) != cat.s:
            raise ValueError("stored s does not invert S mod phi")
        return cat


# Long-term RA/ACA keys use the same structure with (d, e) in the (s, S) slots.
RsaKeyPair = RsaCaterpillar


@dataclass(frozen=True)
class ExpansionValues:
    g: int
    h: int
    v: int
    alpha: int
    beta: int

    @classmethod
    def from_primes(cls, phi: int, g: int, h: int, v: int, *, allow_degenerate: bool = False):
        if not allow_degenerate:
            if len({g, h, v}) != 3:
                raise ValueError("g, h, v must be distinct")
        vals = cls(g, h, v, g * h * phi, v * h * phi)
        if not allow_degenerate and math.gcd(vals.alpha, vals.beta) != h * phi:
            raise ValueError("gcd(alpha, beta) != h * phi; g and v must be coprime")
        return vals

    def to_json(self) -> dict:
        return {k: hexint(getattr(self, k)) for k in ("g", "h", "v", "alpha", "beta")}

    @classmethod
    def from_json(cls, d: dict) -> "ExpansionValues":
        g, h, v, alpha, beta = (unhexint(d[k]) for k in ("g", "h", "v", "alpha", "beta"))
        return cls(g, h, v, alpha, beta)


class RsaCocoonKey(NamedTuple):
    i: int
    r: int
    J: int


class RsaButterflyKey(NamedTuple):
    i: int
    o: int
    H: int


@dataclass(frozen=True)
class WrappedExpansionValue:
    recipient: str  # "RA" or "ACA"
    ciphertext: bytes


@lru_cache(maxsize=None)
def fixture_primes(bits: int) -> tuple:
    """Cached prime pairs for the slow-to-generate modulus sizes."""
    try:
        raw = resources.files("scmsbke").joinpath(f"data/rsa_primes_{bits}.json").read_text()
    except FileNotFoundError:
        return ()
    return tuple((unhexint(p["rho"]), unhexint(p["zeta"])) for p in json.loads(raw)["pairs"])


def _draw_public_exponent(phi: int, rng) -> int:
    while True:
        S = rng.randrange(3, phi)
        if math.gcd(S, phi) == 1:
            return S


def gen_caterpillar_rsa(bits: int, rng, *, fixture_slot: int | None = None) -> RsaCaterpillar:
    """Generate an RSA caterpillar keypair whose modulus has exactly ``bits`` bits.

    ``fixture_slot`` takes the primes from the bundled cache instead of
    searching; ``S`` is still drawn from ``rng``.
    """
    if bits not in RSA_MODULUS_BITS.values() and bits < MIN_TEST_BITS:
        raise ValueError(f"modulus size {bits} too small (minimum {MIN_TEST_BITS})")
    if fixture_slot is not None:
        pairs = fixture_primes(bits)
        if not pairs:
            raise ValueError(f"no cached primes for {bits}-bit moduli")
        rho, zeta = pairs[fixture_slot % len(pairs)]
    else:
        half = bits // 2
        rho = random_prime(bits - half, rng, top_two=True)
        while True:
            zeta = random_prime(half, rng, top_two=True)
            if zeta != rho:
                break
    phi = (rho - 1) * (zeta - 1)
    return RsaCaterpillar.from_primes(rho, zeta, _draw_public_exponent(phi, rng))


def gen_expansion_values(cat: RsaCaterpillar, prime_bits: int, rng) -> ExpansionValues:
    if prime_bits < MIN_TEST_BITS:
        raise ValueError(f"expansion primes need at least {MIN_TEST_BITS} bits")
    chosen: list[int] = []
    while len(chosen) < 3:
        q = random_prime(prime_bits, rng)
        if q not in chosen and cat.phi % q:
            chosen.append(q)
    g, h, v = chosen
    return ExpansionValues.from_primes(cat.phi, g, h, v)


def draw_randomizer(rng) -> int:
    """Cocoon/butterfly multiplier, uniform in [1, 2^64)."""
    return rng.randrange(1, 1 << RANDOMIZER_BITS)


def expand_cocoon_rsa(S: int, alpha: int, r: int, i: int = 0) -> RsaCocoonKey:
    if r < 1:
        raise ValueError("r_i must be >= 1 (r_i = 0 republishes S)")
    return RsaCocoonKey(i, r, S + r * alpha)


def expand_butterfly_rsa(J: int, beta: int, o: int, i: int = 0) -> RsaButterflyKey:
    if o < 1:
        raise ValueError("o_i must be >= 1")
    return RsaButterflyKey(i, o, J + o * beta)


def rsa_encrypt(x: int, e: int, N: int) -> int:
    if not 1 <= x < N:
        raise ValueError("plaintext must lie in [1, N)")
    if e < 1:
        raise ValueError("exponent must be positive")
    return kernels.powmod(x, e, N)


def rsa_decrypt(c: int, s: int, N: int) -> int:
    if not 0 <= c < N:
        raise ValueError("ciphertext must lie in [0, N)")
    return kernels.powmod(c, s, N)


def verify_exponent_congruence(e: int, cat: RsaCaterpillar) -> bool:
    """True iff ``s * e == 1 (mod phi)``; needs the secret totient."""
    return cat.s * e % cat.phi == 1


def _int_bytes(v: int) -> bytes:
    return v.to_bytes((v.bit_length() + 7) // 8 or 1, "big")


def _kem_key(z: int, width: int, recipient: str) -> bytes:
    return symmetric.hkdf(z.to_bytes(width, "big"), 32, b"scmsbke expansion wrap " + recipient.encode())


def wrap_expansion_value(value: int, recipient: str, N: int, e: int, rng) -> WrappedExpansionValue:
    """Hybrid-encrypt ``value`` to a long-term RSA key (RSA-KEM + AES-256-GCM)."""
    if value <= 0:
        raise ValueError("only positive values are wrapped")
    width = (N.bit_length() + 7) // 8
    z = rng.randrange(2, N - 1)
    kem = kernels.powmod(z, e, N).to_bytes(width, "big")
    body = symmetric.seal(_kem_key(z, width, recipient), _int_bytes(value), rng, aad=recipient.encode())
    return WrappedExpansionValue(recipient, kem + body)


def unwrap_expansion_value(wrapped: WrappedExpansionValue, key: RsaKeyPair) -> int:
    width = (key.N.bit_length() + 7) // 8
    blob = wrapped.ciphertext
    c = int.from_bytes(blob[:width], "big")
    if len(blob) <= width or c >= key.N:
        raise DecryptionError("wrapped value does not match this key")
    z = kernels.powmod(c, key.s, key.N)
    plain = symmetric.open_sealed(_kem_key(z, width, wrapped.recipient), blob[width:], aad=wrapped.recipient.encode())
    return int.from_bytes(plain, "big")
