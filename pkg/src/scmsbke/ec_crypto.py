"""ECIES and ECDSA over the package's own curve arithmetic.

Both take their randomness from an injected ``rng`` so that a seeded flow
replays byte for byte. Not constant time.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from . import symmetric
from .curves import CurveParams, Point
from .errors import DecryptionError, SignatureError


@dataclass(frozen=True)
class EcKeyPair:
    curve: CurveParams
    d: int
    Q: Point

    @classmethod
    def generate(cls, curve: CurveParams, rng) -> "EcKeyPair":
        d = curve.random_scalar(rng)
        return cls(curve, d, curve.base_mul(d))


def _aead_key_bytes(curve: CurveParams) -> int:
    return 16 if curve.n.bit_length() <= 256 else 32


def ecies_encrypt(plaintext: bytes, recipient: Point, curve: CurveParams, rng) -> bytes:
    """Return ``R || nonce || ciphertext || tag`` with R the ephemeral public key."""
    curve.check(recipient, "ECIES recipient key")
    k = curve.random_scalar(rng)
    R = curve.encode_point(curve.base_mul(k))
    shared = curve.mul(k, recipient)
    key = symmetric.hkdf(
        shared.x.to_bytes(curve.coord_bytes, "big"), _aead_key_bytes(curve), b"scmsbke ecies" + R
    )
    return R + symmetric.seal(key, plaintext, rng, aad=R)


def ecies_decrypt(blob: bytes, d: int, curve: CurveParams) -> bytes:
    w = 2 * curve.coord_bytes
    if len(blob) <= w:
        raise DecryptionError("ECIES ciphertext too short")
    R = blob[:w]
    try:
        Rp = curve.decode_point(R)
    except ValueError as exc:
        raise DecryptionError(f"bad ephemeral key: {exc}") from None
    shared = curve.mul(d, Rp)
    if shared is None:
        raise DecryptionError("degenerate shared secret")
    key = symmetric.hkdf(
        shared.x.to_bytes(curve.coord_bytes, "big"), _aead_key_bytes(curve), b"scmsbke ecies" + R
    )
    return symmetric.open_sealed(key, blob[w:], aad=R)


def _digest_scalar(msg: bytes, curve: CurveParams) -> int:
    h = hashlib.new(curve.hash_name, msg).digest()
    z = int.from_bytes(h, "big")
    excess = len(h) * 8 - curve.n.bit_length()
    return z >> excess if excess > 0 else z


def ecdsa_sign(msg: bytes, key: EcKeyPair, rng) -> bytes:
    curve = key.curve
    z = _digest_scalar(msg, curve)
    while True:
        k = curve.random_scalar(rng)
        r = curve.base_mul(k).x % curve.n
        if r == 0:
            continue
        s = pow(k, -1, curve.n) * (z + r * key.d) % curve.n
        if s:
            w = curve.scalar_bytes
            return r.to_bytes(w, "big") + s.to_bytes(w, "big")


def ecdsa_verify(msg: bytes, signature: bytes, Q: Point, curve: CurveParams) -> None:
    """Raise ``SignatureError`` unless ``signature`` is valid for ``msg`` under ``Q``."""
    w = curve.scalar_bytes
    if len(signature) != 2 * w:
        raise SignatureError("signature has wrong length")
    r = int.from_bytes(signature[:w], "big")
    s = int.from_bytes(signature[w:], "big")
    if not (0 < r < curve.n and 0 < s < curve.n):
        raise SignatureError("signature component out of range")
    s_inv = pow(s, -1, curve.n)
    z = _digest_scalar(msg, curve)
    X = curve.add(curve.base_mul(z * s_inv), curve.mul(r * s_inv, Q))
    if X is None or X.x % curve.n != r:
        raise SignatureError("signature does not verify")
