"""Elliptic-curve butterfly key expansion (the IEEE 1609.2.1 construction).

EE:  caterpillar keys a/A, p/P and expansion keys ck, ek
RA:  cocoon keys  B_i = A + f(ck, i) G,  Q_i = P + f(ek, i) G
ACA: fresh c, butterfly key B_i + cG, c sealed to Q_i and signed
EE:  b_i = a + f(ck, i), q_i = p + f(ek, i), butterfly private b_i + c  (mod n)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .curves import CurveParams, Point, get_curve
from .ec_crypto import EcKeyPair, ecdsa_sign, ecdsa_verify, ecies_decrypt, ecies_encrypt
from .errors import ConsistencyError, DecryptionError
from .serialization import hexbytes, hexint, unhexbytes, unhexint
from .symmetric import aes_ecb_encrypt

# Security strength (bits) -> NIST curve.
ECC_CURVES = {80: "P-192", 112: "P-224", 128: "P-256", 192: "P-384", 256: "P-521"}
INDEX_LIMIT = 1 << 64
SYMMETRIC_KEY_BYTES = 16


@dataclass(frozen=True)
class EccCaterpillarSet:
    curve: str
    a: int
    A: Point
    p: int
    P: Point
    ck: bytes
    ek: bytes

    def to_json(self, include_secrets: bool = False) -> dict:
        c = get_curve(self.curve)
        out = {
            "curve": self.curve,
            "A": c.encode_point(self.A).hex(),
            "P": c.encode_point(self.P).hex(),
            "ck": hexbytes(self.ck),
            "ek": hexbytes(self.ek),
        }
        if include_secrets:
            out.update(a=hexint(self.a), p=hexint(self.p))
        return out

    @classmethod
    def from_json(cls, d: dict) -> "EccCaterpillarSet":
        c = get_curve(d["curve"])
        if "a" not in d or "p" not in d:
            raise KeyError("caterpillar private scalars missing (export with secrets)")
        cat = cls(
            c.name,
            unhexint(d["a"]),
            c.decode_point(bytes.fromhex(d["A"])),
            unhexint(d["p"]),
            c.decode_point(bytes.fromhex(d["P"])),
            unhexbytes(d["ck"]),
            unhexbytes(d["ek"]),
        )
        if c.base_mul(cat.a) != cat.A or c.base_mul(cat.p) != cat.P:
            raise ValueError("caterpillar public keys do not match private scalars")
        return cat


class EccCocoonPair(NamedTuple):
    i: int
    B: Point
    Q: Point


class EccButterflyResult(NamedTuple):
    i: int
    butterfly_public: Point
    c_ciphertext: bytes
    signature: bytes


class EccButterflyPrivate(NamedTuple):
    i: int
    b: int
    q: int
    butterfly_private: int


def gen_caterpillar_ecc(curve: CurveParams, rng) -> EccCaterpillarSet:
    a = curve.random_scalar(rng)
    p = curve.random_scalar(rng)
    return EccCaterpillarSet(
        curve.name,
        a,
        curve.base_mul(a),
        p,
        curve.base_mul(p),
        rng.randbytes(SYMMETRIC_KEY_BYTES),
        rng.randbytes(SYMMETRIC_KEY_BYTES),
    )


def expansion_f(key: bytes, i: int, n: int) -> int:
    """AES-based expansion function, uniform over [0, n).

    Encrypts blocks ``i (64-bit) || 0 (32-bit) || counter (32-bit)`` under
    ``key`` until ``bitlen(n) + 64`` bits are collected, then reduces mod n.
    """
    if not 0 <= i < INDEX_LIMIT:
        raise ValueError("index must lie in [0, 2^64)")
    blocks = -(-(n.bit_length() + 64) // 128)
    prefix = i.to_bytes(8, "big") + b"\x00\x00\x00\x00"
    data = b"".join(prefix + ctr.to_bytes(4, "big") for ctr in range(blocks))
    return int.from_bytes(aes_ecb_encrypt(key, data), "big") % n


def expand_cocoon_ecc(A: Point, P: Point, ck: bytes, ek: bytes, i: int, curve: CurveParams) -> EccCocoonPair:
    curve.check(A, "caterpillar key A")
    curve.check(P, "caterpillar key P")
    B = curve.add(A, curve.base_mul(expansion_f(ck, i, curve.n)))
    Q = curve.add(P, curve.base_mul(expansion_f(ek, i, curve.n)))
    return EccCocoonPair(i, B, Q)


def form_butterfly_ecc(B: Point, curve: CurveParams, rng):
    """ACA key generation ``C = cG`` and butterfly key ``B + C``; returns ``(c, C, B + C)``."""
    c = curve.random_scalar(rng)
    C = curve.base_mul(c)
    return c, C, curve.add(B, C)


def aca_contribution_ecc(cocoon: EccCocoonPair, curve: CurveParams, aca_key: EcKeyPair, rng) -> EccButterflyResult:
    return _aca_contribution(cocoon, curve, aca_key, rng)[2]


def _aca_contribution(cocoon, curve, aca_key, rng):
    # Also hands back (c, C) so the flow simulator can log the ACA's secrets.
    curve.check(cocoon.B, "cocoon key B")
    curve.check(cocoon.Q, "cocoon key Q")
    c, C, butterfly = form_butterfly_ecc(cocoon.B, curve, rng)
    c_ct = ecies_encrypt(c.to_bytes(curve.scalar_bytes, "big"), cocoon.Q, curve, rng)
    return c, C, EccButterflyResult(cocoon.i, butterfly, c_ct, ecdsa_sign(c_ct, aca_key, rng))


def cocoon_private_ecc(cat: EccCaterpillarSet, i: int, curve: CurveParams) -> tuple[int, int]:
    n = curve.n
    return (cat.a + expansion_f(cat.ck, i, n)) % n, (cat.p + expansion_f(cat.ek, i, n)) % n


def derive_private_ecc(
    cat: EccCaterpillarSet,
    i: int,
    c_ciphertext: bytes,
    signature: bytes,
    aca_public: Point,
    curve: CurveParams,
    butterfly_public: Point | None = None,
) -> EccButterflyPrivate:
    """Reconstruct the cocoon and butterfly private keys for index ``i``.

    Raises ``SignatureError``, ``DecryptionError`` or ``ConsistencyError``.
    When ``butterfly_public`` is given (e.g. from the issued certificate) the
    derived key must match it as well as ``B_i + C``.
    """
    ecdsa_verify(c_ciphertext, signature, aca_public, curve)
    b, q = cocoon_private_ecc(cat, i, curve)
    raw = ecies_decrypt(c_ciphertext, q, curve)
    c = int.from_bytes(raw, "big")
    if len(raw) != curve.scalar_bytes or not 0 < c < curve.n:
        raise DecryptionError("decrypted value is not a valid scalar")
    priv = (b + c) % curve.n
    B = curve.add(cat.A, curve.base_mul(expansion_f(cat.ck, i, curve.n)))
    expected = curve.add(B, curve.base_mul(c))
    derived = curve.base_mul(priv)
    if derived != expected or (butterfly_public is not None and derived != butterfly_public):
        raise ConsistencyError(f"butterfly private key for index {i} does not match its public key")
    return EccButterflyPrivate(i, b, q, priv)
