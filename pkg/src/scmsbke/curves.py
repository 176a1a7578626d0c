"""NIST prime curves and the group operations used by the ECC scheme."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import kernels
from .errors import PointNotOnCurveError


class Point(NamedTuple):
    x: int
    y: int


# ``None`` stands for the point at infinity throughout.
MaybePoint = Optional[Point]


@dataclass(frozen=True)
class CurveParams:
    name: str
    p: int
    a: int
    b: int
    G: Point
    n: int
    hash_name: str = field(default="sha256", compare=False)

    def __post_init__(self):
        if self.name not in _NIST_NAMES:
            raise ValueError(f"unsupported curve {self.name!r}")
        if not self.contains(self.G):
            raise ValueError(f"{self.name}: base point not on curve")
        if kernels.scalar_mult(self.n, self.G, self.a, self.p) is not None:
            raise ValueError(f"{self.name}: base point order is not n")

    @property
    def coord_bytes(self) -> int:
        return (self.p.bit_length() + 7) // 8

    @property
    def scalar_bytes(self) -> int:
        return (self.n.bit_length() + 7) // 8

    def contains(self, P: MaybePoint) -> bool:
        if P is None:
            return True
        x, y = P
        if not (0 <= x < self.p and 0 <= y < self.p):
            return False
        return (y * y - (x * x * x + self.a * x + self.b)) % self.p == 0

    def check(self, P: MaybePoint, what: str = "point") -> None:
        if P is None or not self.contains(P):
            raise PointNotOnCurveError(f"{what} is not a finite point on {self.name}")

    def mul(self, k: int, P: MaybePoint) -> MaybePoint:
        k %= self.n
        R = kernels.scalar_mult(k, P, self.a, self.p)
        return None if R is None else Point(*R)

    def base_mul(self, k: int) -> MaybePoint:
        return self.mul(k, self.G)

    def add(self, P: MaybePoint, Q: MaybePoint) -> MaybePoint:
        R = kernels.point_add(P, Q, self.a, self.p)
        return None if R is None else Point(*R)

    def neg(self, P: MaybePoint) -> MaybePoint:
        if P is None:
            return None
        return Point(P.x, (-P.y) % self.p)

    def sub(self, P: MaybePoint, Q: MaybePoint) -> MaybePoint:
        return self.add(P, self.neg(Q))

    def encode_point(self, P: MaybePoint) -> bytes:
        """Uncompressed affine ``x || y``, fixed width, big-endian."""
        if P is None:
            raise ValueError("cannot encode the point at infinity")
        w = self.coord_bytes
        return P.x.to_bytes(w, "big") + P.y.to_bytes(w, "big")

    def decode_point(self, data: bytes) -> Point:
        w = self.coord_bytes
        if len(data) != 2 * w:
            raise ValueError(f"{self.name} point encoding must be {2 * w} bytes")
        P = Point(int.from_bytes(data[:w], "big"), int.from_bytes(data[w:], "big"))
        self.check(P)
        return P

    def random_scalar(self, rng) -> int:
        """Uniform in [1, n-1]."""
        return rng.randrange(1, self.n)


_NIST_NAMES = ("P-192", "P-224", "P-256", "P-384", "P-521")

# Domain parameters from FIPS 186-4 / SP 800-186.
P192 = CurveParams(
    name="P-192",
    p=2**192 - 2**64 - 1,
    a=-3,
    b=0x64210519E59C80E70FA7E9AB72243049FEB8DEECC146B9B1,
    G=Point(
        0x188DA80EB03090F67CBF20EB43A18800F4FF0AFD82FF1012,
        0x07192B95FFC8DA78631011ED6B24CDD573F977A11E794811,
    ),
    n=0xFFFFFFFFFFFFFFFFFFFFFFFF99DEF836146BC9B1B4D22831,
)
P224 = CurveParams(
    name="P-224",
    p=2**224 - 2**96 + 1,
    a=-3,
    b=0xB4050A850C04B3ABF54132565044B0B7D7BFD8BA270B39432355FFB4,
    G=Point(
        0xB70E0CBD6BB4BF7F321390B94A03C1D356C21122343280D6115C1D21,
        0xBD376388B5F723FB4C22DFE6CD4375A05A07476444D5819985007E34,
    ),
    n=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFF16A2E0B8F03E13DD29455C5C2A3D,
)
P256 = CurveParams(
    name="P-256",
    p=2**256 - 2**224 + 2**192 + 2**96 - 1,
    a=-3,
    b=0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B,
    G=Point(
        0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
        0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5,
    ),
    n=0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551,
)
P384 = CurveParams(
    name="P-384",
    p=2**384 - 2**128 - 2**96 + 2**32 - 1,
    a=-3,
    b=int(
        "B3312FA7E23EE7E4988E056BE3F82D19181D9C6EFE8141120314088F5013875A"
        "C656398D8A2ED19D2A85C8EDD3EC2AEF",
        16,
    ),
    G=Point(
        int(
            "AA87CA22BE8B05378EB1C71EF320AD746E1D3B628BA79B9859F741E082542A38"
            "5502F25DBF55296C3A545E3872760AB7",
            16,
        ),
        int(
            "3617DE4A96262C6F5D9E98BF9292DC29F8F41DBD289A147CE9DA3113B5F0B8C0"
            "0A60B1CE1D7E819D7A431D7C90EA0E5F",
            16,
        ),
    ),
    n=int(
        "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFC7634D81F4372DDF"
        "581A0DB248B0A77AECEC196ACCC52973",
        16,
    ),
    hash_name="sha384",
)
P521 = CurveParams(
    name="P-521",
    p=2**521 - 1,
    a=-3,
    b=int(
        "0051953EB9618E1C9A1F929A21A0B68540EEA2DA725B99B315F3B8B489918EF1"
        "09E156193951EC7E937B1652C0BD3BB1BF073573DF883D2C34F1EF451FD46B50"
        "3F00",
        16,
    ),
    G=Point(
        int(
            "00C6858E06B70404E9CD9E3ECB662395B4429C648139053FB521F828AF606B4D"
            "3DBAA14B5E77EFE75928FE1DC127A2FFA8DE3348B3C1856A429BF97E7E31C2E5"
            "BD66",
            16,
        ),
        int(
            "011839296A789A3BC0045C8A5FB42C7D1BD998F54449579B446817AFBD17273E"
            "662C97EE72995EF42640C550B9013FAD0761353C7086A272C24088BE94769FD1"
            "6650",
            16,
        ),
    ),
    n=int(
        "01FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF"
        "FA51868783BF2F966B7FCC0148F709A5D03BB5C9B8899C47AEBB6FB71E913864"
        "09",
        16,
    ),
    hash_name="sha512",
)

CURVES = {c.name: c for c in (P192, P224, P256, P384, P521)}


def get_curve(name: str) -> CurveParams:
    try:
        return CURVES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown curve {name!r}; choose from {sorted(CURVES)}") from None
