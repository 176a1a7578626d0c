"""Canonical JSON encoding: lowercase big-endian hex for integers and bytes."""
from __future__ import annotations

import json


def hexint(v: int) -> str:
    if v < 0:
        raise ValueError("only non-negative integers are hex-encoded")
    return format(v, "x")


def unhexint(s: str) -> int:
    return int(s, 16)


def hexbytes(b: bytes) -> str:
    return b.hex()


def unhexbytes(s: str) -> bytes:
    return bytes.fromhex(s)


def dumps(obj) -> str:
    # Field order comes from dict construction order; never sort, never vary.
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
