"""Prime generation: trial division by small primes, then Miller-Rabin."""
from __future__ import annotations

from . import kernels

MR_ROUNDS = 64


def _small_primes(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES = _small_primes(2000)


def is_probable_prime(n: int, rng, rounds: int = MR_ROUNDS) -> bool:
    if n < 2:
        return False
    for q in SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = kernels.powmod(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(bits: int, rng, *, top_two: bool = False) -> int:
    """Random prime of exactly ``bits`` bits.

    With ``top_two`` the two leading bits are set so a product of two such
    primes has exactly ``2 * bits`` bits.
    """
    if bits < 3:
        raise ValueError("prime size must be at least 3 bits")
    high = (1 << (bits - 1)) | ((1 << (bits - 2)) if top_two else 0)
    while True:
        n = rng.getrandbits(bits) | high | 1
        if is_probable_prime(n, rng):
            return n
