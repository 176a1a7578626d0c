"""Regenerate the cached prime pairs for the 7680- and 15360-bit moduli.

    python tools/make_rsa_fixtures.py 7680 15360

Key generation at these sizes takes minutes; the benchmark and flow
simulator read the cache so it never sits inside a timed region.
"""
import json
import random
import sys
import time
from pathlib import Path

from scmsbke.primes import random_prime
from scmsbke.serialization import hexint

SLOTS = 3  # EE, RA, ACA
OUT = Path(__file__).resolve().parent.parent / "src" / "scmsbke" / "data"


def main(argv):
    rng = random.SystemRandom()
    for bits in map(int, argv or ["7680", "15360"]):
        pairs = []
        for slot in range(SLOTS):
            t0 = time.perf_counter()
            rho = random_prime(bits - bits // 2, rng, top_two=True)
            zeta = random_prime(bits // 2, rng, top_two=True)
            assert rho != zeta and (rho * zeta).bit_length() == bits
            pairs.append({"rho": hexint(rho), "zeta": hexint(zeta)})
            print(f"{bits} slot {slot}: {time.perf_counter() - t0:.1f}s", flush=True)
        path = OUT / f"rsa_primes_{bits}.json"
        path.write_text(json.dumps({"bits": bits, "pairs": pairs}, indent=2) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main(sys.argv[1:])
