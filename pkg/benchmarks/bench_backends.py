"""Compare the compiled GMP kernels with the pure-Python fallback.

    python3 benchmarks/bench_backends.py [--repeat 200]

Times EC scalar multiplication on each curve, modular exponentiation at each
RSA modulus size, and one ECC cocoon expansion, under every available backend.
"""
import argparse
import random
import statistics
import timeit

from scmsbke import kernels
from scmsbke.curves import CURVES
from scmsbke.ecc_bke import ECC_CURVES, expand_cocoon_ecc, gen_caterpillar_ecc
from scmsbke.rsa_bke import RSA_MODULUS_BITS


def _time(fn, repeat):
    runs = timeit.repeat(fn, number=1, repeat=repeat)
    return statistics.median(runs) * 1e6


def cases(rng):
    for strength, name in ECC_CURVES.items():
        c = CURVES[name]
        k = rng.randrange(1, c.n)
        G = tuple(c.G)
        yield f"scalar_mult {name}", lambda k=k, G=G, c=c: kernels.scalar_mult(k, G, c.a, c.p)
        cat = gen_caterpillar_ecc(c, rng)
        yield f"ECC cocoon {name}", lambda cat=cat, c=c: expand_cocoon_ecc(cat.A, cat.P, cat.ck, cat.ek, 3, c)
    for strength, bits in RSA_MODULUS_BITS.items():
        if bits > 3072:
            continue  # a single 7680-bit powmod in pure Python takes seconds
        N = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        x, e = rng.randrange(N), rng.getrandbits(bits)
        yield f"powmod {bits}-bit", lambda x=x, e=e, N=N: kernels.powmod(x, e, N)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=50)
    args = ap.parse_args()
    backends = kernels.available_backends()
    previous = kernels.BACKEND
    results = {}
    try:
        for b in backends:
            kernels.use_backend(b)
            for label, fn in cases(random.Random(0)):
                results.setdefault(label, {})[b] = _time(fn, args.repeat)
    finally:
        kernels.use_backend(previous)

    head = f"{'operation':<22}" + "".join(f"{b + ' (us)':>16}" for b in backends)
    if len(backends) > 1:
        head += f"{'speedup':>10}"
    print(head)
    for label, row in results.items():
        line = f"{label:<22}" + "".join(f"{row[b]:>16.1f}" for b in backends)
        if "compiled" in row:
            line += f"{row['python'] / row['compiled']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
