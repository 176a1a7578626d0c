import os
import random
import subprocess
import sys

import pytest
from cryptography.hazmat.primitives.asymmetric import ec
from hypothesis import given, settings
from hypothesis import strategies as st

from scmsbke import kernels
from scmsbke.curves import CURVES, P256

# Independent reference: the cryptography package's OpenSSL scalar multiplication.
OPENSSL_CURVES = {
    "P-192": ec.SECP192R1(),
    "P-224": ec.SECP224R1(),
    "P-256": ec.SECP256R1(),
    "P-384": ec.SECP384R1(),
    "P-521": ec.SECP521R1(),
}


def openssl_base_mul(name, k):
    pub = ec.derive_private_key(k, OPENSSL_CURVES[name]).public_key().public_numbers()
    return pub.x, pub.y


@pytest.mark.parametrize("name", sorted(CURVES))
def test_base_mul_matches_openssl(backend, name):
    curve = CURVES[name]
    r = random.Random(name)
    for k in [1, 2, 3, curve.n - 1] + [r.randrange(1, curve.n) for _ in range(8)]:
        assert tuple(curve.base_mul(k)) == openssl_base_mul(name, k)


def test_backends_agree():
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    c = P256
    r = random.Random(5)
    pts = [c.base_mul(r.randrange(1, c.n)) for _ in range(5)]
    for P in pts:
        for k in (0, 1, 7, c.n - 1, c.n, r.randrange(c.p)):
            outs = {}
            for name in kernels.available_backends():
                kernels.use_backend(name)
                outs[name] = kernels.scalar_mult(k, tuple(P), c.a, c.p)
            kernels.use_backend("auto")
            assert len(set(outs.values())) == 1


def test_point_add_edge_cases(backend):
    c = P256
    G = tuple(c.G)
    neg = (G[0], (-G[1]) % c.p)
    assert kernels.point_add(G, neg, c.a, c.p) is None
    assert kernels.point_add(None, G, c.a, c.p) == G
    assert kernels.point_add(G, None, c.a, c.p) == G
    assert kernels.point_add(G, G, c.a, c.p) == kernels.scalar_mult(2, G, c.a, c.p)
    assert kernels.scalar_mult(c.n, G, c.a, c.p) is None


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**300), st.integers(0, 2**300), st.integers(2, 2**300))
def test_powmod_matches_builtin(base, exp, mod):
    for name in kernels.available_backends():
        kernels.use_backend(name)
        assert kernels.powmod(base, exp, mod) == pow(base, exp, mod)
    kernels.use_backend("auto")


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.use_backend("gpu")


def test_env_selects_python_fallback():
    env = dict(os.environ, SCMSBKE_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-c", "from scmsbke import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
