"""Butterfly key expansion for vehicular pseudonym certificates.

Two constructions side by side: the elliptic-curve scheme (``ecc_bke``) and
an RSA variant whose expansion is plain integer addition (``rsa_bke``), plus
a three-actor flow simulator (``flow``) and a timing harness (``bench``).
"""
from . import kernels
from .curves import CURVES, CurveParams, Point, get_curve
from .ecc_bke import (
    EccButterflyPrivate,
    EccButterflyResult,
    EccCaterpillarSet,
    EccCocoonPair,
    aca_contribution_ecc,
    derive_private_ecc,
    expand_cocoon_ecc,
    expansion_f,
    gen_caterpillar_ecc,
)
from .flow import FlowTranscript, assert_privacy, collusion_probe, run_flow
from .rsa_bke import (
    ExpansionValues,
    RsaButterflyKey,
    RsaCaterpillar,
    RsaCocoonKey,
    expand_butterfly_rsa,
    expand_cocoon_rsa,
    gen_caterpillar_rsa,
    gen_expansion_values,
    rsa_decrypt,
    rsa_encrypt,
    unwrap_expansion_value,
    verify_exponent_congruence,
    wrap_expansion_value,
)

__version__ = "0.1.0"
