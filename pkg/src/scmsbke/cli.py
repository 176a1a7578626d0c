"""Command-line entry point: ``scmsbke {keygen,expand,flow,bench,verify-example}``."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import bench, ecc_bke, flow, kernels, rsa_bke
from .curves import get_curve
from .errors import BKEError
from .example import load_fixture, verify_example
from .serialization import dumps, hexint, read_json, unhexint, write_json

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_PRIVACY = 4

OUT_DIR_ENV = "SCMSBKE_OUT_DIR"


class UsageError(Exception):
    pass


def _out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _out_path(arg, default_name) -> Path:
    return Path(arg) if arg else _out_dir() / default_name


def _rng(seed):
    return random.Random(seed) if seed is not None else random.SystemRandom()


def _int_list(text):
    try:
        return [int(t, 0) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# -- keygen -----------------------------------------------------------------

def cmd_keygen(args) -> int:
    rng = _rng(args.seed)
    if args.scheme == "rsa":
        bits = args.rsa_bits or rsa_bke.RSA_MODULUS_BITS[args.strength]
        slot = 0 if bits >= 7680 and rsa_bke.fixture_primes(bits) else None
        cat = rsa_bke.gen_caterpillar_rsa(bits, rng, fixture_slot=slot)
        ev = rsa_bke.gen_expansion_values(cat, args.expansion_bits, rng)
        doc = {"scheme": "RSA", "strength": args.strength, "caterpillar": cat.to_json(args.include_secrets)}
        if args.include_secrets:
            doc["expansion"] = ev.to_json()
    else:
        curve = get_curve(ecc_bke.ECC_CURVES[args.strength])
        cat = ecc_bke.gen_caterpillar_ecc(curve, rng)
        doc = {"scheme": "ECC", "strength": args.strength, "caterpillar": cat.to_json(args.include_secrets)}
    path = _out_path(args.out, "keys.json")
    write_json(path, doc)
    print(f"wrote {path}")
    return EXIT_OK


# -- expand -----------------------------------------------------------------

def _need(doc, *keys):
    cur = doc
    for k in keys:
        if not isinstance(cur, dict) or k not in cur:
            raise UsageError(f"key file lacks {'.'.join(keys)} (needed for this stage)")
        cur = cur[k]
    return cur


def _expand_rsa(args, doc, rng):
    if args.stage == "cocoon":
        S = unhexint(_need(doc, "caterpillar", "S"))
        alpha = unhexint(_need(doc, "expansion", "alpha"))
        rs = args.randomness or [rsa_bke.draw_randomizer(rng) for _ in range(args.count)]
        keys = [rsa_bke.expand_cocoon_rsa(S, alpha, r, i) for i, r in enumerate(rs)]
        return [{"i": hexint(k.i), "r": hexint(k.r), "J": hexint(k.J)} for k in keys]
    beta = unhexint(_need(doc, "expansion", "beta"))
    cocoons = _need(_load_cocoons(args), "keys")[: args.count]
    if len(cocoons) < args.count:
        raise UsageError(f"cocoon file holds {len(cocoons)} keys, {args.count} requested")
    os_ = args.randomness or [rsa_bke.draw_randomizer(rng) for _ in cocoons]
    keys = [
        rsa_bke.expand_butterfly_rsa(unhexint(c["J"]), beta, o, unhexint(c["i"])) for c, o in zip(cocoons, os_)
    ]
    return [{"i": hexint(k.i), "o": hexint(k.o), "H": hexint(k.H)} for k in keys]


def _expand_ecc(args, doc, rng):
    curve = get_curve(_need(doc, "caterpillar", "curve"))
    if args.stage == "cocoon":
        cat = doc["caterpillar"]
        A = curve.decode_point(bytes.fromhex(_need(doc, "caterpillar", "A")))
        P = curve.decode_point(bytes.fromhex(_need(doc, "caterpillar", "P")))
        ck, ek = bytes.fromhex(cat["ck"]), bytes.fromhex(cat["ek"])
        indices = args.randomness or list(range(args.start, args.start + args.count))
        pairs = [ecc_bke.expand_cocoon_ecc(A, P, ck, ek, i, curve) for i in indices]
        return [
            {"i": hexint(c.i), "B": curve.encode_point(c.B).hex(), "Q": curve.encode_point(c.Q).hex()}
            for c in pairs
        ]
    cocoons = _need(_load_cocoons(args), "keys")[: args.count]
    if len(cocoons) < args.count:
        raise UsageError(f"cocoon file holds {len(cocoons)} keys, {args.count} requested")
    out = []
    for c in cocoons:
        B = curve.decode_point(bytes.fromhex(c["B"]))
        cval, _, butterfly = ecc_bke.form_butterfly_ecc(B, curve, rng)
        out.append({"i": c["i"], "c": hexint(cval), "butterfly_public": curve.encode_point(butterfly).hex()})
    return out


def _load_cocoons(args):
    if not args.cocoon:
        raise UsageError("butterfly stage needs --cocoon FILE (output of the cocoon stage)")
    doc = read_json(args.cocoon)
    if doc.get("stage") != "cocoon":
        raise UsageError(f"{args.cocoon} is not a cocoon-stage file")
    return doc


def cmd_expand(args) -> int:
    if args.randomness is not None and len(args.randomness) != args.count:
        raise UsageError("--randomness must list exactly --count values")
    doc = read_json(args.key)
    scheme = _need(doc, "scheme")
    rng = _rng(args.seed)
    keys = _expand_rsa(args, doc, rng) if scheme == "RSA" else _expand_ecc(args, doc, rng)
    out = {"scheme": scheme, "stage": args.stage, "keys": keys}
    path = _out_path(args.out, f"{args.stage}.json")
    write_json(path, out)
    print(f"wrote {len(keys)} {args.stage} keys to {path}")
    return EXIT_OK


# -- verify-example ---------------------------------------------------------

def cmd_verify_example(args) -> int:
    checks = verify_example(load_fixture(args.fixture))
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "ok" if c.ok else "MISMATCH"
        line = f"{c.name.ljust(width)}  {c.actual}  {status}"
        if not c.ok:
            line += f" (expected {c.expected})"
        if c.note:
            line += f"  # {c.note}"
        print(line)
    failed = [c.name for c in checks if not c.ok]
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(checks)} checks passed")
    return EXIT_OK


# -- flow -------------------------------------------------------------------

def cmd_flow(args) -> int:
    tr = flow.run_flow(
        args.scheme,
        batch=args.batch,
        strength=args.strength,
        seed=args.seed,
        rsa_bits=args.rsa_bits,
        inject=tuple(args.inject or ()),
    )
    path = _out_path(args.out, "transcript.json")
    Path(path).write_text(tr.dumps(), encoding="utf-8")
    violations = flow.assert_privacy(tr)
    report = {
        "transcript": str(path),
        "structure": flow.check_structure(tr),
        "violations": [str(v) for v in violations],
    }
    if tr.scheme == "RSA":
        report["collusion"] = flow.collusion_probe(tr).to_json()
        report["downloads_to_ee"] = sum(m.receiver == "EE" for m in tr.messages)
    print(dumps(report), end="")
    if violations:
        return EXIT_PRIVACY
    if report["structure"]:
        return EXIT_VERIFY
    return EXIT_OK


# -- bench ------------------------------------------------------------------

def _bench_config(args) -> bench.BenchConfig:
    base = bench.BenchConfig.from_file(args.config) if args.config else bench.BenchConfig()
    overrides = {
        "experiments": args.experiments,
        "strengths": args.strengths,
        "iterations": args.iterations,
        "batch": args.batch,
        "warmup": args.warmup,
        "seed": args.seed,
        "backend": args.backend,
    }
    data = bench.config_dict(base)
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.include_ecies:
        data["include_ecies"] = True
    if args.no_fixtures:
        data["use_fixtures"] = False
    return bench.BenchConfig(**data)


def cmd_bench(args) -> int:
    try:
        config = _bench_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def progress(e, s, scheme, samples):
        if not args.quiet:
            print(f"  exp {e} strength {s} {scheme}: {len(samples)} samples", file=sys.stderr)

    report = bench.run_bench(config, progress)
    out_dir = Path(args.out_dir) if args.out_dir else _out_dir()
    paths = report.write(out_dir)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.format == "csv":
        print(report.to_csv(), end="")
    elif args.format == "json":
        print(report.to_json(), end="")
    elif args.format == "md":
        print(report.to_markdown(), end="")
    print(f"speedup T_E/T_R (backend: {report.meta['backend']})")
    print(report.ratio_table(), end="")
    print("wrote " + ", ".join(str(p) for p in paths.values()))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scmsbke", description=__doc__)
    p.add_argument("--backend", dest="global_backend", choices=["auto", *kernels.available_backends()],
                   help="arithmetic kernel (default: compiled if built)")
    sub = p.add_subparsers(dest="command", required=True)
    strength = dict(type=int, choices=list(flow.STRENGTHS))

    k = sub.add_parser("keygen", help="generate caterpillar key material")
    k.add_argument("--scheme", choices=["ecc", "rsa"], required=True)
    k.add_argument("--strength", required=True, **strength)
    k.add_argument("--seed", type=int)
    k.add_argument("--out")
    k.add_argument("--include-secrets", action="store_true",
                   help="also write private scalars, primes, totient and expansion values")
    k.add_argument("--expansion-bits", type=int, default=rsa_bke.DEFAULT_EXPANSION_PRIME_BITS)
    k.add_argument("--rsa-bits", type=int, help=argparse.SUPPRESS)
    k.set_defaults(func=cmd_keygen)

    e = sub.add_parser("expand", help="expand cocoon or butterfly public keys")
    e.add_argument("--key", required=True, help="key file from keygen (or the worked-example file)")
    e.add_argument("--stage", choices=["cocoon", "butterfly"], required=True)
    e.add_argument("--count", type=_positive, required=True)
    e.add_argument("--randomness", type=_int_list,
                   help="comma-separated r_i (cocoon) / o_i (butterfly) for RSA, indices for ECC cocoons")
    e.add_argument("--cocoon", help="cocoon-stage output, required for --stage butterfly")
    e.add_argument("--start", type=int, default=0, help="first ECC index")
    e.add_argument("--seed", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_expand)

    f = sub.add_parser("flow", help="simulate EE/RA/ACA provisioning and check privacy")
    f.add_argument("--scheme", choices=["ecc", "rsa"], required=True)
    f.add_argument("--batch", type=_positive, default=20)
    f.add_argument("--strength", default=80, **strength)
    f.add_argument("--seed", type=int)
    f.add_argument("--out")
    f.add_argument("--rsa-bits", type=int, help=argparse.SUPPRESS)
    f.add_argument("--inject", action="append", choices=list(flow.FAULTS), help=argparse.SUPPRESS)
    f.set_defaults(func=cmd_flow)

    b = sub.add_parser("bench", help="time key expansion for both schemes")
    b.add_argument("--config", help="JSON file with BenchConfig fields; flags override it")
    b.add_argument("--experiments", type=_int_list)
    b.add_argument("--strengths", type=_int_list)
    b.add_argument("--iterations", type=_positive)
    b.add_argument("--batch", type=_positive)
    b.add_argument("--warmup", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--backend", choices=["auto", *kernels.available_backends()])
    b.add_argument("--include-ecies", action="store_true", help="time the ECIES wrap of c in experiments 2/4")
    b.add_argument("--no-fixtures", action="store_true", help="generate 7680/15360-bit keys instead of loading them")
    b.add_argument("--out-dir")
    b.add_argument("--format", choices=["csv", "json", "md"], help="also print this rendering")
    b.add_argument("--quiet", action="store_true")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify-example", help="recompute the 10-bit worked example")
    v.add_argument("--fixture", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.global_backend:
        kernels.use_backend(args.global_backend)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"scmsbke {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, KeyError, ValueError, json.JSONDecodeError, BKEError) as exc:
        print(f"scmsbke {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
