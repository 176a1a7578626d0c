"""Expansion-time benchmark: the RSA scheme against the ECC scheme.

Four experiments, each at every requested security strength:

1. caterpillar -> one cocoon key
2. cocoon -> one butterfly key
3. caterpillar -> ``batch`` cocoon keys (time per key)
4. cocoon -> ``batch`` butterfly keys (time per key)

Key generation, prime search and wrapping of the expansion values happen
outside the timed region. Each sample is a single monotonic-clock reading
pair around one expansion (experiments 1-2) or one batch divided by its
size (3-4). No outliers are dropped.
"""
from __future__ import annotations

import csv
import gc
import io
import json
import platform
import random
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import ecc_bke, kernels, rsa_bke
from .curves import get_curve
from .ec_crypto import EcKeyPair

EXPERIMENTS = (1, 2, 3, 4)
STRENGTHS = (80, 112, 128, 192, 256)
SCHEMES = ("RSA", "ECC")
EXPERIMENT_TITLES = {
    1: "caterpillar to 1 cocoon key",
    2: "cocoon to 1 butterfly key",
    3: "caterpillar to {batch} cocoon keys (per key)",
    4: "cocoon to {batch} butterfly keys (per key)",
}
GAP = "n/a"


@dataclass
class BenchConfig:
    experiments: tuple = EXPERIMENTS
    strengths: tuple = STRENGTHS
    iterations: int = 1000
    batch: int = 20
    warmup: int = 10
    seed: int = 0
    include_ecies: bool = False
    use_fixtures: bool = True
    expansion_bits: int = rsa_bke.DEFAULT_EXPANSION_PRIME_BITS
    backend: str = "auto"

    def __post_init__(self):
        self.experiments = tuple(int(e) for e in self.experiments)
        self.strengths = tuple(int(s) for s in self.strengths)
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        if not self.experiments or set(self.experiments) - set(EXPERIMENTS):
            raise ValueError(f"experiments must be a non-empty subset of {EXPERIMENTS}")
        if not self.strengths or set(self.strengths) - set(STRENGTHS):
            raise ValueError(f"strengths must be a non-empty subset of {STRENGTHS}")

    @classmethod
    def from_file(cls, path) -> "BenchConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class CellStats:
    experiment: int
    strength: int
    scheme: str
    mean_us: float
    stddev_us: float
    n: int


@dataclass
class BenchReport:
    experiments: tuple
    strengths: tuple
    cells: dict  # (experiment, strength, scheme) -> CellStats
    ratios: dict  # (experiment, strength) -> float | None
    batch: int = 20
    meta: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def cell(self, experiment, strength, scheme):
        return self.cells.get((experiment, strength, scheme))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", "strength", "scheme", "mean_us", "stddev_us", "n"])
        for e in self.experiments:
            for s in self.strengths:
                for scheme in SCHEMES:
                    c = self.cell(e, s, scheme)
                    if c is None:
                        w.writerow([e, s, scheme, GAP, GAP, 0])
                    else:
                        w.writerow([e, s, scheme, f"{c.mean_us:.3f}", f"{c.stddev_us:.3f}", c.n])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "warnings": self.warnings,
            "experiments": {
                str(e): {
                    str(s): {
                        scheme: (None if (c := self.cell(e, s, scheme)) is None else
                                 {"mean_us": c.mean_us, "stddev_us": c.stddev_us, "n": c.n})
                        for scheme in SCHEMES
                    }
                    | {"ratio": self.ratios.get((e, s))}
                    for s in self.strengths
                }
                for e in self.experiments
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def _fmt(self, e, s, scheme):
        c = self.cell(e, s, scheme)
        return GAP if c is None else f"{c.mean_us:.3f} ({c.stddev_us:.3f})"

    def _ratio(self, e, s):
        r = self.ratios.get((e, s))
        return GAP if r is None else f"{r:.0f}"

    def to_markdown(self) -> str:
        lines = ["# Key expansion time", ""]
        if self.meta:
            lines += [", ".join(f"{k}: {v}" for k, v in self.meta.items()), ""]
        for w in self.warnings:
            lines += [f"> warning: {w}", ""]
        for e in self.experiments:
            title = EXPERIMENT_TITLES[e].format(batch=self.batch)
            lines += [
                f"## Experiment {e}: {title} (microseconds, mean (stddev))",
                "",
                "| Security strength | RSA expansion | ECC expansion |",
                "|---|---|---|",
            ]
            lines += [f"| {s} | {self._fmt(e, s, 'RSA')} | {self._fmt(e, s, 'ECC')} |" for s in self.strengths]
            lines.append("")
        lines += ["## Speedup T_E / T_R", ""]
        lines.append("| Security strength | " + " | ".join(f"Experiment {e}" for e in self.experiments) + " |")
        lines.append("|---" * (len(self.experiments) + 1) + "|")
        for s in self.strengths:
            lines.append(f"| {s} | " + " | ".join(self._ratio(e, s) for e in self.experiments) + " |")
        return "\n".join(lines) + "\n"

    def ratio_table(self) -> str:
        """Aligned-text speedup table."""
        head = ["strength"] + [f"exp{e}" for e in self.experiments]
        rows = [[str(s)] + [self._ratio(e, s) for e in self.experiments] for s in self.strengths]
        widths = [max(len(r[k]) for r in [head] + rows) for k in range(len(head))]
        fmt = lambda r: "  ".join(v.rjust(w) for v, w in zip(r, widths))  # noqa: E731
        return "\n".join([fmt(head)] + [fmt(r) for r in rows]) + "\n"

    def to_text(self) -> str:
        out = []
        for e in self.experiments:
            out.append(f"experiment {e}: {EXPERIMENT_TITLES[e].format(batch=self.batch)}")
            rows = [["strength", "RSA mean (sd) us", "ECC mean (sd) us"]]
            rows += [[str(s), self._fmt(e, s, "RSA"), self._fmt(e, s, "ECC")] for s in self.strengths]
            widths = [max(len(r[k]) for r in rows) for k in range(3)]
            out += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows]
            out.append("")
        out.append("speedup T_E/T_R")
        out.append(self.ratio_table())
        return "\n".join(out)

    def write(self, out_dir) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"csv": out / "report.csv", "json": out / "report.json", "md": out / "report.md"}
        paths["csv"].write_text(self.to_csv())
        paths["json"].write_text(self.to_json())
        paths["md"].write_text(self.to_markdown())
        return paths


def _stats(samples):
    mean = statistics.fmean(samples)
    sd = statistics.stdev(samples) if len(samples) > 1 else 0.0
    return mean, sd


def summarize(timings: dict, experiments=None, strengths=None, batch: int = 20, meta=None) -> BenchReport:
    """Reduce raw per-iteration samples to mean, sample stddev and speedup.

    ``timings`` maps ``(experiment, strength, scheme)`` to microsecond
    samples. Requested cells without samples stay in the report as gaps.
    """
    experiments = tuple(experiments or sorted({k[0] for k in timings}))
    strengths = tuple(strengths or sorted({k[1] for k in timings}))
    cells = {}
    for key, samples in timings.items():
        if samples:
            mean, sd = _stats(samples)
            cells[key] = CellStats(key[0], key[1], key[2], mean, sd, len(samples))
    ratios = {}
    for e in experiments:
        for s in strengths:
            ecc, rsa = cells.get((e, s, "ECC")), cells.get((e, s, "RSA"))
            ratios[(e, s)] = ecc.mean_us / rsa.mean_us if ecc and rsa and rsa.mean_us > 0 else None
    return BenchReport(experiments, strengths, cells, ratios, batch, dict(meta or {}))


class _Material:
    """Per-strength keys, generated once and outside every timed region."""

    def __init__(self, strength, config, rng):
        bits = rsa_bke.RSA_MODULUS_BITS[strength]
        slot = 0 if config.use_fixtures and rsa_bke.fixture_primes(bits) else None
        self.rsa = rsa_bke.gen_caterpillar_rsa(bits, rng, fixture_slot=slot)
        self.ev = rsa_bke.gen_expansion_values(self.rsa, config.expansion_bits, rng)
        self.J = rsa_bke.expand_cocoon_rsa(self.rsa.S, self.ev.alpha, rsa_bke.draw_randomizer(rng)).J
        self.curve = get_curve(ecc_bke.ECC_CURVES[strength])
        self.ecc = ecc_bke.gen_caterpillar_ecc(self.curve, rng)
        self.cocoon = ecc_bke.expand_cocoon_ecc(
            self.ecc.A, self.ecc.P, self.ecc.ck, self.ecc.ek, 0, self.curve
        )
        self.aca = EcKeyPair.generate(self.curve, rng) if config.include_ecies else None


def _kernel(experiment, scheme, m: _Material, config, rng):
    """Return ``step(i)``: one expansion for index ``i``."""
    if scheme == "RSA":
        S, alpha, J, beta = m.rsa.S, m.ev.alpha, m.J, m.ev.beta
        draw = rsa_bke.draw_randomizer
        if experiment in (1, 3):
            return lambda i: rsa_bke.expand_cocoon_rsa(S, alpha, draw(rng), i)
        return lambda i: rsa_bke.expand_butterfly_rsa(J, beta, draw(rng), i)
    cat, curve = m.ecc, m.curve
    if experiment in (1, 3):
        return lambda i: ecc_bke.expand_cocoon_ecc(cat.A, cat.P, cat.ck, cat.ek, i, curve)
    if config.include_ecies:
        return lambda i: ecc_bke.aca_contribution_ecc(m.cocoon, curve, m.aca, rng)
    B = m.cocoon.B
    return lambda i: ecc_bke.form_butterfly_ecc(B, curve, rng)


def run_experiment(experiment: int, strength: int, scheme: str, config: BenchConfig, material=None, rng=None):
    """Per-iteration expansion times in microseconds (``config.iterations`` samples)."""
    if rng is None:
        rng = random.Random(config.seed)
    m = material or _Material(strength, config, rng)
    step = _kernel(experiment, scheme, m, config, rng)
    per_sample = config.batch if experiment in (3, 4) else 1
    clock = time.perf_counter_ns
    for w in range(config.warmup):
        step(w)
    samples = []
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        _timed_loop(step, config.iterations, per_sample, clock, samples)
    finally:
        if gc_was_enabled:
            gc.enable()
    return samples


def _timed_loop(step, iterations, per_sample, clock, samples):
    i = 0
    for _ in range(iterations):
        if per_sample == 1:
            t0 = clock()
            step(i)
            t1 = clock()
            i += 1
        else:
            t0 = clock()
            for _ in range(per_sample):
                step(i)
                i += 1
            t1 = clock()
        samples.append((t1 - t0) / 1000.0 / per_sample)


def clock_warnings() -> list:
    res = time.get_clock_info("perf_counter").resolution
    return [f"clock resolution {res * 1e6:.3f} us is coarser than 1 us"] if res > 1e-6 else []


def run_bench(config: BenchConfig, progress=None) -> BenchReport:
    previous = kernels.BACKEND
    backend = kernels.use_backend(config.backend)
    try:
        return _run_bench(config, backend, progress)
    finally:
        kernels.use_backend(previous)


def _run_bench(config, backend, progress):
    rng = random.Random(config.seed)
    timings = {}
    for s in config.strengths:
        m = _Material(s, config, rng)
        for e in config.experiments:
            for scheme in SCHEMES:
                timings[(e, s, scheme)] = run_experiment(e, s, scheme, config, m, rng)
                if progress:
                    progress(e, s, scheme, timings[(e, s, scheme)])
    meta = {
        "backend": backend,
        "iterations": config.iterations,
        "batch": config.batch,
        "include_ecies": config.include_ecies,
        "python": platform.python_version(),
        "machine": platform.machine(),
    }
    report = summarize(timings, config.experiments, config.strengths, config.batch, meta)
    report.warnings = clock_warnings()
    return report


def config_dict(config: BenchConfig) -> dict:
    return asdict(config)
