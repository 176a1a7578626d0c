import csv
import io
import json

import pytest

from scmsbke import bench, kernels
from scmsbke.bench import BenchConfig, run_experiment, summarize


def test_constant_samples():
    rep = summarize({(1, 80, "ECC"): [5, 5, 5, 5], (1, 80, "RSA"): [5, 5, 5, 5]})
    c = rep.cell(1, 80, "ECC")
    assert (c.mean_us, c.stddev_us, c.n) == (5, 0, 4)
    assert rep.ratios[(1, 80)] == 1


def test_ratio_from_raw_samples():
    rep = summarize({(1, 80, "ECC"): [1000.0] * 3, (1, 80, "RSA"): [10.0] * 3})
    assert rep.ratios[(1, 80)] == 100
    # Rounded tables would give 3.333/1.000; the ratio uses the raw means.
    rep = summarize({(2, 80, "ECC"): [10 / 3], (2, 80, "RSA"): [1.0004]})
    assert rep.ratios[(2, 80)] == pytest.approx((10 / 3) / 1.0004, rel=1e-12)


def test_sample_stddev():
    rep = summarize({(1, 80, "ECC"): [1, 2, 3, 4], (1, 80, "RSA"): [1]})
    assert rep.cell(1, 80, "ECC").stddev_us == pytest.approx(1.2909944487358056)


def test_missing_cell_is_a_gap():
    rep = summarize({(1, 80, "ECC"): [3.0]}, experiments=(1,), strengths=(80, 112))
    assert rep.ratios[(1, 80)] is None and rep.ratios[(1, 112)] is None
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert len(rows) == 4
    assert [r["mean_us"] for r in rows if r["scheme"] == "RSA"] == [bench.GAP, bench.GAP]
    assert bench.GAP in rep.to_markdown()
    assert json.loads(rep.to_json())["experiments"]["1"]["80"]["RSA"] is None


def _synthetic(strengths):
    t = {}
    for e in bench.EXPERIMENTS:
        for s in strengths:
            t[(e, s, "ECC")] = [float(s * 10 + e)] * 3
            t[(e, s, "RSA")] = [1.0, 1.0, 1.0]
    return summarize(t, bench.EXPERIMENTS, strengths)


def test_ratio_table_shape():
    rep = _synthetic((80, 128))
    lines = rep.ratio_table().strip().splitlines()
    assert len(lines) == 3 and len(lines[0].split()) == 5
    md = rep.to_markdown()
    ratio_md = md.split("## Speedup")[1]
    rows = [l for l in ratio_md.splitlines() if l.startswith("| ") and l[2].isdigit()]
    assert len(rows) == 2 and all(r.count("|") == 6 for r in rows)


def test_markdown_tables_full_shape():
    md = _synthetic(bench.STRENGTHS).to_markdown()
    sections = md.split("\n## ")[1:]
    assert len(sections) == 5
    for sec in sections[:4]:
        rows = [l for l in sec.splitlines() if l.startswith("| ") and l[2].isdigit()]
        assert len(rows) == 5 and all(r.count("|") == 4 for r in rows)
    rows = [l for l in sections[4].splitlines() if l.startswith("| ") and l[2].isdigit()]
    assert len(rows) == 5 and all(r.count("|") == 6 for r in rows)


def test_write_outputs(tmp_path):
    paths = _synthetic((80,)).write(tmp_path)
    assert {p.name for p in paths.values()} == {"report.csv", "report.json", "report.md"}
    header = (tmp_path / "report.csv").read_text().splitlines()[0]
    assert header == "experiment,strength,scheme,mean_us,stddev_us,n"


def test_config_validation(tmp_path):
    for bad in (dict(iterations=0), dict(batch=0), dict(strengths=(90,)), dict(experiments=(5,)), dict(warmup=-1)):
        with pytest.raises(ValueError):
            BenchConfig(**bad)
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"iterations": 7, "strengths": [80]}))
    assert BenchConfig.from_file(p).iterations == 7
    p.write_text(json.dumps({"iterationz": 7}))
    with pytest.raises(ValueError):
        BenchConfig.from_file(p)


@pytest.mark.parametrize("experiment", bench.EXPERIMENTS)
@pytest.mark.parametrize("scheme", bench.SCHEMES)
def test_run_experiment_sample_count(experiment, scheme):
    cfg = BenchConfig(iterations=5, batch=3, warmup=1, strengths=(80,))
    samples = run_experiment(experiment, 80, scheme, cfg)
    assert len(samples) == 5 and all(x > 0 for x in samples)


def test_include_ecies_is_slower():
    base = BenchConfig(iterations=20, warmup=2, strengths=(80,))
    with_ecies = BenchConfig(iterations=20, warmup=2, strengths=(80,), include_ecies=True)
    plain = sorted(run_experiment(2, 80, "ECC", base))[10]
    full = sorted(run_experiment(2, 80, "ECC", with_ecies))[10]
    assert full > plain


def test_run_bench_restores_backend():
    before = kernels.BACKEND
    rep = bench.run_bench(BenchConfig(experiments=(1,), strengths=(80,), iterations=3, warmup=0, backend="python"))
    assert rep.meta["backend"] == "python"
    assert kernels.BACKEND == before
    assert rep.ratios[(1, 80)] > 1
