import json
from dataclasses import replace

import numpy as np
import pytest

from dipercolate import (
    DegreeDistribution,
    ExperimentConfig,
    TrialRecord,
    gscc_fraction,
    load_config,
    run_experiment,
    summarize,
    trial_seed,
    write_csv,
)
from dipercolate.errors import ConfigError
from dipercolate.experiments import CSV_COLUMNS, config_from_mapping


def small_config(**kwargs):
    base = dict(
        dist="poisson:2",
        n=300,
        pi_grid=(0.9, 0.3),
        mode="bond",
        trials=3,
        master_seed=42,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


# ----- config ------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ConfigError):
        small_config(mode="both")
    with pytest.raises(ConfigError):
        small_config(trials=0)
    with pytest.raises(ConfigError):
        small_config(pi_grid=())
    with pytest.raises(ConfigError):
        small_config(pi_grid=(0.0, 0.5))
    with pytest.raises(ConfigError):
        small_config(n=0)
    with pytest.raises(ConfigError):
        small_config(threads=0)
    with pytest.raises(ConfigError):
        small_config(master_seed=-1)


def test_config_file_parsing(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(
        "# comment\n"
        "dist = poisson:2\n"
        "n = 500\n"
        "mode = site\n"
        "pi_grid = 0.4, 0.8\n"
        "trials = 2\n"
        "seed = 7\n"
        "max_attempts = 500\n"
        "fixed_sequence = true\n"
        "threads = 2\n"
        "csv = out.csv\n"
        "json = out.json\n"
    )
    config = load_config(path)
    assert config.dist == "poisson:2"
    assert config.n == 500
    assert config.mode == "site"
    assert config.pi_grid == (0.4, 0.8)
    assert config.trials == 2
    assert config.master_seed == 7
    assert config.max_rejection_attempts == 500
    assert config.fixed_sequence is True
    assert config.threads == 2
    assert config.csv_path == "out.csv"
    assert config.summary_path == "out.json"


def test_config_file_overrides(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("dist = poisson:2\nn = 500\npi_grid = 0.5\n")
    config = load_config(path, n=100, trials=4)
    assert config.n == 100 and config.trials == 4


def test_config_file_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("dist poisson:2\n")
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text("frobnicate = 3\ndist = const:1\nn = 4\npi_grid = 0.5\n")
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text("dist = const:1\nn = four\npi_grid = 0.5\n")
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(ConfigError):
        config_from_mapping({"dist": "const:1"})  # n, pi_grid missing


# ----- seeding -----------------------------------------------------------------


def test_trial_seeds_distinct_and_stable():
    seeds = {
        trial_seed(1, pi, t, r) for pi in range(3) for t in range(5) for r in range(3)
    }
    assert len(seeds) == 45
    assert trial_seed(1, 2, 3, 0) == trial_seed(1, 2, 3, 0)
    assert trial_seed(1, 2, 3, 0) != trial_seed(2, 2, 3, 0)


# ----- running ------------------------------------------------------------------


def test_run_deterministic_and_order_sorted():
    records_a, summary_a = run_experiment(small_config())
    records_b, summary_b = run_experiment(small_config())
    assert records_a == records_b
    assert summary_a == summary_b
    pis = [r.pi for r in records_a]
    assert pis == [0.9] * 3 + [0.3] * 3
    assert [r.trial for r in records_a] == [0, 1, 2, 0, 1, 2]


def test_threads_do_not_change_results():
    serial, _ = run_experiment(small_config())
    threaded, _ = run_experiment(small_config(threads=4))
    assert serial == threaded


def test_fixed_sequence_shares_realization():
    records, _ = run_experiment(small_config(fixed_sequence=True))
    assert len({r.m_before for r in records}) == 1


def test_trial_graph_passed_simplicity_and_fields():
    records, _ = run_experiment(small_config())
    for r in records:
        assert r.status == "ok"
        assert r.n == 300
        assert 0 < r.scc_fraction <= 1.0
        assert r.scc_size == round(r.scc_fraction * r.n)
        assert r.m_after <= r.m_before
        assert r.deleted == 0  # bond mode
        assert r.attempts >= 1
        assert r.elapsed_ms == 0  # timing suppressed by default


def test_site_mode_records_deletions():
    records, _ = run_experiment(small_config(mode="site", pi_grid=(0.5,), trials=2))
    assert any(r.deleted > 0 for r in records)


def test_record_timing_opt_in():
    records, _ = run_experiment(small_config(trials=1, pi_grid=(0.9,), record_timing=True))
    assert all(r.elapsed_ms >= 0 for r in records)


def test_supercritical_beats_subcritical():
    # coarse physical sanity at small n: fractions at pi=0.9 dominate pi=0.3
    records, summary = run_experiment(small_config())
    by_pi = {row["pi"]: row for row in summary}
    assert by_pi[0.9]["mean"] > by_pi[0.3]["mean"]
    assert by_pi[0.9]["pi_c"] == pytest.approx(0.5, abs=1e-9)


def test_failed_trials_recorded_not_dropped():
    # const:1 on two vertices accepts with probability 1/2 per draw; with a
    # one-draw budget and 3 rounds each trial fails with probability 1/8
    config = ExperimentConfig(
        dist="const:1",
        n=2,
        pi_grid=(0.5,),
        mode="bond",
        trials=40,
        master_seed=0,
        max_rejection_attempts=1,
    )
    records, summary = run_experiment(config)
    failed = [r for r in records if r.status == "failed"]
    ok = [r for r in records if r.status == "ok"]
    assert failed, "seeded run is expected to contain failures"
    assert all(r.attempts == 3 for r in failed)
    assert all(r.scc_size == 0 and r.scc_fraction == 0.0 for r in failed)
    row = summary[0]
    assert row["trials_ok"] == len(ok)
    assert row["trials_failed"] == len(failed)
    assert row["mean"] == pytest.approx(np.mean([r.scc_fraction for r in ok]))


# ----- summarize ----------------------------------------------------------------


def synth_record(pi=0.5, trial=0, fraction=0.25, status="ok"):
    return TrialRecord(
        pi=pi,
        trial=trial,
        seed=1,
        n=100,
        m_before=200,
        m_after=100,
        deleted=0,
        scc_size=int(fraction * 100),
        scc_fraction=fraction,
        attempts=1,
        elapsed_ms=0,
        status=status,
    )


def test_summarize_single_and_identical():
    dist = DegreeDistribution.poisson(2.0)
    rows = summarize([synth_record()], dist, "bond")
    assert rows[0]["mean"] == 0.25 and rows[0]["std"] == 0.0

    rows = summarize([synth_record(trial=t) for t in range(20)], dist, "bond")
    assert rows[0]["std"] == 0.0 and rows[0]["min"] == rows[0]["max"] == 0.25


def test_summarize_theory_matches_direct_invocation():
    dist = DegreeDistribution.poisson(2.0)
    rows = summarize([synth_record(pi=0.8)], dist, "site")
    assert rows[0]["theory_c"] == gscc_fraction(dist, 0.8, "site").c_site


def test_summarize_empty_rejected():
    with pytest.raises(ValueError):
        summarize([], DegreeDistribution.poisson(2.0), "bond")


def test_summarize_all_failed_gives_nulls():
    dist = DegreeDistribution.poisson(2.0)
    rows = summarize([synth_record(status="failed")], dist, "bond")
    assert rows[0]["mean"] is None and rows[0]["trials_ok"] == 0


# ----- outputs ------------------------------------------------------------------


def test_csv_format_and_determinism(tmp_path):
    config = small_config(
        csv_path=str(tmp_path / "a.csv"), summary_path=str(tmp_path / "a.json")
    )
    run_experiment(config)
    config_b = replace(
        config, csv_path=str(tmp_path / "b.csv"), summary_path=str(tmp_path / "b.json")
    )
    run_experiment(config_b)
    a_csv = (tmp_path / "a.csv").read_bytes()
    b_csv = (tmp_path / "b.csv").read_bytes()
    assert a_csv == b_csv
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    lines = a_csv.decode().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    first = lines[1].split(",")
    assert len(first) == len(CSV_COLUMNS)
    assert float(first[0]) == 0.9
    assert first[-1] == "ok"

    summary = json.loads((tmp_path / "a.json").read_text())
    assert [row["pi"] for row in summary] == [0.9, 0.3]
    means = {}
    for line in lines[1:]:
        fields = line.split(",")
        means.setdefault(float(fields[0]), []).append(float(fields[8]))
    for row in summary:
        assert row["mean"] == pytest.approx(np.mean(means[row["pi"]]), abs=1e-15)


def test_write_csv_synthetic(tmp_path):
    path = tmp_path / "records.csv"
    write_csv([synth_record()], path)
    text = path.read_text()
    assert text.splitlines()[1] == "0.5,0,1,100,200,100,0,25,0.25,1,0,ok"
