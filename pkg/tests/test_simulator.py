import itertools
import json

import numpy as np
import pytest

from flashlab.model import CodeParams
from flashlab.simulator import (
    FlipDistribution,
    RunConfig,
    RunStats,
    average_rewritings,
    derive_seed,
    erase_probability_sim,
    replicate,
    run,
    run_many,
    write_histogram_csv,
    write_stats_json,
)

P422 = CodeParams(4, 2, 2)


def cfg(code="ilifc", params=P422, dist=None, stop=50, seed=1):
    return RunConfig(params, code, dist or FlipDistribution.uniform(params.k), stop, seed)


def test_distribution_validation():
    with pytest.raises(ValueError):
        FlipDistribution((0.5, 0.6))
    with pytest.raises(ValueError):
        FlipDistribution((1.5, -0.5))
    assert FlipDistribution.first_bit(0.2).probabilities == (0.2, 0.8)
    assert FlipDistribution.uniform(4).support == [1, 2, 3, 4]


def test_sampler_skips_zero_probability_bits():
    dist = FlipDistribution((0.0, 0.5, 0.0, 0.5))
    draws = list(itertools.islice(dist.sampler(np.random.default_rng(0), batch=1000), 5000))
    assert set(draws) == {2, 4}


def test_sampler_frequencies():
    dist = FlipDistribution((0.2, 0.8))
    draws = np.fromiter(itertools.islice(dist.sampler(np.random.default_rng(5)), 200_000), int)
    assert abs(np.mean(draws == 1) - 0.2) < 0.005


def test_forced_cycle_schedule():
    # (1,0|0,0) -> (1,0|0,1) -> (1,1|0,1) -> (1,1|1,1) -> erase
    stats = run(cfg(stop=1), flips=itertools.cycle([1, 2]))
    assert stats.intervals == [4]


def test_short_schedule_raises():
    with pytest.raises(ValueError):
        run(cfg(stop=2), flips=[1, 2, 1, 2, 1])


def test_stop_one():
    assert len(run(cfg(stop=1)).intervals) == 1


@pytest.mark.parametrize("code", ["ilifc", "layered"])
def test_same_seed_same_stats(code):
    a = run(cfg(code, CodeParams(8, 2, 3), stop=300, seed=99))
    b = run(cfg(code, CodeParams(8, 2, 3), stop=300, seed=99))
    c = run(cfg(code, CodeParams(8, 2, 3), stop=300, seed=100))
    assert a == b
    assert a != c


def test_parallel_matches_serial():
    configs = [cfg("layered", CodeParams(6, 2, 3), stop=200, seed=s) for s in range(4)]
    assert run_many(configs, threads=1) == run_many(configs, threads=2)


def test_replicate_uses_distinct_subseeds():
    reps = replicate(cfg(stop=20, seed=7), runs=3, threads=1)
    seeds = {r.config.seed for r in reps}
    assert len(seeds) == 3
    assert derive_seed(7, 0) == derive_seed(7, 0)


def test_stats_arithmetic():
    stats = RunStats([3, 5])
    assert average_rewritings(stats) == 4.0
    assert stats.histogram == {3: 1, 5: 1}
    single = RunStats([9])
    assert erase_probability_sim(single) == pytest.approx(1 / 9)
    assert single.erase_rate_per_step == pytest.approx(1 / 10)
    with pytest.raises(ValueError):
        average_rewritings(RunStats([]))
    with pytest.raises(ValueError):
        erase_probability_sim(RunStats([]))


@pytest.mark.parametrize("code", ["ilifc", "layered"])
def test_histogram_support_bounded(code):
    params = CodeParams(6, 2, 3)
    stats = run(cfg(code, params, dist=FlipDistribution((0.9, 0.1)), stop=2000, seed=4))
    assert sum(stats.histogram.values()) == 2000
    assert max(stats.histogram) <= params.n * (params.q - 1)


def test_output_files(tmp_path):
    stats = run(cfg(stop=30))
    write_histogram_csv(stats, tmp_path / "h.csv")
    lines = (tmp_path / "h.csv").read_text().splitlines()
    assert lines[0] == "rewrites,frequency"
    rows = [tuple(map(int, ln.split(","))) for ln in lines[1:]]
    assert rows == sorted(rows)
    assert sum(f for _, f in rows) == 30
    write_stats_json(stats, tmp_path / "s.json")
    data = json.loads((tmp_path / "s.json").read_text())
    assert data["intervals"] == 30
    assert data["average"] == pytest.approx(stats.average)
    assert data["config"]["code"] == "ilifc"


def test_run_config_validation():
    with pytest.raises(ValueError):
        cfg(stop=0)
    with pytest.raises(ValueError):
        RunConfig(P422, "ilifc", FlipDistribution.uniform(4), 1)
    with pytest.raises(ValueError):
        cfg(seed=-1)
