"""Monte-Carlo rewriting simulator.

One bit of the information vector flips per step. A flip the code cannot
absorb erases the block: block and information vector return to all-zero and
that flip is dropped. The number of rewritings of an interval is the number of
successful writes between two erases.
"""

from __future__ import annotations

import csv
import json
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from flashlab.codec import make_code
from flashlab.model import CodeParams

_BATCH = 1 << 16
_MEMO_LIMIT = 1 << 21
_MISS = object()


@dataclass(frozen=True)
class FlipDistribution:
    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        p = tuple(float(x) for x in self.probabilities)
        object.__setattr__(self, "probabilities", p)
        if not p:
            raise ValueError("empty flip distribution")
        if any(x < 0 for x in p):
            raise ValueError(f"negative flip probability in {p}")
        if abs(math.fsum(p) - 1.0) > 1e-12:
            raise ValueError(f"flip probabilities sum to {math.fsum(p)!r}, not 1")

    @classmethod
    def uniform(cls, k: int) -> "FlipDistribution":
        return cls((1.0 / k,) * k)

    @classmethod
    def first_bit(cls, p1: float, k: int = 2) -> "FlipDistribution":
        """Bit 1 flips with probability ``p1``; the rest is spread evenly."""
        rest = (1.0 - p1) / (k - 1)
        return cls((p1,) + (rest,) * (k - 1))

    @property
    def k(self) -> int:
        return len(self.probabilities)

    @property
    def support(self) -> list[int]:
        """1-based bits with nonzero probability."""
        return [i + 1 for i, p in enumerate(self.probabilities) if p > 0]

    def sampler(self, rng: np.random.Generator, batch: int = _BATCH) -> Iterator[int]:
        """Endless stream of 1-based bit indices by cumulative-sum inversion."""
        cdf = np.cumsum(self.probabilities)
        cdf[-1] = 1.0
        # zero-probability bits share a prefix sum with their predecessor and
        # are never selected with side="right"
        while True:
            u = rng.random(batch)
            yield from (np.searchsorted(cdf, u, side="right") + 1).tolist()


@dataclass(frozen=True)
class RunConfig:
    params: CodeParams
    code: str
    dist: FlipDistribution
    stop: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.stop < 1:
            raise ValueError("stop must be a positive erase count")
        if self.dist.k != self.params.k:
            raise ValueError(f"distribution has {self.dist.k} bits, code has k={self.params.k}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def as_dict(self) -> dict:
        p = self.params
        return {
            "code": self.code, "n": p.n, "k": p.k, "q": p.q, "m": p.m,
            "p": list(self.dist.probabilities), "erases": self.stop, "seed": self.seed,
        }


@dataclass
class RunStats:
    intervals: list[int]
    config: Optional[RunConfig] = field(default=None, compare=False)

    @property
    def erases(self) -> int:
        return len(self.intervals)

    @property
    def rewrites(self) -> int:
        return sum(self.intervals)

    @property
    def steps(self) -> int:
        # every erase consumes one flip on top of the successful writes
        return self.rewrites + self.erases

    @property
    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.intervals).items()))

    @property
    def average(self) -> float:
        return average_rewritings(self)

    @property
    def erase_rate(self) -> float:
        return erase_probability_sim(self)

    @property
    def erase_rate_per_step(self) -> float:
        return self.erases / self.steps

    @property
    def erase_rate_stderr(self) -> float:
        """Delta-method standard error of :attr:`erase_rate`.

        Intervals are i.i.d. renewal cycles, so the rate is ``1 / mean`` and its
        error is ``sd / (mean**2 * sqrt(N))``.
        """
        x = np.asarray(self.intervals, dtype=float)
        if len(x) < 2:
            return math.inf
        mean = x.mean()
        return float(x.std(ddof=1) / (mean * mean * math.sqrt(len(x))))

    def to_json(self) -> dict:
        out = {"config": self.config.as_dict() if self.config else None}
        out.update(
            average=self.average,
            erase_rate=self.erase_rate,
            erase_rate_stderr=self.erase_rate_stderr,
            erase_rate_per_step=self.erase_rate_per_step,
            intervals=self.erases,
            rewrites=self.rewrites,
            steps=self.steps,
        )
        return out


def average_rewritings(stats: RunStats) -> float:
    if not stats.intervals:
        raise ValueError("no intervals recorded")
    return stats.rewrites / stats.erases


def erase_probability_sim(stats: RunStats) -> float:
    """Erases per successful rewrite, i.e. ``1 / average_rewritings``."""
    if not stats.intervals:
        raise ValueError("no intervals recorded")
    return stats.erases / stats.rewrites


def run(cfg: RunConfig, flips: Optional[Iterable[int]] = None) -> RunStats:
    """Simulate until ``cfg.stop`` erases.

    ``flips`` overrides the random flip source with a fixed schedule; it must
    be long enough to reach the requested erase count.
    """
    code = make_code(cfg.code, cfg.params)
    if flips is None:
        flips = cfg.dist.sampler(np.random.Generator(np.random.PCG64(cfg.seed)))
    encode = code.encode_flip
    memo: dict = {}
    zero = code.zero()
    state = zero
    intervals: list[int] = []
    count = 0
    for i in flips:
        key = (state, i)
        nxt = memo.get(key, _MISS)
        if nxt is _MISS:
            nxt = encode(state, i)
            if len(memo) < _MEMO_LIMIT:
                memo[key] = nxt
        if nxt is None:
            intervals.append(count)
            if len(intervals) == cfg.stop:
                break
            state, count = zero, 0
        else:
            state = nxt
            count += 1
    else:
        raise ValueError(f"flip schedule ended after {len(intervals)} of {cfg.stop} erases")
    return RunStats(intervals, cfg)


def derive_seed(master: int, run_index: int) -> int:
    ss = np.random.SeedSequence(entropy=master, spawn_key=(run_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def thread_count(requested: Optional[int] = None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("FLASHLAB_THREADS")
    return max(1, int(env)) if env else 1


def run_many(configs: Sequence[RunConfig], threads: Optional[int] = None) -> list[RunStats]:
    """Run independent configurations; results keep the input order."""
    workers = thread_count(threads)
    if workers == 1 or len(configs) < 2:
        return [run(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, configs))


def replicate(cfg: RunConfig, runs: int, threads: Optional[int] = None) -> list[RunStats]:
    """``runs`` copies of ``cfg`` with sub-seeds derived from ``cfg.seed``."""
    configs = [
        RunConfig(cfg.params, cfg.code, cfg.dist, cfg.stop, derive_seed(cfg.seed, r))
        for r in range(runs)
    ]
    return run_many(configs, threads)


def write_histogram_csv(stats: RunStats, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rewrites", "frequency"])
        w.writerows(stats.histogram.items())


def write_stats_json(stats: RunStats, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(stats.to_json(), fh, indent=2)
        fh.write("\n")
