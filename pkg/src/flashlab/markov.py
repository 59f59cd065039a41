"""Exact average-case analysis through the rewriting Markov chain.

States are the block states reachable from the all-zero block. Each flip of
bit ``i`` moves to the encoded successor with probability ``P_i``; a flip the
code cannot absorb is an erase transition back to the all-zero state.

The chain's stationary distribution gives the per-flip erase probability
``p``. Erases per successful rewrite, the quantity reported as the erase
probability ``P_E``, is ``p / (1 - p)``, and its inverse is the mean number of
rewrites between consecutive erases.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from flashlab.codec import FlashCode, make_code
from flashlab.model import Cells, CodeParams
from flashlab.simulator import FlipDistribution, thread_count

DEFAULT_MAX_TRANSITIONS = 10**6
DENSE_LIMIT = 2000


class StateCapExceeded(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    pass


class Transition(NamedTuple):
    target: int
    bit: int
    prob: float
    erase: bool


@dataclass
class ChainModel:
    code: str
    params: CodeParams
    dist: FlipDistribution
    states: list[Cells]
    transitions: list[list[Transition]]

    @property
    def size(self) -> int:
        return len(self.states)

    def matrix(self) -> sp.csr_matrix:
        rows, cols, vals = [], [], []
        for s, out in enumerate(self.transitions):
            for t in out:
                rows.append(s)
                cols.append(t.target)
                vals.append(t.prob)
        # duplicate (row, col) entries are summed by the constructor
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.size, self.size))

    def erase_vector(self) -> np.ndarray:
        """Per-state probability that the next flip erases the block."""
        e = np.zeros(self.size)
        for s, out in enumerate(self.transitions):
            e[s] = math.fsum(t.prob for t in out if t.erase)
        return e

    def dump(self) -> str:
        sep = "" if self.params.q <= 10 else ":"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["from", "to", "bit", "prob", "erase"])
        for s, out in enumerate(self.transitions):
            for t in out:
                w.writerow([
                    sep.join(map(str, self.states[s])),
                    sep.join(map(str, self.states[t.target])),
                    t.bit, repr(t.prob), int(t.erase),
                ])
        return buf.getvalue()


@dataclass
class StationaryResult:
    pi: np.ndarray
    residual: float
    step_erase_probability: float

    @property
    def erase_probability(self) -> float:
        p = self.step_erase_probability
        return p / (1.0 - p)

    @property
    def avg_rewritings(self) -> float:
        return 1.0 / self.erase_probability


def build_chain(
    code: FlashCode,
    dist: FlipDistribution,
    max_transitions: int = DEFAULT_MAX_TRANSITIONS,
) -> ChainModel:
    """Breadth-first closure of the all-zero state under every flip in the support."""
    if dist.k != code.params.k:
        raise ValueError(f"distribution has {dist.k} bits, code has k={code.params.k}")
    bits = [(i, dist.probabilities[i - 1]) for i in dist.support]
    zero = code.zero()
    index = {zero: 0}
    states = [zero]
    transitions: list[list[Transition]] = []
    budget = max_transitions
    queue = deque([zero])
    while queue:
        s = queue.popleft()
        budget -= len(bits)
        if budget < 0:
            raise StateCapExceeded(
                f"chain for {code!r} exceeds {max_transitions} transitions; "
                "use the simulator for this configuration"
            )
        out = []
        for i, p in bits:
            nxt = code.encode_flip(s, i)
            if nxt is None:
                out.append(Transition(0, i, p, True))
                continue
            t = index.get(nxt)
            if t is None:
                t = index[nxt] = len(states)
                states.append(nxt)
                queue.append(nxt)
            out.append(Transition(t, i, p, False))
        transitions.append(out)
    return ChainModel(code.name, code.params, dist, states, transitions)


def _residual(pi: np.ndarray, P: sp.csr_matrix) -> float:
    return float(np.max(np.abs(P.T @ pi - pi)))


def _direct(P: sp.csr_matrix) -> np.ndarray:
    # (P^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1
    n = P.shape[0]
    A = (P.T - sp.identity(n, format="csr")).tolil()
    A[n - 1, :] = np.ones(n)
    b = np.zeros(n)
    b[-1] = 1.0
    if n < DENSE_LIMIT:
        return np.linalg.solve(A.toarray(), b)
    return spla.spsolve(A.tocsc(), b)


def _power(P: sp.csr_matrix, tol: float, max_iter: int) -> np.ndarray:
    n = P.shape[0]
    PT = P.T.tocsr()
    pi = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = PT @ pi
        nxt /= nxt.sum()
        # lazy step keeps periodic chains convergent
        nxt = 0.5 * (nxt + pi)
        if np.max(np.abs(nxt - pi)) < tol / 4:
            return nxt
        pi = nxt
    raise ConvergenceError(f"power iteration did not reach {tol} in {max_iter} iterations")


def stationary(
    chain: ChainModel,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    method: str = "direct",
) -> StationaryResult:
    """Stationary distribution of ``chain``.

    ``method="direct"`` solves the balance equations (dense below
    ``DENSE_LIMIT`` states, sparse LU above); ``"power"`` iterates. Either way
    the result is refined by a few power steps if the residual exceeds ``tol``.
    """
    P = chain.matrix()
    if method == "direct":
        pi = _direct(P)
    elif method == "power":
        pi = _power(P, tol, max_iter)
    else:
        raise ValueError(f"unknown method {method!r}")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    res = _residual(pi, P)
    for _ in range(50):
        if res <= tol:
            break
        pi = P.T @ pi
        pi /= pi.sum()
        res = _residual(pi, P)
    if res > tol:
        raise ConvergenceError(f"stationary residual {res:.3e} above tolerance {tol:.1e}")
    p = float(pi @ chain.erase_vector())
    return StationaryResult(pi, res, p)


def analyze(
    code: str,
    params: CodeParams,
    dist: FlipDistribution,
    tol: float = 1e-12,
    max_transitions: int = DEFAULT_MAX_TRANSITIONS,
) -> tuple[ChainModel, StationaryResult]:
    chain = build_chain(make_code(code, params), dist, max_transitions)
    return chain, stationary(chain, tol)


class SweepRow(NamedTuple):
    n: int
    rate: float
    avg_ilifc: float
    avg_layered: float


def _sweep_row(args) -> SweepRow:
    n, k, q, dist, tol, cap = args
    params = CodeParams(n, k, q)
    avg = [analyze(c, params, dist, tol, cap)[1].avg_rewritings for c in ("ilifc", "layered")]
    return SweepRow(n, params.rate, avg[0], avg[1])


def sweep_tradeoff(
    k: int,
    q: int,
    n_list: Sequence[int],
    dist: Optional[FlipDistribution] = None,
    tol: float = 1e-12,
    max_transitions: int = DEFAULT_MAX_TRANSITIONS,
    threads: Optional[int] = None,
) -> list[SweepRow]:
    """Average rewritings of both codes for each block size, highest rate first."""
    dist = dist or FlipDistribution.uniform(k)
    jobs = [(n, k, q, dist, tol, max_transitions) for n in sorted(set(n_list))]
    workers = thread_count(threads)
    if workers == 1 or len(jobs) < 2:
        return [_sweep_row(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_row, jobs))


def write_sweep_csv(rows: Sequence[SweepRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "rate", "avg_ilifc", "avg_layered"])
    for r in rows:
        w.writerow([r.n, repr(r.rate), repr(r.avg_ilifc), repr(r.avg_layered)])
