"""Brute-force oracles for codec correctness and the worst-case claim.

Nothing here reuses the codecs' internal shortcuts: sub-block checks walk
the public write functions and compare against the index maps directly, and
block-level checks only go through ``encode_flip``/``decode``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Any, Optional, Sequence

from flashlab.codec import FlashCode, make_code
from flashlab.ilifc import write_new, write_step
from flashlab.layered import write2, write_new2
from flashlab.model import (
    Cells,
    CodeParams,
    has_unique_index,
    index_ilifc,
    index_layered,
    is_clear,
    is_higher,
)
from flashlab.markov import DEFAULT_MAX_TRANSITIONS, StateCapExceeded


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class WorstCaseResult:
    code: str
    params: CodeParams
    min_writes: int
    witness: list[int]
    """Flip sequence: ``min_writes`` absorbed flips followed by the erasing one."""

    def to_json(self) -> dict:
        p = self.params
        return {
            "code": self.code, "n": p.n, "k": p.k, "q": p.q,
            "min_writes": self.min_writes, "witness": self.witness,
        }


def exhaustive_consistency(code: FlashCode, depth: int) -> CheckResult:
    """Decode must match the tracked information vector after every flip sequence."""
    k = code.params.k
    zero_info = (0,) * k
    name = f"consistency[{code.name}]"
    # iterative DFS over (block, info, flips so far)
    stack: list[tuple[Cells, tuple[int, ...], list[int]]] = [(code.zero(), zero_info, [])]
    visited = 0
    while stack:
        state, info, seq = stack.pop()
        if len(seq) == depth:
            continue
        for i in range(1, k + 1):
            flips = seq + [i]
            nxt = code.encode_flip(state, i)
            if nxt is None:
                nxt, new_info = code.zero(), zero_info
            else:
                new_info = info[:i - 1] + (1 - info[i - 1],) + info[i:]
                if not is_higher(nxt, state) or sum(nxt) != sum(state) + 1:
                    return CheckResult(name, False, {"sequence": flips, "reason": "non-monotone write"})
            decoded = code.decode(nxt)
            visited += 1
            if decoded != new_info:
                return CheckResult(name, False, {
                    "sequence": flips, "expected": list(new_info), "decoded": list(decoded),
                })
            stack.append((nxt, new_info, flips))
    return CheckResult(name, True, {"depth": depth, "sequences": visited})


def ilifc_trajectory(i: int, k: int, q: int) -> list[Cells]:
    x = write_new(i, (0,) * k)
    out = [x]
    while any(c != q - 1 for c in x):
        x = write_step(x, i, q)
        out.append(x)
    return out


def layered_trajectory(i: int, k: int, layer: int, q: int) -> list[Cells]:
    x = write_new2(i, (layer,) * k, q)
    out = [x]
    while not is_clear(x):
        x = write2(x)
        out.append(x)
    return out


def subblock_decodability(variant: str, k: int, q: int) -> CheckResult:
    """Every intermediate sub-block state decodes uniquely to the index that wrote it."""
    name = f"decodability[{variant},k={k},q={q}]"
    owner: dict[Cells, int] = {}

    def claim(x: Cells, i: int, index_map) -> Optional[dict]:
        if index_map(x) != i or not has_unique_index(x):
            return {"index": i, "state": list(x), "decoded": index_map(x)}
        if owner.setdefault(x, i) != i:
            return {"index": i, "state": list(x), "shared_with": owner[x]}
        return None

    if variant == "ilifc":
        for i in range(1, k + 1):
            traj = ilifc_trajectory(i, k, q)
            if len(traj) != k * (q - 1):
                return CheckResult(name, False, {"index": i, "writes_to_full": len(traj)})
            for x in traj[:-1]:
                bad = claim(x, i, index_ilifc)
                if bad:
                    return CheckResult(name, False, bad)
    elif variant == "layered":
        for layer in range(q - 1):
            for i in range(1, k + 1):
                traj = layered_trajectory(i, k, layer, q)
                if len(traj) != k or traj[-1] != (layer + 1,) * k:
                    return CheckResult(name, False, {"index": i, "layer": layer, "trajectory": traj})
                for x in traj[:-1]:
                    bad = claim(x, i, index_layered)
                    if bad:
                        return CheckResult(name, False, bad)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return CheckResult(name, True, {"states": len(owner)})


def worst_case(code: FlashCode, max_states: int = DEFAULT_MAX_TRANSITIONS) -> WorstCaseResult:
    """Fewest absorbed flips an adversary needs to force an erase.

    Breadth-first search over the states reachable without erasing; the first
    state with an erasing flip gives the minimum.
    """
    k = code.params.k
    zero = code.zero()
    parent: dict[Cells, Optional[tuple[Cells, int]]] = {zero: None}
    depth = {zero: 0}
    queue = deque([zero])
    while queue:
        s = queue.popleft()
        for i in range(1, k + 1):
            nxt = code.encode_flip(s, i)
            if nxt is None:
                flips = [i]
                cur = s
                while parent[cur] is not None:
                    cur, bit = parent[cur]
                    flips.append(bit)
                flips.reverse()
                return WorstCaseResult(code.name, code.params, depth[s], flips)
            if nxt not in parent:
                if len(parent) >= max_states:
                    raise StateCapExceeded(f"worst-case search for {code!r} exceeds {max_states} states")
                parent[nxt] = (s, i)
                depth[nxt] = depth[s] + 1
                queue.append(nxt)
    raise RuntimeError(f"{code!r} never erases")  # impossible for a finite block


def replay(code: FlashCode, flips: Sequence[int]) -> tuple[int, bool]:
    """Apply ``flips`` from the zero block; return (writes before stop, erased?)."""
    state = code.zero()
    for n, i in enumerate(flips):
        nxt = code.encode_flip(state, i)
        if nxt is None:
            return n, True
        state = nxt
    return len(flips), False


def constructive_witness(params: CodeParams) -> list[int]:
    """Flip sequence realizing one full sub-block plus ``m - 1`` sub-blocks at level 1.

    Bits 2..m each open a fresh sub-block with a single write, then bit 1 is
    flipped until its sub-block is full and once more to force the erase.
    """
    k, q, m = params.k, params.q, params.m
    if m > k:
        raise ValueError("needs m <= k distinct indices to open every sub-block")
    return list(range(2, m + 1)) + [1] * (k * (q - 1) + 1)


def expected_worst_case(params: CodeParams) -> int:
    # with m < k an unused index erases at once; with m > k sub-blocks get reused
    if params.m != params.k:
        raise ValueError("closed form only holds for m == k")
    return params.k * (params.q - 1) + params.k - 1


def worst_case_equality(params: CodeParams, max_states: int = DEFAULT_MAX_TRANSITIONS) -> CheckResult:
    name = f"worst_case_equality[n={params.n},k={params.k},q={params.q}]"
    results = {c: worst_case(make_code(c, params), max_states) for c in ("ilifc", "layered")}
    detail: dict[str, Any] = {c: r.to_json() for c, r in results.items()}
    for c, r in results.items():
        writes, erased = replay(make_code(c, params), r.witness)
        if (writes, erased) != (r.min_writes, True):
            detail["replay_failure"] = c
            return CheckResult(name, False, detail)
    return CheckResult(name, results["ilifc"].min_writes == results["layered"].min_writes, detail)


def run_all(params: CodeParams, depth: int = 8, max_states: int = DEFAULT_MAX_TRANSITIONS) -> list[CheckResult]:
    checks = [exhaustive_consistency(make_code(c, params), depth) for c in ("ilifc", "layered")]
    checks += [subblock_decodability(v, params.k, params.q) for v in ("ilifc", "layered")]
    try:
        checks.append(worst_case_equality(params, max_states))
    except StateCapExceeded as exc:
        if params.m != params.k:
            raise
        # fall back to the constructive witness when the state graph is too big
        flips = constructive_witness(params)
        expected = expected_worst_case(params)
        detail: dict[str, Any] = {"search": str(exc), "witness": flips, "expected": expected}
        ok = True
        for c in ("ilifc", "layered"):
            got = replay(make_code(c, params), flips)
            detail[c] = {"writes": got[0], "erased": got[1]}
            ok &= got == (expected, True)
        name = f"worst_case_witness[n={params.n},k={params.k},q={params.q}]"
        checks.append(CheckResult(name, ok, detail))
    return checks
