"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 runtime failure (state cap,
non-convergence, failed verification).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from flashlab import markov, simulator, verifier
from flashlab.codec import CODE_NAMES, make_code
from flashlab.model import CodeParams
from flashlab.simulator import FlipDistribution, RunConfig


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_probabilities(text: str, k: int) -> FlipDistribution:
    if text == "uniform":
        return FlipDistribution.uniform(k)
    try:
        values = [float(Fraction(tok.strip())) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--p: cannot parse {text!r}") from None
    if len(values) != k:
        raise UsageError(f"--p: expected {k} probabilities, got {len(values)}")
    if any(v < 0 for v in values):
        raise UsageError("--p: probabilities must be nonnegative")
    total = math.fsum(values)
    if abs(total - 1.0) > 1e-9:
        raise UsageError(f"--p: probabilities sum to {total}, not 1")
    return FlipDistribution(tuple(v / total for v in values))


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _geometry(p: argparse.ArgumentParser, n: bool = True) -> None:
    if n:
        p.add_argument("--n", type=int, required=True, help="cells per erase block")
    p.add_argument("--k", type=int, required=True, help="information bits (even)")
    p.add_argument("--q", type=int, required=True, help="cell levels")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flashlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="Monte-Carlo rewriting simulation")
    _geometry(sim)
    sim.add_argument("--code", choices=CODE_NAMES, required=True)
    sim.add_argument("--p", default="uniform", help="'uniform' or comma list of k probabilities")
    sim.add_argument("--erases", type=int, default=10_000, help="stop after this many erases")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", help="histogram CSV path")
    sim.add_argument("--json", dest="json_out", help="stats JSON path (default stdout)")

    mk = sub.add_parser("markov", help="exact erase probability from the Markov chain")
    _geometry(mk)
    mk.add_argument("--code", choices=CODE_NAMES, required=True)
    mk.add_argument("--p", default="uniform")
    mk.add_argument("--tol", type=float, default=1e-12)
    mk.add_argument("--max-transitions", type=int, default=markov.DEFAULT_MAX_TRANSITIONS)
    mk.add_argument("--dump", help="write the transition list to this path")
    mk.add_argument("--out", help="result JSON path (default stdout)")

    sw = sub.add_parser("sweep", help="rate vs. average rewritings for both codes")
    _geometry(sw, n=False)
    sw.add_argument("--n-list", type=_int_list, required=True, help="e.g. 4,6,8,10")
    sw.add_argument("--p", default="uniform")
    sw.add_argument("--tol", type=float, default=1e-12)
    sw.add_argument("--max-transitions", type=int, default=markov.DEFAULT_MAX_TRANSITIONS)
    sw.add_argument("--out", help="CSV path (default stdout)")

    wc = sub.add_parser("worstcase", help="adversarial minimum rewrites before an erase")
    _geometry(wc)
    wc.add_argument("--code", choices=CODE_NAMES, required=True)
    wc.add_argument("--max-states", type=int, default=markov.DEFAULT_MAX_TRANSITIONS)
    wc.add_argument("--out")

    vf = sub.add_parser("verify", help="run the brute-force verification battery")
    _geometry(vf)
    vf.add_argument("--depth", type=int, default=8)
    vf.add_argument("--max-states", type=int, default=markov.DEFAULT_MAX_TRANSITIONS)
    vf.add_argument("--out")
    return parser


def _emit_json(obj, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> CodeParams:
    try:
        return CodeParams(args.n, args.k, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    params = _params(args)
    dist = parse_probabilities(args.p, params.k)
    try:
        cfg = RunConfig(params, args.code, dist, args.erases, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    stats = simulator.run(cfg)
    if args.out:
        simulator.write_histogram_csv(stats, args.out)
    _emit_json(stats.to_json(), args.json_out)
    return 0


def cmd_markov(args) -> int:
    params = _params(args)
    dist = parse_probabilities(args.p, params.k)
    chain, res = markov.analyze(args.code, params, dist, args.tol, args.max_transitions)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(chain.dump())
    _emit_json({
        "code": args.code, "n": params.n, "k": params.k, "q": params.q,
        "p": list(dist.probabilities),
        "states": chain.size,
        "erase_probability": res.erase_probability,
        "step_erase_probability": res.step_erase_probability,
        "avg_rewritings": res.avg_rewritings,
        "residual": res.residual,
    }, args.out)
    return 0


def cmd_sweep(args) -> int:
    if args.k <= 0 or args.k % 2 or args.q < 2 or any(n < args.k for n in args.n_list):
        raise UsageError("sweep needs even k > 0, q >= 2 and every n >= k")
    dist = parse_probabilities(args.p, args.k)
    rows = markov.sweep_tradeoff(args.k, args.q, args.n_list, dist, args.tol, args.max_transitions)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            markov.write_sweep_csv(rows, fh)
    else:
        markov.write_sweep_csv(rows, sys.stdout)
    return 0


def cmd_worstcase(args) -> int:
    params = _params(args)
    res = verifier.worst_case(make_code(args.code, params), args.max_states)
    _emit_json(res.to_json(), args.out)
    return 0


def cmd_verify(args) -> int:
    params = _params(args)
    checks = verifier.run_all(params, args.depth, args.max_states)
    _emit_json({"checks": [c.to_json() for c in checks]}, args.out)
    return 0 if all(c.passed for c in checks) else 2


COMMANDS = {
    "simulate": cmd_simulate,
    "markov": cmd_markov,
    "sweep": cmd_sweep,
    "worstcase": cmd_worstcase,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (markov.StateCapExceeded, markov.ConvergenceError) as exc:
        print(f"flashlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
