"""Command-line interface.

One subcommand per primitive (xi, laplace, survival, incl-excl, hit-mc,
make-set, check, rem, asl) plus one per packaged experiment preset.
Tables go to stdout as CSV (first line ``# schema=1``) or JSON via
``--format``; presets write their artifacts into ``--out`` and print a
one-line verdict.

Exit codes: 0 all configured tolerances met, 1 tolerance violation,
2 usage error, 3 resource-limit refusal.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import presets
from .combinatorics import XiTable
from .exact_hitting import (
    LaplaceQuery,
    ResourceLimitError,
    full_survival,
    inclusion_exclusion_sum,
    laplace_formula,
    lumped_laplace,
    lumped_survival,
)
from .random_sets import check_conditions, load_set, percolation_cloud, sample_without_replacement, save_set
from .rem_aging import REMConfig, asl, two_point_multi
from .tables import dump_json, pyify, write_table
from .walk_mc import ks_to_exponential, simulate_hitting


@contextmanager
def _sink(args, default_name: str):
    """stdout, or <out>/<default_name> when --out is given."""
    if args.out is None:
        yield sys.stdout
    else:
        path = Path(args.out) / default_name
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as fh:
            yield fh


def _parse_u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _parse_hex(text: str) -> int:
    return int(text, 16)


def _parse_floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _load_target(args):
    B = load_set(args.set)
    if getattr(args, "n", None) is not None and args.n != B.n:
        raise ValueError(f"--n {args.n} disagrees with set file dimension n={B.n}")
    return B


# --------------------------------------------------------------------------
# primitive subcommands


def cmd_xi(args) -> int:
    table = XiTable.build(args.n, exact_cutoff=args.n if args.exact else 0)
    ks = range(args.n + 1) if args.k is None else [args.k]
    columns = ["k", "xi", "xi_times_binom"]
    if args.exact:
        columns.append("xi_exact")
    rows = []
    for k in ks:
        row = [k, table.value(k), table.xi_times_binom(k)]
        if args.exact:
            q = table.exact_values[k]
            row.append(f"{q.numerator}/{q.denominator}")
        rows.append(row)
    with _sink(args, "xi.csv") as fh:
        write_table(fh, columns, rows, args.format)
    return 0


def cmd_laplace(args) -> int:
    q = LaplaceQuery(n=args.n, k=args.k, s=args.s, m=args.m)
    value = laplace_formula(q)
    oracle = lumped_laplace(args.n, args.k, args.s, args.m)
    rel = abs(value - oracle) / oracle
    with _sink(args, "laplace.csv") as fh:
        write_table(fh, ["n", "k", "s", "m", "transform", "chain_solve", "rel_gap"],
                    [[args.n, args.k, args.s, args.m, value, oracle, rel]], args.format)
    return 0


def cmd_survival(args) -> int:
    if args.lumped:
        if args.k is None:
            raise ValueError("--lumped needs --k (start distance)")
        if args.n is None:
            raise ValueError("--lumped needs --n")
        table = lumped_survival(args.n, args.k, args.horizon)
    else:
        if args.set is None or args.x is None:
            raise ValueError("need either --lumped --k or --set FILE --x HEX")
        B = _load_target(args)
        table = full_survival(B.n, B, args.x, args.horizon)
    rows = [[t, float(s)] for t, s in enumerate(table.survival)]
    with _sink(args, "survival.csv") as fh:
        write_table(fh, ["t", "survival"], rows, args.format)
    return 0


def cmd_incl_excl(args) -> int:
    B = _load_target(args)
    value = inclusion_exclusion_sum(B.n, B, args.x, args.i, args.a, args.m)
    with _sink(args, "incl_excl.csv") as fh:
        write_table(fh, ["i", "a", "m", "sum", "limit"],
                    [[args.i, args.a, args.m, value, args.a ** args.i]], args.format)
    return 0


def cmd_hit_mc(args) -> int:
    B = _load_target(args)
    emp = simulate_hitting(B, args.x, args.m, args.trials, args.seed,
                           cap=args.cap, threads=args.threads)
    res = ks_to_exponential(emp)
    xs = np.sort(emp.samples)
    N = xs.size
    ref = np.exp(-xs)
    upper = 1.0 - np.arange(N) / N
    lower = upper - 1.0 / N
    gaps = np.maximum(np.abs(ref - upper), np.abs(ref - lower))
    running = np.maximum.accumulate(gaps)
    rows = [[float(xs[i]), float(lower[i]), float(ref[i]), float(running[i])]
            for i in range(N)]
    summary = {"ks": res.ks, "censored_fraction": res.censored_fraction,
               "flagged": res.flagged, "trials": args.trials, "m": args.m,
               "seed": args.seed, "cap": emp.cap}
    if args.format == "json":
        with _sink(args, "hit_mc.json") as fh:
            fh.write(dump_json({"summary": summary, "rows": [
                dict(zip(["a", "empirical_survival", "exp_a", "ks_running"], r))
                for r in rows]}))
        return 0
    with _sink(args, "hit_mc.csv") as fh:
        write_table(fh, ["a", "empirical_survival", "exp_a", "ks_running"], rows, "csv")
    if args.out is not None:
        path = Path(args.out) / "hit_mc_summary.json"
        path.write_text(dump_json(summary))
    else:
        print(json.dumps(pyify(summary)), file=sys.stderr)
    return 0


def cmd_make_set(args) -> int:
    if args.kind == "percolation":
        if args.rho is None:
            raise ValueError("percolation needs --rho")
        B = percolation_cloud(args.n, args.rho, args.seed)
    else:
        if args.M is None:
            raise ValueError("sample needs --M")
        B = sample_without_replacement(args.n, args.M, args.seed)
    save_set(args.output, B)
    print(f"wrote {len(B)} vertices (n={B.n}, {B.provenance}) to {args.output}",
          file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    B = _load_target(args)
    m = "auto" if args.m == "auto" else float(args.m)
    mode = "exact" if args.exact_stats else None
    report = check_conditions(B, m, mode=mode)
    with _sink(args, "check.json") as fh:
        fh.write(dump_json(report.to_dict()))
    return 0 if report.all_pass else 1


def cmd_rem(args) -> int:
    cfg = REMConfig.from_beta_ratio(args.n, args.alpha, args.beta_ratio)
    estimates = two_point_multi(cfg, args.theta, args.disorder, args.walks, args.seed)
    rows = [[e.theta, e.estimate, e.stderr, e.target] for e in estimates]
    for e in estimates:
        if e.flagged:
            print(f"warning: theta={e.theta}: {e.exhausted_fraction:.1%} of "
                  "trajectories exhausted the step budget and were dropped",
                  file=sys.stderr)
    with _sink(args, "rem.csv") as fh:
        write_table(fh, ["theta", "Rn_estimate", "stderr", "asl_target"], rows, args.format)
    return 0


def cmd_asl(args) -> int:
    print(repr(asl(args.alpha, args.z)))
    return 0


# --------------------------------------------------------------------------
# parser


def _add_common(sp) -> None:
    sp.add_argument("--seed", type=_parse_u64, default=0, help="root RNG seed (u64)")
    sp.add_argument("--threads", type=int, default=1, help="worker threads for MC")
    sp.add_argument("--out", default=None, metavar="DIR",
                    help="write outputs into DIR instead of stdout")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--config", default=None, metavar="FILE",
                    help="flat key=value defaults; explicit flags override")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cubewalk",
        description="Hitting times of the simple random walk on the hypercube: "
                    "exact formulas, Monte Carlo, and trap-model aging experiments.")
    subs = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub_parsers = {}

    def add(name, func, help_text):
        sp = subs.add_parser(name, help=help_text)
        _add_common(sp)
        sp.set_defaults(func=func)
        sub_parsers[name] = sp
        return sp

    sp = add("xi", cmd_xi, "expected-visit correction xi_n(k)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=None, help="single distance (default: all)")
    sp.add_argument("--all", action="store_true", help="all k (the default)")
    sp.add_argument("--exact", action="store_true", help="add exact rational column")

    sp = add("laplace", cmd_laplace, "Laplace transform of the hitting time of a point")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--m", type=float, required=True)

    sp = add("survival", cmd_survival, "survival function P[H >= t]")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--lumped", action="store_true",
                    help="distance-chain target {0} from distance --k")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--set", default=None, metavar="FILE")
    sp.add_argument("--x", type=_parse_hex, default=None, metavar="HEX")
    sp.add_argument("--horizon", type=int, required=True)

    sp = add("incl-excl", cmd_incl_excl, "ordered-tuple hitting sums before a deadline")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--set", required=True, metavar="FILE")
    sp.add_argument("--x", type=_parse_hex, required=True, metavar="HEX")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--m", type=float, required=True)

    sp = add("hit-mc", cmd_hit_mc, "Monte Carlo hitting times vs the exponential law")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--set", required=True, metavar="FILE")
    sp.add_argument("--x", type=_parse_hex, required=True, metavar="HEX")
    sp.add_argument("--m", type=float, required=True, help="normalization scale")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--cap", type=int, default=None, help="step cap (default 50m)")

    sp = add("make-set", cmd_make_set, "generate a target set file")
    sp.add_argument("kind", choices=("percolation", "sample"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rho", type=float, default=None, help="percolation density")
    sp.add_argument("--M", type=int, default=None, help="exact sample size")
    sp.add_argument("-o", "--output", required=True, metavar="FILE")

    sp = add("check", cmd_check, "verify the sparse-evenness hypotheses of a set")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--set", required=True, metavar="FILE")
    sp.add_argument("--m", default="auto", help="time scale, or 'auto' for 2^n/|B|")
    sp.add_argument("--exact-stats", action="store_true",
                    help="force exhaustive sphere/ball statistics")

    sp = add("rem", cmd_rem, "trap-model two-point function vs the arcsine law")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta-ratio", type=float, required=True,
                    help="alpha*beta as a fraction of the critical temperature")
    sp.add_argument("--theta", type=_parse_floats, required=True, metavar="T1,T2,...")
    sp.add_argument("--disorder", type=int, required=True)
    sp.add_argument("--walks", type=int, default=1)

    sp = add("asl", cmd_asl, "generalized arcsine law CDF")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--z", type=float, required=True)

    presets.register(add)
    return parser, sub_parsers


_TRUTHY = {"1", "true", "yes", "on"}
_FALSY = {"0", "false", "no", "off"}


def _apply_config(argv, sub_parsers):
    """Inject key=value pairs from --config FILE as defaults.

    Injected tokens go right after the subcommand, so anything typed
    explicitly comes later and wins.
    """
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None or not argv:
        return argv
    sp = sub_parsers.get(argv[0])
    if sp is None:
        return argv
    actions = {}
    for action in sp._actions:
        for opt in action.option_strings:
            actions[opt] = action
    injected = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key=value: {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        flag = "--" + key
        action = actions.get(flag)
        if action is None:
            raise ValueError(f"config key {key!r} is not a flag of {argv[0]!r}")
        if action.nargs == 0:
            if value.lower() in _TRUTHY:
                injected.append(flag)
            elif value.lower() not in _FALSY:
                raise ValueError(f"config key {key!r} expects a boolean, got {value!r}")
        else:
            injected.extend([flag, value])
    return [argv[0]] + injected + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, sub_parsers = build_parser()
    try:
        argv = _apply_config(argv, sub_parsers)
        args = parser.parse_args(argv)
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"cubewalk: resource limit: {exc}", file=sys.stderr)
        return 3
    except (ValueError, FileNotFoundError) as exc:
        print(f"cubewalk: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # The consumer closed the pipe (e.g. | head); truncation is theirs.
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
