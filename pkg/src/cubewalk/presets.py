"""Packaged desk-scale experiments.

Each preset reproduces one statement about hypercube hitting times or
trap-model aging at a fixed, fast configuration, writes its artifacts
(a data table plus ``report.json``) into ``--out``, prints a one-line
verdict, and exits 0/1 on its configured tolerance.  The computations
live in :mod:`cubewalk.experiments`; this module is argument plumbing
and artifact IO.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .experiments import (
    incl_excl_ratios,
    laplace_limit_errors,
    mc_ks_battery,
    rem_aging_run,
    survival_deviation_exact,
)
from .random_sets import percolation_cloud, sample_without_replacement
from .tables import dump_json, write_table


@dataclass
class PresetOutcome:
    name: str
    passed: bool
    line: str
    report: dict
    tables: dict = field(default_factory=dict)  # filename stem -> (columns, rows)


def _emit(args, outcome: PresetOutcome) -> int:
    out_dir = Path(args.out if args.out is not None else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = ".json" if args.format == "json" else ".csv"
    written = []
    try:
        for stem, (columns, rows) in outcome.tables.items():
            path = out_dir / (stem + suffix)
            with open(path, "w") as fh:
                write_table(fh, columns, rows, args.format)
            written.append(path)
        report = dict(outcome.report)
        report["preset"] = outcome.name
        report["passed"] = outcome.passed
        path = out_dir / "report.json"
        path.write_text(dump_json(report))
        written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    print(outcome.line)
    return 0 if outcome.passed else 1


# --------------------------------------------------------------------------
# exact-law presets


def preset_thm_gen(args) -> int:
    devs = [survival_deviation_exact(args.n, args.set_size, seed, tuple(args.a))
            for seed in args.seeds]
    rows = [[d.seed, a, d.per_a[a]] for d in devs for a in d.a_values]
    passes = sum(d.max_dev <= args.tol for d in devs)
    worst = max(d.max_dev for d in devs)
    passed = passes >= args.min_pass
    line = (f"thm-gen: {'PASS' if passed else 'FAIL'} "
            f"({passes}/{len(devs)} seeds within {args.tol}, worst deviation {worst:.4f})")
    report = {
        "n": args.n, "set_size": args.set_size, "m": (1 << args.n) / args.set_size,
        "a_values": list(args.a), "tolerance": args.tol, "min_pass": args.min_pass,
        "per_seed_max_dev": {str(d.seed): d.max_dev for d in devs},
        "passes": passes, "worst_dev": worst,
    }
    return _emit(args, PresetOutcome("thm-gen", passed, line, report,
                                     {"survival": (["seed", "a", "max_abs_dev"], rows)}))


def preset_prop_sum(args) -> int:
    ratios = incl_excl_ratios(args.n, args.set_size, args.seeds, tuple(args.i),
                              args.a, args.x)
    rows = [[r.seed, r.i, r.a, r.value, r.target, r.ratio] for r in ratios]
    means = {i: float(np.mean([r.ratio for r in ratios if r.i == i])) for i in args.i}
    passed = all(abs(mu - 1.0) <= args.tol for mu in means.values())
    detail = ", ".join(f"i={i}: mean ratio {mu:.4f}" for i, mu in means.items())
    line = f"prop-sum: {'PASS' if passed else 'FAIL'} ({detail}; tol {args.tol})"
    report = {
        "n": args.n, "set_size": args.set_size, "a": args.a, "x": args.x,
        "seeds": list(args.seeds), "tolerance": args.tol,
        "mean_ratio": {str(i): mu for i, mu in means.items()},
    }
    return _emit(args, PresetOutcome("prop-sum", passed, line, report,
                                     {"sums": (["seed", "i", "a", "sum", "limit", "ratio"], rows)}))


def preset_lemma_laplace(args) -> int:
    rows = []
    errs = []
    for n in args.n:
        m = float(n) ** 3 if args.m is None else args.m
        err = float(laplace_limit_errors(n, args.s, m).max())
        errs.append(err)
        rows.append([n, args.s, m, err])
    non_increasing = all(errs[i + 1] <= errs[i] + 1e-12 for i in range(len(errs) - 1))
    passed = non_increasing
    line = (f"lemma-laplace: {'PASS' if passed else 'FAIL'} "
            f"(max rel errors {', '.join(f'{e:.4g}' for e in errs)} over n={args.n})")
    report = {
        "n_values": list(args.n), "s": args.s,
        "m": "n^3" if args.m is None else args.m,
        "max_rel_errors": errs, "non_increasing": non_increasing,
    }
    return _emit(args, PresetOutcome("lemma-laplace", passed, line, report,
                                     {"errors": (["n", "s", "m", "max_rel_err"], rows)}))


# --------------------------------------------------------------------------
# Monte Carlo presets


def _battery_preset(args, name: str, kind: str, auto_m: bool) -> int:
    n = args.n
    log2_size = (n // 2 - 2) if args.log2_size is None else args.log2_size
    if log2_size < 1 or log2_size >= n:
        raise ValueError("target-set size 2^log2_size must lie strictly inside the cube")
    size = 1 << log2_size
    if kind == "sample":
        B = sample_without_replacement(n, size, args.seed)
    else:
        B = percolation_cloud(n, size / float(1 << n), args.seed)
        if len(B) == 0:
            raise ValueError("percolation cloud came out empty; increase the density")
    m = (1 << n) / len(B) if auto_m else (1 << n) / size
    battery = mc_ks_battery(B, m, args.starts, args.trials, args.seed,
                            tolerance=args.tol, threads=args.threads)
    rows = [[f"{x:x}", battery.ks[i], battery.censored_fractions[i]]
            for i, x in enumerate(battery.starts)]
    passed = battery.all_pass
    line = (f"{name}: {'PASS' if passed else 'FAIL'} "
            f"(worst KS {battery.worst:.4f} vs {battery.tolerance} + band {battery.band:.4f}, "
            f"{len(battery.starts)} starts x {battery.trials} trials)")
    report = {
        "n": n, "set_size": len(B), "provenance": B.provenance, "m": m,
        "m_mode": "auto" if auto_m else "fixed",
        "starts": args.starts, "trials": args.trials, "seed": args.seed,
        "tolerance": args.tol, "dkw_band": battery.band,
        "worst_ks": battery.worst, "ks_spread": battery.ks_spread,
        "max_censored_fraction": max(battery.censored_fractions),
    }
    return _emit(args, PresetOutcome(name, passed, line, report,
                                     {"survival": (["start", "ks", "censored_fraction"], rows)}))


def preset_thm_perc(args) -> int:
    return _battery_preset(args, "thm-perc", "percolation", auto_m=False)


def preset_thm_sampling(args) -> int:
    return _battery_preset(args, "thm-sampling", "sample", auto_m=False)


def preset_cor_perc(args) -> int:
    return _battery_preset(args, "cor-perc", "percolation", auto_m=True)


# --------------------------------------------------------------------------
# aging preset


def preset_rem_aging(args) -> int:
    run = rem_aging_run(args.n, args.alpha, args.beta_ratio, tuple(args.theta),
                        args.disorder, args.walks, args.seed)
    rows = [[e.theta, e.estimate, e.stderr, e.target, e.exhausted_fraction]
            for e in run.estimates]
    by_theta = {e.theta: e for e in run.estimates}
    checks = {}
    if 1.0 in by_theta:
        e = by_theta[1.0]
        checks["theta1_abs_dev"] = abs(e.estimate - e.target)
        passed = checks["theta1_abs_dev"] <= args.tol
    else:
        passed = True
    order = sorted(by_theta)
    checks["monotone_within_2se"] = all(
        by_theta[order[j + 1]].estimate
        <= by_theta[order[j]].estimate
        + 2 * (by_theta[order[j]].stderr + by_theta[order[j + 1]].stderr)
        for j in range(len(order) - 1))
    checks["tail_slope"] = run.tail.slope
    checks["tail_slope_target"] = -args.alpha
    line = (f"rem-aging: {'PASS' if passed else 'FAIL'} ("
            + ", ".join(f"R({e.theta:g})={e.estimate:.3f} vs {e.target:.3f}"
                        for e in run.estimates)
            + f"; tail slope {run.tail.slope:.3f} vs {-args.alpha:g})")
    report = {
        "n": args.n, "alpha": args.alpha, "beta_ratio": args.beta_ratio,
        "beta": run.config.beta, "t_w": run.config.t_w, "r_n": run.config.r_n,
        "disorder": args.disorder, "walks": args.walks, "seed": args.seed,
        "tolerance": args.tol, "checks": checks,
        "estimates": {str(e.theta): {"estimate": e.estimate, "stderr": e.stderr,
                                     "target": e.target,
                                     "exhausted_fraction": e.exhausted_fraction}
                      for e in run.estimates},
    }
    return _emit(args, PresetOutcome("rem-aging", passed, line, report,
                                     {"aging": (["theta", "Rn_estimate", "stderr",
                                                 "asl_target", "exhausted_fraction"], rows)}))


# --------------------------------------------------------------------------
# registration


def register(add) -> None:
    """Attach the preset subcommands; `add` comes from cli.build_parser."""
    sp = add("thm-gen", preset_thm_gen,
             "exact exponential-law deviations for sampled target sets")
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--set-size", type=int, default=10)
    sp.add_argument("--seeds", type=_ints, default=list(range(1, 11)),
                    metavar="S1,S2,...")
    sp.add_argument("--a", type=_floats, default=[0.25, 0.5, 1.0, 2.0],
                    metavar="A1,A2,...")
    sp.add_argument("--tol", type=float, default=0.1)
    sp.add_argument("--min-pass", type=int, default=9)

    for name, func, help_text in (
            ("thm-perc", preset_thm_perc,
             "Monte Carlo exponential law for percolation clouds"),
            ("thm-sampling", preset_thm_sampling,
             "Monte Carlo exponential law for exact-size sampled sets"),
            ("cor-perc", preset_cor_perc,
             "percolation Monte Carlo with the self-calibrated time scale")):
        sp = add(name, func, help_text)
        sp.add_argument("--n", type=int, default=20)
        sp.add_argument("--log2-size", type=int, default=None,
                        help="log2 of the (mean) target-set size; default n//2 - 2")
        sp.add_argument("--starts", type=int, default=32)
        sp.add_argument("--trials", type=int, default=10_000)
        sp.add_argument("--tol", type=float, default=0.05)

    sp = add("prop-sum", preset_prop_sum,
             "ordered-tuple hitting sums against their power-law limit")
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--set-size", type=int, default=10)
    sp.add_argument("--seeds", type=_ints, default=list(range(1, 6)),
                    metavar="S1,S2,...")
    sp.add_argument("--i", type=_ints, default=[1, 2], metavar="I1,I2,...")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--x", type=lambda t: int(t, 16), default=0, metavar="HEX")
    sp.add_argument("--tol", type=float, default=0.15)

    sp = add("lemma-laplace", preset_lemma_laplace,
             "transform limit-shape error trend across dimensions")
    sp.add_argument("--n", type=_ints, default=[20, 40, 80], metavar="N1,N2,...")
    sp.add_argument("--s", type=float, default=1.0)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--m-cube", action="store_true",
                       help="use m = n^3 for each n (the default)")
    group.add_argument("--m", type=float, default=None,
                       help="fixed time scale for every n")

    sp = add("rem-aging", preset_rem_aging,
             "trap-model two-point function against the arcsine law")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--beta-ratio", type=float, default=0.5)
    sp.add_argument("--theta", type=_floats, default=[0.5, 1.0, 3.0],
                    metavar="T1,T2,...")
    sp.add_argument("--disorder", type=int, default=1000)
    sp.add_argument("--walks", type=int, default=1)
    sp.add_argument("--tol", type=float, default=0.1)


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]
