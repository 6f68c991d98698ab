"""Release acceptance battery.

One test per numbered check, so ``pytest -v tests/test_acceptance.py`` prints
one pass/fail line per check.  Checks 1-9 assert strictly at the pinned
tolerances; check 10 is a stochastic aging diagnostic whose measured gaps are
reported (as warnings and in the report string) but never failed on.

Tolerances and grids are frozen here on purpose: loosening one to make a red
check green defeats the point of the battery.
"""

import math
import warnings
from fractions import Fraction

import numpy as np

from cubewalk import (
    asl,
    beta_product_form,
    condition_sweep,
    incl_excl_ratios,
    laplace_alternating_exact,
    laplace_profile,
    laplace_trend,
    log_binom,
    log_xi_all,
    lumped_laplace_profile,
    lumped_survival,
    mc_ks_battery,
    percolation_cloud,
    rem_aging_run,
    sample_without_replacement,
    survival_deviation_exact,
    survival_grid,
    xi_exact,
    xi_second_form,
)


def test_criterion_01_exact_rational_identities():
    # Both closed forms of xi agree as exact rationals for every (n, k).
    for n in range(1, 31):
        for k in range(0, n + 1):
            a = xi_exact(n, k)
            b = xi_second_form(n, k)
            assert a == b, f"xi forms differ at n={n}, k={k}: {a} != {b}"

    # Alternating-sum and Beta-product forms of the transform coefficient
    # agree as exact rationals wherever both are defined.
    lams = (Fraction(1, 2), Fraction(1, 3), Fraction(9, 10))
    for n in range(1, 13):
        for k in range(0, n + 1):
            for j in range(0, n - k + 1):
                for lam in lams:
                    a = laplace_alternating_exact(n, k, j, lam)
                    b = beta_product_form(n, k, j, lam)
                    assert a == b, (
                        f"transform coefficient mismatch at n={n}, k={k}, "
                        f"j={j}, lam={lam}: {a} != {b}")


def test_criterion_02_xi_bounds_and_asymptotics():
    # Monotonicity in k, the 1/2 * binom(n,k)^-1 lower bound on its proven
    # range, and xi * binom -> 1 for small k at large n.
    dims = list(range(2, 201)) + [500, 1000, 2000]
    for n in dims:
        logs = log_xi_all(n)
        diffs = np.diff(logs)
        assert np.all(diffs < 0), (
            f"xi not strictly decreasing at n={n}: "
            f"worst diff {float(np.nanmax(diffs)):.3e}")
        # Lower bound holds for 1 <= k <= n/2, except that at n=2 the
        # boundary point k=1 sits strictly below it (xi_2(1) = 1/8 < 1/4),
        # so the n=2 boundary is excluded.
        top = 0 if n == 2 else n // 2
        for k in range(1, top + 1):
            lhs = logs[k] + log_binom(n, k)
            assert lhs >= math.log(0.5) - 1e-9, (
                f"lower bound fails at n={n}, k={k}: "
                f"xi*binom = {math.exp(lhs):.6f} < 1/2")

    logs = log_xi_all(2000)
    for k in range(1, 4):
        prod = math.exp(logs[k] + log_binom(2000, k))
        assert abs(prod - 1.0) <= 0.05, (
            f"xi*binom at n=2000, k={k} is {prod:.4f}, not within 5% of 1")


def test_criterion_03_transform_and_survival_oracles():
    # (a) Series evaluation of the transform against the banded chain solve,
    # over dimensions 1..200 and a spread of (s, m) scalings.
    # The chain solve conditions like m/s, so the grid keeps m/s <= 2e7;
    # past that, eps * m/s alone exceeds the 1e-8 tolerance.
    worst = 0.0
    argmax = None
    for n in range(1, 201):
        m_values = (n * math.log(max(n, 2)), float(n) ** 3)
        for s in (0.5, 1.0, 4.0):
            for m in m_values:
                series = laplace_profile(n, s, m)
                chain = lumped_laplace_profile(n, s, m)
                rel = float(np.max(np.abs(series - chain) / chain))
                if rel > worst:
                    worst, argmax = rel, (n, s, m)
    assert worst <= 1e-8, (
        f"transform oracles disagree: rel gap {worst:.3e} at n,s,m={argmax}")

    # (b) The distance chain reproduces the full 2^n-state chain exactly for
    # a singleton target, for every start distance.
    for n in range(1, 13):
        T = 3 << n
        times = sorted(t for t in set(range(0, 33))
                       | {1 << j for j in range(n + 2)} | {T // 2, T}
                       if t <= T)
        grid = survival_grid(n, [0], times)
        for k in range(0, n + 1):
            x = (1 << k) - 1
            ref = lumped_survival(n, k, T)
            col = grid[:, x]
            vals = np.array([ref.survival[t] for t in times])
            gap = float(np.max(np.abs(col - vals)))
            assert gap <= 1e-12, (
                f"lumped vs full survival gap {gap:.3e} at n={n}, k={k}")


def test_criterion_04_laplace_approximation_trend():
    # Relative error of 2^-n m/s + xi_n(k) against the exact transform must
    # not increase along n = 20, 40, 80 at m = n^3.
    errs = laplace_trend(ns=(20, 40, 80), s=1.0)
    for lo, hi in zip(errs[1:], errs[:-1]):
        assert lo <= hi + 1e-12, (
            f"approximation error increased along the trend: {errs}")
    # The errors stay in a sane band; this guards against a silent rescale.
    assert errs[0] < 0.2 and errs[-1] < 0.05, f"trend out of band: {errs}"


def test_criterion_05_exponential_law_exact_survival():
    # Exact survival from every start of a 10-point sampled set at n=12,
    # evaluated at multiples of m = 2^12/10, against exp(-a).
    results = [survival_deviation_exact(12, 10, seed) for seed in range(1, 11)]
    passes = sum(r.max_dev <= 0.1 for r in results)
    detail = ", ".join(f"seed {r.seed}: {r.max_dev:.4f}" for r in results)
    assert passes >= 9, (
        f"exponential law within 0.1 for {passes}/10 seeds (need >= 9): "
        f"{detail}")


def test_criterion_06_tuple_sum_limits():
    # Ordered i-tuple hitting sums against the a^i limit, averaged over
    # sampled sets (n=12, 10 points, a=1).
    ratios = incl_excl_ratios(12, 10, seeds=range(1, 6), i_values=(1, 2),
                              a=1.0, x=0)
    for i in (1, 2):
        vals = [r.ratio for r in ratios if r.i == i]
        mean = float(np.mean(vals))
        assert abs(mean - 1.0) <= 0.15, (
            f"i={i} tuple sum / a^i averages {mean:.4f} over 5 seeds "
            f"(per-seed: {[round(float(v), 4) for v in vals]}); "
            f"need within 0.15 of 1")


def test_criterion_07_mc_hitting_exponential():
    # Monte Carlo hitting times from 32 uniform starts, normalized by the
    # fixed scale m = 4096, against Exp(1) -- for both set constructions.
    n, m, starts, trials = 20, 4096.0, 32, 10_000
    for name, B in (
        ("percolation", percolation_cloud(n, 2.0**-12, seed=1)),
        ("sampling", sample_without_replacement(n, 256, seed=1)),
    ):
        battery = mc_ks_battery(B, m, starts, trials, seed=1, tolerance=0.05)
        assert battery.all_pass, (
            f"{name}: worst KS {battery.worst:.4f} exceeds "
            f"0.05 + DKW band {battery.band:.4f}")


def test_criterion_08_condition_checker_ensemble():
    # The numeric hypothesis checker accepts nearly every percolation cloud
    # drawn in the sparse regime rho = n^-3 at n=16.
    results = condition_sweep(16, 16.0**-3, seeds=range(1, 31))
    reports = [(seed, rep) for seed, rep in results if rep is not None]
    passes = sum(rep.all_pass for _, rep in reports)
    failing = {seed: [k for k, v in rep.verdicts.items() if not v]
               for seed, rep in reports if not rep.all_pass}
    empty = [seed for seed, rep in results if rep is None]
    assert passes >= 28, (
        f"checker accepted {passes}/30 clouds (need >= 28); "
        f"failing: {failing}; empty draws: {empty}")


def test_criterion_09_arcsine_law_analytics():
    # Closed form at alpha = 1/2 and the reflection symmetry, both to 1e-9.
    grid = np.linspace(0.0, 1.0, 1000)
    for z in grid:
        gap = abs(asl(0.5, z) - (2.0 / math.pi) * math.asin(math.sqrt(z)))
        assert gap <= 1e-9, f"arcsine closed form off by {gap:.3e} at z={z}"
    for alpha in (0.3, 0.5, 0.7):
        for z in grid:
            gap = abs(asl(alpha, z) + asl(1.0 - alpha, 1.0 - z) - 1.0)
            assert gap <= 1e-9, (
                f"reflection identity off by {gap:.3e} at alpha={alpha}, z={z}")


def test_criterion_10_aging_diagnostics():
    # Stochastic aging check at n=20: reported, not asserted.  The quantities
    # of interest are the two-point estimates against their arcsine targets,
    # monotonicity in theta, and the clock tail exponent.
    run = rem_aging_run(n=20, alpha=0.5, beta_ratio=0.5, thetas=(0.5, 1.0, 3.0),
                        disorder=1000, walks=1, seed=1)
    lines = []
    for est in run.estimates:
        dev = abs(est.estimate - est.target)
        lines.append(
            f"theta={est.theta:g}: Rn={est.estimate:.4f} "
            f"target={est.target:.4f} |dev|={dev:.4f} "
            f"(se {est.stderr:.4f}, exhausted {est.exhausted_fraction:.3f})")

    theta1 = next(e for e in run.estimates if e.theta == 1.0)
    dev1 = abs(theta1.estimate - theta1.target)
    ordered = sorted(run.estimates, key=lambda e: e.theta)
    monotone = all(
        lo.estimate <= hi.estimate + 2.0 * (lo.stderr + hi.stderr)
        for hi, lo in zip(ordered, ordered[1:]))
    slope_gap = abs(run.tail.slope - (-run.config.alpha))
    lines.append(f"theta=1 |dev| = {dev1:.4f} (target band 0.1)")
    lines.append(f"monotone within 2se: {monotone}")
    lines.append(
        f"clock tail slope {run.tail.slope:.4f} vs -alpha = "
        f"{-run.config.alpha:g} (gap {slope_gap:.4f}, band 0.15)")
    verdict = ("within bands" if dev1 <= 0.1 and monotone and slope_gap <= 0.15
               else "OUTSIDE bands")
    warnings.warn("aging diagnostics (" + verdict + "): " + " | ".join(lines))

    # Only structural sanity is asserted; the bands above are informational.
    assert all(0.0 <= e.estimate <= 1.0 for e in run.estimates)
    assert run.tail.n_points >= 3
