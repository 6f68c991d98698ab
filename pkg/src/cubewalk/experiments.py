"""Desk-scale experiment drivers.

Each function here is one reproducible experiment used both by the CLI
presets and by the acceptance suite: exact survival deviations from the
exponential law, inclusion-exclusion moment ratios, Monte Carlo KS
batteries, transform-approximation error trends, hypothesis-checker sweeps,
and the aging run.  Everything is a pure function of (parameters, seed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .combinatorics import XiTable, log_xi_all
from .exact_hitting import (
    inclusion_exclusion_sum,
    laplace_profile,
    lumped_laplace_profile,
    survival_grid,
)
from .random_sets import (
    TargetSet,
    Thresholds,
    check_conditions,
    percolation_cloud,
    sample_without_replacement,
)
from .rem_aging import REMConfig, TailFit, clock_tail_fit, clock_tail_samples, two_point_multi
from .rng import DOMAIN_SETS, philox_stream, vertices_from_raw
from .walk_mc import dkw_band, ks_to_exponential, simulate_hitting

_START_STREAM = 0x57A7


@dataclass(frozen=True)
class SurvivalDeviation:
    """Worst |P_x[H >= a m] - e^-a| over all starts and evaluation points."""

    n: int
    seed: int
    set_size: int
    m: float
    a_values: tuple
    max_dev: float
    per_a: dict
    argmax_start: int
    argmax_a: float


def survival_deviation_exact(n: int, M: int, seed: int, a_values=(0.25, 0.5, 1.0, 2.0),
                             ) -> SurvivalDeviation:
    """Exact exponential-law deviation for a sampled M-point target set.

    Starts inside the set are measured against their own reduced target
    (the set minus the start), exactly as the hitting time is defined.
    """
    B = sample_without_replacement(n, M, seed)
    members = sorted(int(y) for y in B.members)
    m = (1 << n) / M
    a_values = tuple(sorted(a_values))
    times = [math.ceil(a * m) for a in a_values]
    ref = np.exp(-np.asarray(a_values))

    grid = survival_grid(n, members, times)  # starts outside B
    dev = np.abs(grid - ref[:, None])
    for y in members:
        reduced = [z for z in members if z != y]
        col = survival_grid(n, reduced, times)[:, y]
        dev[:, y] = np.abs(col - ref)

    flat_arg = int(np.argmax(dev))
    ai, x = divmod(flat_arg, dev.shape[1])
    per_a = {a: float(dev[i].max()) for i, a in enumerate(a_values)}
    return SurvivalDeviation(n=n, seed=seed, set_size=M, m=m, a_values=a_values,
                             max_dev=float(dev.max()), per_a=per_a,
                             argmax_start=x, argmax_a=a_values[ai])


@dataclass(frozen=True)
class MomentRatio:
    """Inclusion-exclusion tuple sum against its a^i limit."""

    i: int
    a: float
    seed: int
    value: float
    target: float

    @property
    def ratio(self) -> float:
        return self.value / self.target


def incl_excl_ratios(n: int, M: int, seeds, i_values=(1, 2), a: float = 1.0,
                     x: int = 0) -> list[MomentRatio]:
    """Ordered-tuple hitting sums for sampled sets, one entry per (seed, i)."""
    out = []
    for seed in seeds:
        B = sample_without_replacement(n, M, seed)
        m = (1 << n) / M
        for i in i_values:
            val = inclusion_exclusion_sum(n, B, x, i, a, m)
            out.append(MomentRatio(i=i, a=a, seed=seed, value=val, target=a**i))
    return out


def sample_starts(B: TargetSet, count: int, seed: int) -> list[int]:
    """Distinct uniform start vertices outside the target set."""
    n = B.n
    if count > (1 << n) - len(B):
        raise ValueError("more starts requested than non-target vertices")
    bg = philox_stream(seed, DOMAIN_SETS, (_START_STREAM,))
    out: list[int] = []
    seen = set()
    while len(out) < count:
        for v in vertices_from_raw(bg.random_raw(max(16, 2 * (count - len(out)))), n):
            v = int(v)
            if v not in seen and v not in B:
                seen.add(v)
                out.append(v)
                if len(out) == count:
                    break
    return out


@dataclass(frozen=True)
class KSBattery:
    """Per-start KS distances of normalized MC hitting times to Exp(1)."""

    provenance: str
    m: float
    trials: int
    starts: tuple
    ks: tuple
    censored_fractions: tuple
    band: float
    tolerance: float

    @property
    def worst(self) -> float:
        return max(self.ks)

    @property
    def all_pass(self) -> bool:
        return self.worst <= self.tolerance + self.band

    @property
    def ks_spread(self) -> float:
        return max(self.ks) - min(self.ks)


def mc_ks_battery(B: TargetSet, m: float, n_starts: int, trials: int, seed: int,
                  tolerance: float = 0.05, cap: int | None = None,
                  threads: int = 1) -> KSBattery:
    starts = sample_starts(B, n_starts, seed)
    ks_values = []
    censored = []
    for idx, x in enumerate(starts):
        emp = simulate_hitting(B, x, m, trials, seed, cap=cap, stream=idx,
                               threads=threads)
        r = ks_to_exponential(emp)
        ks_values.append(r.ks)
        censored.append(r.censored_fraction)
    return KSBattery(provenance=B.provenance, m=m, trials=trials,
                     starts=tuple(starts), ks=tuple(ks_values),
                     censored_fractions=tuple(censored),
                     band=dkw_band(trials), tolerance=tolerance)


def laplace_limit_errors(n: int, s: float = 1.0, m: float | None = None) -> np.ndarray:
    """Relative error of the limit shape 2^-n m/s + xi_n(k) against the exact
    transform of the point hitting time, for every start distance k.

    In the sparse window (n log n << m << 2^n) the transform splits into a
    fast-hit mass xi_n(k) plus a slow tail worth 2^-n m/s; the error of that
    two-term shape shrinks as n grows, which is what the trend presets check.
    """
    if m is None:
        m = float(n) ** 3
    xi_vals = np.exp(log_xi_all(n))
    approx = 2.0 ** -n * m / s + xi_vals
    exact = laplace_profile(n, s, m)
    return np.abs(approx - exact) / exact


def laplace_trend(ns=(20, 40, 80), s: float = 1.0) -> list[float]:
    """Max-over-k relative limit error for each n (m = n^3)."""
    return [float(laplace_limit_errors(n, s).max()) for n in ns]


def condition_sweep(n: int, rho: float, seeds, thresholds: Thresholds | None = None,
                    m="auto") -> list:
    """Hypothesis checker over an ensemble of percolation clouds."""
    table = XiTable.build(n, exact_cutoff=0)
    out = []
    for seed in seeds:
        B = percolation_cloud(n, rho, seed)
        if len(B) == 0:
            out.append((seed, None))
            continue
        out.append((seed, check_conditions(B, m, thresholds=thresholds, table=table)))
    return out


@dataclass(frozen=True)
class AgingRun:
    estimates: list
    tail: TailFit
    config: REMConfig


def rem_aging_run(n: int = 20, alpha: float = 0.5, beta_ratio: float = 0.5,
                  thetas=(0.5, 1.0, 3.0), disorder: int = 1000, walks: int = 1,
                  seed: int = 1, tail_pairs: int | None = None) -> AgingRun:
    cfg = REMConfig.from_beta_ratio(n, alpha, beta_ratio)
    estimates = two_point_multi(cfg, thetas, disorder, walks, seed)
    samples = clock_tail_samples(cfg, tail_pairs or disorder, seed)
    return AgingRun(estimates=estimates, tail=clock_tail_fit(samples), config=cfg)
