"""Monte Carlo hitting times of the simple walk and the exponential-law test.

Trajectories are embarrassingly parallel: each one owns a counter-addressed
random stream derived from (seed, trial index, caller stream id), so results
are a pure function of those identifiers no matter how trials are partitioned
across threads or which kernel backend runs them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels

BITMAP_MAX_N = 24  # above this, kernels binary-search a sorted target array


def hamming(x: int, y: int) -> int:
    return (x ^ y).bit_count()


def step(x: int, u: int, n: int | None = None) -> int:
    """One walk move: flip coordinate u of x."""
    if u < 0 or (n is not None and u >= n):
        raise ValueError(f"coordinate {u} outside 0..{n}")
    return x ^ (1 << u)


@dataclass(frozen=True)
class HittingEmpirical:
    """Sample of normalized hitting times H/m (censored entries sit at cap/m)."""

    m: float
    samples: np.ndarray
    censored: np.ndarray
    trials: int
    seed: int
    cap: int

    @property
    def censored_fraction(self) -> float:
        return float(self.censored.mean()) if self.trials else 0.0

    def survival(self, a) -> np.ndarray:
        """Empirical P[H/m >= a] (censored mass counts as >= cap/m)."""
        a = np.atleast_1d(np.asarray(a, dtype=float))
        sorted_samples = np.sort(self.samples)
        idx = np.searchsorted(sorted_samples, a, side="left")
        return (self.trials - idx) / self.trials


def simulate_hitting(B, x: int, m: float, trials: int, seed: int,
                     cap: int | None = None, stream: int = 0,
                     threads: int = 1) -> HittingEmpirical:
    """Empirical law of H(B \\ {x}) / m from `trials` independent walks at x.

    Deterministic in (seed, stream, trial index); thread count only changes
    wall time.  cap defaults to 50 m steps (exponential tail mass ~e^-50).
    """
    n = B.n
    members = {int(y) for y in B.members} - {int(x)}
    if not members:
        raise ValueError("target set is empty after removing the start vertex")
    if m <= 0 or trials <= 0:
        raise ValueError("need m > 0 and trials > 0")
    if cap is None:
        cap = math.ceil(50 * m)
    sorted_targets = np.array(sorted(members), dtype=np.uint64)
    bitmap = None
    if n <= BITMAP_MAX_N:
        bitmap = np.zeros(1 << n, dtype=np.uint8)
        bitmap[sorted_targets.astype(np.int64)] = 1

    steps = np.empty(trials, dtype=np.uint64)
    hit = np.empty(trials, dtype=bool)

    def run(lo: int, hi: int):
        s, h = kernels.run_trials(n, sorted_targets, bitmap, int(x), seed, stream,
                                  lo, hi, cap)
        steps[lo:hi] = s
        hit[lo:hi] = h

    threads = max(1, int(threads))
    if threads == 1:
        run(0, trials)
    else:
        bounds = np.linspace(0, trials, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run, int(lo), int(hi))
                       for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
            for f in futures:
                f.result()

    return HittingEmpirical(m=float(m), samples=steps.astype(float) / m,
                            censored=~hit, trials=trials, seed=seed, cap=cap)


@dataclass(frozen=True)
class KSResult:
    """Sup distance of an empirical sample to the Exp(1) law."""

    ks: float
    censored_fraction: float
    flagged: bool

    def __float__(self) -> float:
        return self.ks


def ks_to_exponential(emp: HittingEmpirical) -> KSResult:
    """Exact sup_a |empirical survival(a) - e^-a| over a in [0, cap/m].

    The empirical step function is evaluated from both sides at every sample
    point.  Censored samples are exact up to cap/m (their true value exceeds
    it); if their mass tops 1% the result is flagged because the unobserved
    tail could hide up to that much extra deviation.
    """
    if emp.trials == 0:
        raise ValueError("empty sample")
    xs = np.sort(emp.samples)
    ref = np.exp(-xs)
    upper = 1.0 - np.arange(emp.trials) / emp.trials  # survival just below x_(i)
    lower = upper - 1.0 / emp.trials  # survival just above x_(i)
    ks = float(np.maximum(np.abs(ref - upper), np.abs(ref - lower)).max())
    frac = emp.censored_fraction
    return KSResult(ks=ks, censored_fraction=frac, flagged=frac > 0.01)


def dkw_band(trials: int, delta: float = 1e-3) -> float:
    """Dvoretzky-Kiefer-Wolfowitz envelope half-width at confidence 1 - delta."""
    return math.sqrt(math.log(2 / delta) / (2 * trials))
