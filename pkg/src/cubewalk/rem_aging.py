"""Random-hopping-time dynamics on the hypercube with Gaussian site energies.

The walk Y is the simple hypercube walk; site x carries an energy E_x drawn
i.i.d. standard normal once per disorder realization (lazily, on first
visit); the clock advances by e_i * exp(beta sqrt(n) E_{Y(i)}) per jump with
e_i mean-one exponential.  The time-changed process X(t) = Y(clock^{-1}(t))
ages: the probability of seeing no jump between t_w and (1+theta) t_w
approaches the generalised arcsine law Asl_alpha(1/(1+theta)) on the scale
t_w = (alpha beta sqrt(2 pi n))^{-1/alpha} exp(alpha beta^2 n).

Clock convention: t_w and the clock S share the same raw time unit (no 1/n
rate normalization anywhere); alpha enters through the observation scale
only.  Keep any new time quantity on this same clock.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from .rng import DOMAIN_REM_ENERGY, DOMAIN_REM_WALK, generator, philox_stream, stream_state

WALK_CHUNK = 256
HORIZON_BUDGET = 1 << 20  # max clock steps per (disorder, walk) realization

BETA_C = math.sqrt(2 * math.log(2))


def asl(alpha: float, z: float) -> float:
    """Generalised arcsine law CDF: regularized incomplete beta I_z(alpha, 1-alpha)."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0,1)")
    if not 0 <= z <= 1:
        raise ValueError("z must lie in [0,1]")
    return float(betainc(alpha, 1 - alpha, z))


@dataclass(frozen=True)
class REMConfig:
    """Operating point of the aging run."""

    n: int
    beta: float
    alpha: float
    theta: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.beta < 0 or not 0 < self.alpha < 1 or self.theta <= 0:
            raise ValueError("need beta >= 0, alpha in (0,1), theta > 0")

    @classmethod
    def from_beta_ratio(cls, n: int, alpha: float, beta_ratio: float,
                        theta: float = 1.0) -> "REMConfig":
        """beta chosen so that alpha*beta/beta_c = beta_ratio."""
        return cls(n=n, beta=beta_ratio * BETA_C / alpha, alpha=alpha, theta=theta)

    @property
    def beta_c(self) -> float:
        return BETA_C

    @property
    def t_w(self) -> float:
        a, b, n = self.alpha, self.beta, self.n
        return (a * b * math.sqrt(2 * math.pi * n)) ** (-1 / a) * math.exp(a * b * b * n)

    @property
    def r_n(self) -> float:
        """Number of walk steps whose clock increment reaches the t_w scale."""
        a, b, n = self.alpha, self.beta, self.n
        return math.exp(a * a * b * b * n / 2)

    @property
    def regime_ok(self) -> bool:
        return 0 < self.alpha * self.beta < BETA_C

    @property
    def asl_target(self) -> float:
        return asl(self.alpha, 1 / (1 + self.theta))


class EnergyMap:
    """Lazy i.i.d. standard-normal site energies for one disorder realization.

    The energy of a vertex is a pure function of (seed, disorder_id, vertex):
    each site owns a counter block of the disorder stream, so every walk and
    every analysis pass sees the same landscape no matter which sites it
    touches first.  Values are cached; drawing a fresh site re-seats one
    persistent bit generator (a few microseconds) rather than building a new
    one.
    """

    def __init__(self, seed: int, disorder_id: int):
        self._seed = seed
        self._disorder_id = disorder_id
        self._bg = philox_stream(seed, DOMAIN_REM_ENERGY, (disorder_id, 0))
        self._gen = np.random.Generator(self._bg)
        self._energies: dict[int, float] = {}

    def __getitem__(self, vertex: int) -> float:
        e = self._energies.get(vertex)
        if e is None:
            self._bg.state = stream_state(self._seed, DOMAIN_REM_ENERGY,
                                          (self._disorder_id, int(vertex)))
            e = float(self._gen.standard_normal())
            self._energies[vertex] = e
        return e

    def __len__(self) -> int:
        return len(self._energies)

    def as_dict(self) -> dict:
        return dict(self._energies)


@dataclass
class ClockTrajectory:
    """Walk path, jump clock, and the disorder behind them."""

    n: int
    beta: float
    energies: EnergyMap
    walk: np.ndarray  # Y(0..K), packed vertices
    jump_times: np.ndarray  # S(0..K), S(0) = 0, strictly increasing
    _walk_gen: np.random.Generator | None = field(default=None, repr=False)
    _pending: tuple = field(default=((), ()), repr=False)

    @property
    def steps(self) -> int:
        return len(self.walk) - 1

    def extend(self, extra: int) -> None:
        """Continue the same walk for `extra` more steps.

        Unused draws from the last chunk are carried over, so the combined
        trajectory is identical to one simulated in a single call.
        """
        if self._walk_gen is None:
            raise ValueError("trajectory is frozen (constructed without its stream)")
        walk, times, pending = _run_clock(
            self.n, self.beta, self.energies, self._walk_gen, extra,
            int(self.walk[-1]), float(self.jump_times[-1]), self._pending)
        self.walk = np.concatenate([self.walk, walk[1:]])
        self.jump_times = np.concatenate([self.jump_times, times[1:]])
        self._pending = pending


def _run_clock(n: int, beta: float, energies: EnergyMap,
               gen: np.random.Generator, K: int, start: int, t0: float,
               pending=((), ())) -> tuple[np.ndarray, np.ndarray, tuple]:
    scale = beta * math.sqrt(n)
    walk = np.empty(K + 1, dtype=np.uint64)
    incr = np.empty(K)
    walk[0] = start
    pos = start
    done = 0
    coords, holds = (np.asarray(pending[0]), np.asarray(pending[1]))
    off = 0  # leftovers from a previous call are consumed before fresh chunks
    while done < K:
        if off == coords.size:
            coords = gen.integers(0, n, size=WALK_CHUNK)
            holds = gen.standard_exponential(WALK_CHUNK)
            off = 0
        ch = min(coords.size - off, K - done)
        for i in range(ch):
            incr[done + i] = holds[off + i] * math.exp(scale * energies[pos])
            pos ^= 1 << int(coords[off + i])
            walk[done + i + 1] = pos
        done += ch
        off += ch
    times = np.empty(K + 1)
    times[0] = t0
    np.cumsum(incr, out=times[1:])
    times[1:] += t0
    return walk, times, (coords[off:], holds[off:])


def clock_process(cfg: REMConfig, K: int, seed: int, disorder_id: int = 0,
                  walk_id: int = 0, energies: EnergyMap | None = None) -> ClockTrajectory:
    """Simulate K jumps of the time-changed walk from vertex 0."""
    if K < 1:
        raise ValueError("need at least one jump")
    if energies is None:
        energies = EnergyMap(seed, disorder_id)
    gen = generator(seed, DOMAIN_REM_WALK, (disorder_id, walk_id))
    walk, times, pending = _run_clock(cfg.n, cfg.beta, energies, gen, K, 0, 0.0)
    return ClockTrajectory(n=cfg.n, beta=cfg.beta, energies=energies, walk=walk,
                           jump_times=times, _walk_gen=gen, _pending=pending)


def position_at(traj: ClockTrajectory, t: float) -> int:
    """X(t): the walk position at clock time t (right-continuous inverse)."""
    if t < 0 or t > traj.jump_times[-1]:
        raise ValueError(f"t={t} outside simulated clock range")
    idx = int(np.searchsorted(traj.jump_times, t, side="right")) - 1
    return int(traj.walk[idx])


@dataclass(frozen=True)
class AgingEstimate:
    """Monte Carlo two-point estimate against its arcsine-law target."""

    theta: float
    estimate: float
    stderr: float
    target: float
    n_disorder: int
    n_walks: int
    disorder_spread: float
    exhausted_fraction: float

    @property
    def flagged(self) -> bool:
        return self.exhausted_fraction > 0.05


def _ensure_horizon(traj: ClockTrajectory, t_needed: float) -> bool:
    """Extend the trajectory until its clock passes t_needed; False if the
    step budget ran out first."""
    while traj.jump_times[-1] < t_needed:
        if traj.steps >= HORIZON_BUDGET:
            return False
        traj.extend(traj.steps)  # doubling
    return True


def two_point_multi(cfg: REMConfig, thetas, disorder: int, walks: int,
                    seed: int) -> list[AgingEstimate]:
    """P[X((1+theta) t_w) = X(t_w)] for several theta on shared trajectories.

    Averages over `disorder` realizations with `walks` independent walks
    each; the binomial stderr uses all disorder*walks indicators while the
    across-disorder spread (std of per-disorder means) is reported
    separately, since the aging statement is quenched.
    """
    thetas = sorted(float(t) for t in thetas)
    if not thetas:
        raise ValueError("need at least one theta")
    if disorder < 1 or walks < 1:
        raise ValueError("need disorder >= 1 and walks >= 1")
    t_w = cfg.t_w
    t_max = (1 + thetas[-1]) * t_w
    k0 = max(1, round(cfg.r_n))
    same = np.zeros((len(thetas), disorder, walks))
    valid = np.zeros((disorder, walks), dtype=bool)
    for d in range(disorder):
        energies = EnergyMap(seed, d)
        for w in range(walks):
            traj = clock_process(cfg, k0, seed, disorder_id=d, walk_id=w,
                                 energies=energies)
            if not _ensure_horizon(traj, t_max):
                continue  # budget ran out: excluded, counted as exhausted
            valid[d, w] = True
            x_w = position_at(traj, t_w)
            for j, theta in enumerate(thetas):
                same[j, d, w] = x_w == position_at(traj, (1 + theta) * t_w)
    n_valid = int(valid.sum())
    if n_valid == 0:
        raise RuntimeError("every trajectory exhausted the clock budget")
    exhausted_fraction = 1 - n_valid / (disorder * walks)
    rows = [d for d in range(disorder) if valid[d].any()]
    out = []
    for j, theta in enumerate(thetas):
        p = float(same[j][valid].mean())
        stderr = math.sqrt(max(p * (1 - p), 1e-12) / n_valid)
        per_disorder = np.array([same[j, d][valid[d]].mean() for d in rows])
        spread = float(per_disorder.std(ddof=1)) if len(rows) > 1 else 0.0
        out.append(AgingEstimate(
            theta=theta, estimate=p, stderr=stderr,
            target=asl(cfg.alpha, 1 / (1 + theta)),
            n_disorder=disorder, n_walks=walks, disorder_spread=spread,
            exhausted_fraction=exhausted_fraction,
        ))
    return out


def two_point(cfg: REMConfig, trials: int, seed: int, walks: int = 1,
              quenched: bool = False) -> AgingEstimate:
    """Two-point estimate at cfg.theta over `trials` disorder realizations.

    quenched=True freezes a single disorder realization and spends the
    trials on walk randomness instead.
    """
    if quenched:
        disorder, walks = 1, trials
    else:
        disorder = trials
    return two_point_multi(cfg, [cfg.theta], disorder, walks, seed)[0]


@dataclass(frozen=True)
class TailFit:
    """Log-log slope of the clock tail over one decade."""

    slope: float
    u_lo: float
    u_hi: float
    n_points: int
    samples: int


def clock_tail_samples(cfg: REMConfig, pairs: int, seed: int) -> np.ndarray:
    """S(round(r_n)) / t_w over `pairs` fresh (disorder, walk) realizations."""
    K = max(1, round(cfg.r_n))
    t_w = cfg.t_w
    out = np.empty(pairs)
    for d in range(pairs):
        traj = clock_process(cfg, K, seed, disorder_id=d, walk_id=0)
        out[d] = traj.jump_times[-1] / t_w
    return out


def clock_tail_fit(samples: np.ndarray, decade_points: int = 12) -> TailFit:
    """Least-squares slope of log P[S/t_w > u] vs log u across one decade,
    anchored at the 40% survival level."""
    s = np.sort(samples)
    u_lo = float(np.quantile(s, 0.6))
    if u_lo <= 0:
        raise ValueError("nonpositive tail anchor; sample looks degenerate")
    u_hi = 10 * u_lo
    grid = np.exp(np.linspace(math.log(u_lo), math.log(u_hi), decade_points))
    surv = np.array([(s > u).mean() for u in grid])
    keep = surv >= 10 / len(s)
    if keep.sum() < 3:
        raise ValueError("too few tail points above the resolution floor")
    slope = float(np.polyfit(np.log(grid[keep]), np.log(surv[keep]), 1)[0])
    return TailFit(slope=slope, u_lo=u_lo, u_hi=float(grid[keep][-1]),
                   n_points=int(keep.sum()), samples=len(s))
