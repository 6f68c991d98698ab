"""Random target sets on {0,1}^n and the exponential-law condition checker.

Percolation clouds are drawn as Binomial(2^n, rho) for the size followed by a
uniform distinct-vertex fill — exact in distribution and free of 2^n
per-vertex Bernoulli draws.  The geometry statistics v(k)/V(k) (worst-case
sphere and ball counts over all centers) feed the four-part hypothesis check
for the exponential hitting-time law.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import GThreshold, XiTable, find_g
from .exact_hitting import ResourceLimitError
from .rng import DOMAIN_SETS, generator, philox_stream, vertices_from_raw

ENUMERATION_MAX_N = 36
MEMBER_BUDGET = 1 << 26
EXACT_STATS_MAX_N = 24
EXACT_STATS_MAX_MEMBERS = 1 << 12
_CENTER_STREAM = 0xCE


@dataclass(frozen=True)
class TargetSet:
    """Explicit subset of {0,1}^n with provenance."""

    n: int
    members: frozenset
    provenance: str = "explicit"

    def __post_init__(self):
        if self.n < 1 or self.n > 64:
            raise ValueError("dimension must be in 1..64")
        bad = [v for v in self.members if not 0 <= int(v) < (1 << self.n)]
        if bad:
            raise ValueError(f"members outside {{0,1}}^{self.n}: {bad[:3]}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v) -> bool:
        return int(v) in self.members

    def sorted_array(self) -> np.ndarray:
        return np.array(sorted(int(v) for v in self.members), dtype=np.uint64)


def _sample_distinct(bg: np.random.Philox, n: int, M: int) -> list[int]:
    """First M distinct masked draws from the raw stream."""
    out: list[int] = []
    seen: set[int] = set()
    mask = (1 << n) - 1
    while len(out) < M:
        chunk = bg.random_raw(max(16, 2 * (M - len(out))))
        for u in chunk:
            v = int(u) & mask
            if v not in seen:
                seen.add(v)
                out.append(v)
                if len(out) == M:
                    break
    return out


def percolation_cloud(n: int, rho: float, seed: int) -> TargetSet:
    """Each vertex kept independently with probability rho."""
    if not 0 <= rho <= 1:
        raise ValueError("density must lie in [0, 1]")
    if n > ENUMERATION_MAX_N:
        raise ResourceLimitError("cloud dimension beyond enumeration budget", n,
                                 ENUMERATION_MAX_N)
    if (1 << n) * rho > MEMBER_BUDGET:
        raise ResourceLimitError("expected cloud size beyond member budget",
                                 (1 << n) * rho, MEMBER_BUDGET)
    bg = philox_stream(seed, DOMAIN_SETS)
    M = int(np.random.Generator(bg).binomial(1 << n, rho))
    members = _sample_distinct(bg, n, M) if M else []
    return TargetSet(n=n, members=frozenset(members),
                     provenance=f"percolation(rho={rho!r}, seed={seed})")


def sample_without_replacement(n: int, M: int, seed: int) -> TargetSet:
    """Uniform M-subset of {0,1}^n."""
    N = 1 << n
    if not 0 < M <= N:
        raise ValueError(f"need 0 < M <= 2^{n}, got {M}")
    if M > MEMBER_BUDGET:
        raise ResourceLimitError("sample size beyond member budget", M, MEMBER_BUDGET)
    bg = philox_stream(seed, DOMAIN_SETS)
    if M > N // 2:
        # complement trick keeps the rejection fill fast for dense requests
        if N > MEMBER_BUDGET:
            raise ResourceLimitError("dense sample needs full enumeration", N,
                                     MEMBER_BUDGET)
        drop = frozenset(_sample_distinct(bg, n, N - M))
        members = frozenset(v for v in range(N) if v not in drop)
    else:
        members = frozenset(_sample_distinct(bg, n, M))
    return TargetSet(n=n, members=members, provenance=f"sampled(M={M}, seed={seed})")


def distance_profile(B: TargetSet, x: int) -> np.ndarray:
    """count[k] = #{y in B : d(x, y) = k}."""
    arr = B.sorted_array()
    if arr.size == 0:
        return np.zeros(B.n + 1, dtype=np.int64)
    d = np.bitwise_count(arr ^ np.uint64(int(x))).astype(np.int64)
    return np.bincount(d, minlength=B.n + 1)


def _profiles_exact(n: int, members: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Worst-case sphere counts v[k] and ball counts V[k] over all 2^n centers."""
    N = 1 << n
    v = np.zeros(n + 1, dtype=np.int64)
    V = np.zeros(n + 1, dtype=np.int64)
    chunk = max(1, min(N, (1 << 22) // max(1, members.size)))
    row_offset = np.arange(chunk, dtype=np.int64)[:, None] * (n + 1)
    for lo in range(0, N, chunk):
        xs = np.arange(lo, min(lo + chunk, N), dtype=np.uint64)[:, None]
        d = np.bitwise_count(xs ^ members[None, :]).astype(np.int64)
        flat = (d + row_offset[: xs.shape[0]]).ravel()
        counts = np.bincount(flat, minlength=xs.shape[0] * (n + 1))
        counts = counts.reshape(xs.shape[0], n + 1)
        np.maximum(v, counts.max(axis=0), out=v)
        np.maximum(V, counts.cumsum(axis=1).max(axis=0), out=V)
    return v, V


def _profiles_over_centers(n: int, members: np.ndarray,
                           centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = np.zeros(n + 1, dtype=np.int64)
    V = np.zeros(n + 1, dtype=np.int64)
    for lo in range(0, centers.size, 4096):
        xs = centers[lo:lo + 4096][:, None]
        d = np.bitwise_count(xs ^ members[None, :]).astype(np.int64)
        counts = np.stack([np.bincount(row, minlength=n + 1) for row in d])
        np.maximum(v, counts.max(axis=0), out=v)
        np.maximum(V, counts.cumsum(axis=1).max(axis=0), out=V)
    return v, V


def sphere_ball_profiles(B: TargetSet, mode="exact",
                         ) -> tuple[np.ndarray, np.ndarray, bool]:
    """(v, V, exact) with v[k] = max_x #{y in B: d(x,y) = k} and V its ball
    (cumulative) counterpart.

    mode is "exact" (all 2^n centers) or ("sampled", S, seed): centers are
    all of B plus S uniform vertices, giving a certified lower bound.
    """
    members = B.sorted_array()
    if members.size == 0:
        z = np.zeros(B.n + 1, dtype=np.int64)
        return z, z.copy(), True
    if mode == "exact":
        if B.n > EXACT_STATS_MAX_N or members.size > EXACT_STATS_MAX_MEMBERS:
            raise ResourceLimitError(
                "exact center sweep beyond budget",
                float(members.size) * (1 << B.n),
                float(EXACT_STATS_MAX_MEMBERS) * (1 << EXACT_STATS_MAX_N),
            )
        v, V = _profiles_exact(B.n, members)
        return v, V, True
    kind, S, seed = mode
    if kind != "sampled":
        raise ValueError(f"mode must be 'exact' or ('sampled', S, seed), got {mode!r}")
    extra = vertices_from_raw(
        philox_stream(seed, DOMAIN_SETS, (_CENTER_STREAM,)).random_raw(int(S)), B.n
    )
    centers = np.unique(np.concatenate([members, extra]))
    v, V = _profiles_over_centers(B.n, members, centers)
    return v, V, False


def vn_max(B: TargetSet, k: int, mode="exact") -> tuple[int, bool]:
    """Worst-case sphere count at radius k: (value, is_lower_bound)."""
    if not 0 <= k <= B.n:
        raise ValueError(f"radius {k} outside 0..{B.n}")
    v, _, exact = sphere_ball_profiles(B, mode)
    return int(v[k]), not exact


@dataclass(frozen=True)
class Thresholds:
    """Finite-n stand-ins for the theorem's asymptotic smallness conditions."""

    size: float = 0.2
    xi_gap: float = 0.2
    vsum: float = 0.2
    vbig: float = 0.2


@dataclass(frozen=True)
class ConditionReport:
    """Numeric hypotheses of the exponential hitting-time law for one set."""

    n: int
    m: float
    size_ratio: float
    g: GThreshold
    xi_gap: float | None
    vsum: float | None
    vbig_ratio: float | None
    exact_stats: bool
    thresholds: Thresholds
    verdicts: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "size_ratio": self.size_ratio,
            "g": self.g.g,
            "m_prime": self.g.m_prime,
            "xi_at_g": self.g.xi_at_g,
            "xi_gap": self.xi_gap,
            "vsum": self.vsum,
            "vbig_ratio": self.vbig_ratio,
            "exact_stats": self.exact_stats,
            "thresholds": vars(self.thresholds),
            "verdicts": dict(self.verdicts),
            "all_pass": self.all_pass,
        }


def check_conditions(B: TargetSet, m, thresholds: Thresholds | None = None,
                     mode=None, table: XiTable | None = None) -> ConditionReport:
    """Evaluate the four hypotheses of the exponential law on a concrete set.

    m may be the string "auto" for the matched scale 2^n / |B|.  mode defaults
    to the exact center sweep when affordable, sampled otherwise.
    """
    if len(B) == 0:
        raise ValueError("condition check needs a nonempty set")
    thresholds = thresholds or Thresholds()
    n = B.n
    if m == "auto":
        m = (1 << n) / len(B)
    m = float(m)
    if table is None:
        table = XiTable.build(n, exact_cutoff=0)
    size_ratio = len(B) * m / (1 << n)
    g = find_g(n, m, table)
    if mode is None:
        affordable = n <= 20 and len(B) <= EXACT_STATS_MAX_MEMBERS
        mode = "exact" if affordable else ("sampled", 4096, 0)
    v, V, exact = sphere_ball_profiles(B, mode)
    verdicts = {"size": abs(size_ratio - 1) <= thresholds.size}
    xi_gap = vsum = vbig = None
    if g.feasible:
        xi_gap = g.xi_at_g * (1 << n) / m
        vsum = float(sum(v[k] * table.value(k) for k in range(1, g.g)))
        vbig = float(V[g.g - 1] / len(B))
        verdicts["xi_gap"] = xi_gap <= thresholds.xi_gap
        verdicts["vsum"] = vsum <= thresholds.vsum
        verdicts["vbig"] = vbig <= thresholds.vbig
    else:
        verdicts["xi_gap"] = verdicts["vsum"] = verdicts["vbig"] = False
    return ConditionReport(n=n, m=m, size_ratio=size_ratio, g=g, xi_gap=xi_gap,
                           vsum=vsum, vbig_ratio=vbig, exact_stats=exact,
                           thresholds=thresholds, verdicts=verdicts)


def cloud_statistic(B: TargetSet, rho: float, mode="exact") -> np.ndarray:
    """Empirical sphere-count constants c[k] = v(k) / (C(n,k) rho + f(k)).

    f(1) = n / ln(1/rho) and f(k) = n for k > 1 — the scale at which cloud
    sphere counts concentrate; c bounded by a modest constant is the
    finite-n face of the cloud-geometry lemma.  c[0] is set to 0.
    """
    if not 0 < rho < 1:
        raise ValueError("statistic defined for densities strictly inside (0,1)")
    v, _, _ = sphere_ball_profiles(B, mode)
    n = B.n
    out = np.zeros(n + 1)
    for k in range(1, n + 1):
        f = n / math.log(1 / rho) if k == 1 else float(n)
        out[k] = v[k] / (math.comb(n, k) * rho + f)
    return out


def save_set(path, B: TargetSet) -> None:
    """Write header `n=<dim>` plus one lowercase hex vertex per line."""
    with open(path, "w") as fh:
        fh.write(f"n={B.n}\n")
        for v in sorted(int(y) for y in B.members):
            fh.write(f"{v:x}\n")


def load_set(path) -> TargetSet:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("n="):
            raise ValueError(f"{path}: expected header 'n=<dim>', got {header!r}")
        n = int(header[2:])
        members = frozenset(int(line, 16) for line in fh if line.strip())
    return TargetSet(n=n, members=members, provenance="explicit")
