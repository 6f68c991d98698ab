"""Exact hitting-time quantities for the simple walk on {0,1}^n.

Three independent computational routes to the same single-target law, kept
deliberately separate so they can cross-check each other:

* a closed-form Laplace transform, evaluated through a positive-term
  log-gamma series (the alternating form cancels catastrophically in floats
  and exists here only as exact rationals for identity testing);
* the distance birth-death chain (state = Hamming distance to the target,
  up rate (n-d)/n, down rate d/n), solved by a tridiagonal system or stepped
  forward for survival tables;
* brute-force absorbing-chain iteration over all 2^n states, which also
  covers arbitrary multi-point target sets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import gammaln, logsumexp

SURVIVAL_BUDGET = 10**8  # state-updates per survival call
INCL_EXCL_BUDGET = 4 * 10**9  # state-updates per inclusion-exclusion call
FULL_CHAIN_MAX_N = 20


class ResourceLimitError(Exception):
    """Request exceeds the per-call compute/memory budget."""

    def __init__(self, message: str, estimate: float, budget: float):
        super().__init__(f"{message} (estimated {estimate:.3g}, budget {budget:.3g})")
        self.estimate = estimate
        self.budget = budget


@dataclass(frozen=True)
class LaplaceQuery:
    """Parameters of E_{z_k} exp(-(s/m) H(target))."""

    n: int
    k: int
    s: float
    m: float

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("Laplace parameter s must be positive (the s=0 "
                             "limit is a gamma pole; use survival tables)")
        if self.m <= 0:
            raise ValueError("time scale m must be positive")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"start distance k={self.k} outside 0..{self.n}")

    @property
    def epsilon(self) -> float:
        return self.n / 2 * math.expm1(self.s / self.m)

    @property
    def lam(self) -> float:
        return math.exp(-self.s / self.m)


def log_laplace_numerator(n: int, s: float, m: float) -> np.ndarray:
    """log of the transform numerator for every start distance k = 0..n.

    numerator(k) = sum_{j=0}^{n-k} C(n-k,j) (n e^{s/m}/2)
                   Gamma(1+k) Gamma(j+eps) / Gamma(1+k+j+eps)

    All terms positive, so the log-sum-exp is cancellation-free.  The k = 0
    row doubles as the denominator of the transform.
    """
    eps = n / 2 * math.expm1(s / m)
    k = np.arange(n + 1)[:, None]
    j = np.arange(n + 1)[None, :]
    valid = j <= n - k
    jc = np.where(valid, j, 0)
    log_cnkj = gammaln(n - k + 1) - gammaln(jc + 1) - gammaln(n - k - jc + 1)
    const = math.log(n / 2) + s / m
    terms = np.where(
        valid,
        log_cnkj + const + gammaln(1 + k) + gammaln(j + eps) - gammaln(1 + k + j + eps),
        -np.inf,
    )
    return logsumexp(terms, axis=1)


def laplace_profile(n: int, s: float, m: float) -> np.ndarray:
    """E_{z_k} exp(-(s/m) H(0)) for all k at once."""
    lognum = log_laplace_numerator(n, s, m)
    return np.exp(lognum - lognum[0])


def laplace_formula(q: LaplaceQuery) -> float:
    """E_{z_k} exp(-(s/m) H(0)) via the positive-term series."""
    return float(laplace_profile(q.n, q.s, q.m)[q.k])


def laplace_alternating_exact(n: int, k: int, j: int, lam: Fraction) -> Fraction:
    """sum_{i=0}^{k} (-1)^i C(k,i) / (1 - lam (1 - 2(i+j)/n)), exact.

    This is the raw alternating inner sum of the transform; it equals
    beta_product_form by a Beta-integral evaluation, and that equality is
    what the identity tests assert.
    """
    if k + j > n:
        raise ValueError("need k + j <= n")
    lam = Fraction(lam)
    total = Fraction(0)
    for i in range(k + 1):
        den = 1 - lam * (1 - Fraction(2 * (i + j), n))
        if den == 0:
            raise ValueError(f"vanishing denominator at i={i}")
        total += Fraction((-1) ** i * math.comb(k, i), 1) / den
    return total


def beta_product_form(n: int, k: int, j: int, lam: Fraction) -> Fraction:
    """(n/(2 lam)) k! / prod_{t=0}^{k} (j + eps + t), eps = (n/2)(1/lam - 1)."""
    if k + j > n:
        raise ValueError("need k + j <= n")
    lam = Fraction(lam)
    eps = Fraction(n, 2) * (1 / lam - 1)
    prod = Fraction(1)
    for t in range(k + 1):
        prod *= j + eps + t
    return Fraction(n, 2) / lam * math.factorial(k) / prod


def lumped_laplace_profile(n: int, s: float, m: float) -> np.ndarray:
    """E_{z_k} exp(-(s/m) H(0)) for all k, via the distance chain.

    Solves phi(0) = 1, phi(d) = lam [ (d/n) phi(d-1) + ((n-d)/n) phi(d+1) ]
    for 1 <= d <= n-1 and phi(n) = lam phi(n-1) as one tridiagonal system.
    """
    if s <= 0 or m <= 0:
        raise ValueError("need s > 0 and m > 0")
    lam = math.exp(-s / m)
    if n == 0:
        return np.ones(1)
    d = np.arange(1, n + 1)
    lower = -lam * d / n  # coeff of phi(d-1) in row d
    upper = -lam * (n - d) / n  # coeff of phi(d+1) in row d
    lower[-1] = -lam  # row n: phi(n) - lam phi(n-1) = 0
    ab = np.zeros((3, n))
    ab[0, 1:] = upper[:-1]
    ab[1, :] = 1.0
    ab[2, :-1] = lower[1:]
    rhs = np.zeros(n)
    rhs[0] = -lower[0]  # phi(0) = 1 moved to the right-hand side
    phi = solve_banded((1, 1), ab, rhs)
    return np.concatenate(([1.0], phi))


def lumped_laplace(n: int, k: int, s: float, m: float) -> float:
    if not 0 <= k <= n:
        raise ValueError(f"start distance k={k} outside 0..{n}")
    return float(lumped_laplace_profile(n, s, m)[k])


@dataclass(frozen=True)
class SurvivalTable:
    """P[H >= t] for t = 0..horizon from one start.

    start is the lumped distance (int) for the distance chain, or the packed
    start vertex for full-chain tables.
    """

    start: int
    horizon: int
    survival: np.ndarray

    def at(self, t: float) -> float:
        """P[H >= t] for real t (H is integer-valued)."""
        idx = max(0, math.ceil(t))
        if idx > self.horizon:
            raise ValueError(f"t={t} beyond horizon {self.horizon}")
        return float(self.survival[idx])


def lumped_survival(n: int, k: int, T: int) -> SurvivalTable:
    """Exact P_{z_k}[H(0) >= t], t = 0..T, on the distance chain."""
    if not 0 <= k <= n:
        raise ValueError(f"start distance k={k} outside 0..{n}")
    if T < 0:
        raise ValueError("horizon must be >= 0")
    cost = float(T) * (n + 1)
    if cost > SURVIVAL_BUDGET:
        raise ResourceLimitError("lumped survival horizon too large", cost, SURVIVAL_BUDGET)
    d = np.arange(n + 1)
    up = (n - d) / n  # d -> d+1
    down = d / n  # d -> d-1
    v = np.zeros(n + 1)
    v[k] = 1.0
    out = np.empty(T + 1)
    out[0] = 1.0  # P[H >= 0]
    v[0] = 0.0  # absorb at the target
    if T >= 1:
        out[1] = v.sum()  # P[H >= 1]: zero iff the start is the target
    for t in range(2, T + 1):
        w = np.zeros(n + 1)
        w[1:] += v[:-1] * up[:-1]
        w[:-1] += v[1:] * down[1:]
        w[0] = 0.0
        v = w
        out[t] = v.sum()
    return SurvivalTable(start=k, horizon=T, survival=out)


def p_single(n: int, k: int, a: float, m: float) -> float:
    """P_{z_k}[H(0) < a m] from the distance chain."""
    if a < 0 or m <= 0:
        raise ValueError("need a >= 0 and m > 0")
    if a == 0:
        return 0.0
    T = math.ceil(a * m)
    return 1.0 - lumped_survival(n, k, T).at(a * m)


def _neighbour_sum(u: np.ndarray, n: int, acc: np.ndarray) -> np.ndarray:
    """acc[x] = sum_b u[x ^ 2^b], via axis-flip views (no index tables)."""
    acc[:] = 0.0
    for b in range(n):
        sh = (1 << (n - 1 - b), 2, 1 << b)
        np.add(acc.reshape(sh), u.reshape(sh)[:, ::-1, :], out=acc.reshape(sh))
    return acc


def _as_target_indices(n: int, targets) -> np.ndarray:
    idx = np.asarray(sorted(int(t) for t in targets), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= 1 << n):
        raise ValueError("target vertex outside {0,1}^n")
    return idx


def survival_grid(n: int, targets, times) -> np.ndarray:
    """P_x[H(targets) >= t] for every start x at the requested times.

    One backward sweep over all 2^n states; row r of the result is the
    survival vector at times[r].  times must be sorted ascending.
    """
    if n > FULL_CHAIN_MAX_N:
        raise ResourceLimitError("full-chain grid dimension too large", 2.0**n,
                                 2.0**FULL_CHAIN_MAX_N)
    times = list(times)
    if times != sorted(times) or (times and times[0] < 0):
        raise ValueError("times must be sorted and nonnegative")
    T = times[-1] if times else 0
    N = 1 << n
    cost = float(T) * N
    if cost > SURVIVAL_BUDGET:
        raise ResourceLimitError("full-chain survival horizon too large", cost,
                                 SURVIVAL_BUDGET)
    idx = _as_target_indices(n, targets)
    alive = np.ones(N)
    alive[idx] = 0.0
    s = np.ones(N)
    out = np.empty((len(times), N))
    acc = np.empty(N)
    pos = 0
    for t in range(0, T + 1):
        if pos < len(times) and times[pos] == t:
            out[pos] = s
            pos += 1
        if t == T:
            break
        _neighbour_sum(s, n, acc)
        acc /= n
        acc *= alive
        s, acc = acc, s
    return out


def full_survival(n: int, B, x: int, T: int) -> SurvivalTable:
    """Exact P_x[H(B \\ {x}) >= t] for t = 0..T over the full 2^n chain."""
    members = {int(y) for y in getattr(B, "members", B)}
    members.discard(int(x))
    if not members:
        # empty effective target: the hitting time is infinite
        return SurvivalTable(start=int(x), horizon=T, survival=np.ones(T + 1))
    grid = survival_grid(n, members, range(T + 1))
    return SurvivalTable(start=int(x), horizon=T, survival=grid[:, int(x)].copy())


def inclusion_exclusion_sum(n: int, B, x: int, i: int, a: float, m: float) -> float:
    """sum over ordered i-tuples of distinct y_1..y_i in B \\ {x} of
    P_x[every H(y_j) < a m], computed exactly.

    Per unordered subset S the joint probability comes from a dynamic program
    on (vertex, subset-of-S-already-visited); the ordered sum is i! times the
    subset sum.
    """
    if i not in (1, 2, 3):
        raise ResourceLimitError("tuple order i must be 1, 2 or 3", i, 3)
    if n > 12:
        raise ResourceLimitError("inclusion-exclusion dimension too large", n, 12)
    if a < 0 or m <= 0:
        raise ValueError("need a >= 0 and m > 0")
    members = sorted({int(y) for y in getattr(B, "members", B)} - {int(x)})
    if len(members) < i:
        return 0.0
    if a == 0:
        return 0.0
    # H < a m  <=>  H <= ceil(a m) - 1 for integer H
    T = math.ceil(a * m) - 1
    N = 1 << n
    from itertools import combinations

    n_subsets = math.comb(len(members), i)
    cost = float(n_subsets) * T * N * (1 << i)
    if cost > INCL_EXCL_BUDGET:
        raise ResourceLimitError("inclusion-exclusion sweep too large", cost,
                                 INCL_EXCL_BUDGET)
    total = 0.0
    full_mask = (1 << i) - 1
    acc = np.empty((1 << i, N))
    for subset in combinations(members, i):
        u = np.zeros((1 << i, N))
        u[0, int(x)] = 1.0
        # visit-update for the start vertex is a no-op: x is not in the subset
        for _ in range(T):
            for mask in range(1 << i):
                _neighbour_sum(u[mask], n, acc[mask])
            acc /= n
            u, acc = acc, u
            for jbit, y in enumerate(subset):
                bit = 1 << jbit
                src = np.arange(1 << i)
                src = src[(src & bit) == 0]
                u[src | bit, y] += u[src, y]
                u[src, y] = 0.0
        total += u[full_mask].sum()
    return math.factorial(i) * total
