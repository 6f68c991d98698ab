"""Binomials and the near-target hitting correction xi_n(k).

xi_n(k) = 2^-n * (n/2) * C(n,k)^-1 * sum_{j=1}^{n-k} C(n,k+j)/j

is the probability-scale correction for hitting a fixed vertex from Hamming
distance k within the relaxation window.  It is evaluated exactly (rationals)
for small n and in log space for large n; C(n, k+j) overflows float64 near
k+j = n/2 once n is in the hundreds, so the float path never leaves log
domain until the final exponential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, logsumexp

EXACT_CUTOFF = 30


def binom_exact(n: int, k: int) -> int:
    """C(n,k) as an exact integer."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"binom_exact requires 0 <= k <= n, got n={n} k={k}")
    return math.comb(n, k)


def log_binom(n: int, k: int) -> float:
    """ln C(n,k) via log-gamma."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"log_binom requires 0 <= k <= n, got n={n} k={k}")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log_binom_row(n: int) -> np.ndarray:
    k = np.arange(n + 1)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def log_xi_all(n: int) -> np.ndarray:
    """log xi_n(k) for k = 0..n (log_xi[n] = -inf, empty sum)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    lc = _log_binom_row(n)
    prefix = math.log(n / 2) - n * math.log(2)
    out = np.full(n + 1, -np.inf)
    for k in range(n):
        j = np.arange(1, n - k + 1)
        out[k] = prefix - lc[k] + logsumexp(lc[k + j] - np.log(j))
    return out


def xi(n: int, k: int) -> float:
    """xi_n(k), float path."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if k < 0 or k > n:
        raise ValueError(f"xi requires 0 <= k <= n, got n={n} k={k}")
    if k == n:
        return 0.0
    lc = _log_binom_row(n)
    j = np.arange(1, n - k + 1)
    return float(
        np.exp(math.log(n / 2) - n * math.log(2) - lc[k] + logsumexp(lc[k + j] - np.log(j)))
    )


def xi_exact(n: int, k: int) -> Fraction:
    """xi_n(k) as an exact rational (defining sum)."""
    if k < 0 or k > n:
        raise ValueError(f"xi_exact requires 0 <= k <= n, got n={n} k={k}")
    s = sum(Fraction(math.comb(n, k + j), j) for j in range(1, n - k + 1))
    return Fraction(n, 2) * s / (Fraction(2) ** n * math.comb(n, k))


def xi_second_form(n: int, k: int) -> Fraction:
    """xi_n(k) rewritten with the C(n,k) absorbed into the summand:

    2^-n * (n/2) * sum_{j=1}^{n-k} C(n-k,j) * C(k+j,j)^-1 / j
    """
    if k < 0 or k > n:
        raise ValueError(f"xi_second_form requires 0 <= k <= n, got n={n} k={k}")
    s = sum(
        Fraction(math.comb(n - k, j), j * math.comb(k + j, j)) for j in range(1, n - k + 1)
    )
    return Fraction(n, 2) * s / Fraction(2) ** n


@dataclass(frozen=True)
class XiTable:
    """xi_n(0..n); log domain internally, immutable after construction."""

    n: int
    log_values: np.ndarray
    exact_values: tuple[Fraction, ...] | None = None

    @classmethod
    def build(cls, n: int, exact_cutoff: int = EXACT_CUTOFF) -> "XiTable":
        exact = None
        if n <= exact_cutoff:
            exact = tuple(xi_exact(n, k) for k in range(n + 1))
        return cls(n=n, log_values=log_xi_all(n), exact_values=exact)

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    def value(self, k: int) -> float:
        return float(np.exp(self.log_values[k]))

    def xi_times_binom(self, k: int) -> float:
        # summed in log space: both factors span ~2^+-n
        if k == self.n:
            return 0.0
        return float(np.exp(self.log_values[k] + log_binom(self.n, k)))


@dataclass(frozen=True)
class GThreshold:
    """Minimal distance g at which xi_n drops below the 2^-n * m' threshold.

    m' = sqrt(m * n * ln n), the log-symmetric interpolation between the two
    scales n ln n << m' << m that the threshold construction needs.
    """

    n: int
    m: float
    m_prime: float
    g: int | None
    xi_at_g: float | None
    feasible: bool

    @property
    def slack_to_half(self) -> float | None:
        """n/2 - g, reported because the construction wants it large."""
        if self.g is None:
            return None
        return self.n / 2 - self.g


def find_g(n: int, m: float, table: XiTable | None = None) -> GThreshold:
    """Scan k = 1..n/2 for the first xi_n(k) <= 2^-n * m'."""
    if m <= 0:
        raise ValueError("time scale m must be positive")
    if table is None:
        table = XiTable.build(n, exact_cutoff=0)
    elif table.n != n:
        raise ValueError(f"table is for n={table.n}, not n={n}")
    m_prime = math.sqrt(m * n * math.log(n)) if n > 1 else 0.0
    log_thr = math.log(m_prime) - n * math.log(2) if m_prime > 0 else -math.inf
    for k in range(1, n // 2 + 1):
        if table.log_values[k] <= log_thr:
            return GThreshold(n, m, m_prime, k, table.value(k), True)
    return GThreshold(n, m, m_prime, None, None, False)


def binom_gaussian_approx(n: int, i: float) -> float:
    """Central-binomial Gaussian approximation sqrt(2/pi) n^-1/2 2^n e^{-2i^2/n}.

    Approximates C(n, n/2 + i); only trustworthy for i = o(n^(2/3)), so this
    is a diagnostic, never asserted at fixed tolerance outside that range.
    """
    if abs(i) > n / 2:
        raise ValueError("offset i out of range")
    return math.sqrt(2 / math.pi) * 2.0**n / math.sqrt(n) * math.exp(-2 * i * i / n)


def gaussian_approx_ratio(n: int, i: int) -> float:
    """binom_gaussian_approx / exact C(n, n/2 + i), for even n."""
    if n % 2:
        raise ValueError("diagnostic defined for even n")
    exact = binom_exact(n, n // 2 + i)
    log_approx = 0.5 * math.log(2 / math.pi) + n * math.log(2) - 0.5 * math.log(n) - 2 * i * i / n
    return math.exp(log_approx - math.log(exact)) if exact else math.inf
