"""Convergence diagnostics and Monte Carlo estimation.

The exact counts converge to density * n^s with an error of order
n^(s-1) * log(n)^d for a small exponent d; convergence_table reports the
raw and normalized errors over an n-grid so that trend is visible.  The
Monte Carlo estimator samples uniform tuples from a finite box and checks
the subset-gcd form of the constraint directly, which makes it an
independent statistical cross-check of the exact machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .arith import sieve_primes
from .coprime import DEFAULT_BUDGET, ConstraintVector, _prime_caps, count_tuples
from .density import (
    DEFAULT_PRECISION,
    DEFAULT_PRIME_LIMIT,
    error_log_exponent,
    limiting_density,
)

__all__ = [
    "CountReport",
    "MonteCarloEstimate",
    "convergence_table",
    "monte_carlo",
]

# largest s for which the per-chunk subset enumeration stays small
_VECTOR_MAX_S = 8

_CHUNK_ROWS = 1 << 16


@dataclass(frozen=True)
class CountReport:
    """Exact count at one n against the density prediction.

    normalized_error divides the absolute error by n^(s-1) * log(n)^d with
    d = error_log_exponent(s, k); a bounded, non-growing sequence of these
    over a geometric grid is what convergence at the expected rate looks
    like.  At n = 1 the normalization is degenerate: it is 1 when d = 0 and
    otherwise the report carries infinity for a nonzero error.
    """

    n: int
    count: int
    predicted: float
    abs_error: float
    normalized_error: float


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sampled estimate of the constraint density on [1, range_n]^s."""

    samples: int
    hits: int
    estimate: float
    std_error: float
    seed: int
    range_n: int
    streams: int


def convergence_table(
    s: int,
    constraint: ConstraintVector,
    n_grid: Sequence[int],
    *,
    prime_limit: int = DEFAULT_PRIME_LIMIT,
    precision: int = DEFAULT_PRECISION,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> list[CountReport]:
    """Exact counts over an n-grid, each compared to the density prediction."""
    grid = [int(n) for n in n_grid]
    if not grid:
        raise ValueError("n_grid must contain at least one value")
    for n in grid:
        if n < 1:
            raise ValueError(f"grid entries must be positive integers, got {n}")
    enclosure = limiting_density(s, constraint, prime_limit, precision)
    density = float(enclosure.point)
    d = error_log_exponent(s, constraint.k)
    out = []
    for n in grid:
        count = count_tuples(s, constraint, n, threads=threads, budget=budget)
        predicted = density * float(n) ** s
        abs_error = abs(count - predicted)
        denom = float(n) ** (s - 1) * math.log(n) ** d
        if denom == 0.0:
            normalized = 0.0 if abs_error == 0.0 else math.inf
        else:
            normalized = abs_error / denom
        out.append(
            CountReport(
                n=n,
                count=count,
                predicted=predicted,
                abs_error=abs_error,
                normalized_error=normalized,
            )
        )
    return out


def _hits_subset_gcd(rows: np.ndarray, k: int, moduli: tuple[int, ...]) -> int:
    """Vectorized evaluation straight from the subset-gcd definition."""
    s = rows.shape[1]
    ok = np.ones(len(rows), dtype=bool)
    if s >= k:
        for sub in combinations(range(s), k):
            g = np.gcd.reduce(rows[:, sub], axis=1)
            ok &= g == 1
    for i, u in enumerate(moduli, start=1):
        if u == 1 or i > s:
            continue
        for sub in combinations(range(s), i):
            g = np.gcd.reduce(rows[:, sub], axis=1)
            ok &= np.gcd(g, u) == 1
    return int(ok.sum())


def _spf_list(limit: int) -> list[int]:
    spf = np.zeros(limit + 1, dtype=np.int64)
    spf[1] = 1
    for p in sieve_primes(limit):
        seg = spf[p::p]
        seg[seg == 0] = p
    return spf.tolist()


def _hits_prime_caps(
    rows: list[list[int]], k: int, caps: dict[int, int], spf: list[int]
) -> int:
    """Per-prime multiplicity evaluation for wide tuples.

    Smallest-prime-factor division emits the primes of each entry in
    nondecreasing order, so consecutive deduplication yields distinct
    primes; caps are then checked across the whole row.
    """
    default = k - 1
    hits = 0
    for row in rows:
        seen: dict[int, int] = {}
        for v in row:
            last = 0
            while v > 1:
                p = spf[v]
                if p != last:
                    seen[p] = seen.get(p, 0) + 1
                    last = p
                v //= p
        if all(c <= caps.get(p, default) for p, c in seen.items()):
            hits += 1
    return hits


def monte_carlo(
    s: int,
    constraint: ConstraintVector,
    range_n: int,
    samples: int,
    seed: int = 0,
    streams: int = 1,
) -> MonteCarloEstimate:
    """Estimate the density of satisfying tuples in [1, range_n]^s by sampling.

    Fully deterministic for a given (seed, streams, samples): stream m uses
    the seeded generator jumped m times, and the per-stream sample counts
    split the total evenly with the remainder on the leading streams.
    """
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    if range_n < 1:
        raise ValueError(f"range_n must be a positive integer, got {range_n}")
    if samples < 1:
        raise ValueError(f"samples must be a positive integer, got {samples}")
    if streams < 1 or streams > samples:
        raise ValueError(f"streams must lie in [1, samples], got {streams}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    k = constraint.k
    vectorized = s <= _VECTOR_MAX_S
    caps = spf = None
    if not vectorized:
        caps = _prime_caps(k, constraint.moduli)
        spf = _spf_list(range_n)
    base, extra = divmod(samples, streams)
    hits = 0
    for m in range(streams):
        rng = np.random.Generator(np.random.PCG64(seed).jumped(m))
        remaining = base + (1 if m < extra else 0)
        while remaining:
            take = min(_CHUNK_ROWS, remaining)
            rows = rng.integers(1, range_n, size=(take, s), dtype=np.int64, endpoint=True)
            if vectorized:
                hits += _hits_subset_gcd(rows, k, constraint.moduli)
            else:
                hits += _hits_prime_caps(rows.tolist(), k, caps, spf)
            remaining -= take
    estimate = hits / samples
    std_error = math.sqrt(estimate * (1.0 - estimate) / samples)
    return MonteCarloEstimate(
        samples=samples,
        hits=hits,
        estimate=estimate,
        std_error=std_error,
        seed=seed,
        range_n=range_n,
        streams=streams,
    )
