"""Failure probabilities for repetition codes, concatenation, and
correlated pair noise.

Analytic values are exact polynomial evaluations; the sample_* helpers are
the matching Monte-Carlo estimators used to cross-check them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from ..core import as_generator

P_THRESHOLD = 1.0 / 3.0  # concatenation threshold for majority-of-3


def pfail_repetition(k: int, eps):
    """Failure probability of k-copy majority voting.

    P_fail = sum_{j=(k+1)/2}^{k} C(k,j) eps^j (1-eps)^(k-j); k must be odd
    so the vote cannot tie.
    """
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be odd and positive: {k}")
    e = np.asarray(eps, dtype=float)
    total = np.zeros_like(e)
    for j in range((k + 1) // 2, k + 1):
        total = total + comb(k, j) * e**j * (1.0 - e) ** (k - j)
    return float(total) if np.isscalar(eps) else total


@dataclass(frozen=True)
class ConcatenatedFailure:
    levels: int
    exact: float        # recursion p -> 3p^2 - 2p^3 applied `levels` times
    approximant: float  # p_th * (p / p_th)^(2^levels)


def pfail_concatenated(levels: int, eps: float) -> ConcatenatedFailure:
    """Recursive failure rate of `levels`-fold concatenated majority-of-3."""
    if levels < 0:
        raise ValueError(f"levels must be >= 0: {levels}")
    p = float(eps)
    for _ in range(levels):
        p = 3.0 * p * p - 2.0 * p**3
    approx = P_THRESHOLD * (eps / P_THRESHOLD) ** (2**levels)
    return ConcatenatedFailure(levels=levels, exact=p, approximant=float(approx))


@dataclass(frozen=True)
class CorrelatedLeading:
    n: int
    order: int        # smallest number of pair events that defeats the vote
    count: int        # how many such minimal event sets exist
    leading: float    # count * p^order
    truncated: float  # failure probability summed up to the order cap


def correlated_pfail(n: int, p: float, max_order: int = 3) -> CorrelatedLeading:
    """Majority-vote failure under two-qubit XX pair events.

    Every unordered qubit pair fires independently with probability p and
    flips both members; paired flips on the same qubit cancel (X^2 = 1).
    Failure sets are enumerated exactly up to max_order simultaneous pair
    events, so the leading coefficient is combinatorial, not sampled.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3: {n}")
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    masks = [
        (1 << i) | (1 << j) for i, j in itertools.combinations(range(n), 2)
    ]
    half = (n + 1) // 2
    n_pairs = len(masks)
    order = None
    count = 0
    truncated = 0.0
    for size in range(1, max_order + 1):
        failing = 0
        for subset in itertools.combinations(masks, size):
            net = 0
            for m in subset:
                net ^= m
            if net.bit_count() >= half:
                failing += 1
        if failing and order is None:
            order = size
            count = failing
        truncated += failing * p**size * (1.0 - p) ** (n_pairs - size)
    if order is None:
        raise ValueError(
            f"no failing configuration up to order {max_order} for n={n}"
        )
    return CorrelatedLeading(
        n=n,
        order=order,
        count=count,
        leading=count * p**order,
        truncated=truncated,
    )


def sample_repetition_failure(k: int, eps: float, trials: int, rng) -> float:
    """Monte-Carlo companion of pfail_repetition."""
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be odd and positive: {k}")
    if trials < 1:
        raise ValueError("trials must be positive")
    gen = as_generator(rng)
    flips = gen.random((trials, k)) < eps
    return float(np.mean(flips.sum(axis=1) >= (k + 1) // 2))


def sample_concatenated_failure(levels: int, eps: float, trials: int, rng) -> float:
    """Monte-Carlo companion of pfail_concatenated (exact recursion arm).

    Simulates 3^levels physical bits per trial and votes upward level by
    level.
    """
    if levels < 0:
        raise ValueError(f"levels must be >= 0: {levels}")
    if trials < 1:
        raise ValueError("trials must be positive")
    gen = as_generator(rng)
    bits = (gen.random((trials, 3**levels)) < eps).astype(np.int8)
    while bits.shape[1] > 1:
        bits = (bits.reshape(trials, -1, 3).sum(axis=2) >= 2).astype(np.int8)
    return float(np.mean(bits[:, 0]))
