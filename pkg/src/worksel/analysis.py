"""Collusion-risk quantification.

Three ingredients: the largest threshold t a t-of-n secret-sharing setup
tolerates under the protocol constraints, the exact hypergeometric law for
how many marked participants land in a uniform sample, and the size of the
largest clique of workers pairwise within graph distance k, found by exact
branch and bound.  A run is flagged as collusion-possible when the clique
size reaches the strict threshold bound.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from . import clique
from .errors import InvalidInputError


@dataclass(frozen=True)
class ThresholdBounds:
    n: int
    t_max_strict: int
    t_max_relaxed: int

    def limit(self, relaxed=False):
        return self.t_max_relaxed if relaxed else self.t_max_strict


@dataclass(frozen=True)
class ConstraintCheck:
    c1: bool  # secrecy: fewer malicious workers than the threshold
    c2: bool  # liveness of reconstruction: enough honest workers
    c3: bool  # liveness of the checksum: the quadratic constraint

    def all_ok(self):
        return self.c1 and self.c2 and self.c3


def constraints_ok(n, t, m):
    """Evaluate the three adversary constraints for m malicious among n
    workers under threshold t."""
    if not (n >= t >= 1 and m >= 0):
        raise InvalidInputError("need n >= t >= 1 and m >= 0")
    return ConstraintCheck(c1=t > m, c2=n - t > m, c3=n - t * t > m)


def t_max(n):
    """Largest safe threshold t at the collusion limit m = t - 1.

    The strict bound satisfies all three constraints (equivalent to
    t^2 + t <= n) and is found by exact integer search; the relaxed bound
    drops the quadratic checksum constraint, leaving floor(n / 2).
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    t = (isqrt(4 * n + 1) - 1) // 2
    while t >= 1 and not constraints_ok(n, t, t - 1).all_ok():
        t -= 1
    while t + 1 <= n and constraints_ok(n, t + 1, t).all_ok():
        t += 1
    return ThresholdBounds(n=n, t_max_strict=max(t, 0), t_max_relaxed=n // 2)


def hypergeom_pmf(population, marked, sample, m):
    """Exact P(X = m) for the count of marked members in a uniform sample."""
    _check_hypergeom(population, marked, sample)
    if m < max(0, sample - (population - marked)) or m > min(marked, sample):
        return Fraction(0)
    return Fraction(comb(marked, m) * comb(population - marked, sample - m),
                    comb(population, sample))


def hypergeom(population, marked, sample, m=None):
    """Exact pmf at ``m``, or the full (m, pmf, cdf) table when m is None.

    Values are exact rationals; callers render them as decimals.
    """
    _check_hypergeom(population, marked, sample)
    if m is not None:
        return hypergeom_pmf(population, marked, sample, m)
    denom = comb(population, sample)
    table = []
    running = 0
    for k in range(sample + 1):
        if k <= marked and sample - k <= population - marked:
            num = comb(marked, k) * comb(population - marked, sample - k)
        else:
            num = 0
        running += num
        table.append((k, Fraction(num, denom), Fraction(running, denom)))
    return table


def _check_hypergeom(population, marked, sample):
    if not (0 <= marked <= population and 0 <= sample <= population):
        raise InvalidInputError(
            "need 0 <= marked <= population and 0 <= sample <= population")


def collusion_confidence_curve(population, marked, confidence):
    """For each sample size n, the least bound b such that at most b marked
    members appear in the sample with at least the given probability."""
    if not 0 < confidence < 1:
        raise InvalidInputError("confidence must be in (0, 1)")
    curve = []
    for n in range(population + 1):
        bound = None
        for k, _, cdf in hypergeom(population, marked, n):
            if cdf >= confidence:
                bound = k
                break
        curve.append((n, bound))
    return curve


@dataclass(frozen=True)
class CliqueReport:
    k: int
    size: int
    witness: tuple


def worker_power_masks(g, workers, k):
    """Bitset adjacency among workers: edge whenever base-graph distance <= k."""
    workers = sorted(set(workers))
    unknown = set(workers) - set(g.ids)
    if unknown:
        raise InvalidInputError("workers not in graph: %r" % sorted(unknown)[:5])
    if not workers:
        return [], []
    dm = g.distances(workers, limit=k)
    cols = [g.index[w] for w in workers]
    sub = dm.matrix[:, cols]
    close = (sub <= k)
    np.fill_diagonal(close, False)
    masks = []
    for row in close:
        m = 0
        for j in np.flatnonzero(row):
            m |= 1 << int(j)
        masks.append(m)
    return workers, masks


def distance_k_clique(g, workers, k, allow_expensive_k=False, witness=True):
    """Largest set of workers pairwise within distance k, found exactly.

    k beyond 3 is rejected unless explicitly allowed (the search cost grows
    steeply and adds little insight).  The witness, when requested, is the
    lexicographically least maximum clique by worker ID.
    """
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if k > 3 and not allow_expensive_k:
        raise InvalidInputError(
            "k > 3 is disproportionately expensive; pass allow_expensive_k")
    ids, masks = worker_power_masks(g, workers, k)
    if not ids:
        return CliqueReport(k=k, size=0, witness=())
    size, picked = clique.max_clique(masks, witness=witness)
    return CliqueReport(k=k, size=size,
                        witness=tuple(ids[i] for i in picked))


def worker_distance_stats(g, workers, partition=None):
    """Histogram of worker-pair distances: 1, 2, and >= 3 (or unreachable).

    With a partition the counts are split into intra- and inter-community
    pairs.
    """
    workers = sorted(set(workers))
    buckets = {"d1": 0, "d2": 0, "d3_plus": 0}
    if partition is not None:
        split = {"intra": dict(buckets), "inter": dict(buckets)}
        assignment = partition.assignment if hasattr(partition, "assignment") \
            else dict(partition)
    if len(workers) >= 2:
        dm = g.distances(workers)
        cols = [g.index[w] for w in workers]
        sub = dm.matrix[:, cols]
        for i in range(len(workers)):
            for j in range(i + 1, len(workers)):
                d = sub[i][j]
                key = "d1" if d <= 1 else ("d2" if d == 2 else "d3_plus")
                buckets[key] += 1
                if partition is not None:
                    same = assignment[workers[i]] == assignment[workers[j]]
                    split["intra" if same else "inter"][key] += 1
    if partition is not None:
        return {"total": buckets, "intra": split["intra"],
                "inter": split["inter"]}
    return {"total": buckets}


def upper_confidence_bound(samples, level):
    """Empirical one-sided upper bound: the ceil(level * N)-th order
    statistic, with no distributional assumption."""
    samples = sorted(samples)
    if not samples:
        raise InvalidInputError("need at least one sample")
    if not 0 < level < 1:
        raise InvalidInputError("level must be in (0, 1)")
    rank = math.ceil(level * len(samples))
    return samples[max(rank, 1) - 1]


def collusion_possible(clique_size, n_workers):
    """The run's verdict: the observed clique reaches the strict threshold."""
    return clique_size >= t_max(n_workers).t_max_strict
