"""Ranking functions that map ordered sublists of a roster to natural numbers.

Three numbering methods assign a unique rank to a sublist V of a sorted
roster P: the permutation number (order of V's own elements), the
combination number (which elements of P appear in V), and the arrangement
number (a single rank over all ordered sublists of P of any length).  All
arithmetic is exact arbitrary-precision integer math, so the ranks stay
valid for rosters of 10,000+ elements where the output spaces are
astronomically large sums of factorials.
"""

from functools import lru_cache
from math import comb, factorial

from .errors import InvalidInputError

_fact = lru_cache(maxsize=None)(factorial)


def _check_roster(p):
    for a, b in zip(p, p[1:]):
        if not a < b:
            raise InvalidInputError(
                "roster must be strictly ascending: %r !< %r" % (a, b)
            )


def _check_sublist(v, p):
    if len(set(v)) != len(v):
        raise InvalidInputError("sublist contains duplicate elements")
    pset = set(p)
    for x in v:
        if x not in pset:
            raise InvalidInputError("element %r not in roster" % (x,))


def permutation_number(v):
    """Rank the ordering of ``v``'s elements; result lies in [0, |v|!).

    For each position i, count earlier elements smaller than element i and
    weight the count by i!.  Ascending input gives |v|! - 1, descending
    gives 0, and the map is a bijection over all orderings of a fixed
    element set.
    """
    v = list(v)
    if len(set(v)) != len(v):
        raise InvalidInputError("sublist contains duplicate elements")
    rank = 0
    for i in range(1, len(v)):
        smaller = sum(1 for k in range(i) if v[k] < v[i])
        rank += _fact(i) * smaller
    return rank


def combination_number(v, p):
    """Rank the element set of ``v`` among all |v|-subsets of roster ``p``.

    ``v`` is canonicalized to ascending order first, so the positions
    j(0) < j(1) < ... of its elements in ``p`` are strictly increasing.
    Result lies in [0, C(|p|, |v|)) and enumerates subsets in ascending
    lexicographic order of their sorted element tuples.
    """
    p = list(p)
    _check_roster(p)
    v = sorted(set(v))
    _check_sublist(v, p)
    if not v:
        return 0
    pos = {x: k for k, x in enumerate(p)}
    j = [pos[x] for x in v]
    P, V = len(p), len(v)
    rank = sum(comb(P - j[0] + k, V - 1) for k in range(j[0]))
    for i in range(1, V):
        rank += sum(
            comb(P - j[i] + k, V - i - 1) for k in range(j[i] - j[i - 1] - 1)
        )
    return rank


def arrangement_number(v, p):
    """Rank ``v`` among all ordered sublists of ``p``, of any length.

    Ranks are grouped by sublist length: all length-L sublists precede all
    length-(L+1) ones.  Within a length class the rank combines the
    combination number (which elements) scaled by |v|! with the permutation
    number (their order).  The empty sublist ranks 0; result lies in
    [0, sum of A(|p|, k) for k = 0..|p|).
    """
    p = list(p)
    v = list(v)
    _check_roster(p)
    _check_sublist(v, p)
    offset = sum(_arrangements(len(p), i) for i in range(len(v)))
    return offset + combination_number(v, p) * _fact(len(v)) + permutation_number(v)


def _arrangements(n, k):
    # A(n, k) = n! / (n-k)!
    return _fact(n) // _fact(n - k)


def permutation_space(v_size):
    """Number of orderings of ``v_size`` elements: v_size!."""
    if v_size < 0:
        raise InvalidInputError("v_size must be >= 0")
    return _fact(v_size)


def combination_space(p_size, v_size):
    """Number of v_size-subsets of a p_size roster: C(p_size, v_size)."""
    if not 0 <= v_size <= p_size:
        raise InvalidInputError("need 0 <= v_size <= p_size")
    return comb(p_size, v_size)


def arrangement_space(p_size):
    """Number of ordered sublists of a p_size roster, all lengths included."""
    if p_size < 0:
        raise InvalidInputError("p_size must be >= 0")
    total = 0
    term = 1
    for k in range(p_size + 1):
        total += term
        term *= p_size - k
    return total


def output_space_size(p_size=None, v_size=None, method="arrangement"):
    """Size of a numbering method's output space.

    With ``method='arrangement'`` (the default) only ``p_size`` is needed;
    'permutation' needs ``v_size``; 'combination' needs both.
    """
    if method == "arrangement":
        if p_size is None:
            raise InvalidInputError("arrangement space needs p_size")
        return arrangement_space(p_size)
    if method == "permutation":
        if v_size is None:
            raise InvalidInputError("permutation space needs v_size")
        return permutation_space(v_size)
    if method == "combination":
        if p_size is None or v_size is None:
            raise InvalidInputError("combination space needs p_size and v_size")
        return combination_space(p_size, v_size)
    raise InvalidInputError("unknown method %r" % (method,))
