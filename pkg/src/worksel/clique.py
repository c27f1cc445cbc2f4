"""Exact maximum clique search over bitset adjacency.

Branch and bound in the style of Tomita: candidates are greedily colored,
and a branch is cut whenever the current clique plus the candidate's color
bound cannot beat the incumbent.  Vertices live in arbitrary-precision
integer bitmasks, so set intersections cost one machine word per 64
vertices.

The reported witness is canonical: the lexicographically least maximum
clique (comparing sorted vertex tuples), obtained by a second forcing pass
that fixes the smallest feasible vertex one position at a time.  The
search is sequential and deterministic.
"""

import sys

_MIN_RECURSION = 20000


def _ensure_recursion_room():
    if sys.getrecursionlimit() < _MIN_RECURSION:
        sys.setrecursionlimit(_MIN_RECURSION)


def _color_sort(candidates, masks):
    """Greedy coloring of the candidate set.

    Returns vertices with their color numbers, colors non-decreasing; a
    clique inside ``candidates`` can use at most one vertex per color, so
    the color number bounds the best achievable extension.
    """
    order = []
    colors = []
    color = 0
    rest = candidates
    while rest:
        color += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            bit = 1 << v
            avail &= ~(bit | masks[v])
            rest &= ~bit
            order.append(v)
            colors.append(color)
    return order, colors


class _Search:
    def __init__(self, masks):
        self.masks = masks
        self.best = 0
        self.best_clique = []

    def expand(self, current, candidates):
        masks = self.masks
        order, colors = _color_sort(candidates, masks)
        for i in range(len(order) - 1, -1, -1):
            if len(current) + colors[i] <= self.best:
                return
            v = order[i]
            current.append(v)
            nxt = candidates & masks[v]
            if nxt:
                self.expand(current, nxt)
            elif len(current) > self.best:
                self.best = len(current)
                self.best_clique = list(current)
            current.pop()
            candidates &= ~(1 << v)

    def satisfy(self, depth, candidates, target):
        """True iff ``candidates`` contains a clique of size >= target - depth."""
        if depth >= target:
            return True
        masks = self.masks
        order, colors = _color_sort(candidates, masks)
        for i in range(len(order) - 1, -1, -1):
            if depth + colors[i] < target:
                return False
            v = order[i]
            if depth + 1 >= target:
                return True
            nxt = candidates & masks[v]
            if nxt and self.satisfy(depth + 1, nxt, target):
                return True
            candidates &= ~(1 << v)
        return False


def max_clique_size(masks, subset=None):
    """Size of the largest clique within ``subset`` (all vertices if None)."""
    _ensure_recursion_room()
    if subset is None:
        subset = (1 << len(masks)) - 1
    if subset == 0:
        return 0
    search = _Search(masks)
    search.expand([], subset)
    return search.best


def max_clique(masks, subset=None, witness=True):
    """Maximum clique size and, optionally, the canonical witness.

    The witness is the lexicographically least maximum clique as a sorted
    vertex-index tuple.  With ``witness=False`` only the size is computed,
    which skips the forcing pass.
    """
    _ensure_recursion_room()
    if subset is None:
        subset = (1 << len(masks)) - 1
    if subset == 0:
        return 0, ()
    search = _Search(masks)
    search.expand([], subset)
    omega = search.best
    if not witness:
        return omega, ()
    chosen = []
    candidates = subset
    need = omega
    while need > 0:
        rest = candidates
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            # remaining members must be above v and adjacent to it
            nxt = candidates & masks[v] & ~((1 << (v + 1)) - 1)
            if need == 1 or _Search(masks).satisfy(0, nxt, need - 1):
                chosen.append(v)
                candidates = nxt
                need -= 1
                break
        else:
            raise AssertionError("forcing pass lost the maximum clique")
    return omega, tuple(chosen)


def exists_clique(masks, subset, size):
    """Decision variant: does ``subset`` contain a clique of >= size vertices?"""
    _ensure_recursion_room()
    if size <= 0:
        return True
    if subset == 0:
        return False
    return _Search(masks).satisfy(0, subset, size)
