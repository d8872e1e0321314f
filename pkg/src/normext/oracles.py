"""Slow, independent reference computations used to cross-check the fast paths.

Nothing here shares evaluation code with extend.py or transversal.py: the
brute-force rho walks every representation pair in the box and every pairing
of the padded multisets, with no cancellation and no shortest-path bound.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Sequence

from .extend import ExtensionProblem
from .groups import Element


def box_representations(x: Element, P: ExtensionProblem) -> list[tuple[Element, tuple[int, ...]]]:
    """All (u, c) with 0 <= c_a < (cap+1)p and u = x - sum c_a g^a in H.

    Found by scanning the whole count box and testing membership, without
    using quotient coordinates.
    """
    A, p = P.group, P.p
    basis = [P.g(a) for a in range(P.rank)]
    out = []
    for c in itertools.product(range((P.cap + 1) * p), repeat=P.rank):
        u = A.sub(x, A.combine(c, basis))
        if u in P.sub:
            out.append((u, c))
    return out


def brute_force_rho(x: Element, y: Element, P: ExtensionProblem) -> Fraction:
    A, p, r = P.group, P.p, P.rank
    base = P.base
    points = [A.mul(p, P.g(a)) for a in range(r)] + [A.zero]
    cost = [[base(A.sub(s, t)) for t in points] for s in points]

    @lru_cache(maxsize=None)
    def pairings(X: tuple[int, ...], Y: tuple[int, ...]) -> Fraction:
        # the first remaining left item tries every right item: this visits
        # every pairing (up to swapping equal items)
        a = next((i for i, n in enumerate(X) if n), None)
        if a is None:
            return Fraction(0)
        Xa = X[:a] + (X[a] - 1,) + X[a + 1:]
        best = None
        for b, n in enumerate(Y):
            if n:
                val = cost[a][b] + pairings(Xa, Y[:b] + (n - 1,) + Y[b + 1:])
                if best is None or val < best:
                    best = val
        return best

    best = None
    reps_y = box_representations(y, P)
    for u, c in box_representations(x, P):
        for v, d in reps_y:
            N = max(sum(c), sum(d))
            X = tuple(c) + (N - sum(c),)
            Y = tuple(d) + (N - sum(d),)
            val = base(A.sub(u, v)) + pairings(X, Y)
            if best is None or val < best:
                best = val
    return best


def brute_force_assignment(cost: Sequence[Sequence]) -> Fraction:
    """Minimum over all n! permutations."""
    n = len(cost)
    return min(sum((cost[i][s[i]] for i in range(n)), Fraction(0)) for s in itertools.permutations(range(n)))


def transversal_exists(sets: Sequence[Sequence[Hashable]]) -> bool:
    """Is there I inside the union meeting every set in exactly one point?"""
    ground = sorted({x for s in sets for x in s}, key=repr)
    masks = []
    pos = {x: i for i, x in enumerate(ground)}
    for s in sets:
        m = 0
        for x in s:
            m |= 1 << pos[x]
        masks.append(m)
    for I in range(1 << len(ground)):
        if all(bin(I & m).count("1") == 1 for m in masks):
            return True
    return False
