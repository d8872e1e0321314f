"""Generated test corpora: all small abelian groups, their subgroups, random pseudonorms."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator

import numpy as np

from .groups import (
    Domain,
    FiniteAbelianGroup,
    Subgroup,
    make_group,
    prime_factors,
    scale_subgroup,
    subgroup_closure,
)
from .pseudonorm import Pseudonorm, common_scale, difference_table


def _partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def abelian_groups(order: int) -> list[FiniteAbelianGroup]:
    """One group per isomorphism class, written as a sum of prime-power cycles."""
    if order == 1:
        return [make_group([1])]
    exps: dict[int, int] = {}
    for p in prime_factors(order):
        exps[p] = exps.get(p, 0) + 1
    per_prime = [[[p**k for k in part] for part in _partitions(e)] for p, e in sorted(exps.items())]
    return [make_group(sum(choice, [])) for choice in itertools.product(*per_prime)]


def all_abelian_groups(max_order: int) -> list[FiniteAbelianGroup]:
    return [G for n in range(1, max_order + 1) for G in abelian_groups(n)]


def subgroups_containing(G: Domain, K: Subgroup) -> list[Subgroup]:
    """Every subgroup of G that contains K, smallest first."""
    A = G.group
    seen = {K.elements}
    out = [K]
    frontier = [K]
    while frontier:
        nxt = []
        for S in frontier:
            reps = []
            for g in G.elements:
                if g in S or any(A.sub(g, r) in S for r in reps):
                    continue
                reps.append(g)
                T = _join(A, S, g)
                if T.elements not in seen:
                    seen.add(T.elements)
                    out.append(T)
                    nxt.append(T)
        frontier = nxt
    out.sort(key=lambda S: (len(S.elements), S.elements))
    return out


def _join(A: FiniteAbelianGroup, S: Subgroup, g) -> Subgroup:
    span = set(S.elements)
    step = g
    while step not in S:
        span.update(A.add(s, step) for s in S.elements)
        step = A.add(step, g)
    return Subgroup(A, tuple(sorted(span)), S.generators + (g,))


def all_subgroups(G: FiniteAbelianGroup) -> list[Subgroup]:
    return subgroups_containing(G, subgroup_closure(G, []))


def prime_exponent_pairs(G: FiniteAbelianGroup) -> list[tuple[Subgroup, int]]:
    """(H, p) with pG inside H; H = G is listed once, with the least usable prime."""
    primes = sorted(set(prime_factors(G.order))) or [2]
    out = []
    whole_done = False
    for p in primes:
        for H in subgroups_containing(G, scale_subgroup(G, p)):
            if len(H.elements) == G.order:
                if whole_done:
                    continue
                whole_done = True
            out.append((H, p))
    return out


def random_pseudonorm(carrier: Domain, rng: random.Random, max_den: int = 4) -> Pseudonorm:
    """Largest pseudonorm below a random symmetric weight function.

    Weights are random small rationals (some zero, some deliberately large);
    |x| is the cheapest way of writing x as a sum of carrier elements, which
    is subadditive and symmetric by construction.
    """
    A = carrier.group
    elements = carrier.elements
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    sparse = rng.random() < 0.5
    w: list = [None] * n
    for i, x in enumerate(elements):
        if w[i] is not None:
            continue
        if x == A.zero:
            val = Fraction(0)
        elif rng.random() < 0.12:
            val = Fraction(0)
        elif sparse and rng.random() < 0.6:
            val = Fraction(rng.randint(12, 30), rng.randint(1, max_den))
        else:
            val = Fraction(rng.randint(1, 12), rng.randint(1, max_den))
        w[i] = val
        w[index[A.neg(x)]] = val
    L, ints = common_scale(w)
    W = np.array(ints, dtype=np.int64)
    # D[z] = min over y of D[z - y] + W[y], iterated to a fixed point
    diff = difference_table(carrier)
    D = W.copy()
    D[index[A.zero]] = 0
    while True:
        cand = (D[diff] + W[None, :]).min(axis=1)
        new = np.minimum(D, cand)
        if np.array_equal(new, D):
            break
        D = new
    return Pseudonorm(carrier, {x: Fraction(int(D[i]), L) for i, x in enumerate(elements)})
