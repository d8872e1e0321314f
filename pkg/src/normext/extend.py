"""Extending a pseudonorm from H to G when pG is contained in H.

Fix an F_p-basis g^0..g^{r-1} of G/H and put g^mu = 0.  A representation of
x is a pair (u, c) with u in H and x = u + sum_a c_a g^a.  For two elements

    rho(x, y) = min |u - v|_H + (min-cost perfect matching between the
                multisets c and d, padded with mu, where pairing a with b
                costs |p g^a - p g^b|_H)

over representations (u, c) of x and (v, d) of y, and |x|_G = rho(x, 0).
Counts are searched in the box c_a in {b_a, b_a + p, ..., b_a + cap*p}
where b = coordinates(x).

Evaluation
----------
The pair costs form a pseudometric on the points p g^a, so a matching may
cancel equal entries of c and d; the value of a pair (c, d) depends only on
e = c - d.  Reading each matched pair (a, b) as a step g^a - g^b of cost
|p g^a - p g^b|_H turns any pair into a walk from 0 to s(e) = sum e_a g^a in
G, and the cheapest such walk is a lower bound for every box.  The evaluator
runs one shortest-path computation on G, and when the net count vector of
the optimal walk lies inside the box the bound is attained; otherwise it
enumerates the box and runs the Hungarian algorithm on each candidate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Optional, Sequence, TypeVar

import numpy as np

from .groups import (
    Domain,
    Element,
    FiniteAbelianGroup,
    GroupError,
    QuotientStructure,
    Subgroup,
    coordinates,
    divide_subgroup,
    is_prime,
    is_subset,
    prime_factors,
    quotient,
)
from .pseudonorm import Pseudonorm, common_scale, validate

T = TypeVar("T")


class ExtensionError(ValueError):
    pass


# -- assignment ---------------------------------------------------------------


def hungarian(cost: Sequence[Sequence]) -> tuple[tuple[int, ...], object]:
    """Minimum-cost perfect matching of a square matrix.

    O(n^3) shortest augmenting paths with potentials.  Only +, - and < are
    used, so int and Fraction entries give exact results.  Returns the
    column assigned to each row and the total cost.
    """
    n = len(cost)
    if n == 0:
        return (), 0
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row matched to column j (1-based, 0 = free)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            row = cost[i0 - 1]
            delta = None
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    assignment = [0] * n
    for j in range(1, n + 1):
        assignment[match[j] - 1] = j - 1
    total = sum((cost[i][assignment[i]] for i in range(n)), 0)
    return tuple(assignment), total


def min_matching_cost(left: Sequence[T], right: Sequence[T], cost: Callable[[T, T], object], pad: T):
    """Cheapest pairing of two multisets after padding the shorter with `pad`."""
    size = max(len(left), len(right))
    left = list(left) + [pad] * (size - len(left))
    right = list(right) + [pad] * (size - len(right))
    _, total = hungarian([[cost(a, b) for b in right] for a in left])
    return total


# -- problem description ------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    """x = u + sum_a counts[a] * g^a; the mu entries are implicit padding."""

    u: Element
    counts: tuple[int, ...]

    def multiset(self) -> list[int]:
        return [a for a, c in enumerate(self.counts) for _ in range(c)]


@dataclass(frozen=True, eq=False)
class ExtensionProblem:
    domain: Domain
    sub: Subgroup
    p: int
    base: Pseudonorm
    cap: int = 2

    def __post_init__(self):
        if self.cap < 0:
            raise ExtensionError("cap must be >= 0")
        if not is_prime(self.p):
            raise ExtensionError(f"{self.p} is not prime")
        try:
            Q = self.quotient
        except GroupError as exc:
            raise ExtensionError(str(exc)) from None
        if Q.exponent not in (1, self.p):
            A = self.domain.group
            x = next(x for x in self.domain.elements if A.mul(self.p, x) not in self.sub)
            raise ExtensionError(f"pG is not contained in H: {self.p}*{list(x)} is not in H")
        if set(self.base.carrier.elements) != set(self.sub.elements):
            raise ExtensionError("the base pseudonorm must be defined exactly on H")
        report = validate(self.base, max_violations=1)
        if not report:
            raise ExtensionError("base is not a pseudonorm: " + "; ".join(report.lines(self.base)))

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.domain.group

    @cached_property
    def quotient(self) -> QuotientStructure:
        return quotient(self.domain, self.sub, self.p)

    @property
    def rank(self) -> int:
        return len(self.quotient.basis)

    @property
    def mu(self) -> int:
        return self.quotient.mu_index

    def g(self, alpha: int) -> Element:
        return self.quotient.g(alpha)

    def with_cap(self, cap: int) -> "ExtensionProblem":
        return ExtensionProblem(self.domain, self.sub, self.p, self.base, cap)

    @cached_property
    def _pair_costs(self) -> tuple[tuple[Fraction, ...], ...]:
        A, p = self.group, self.p
        pts = [A.mul(p, self.g(a)) for a in range(self.rank + 1)]
        return tuple(tuple(self.base(A.sub(x, y)) for y in pts) for x in pts)

    @cached_property
    def _matching_cache(self) -> dict:
        return {}

    @cached_property
    def _paths(self) -> "_ShortestPaths":
        return _ShortestPaths(self)


def enumerate_representations(x: Element, P: ExtensionProblem) -> list[Representation]:
    """Representations (u, c) of x with c_a = b_a + t_a * p, 0 <= t_a <= cap."""
    A, Q = P.group, P.quotient
    b = coordinates(x, Q)
    out = []
    for t in itertools.product(range(P.cap + 1), repeat=P.rank):
        c = tuple(ba + P.p * ta for ba, ta in zip(b, t))
        u = A.sub(x, A.combine(c, Q.basis))
        assert u in P.sub, "representation left H"
        out.append(Representation(u, c))
    return out


def pair_cost(alpha: int, beta: int, P: ExtensionProblem) -> Fraction:
    """|p g^alpha - p g^beta|_H, with index P.mu standing for g^mu = 0."""
    return P._pair_costs[alpha][beta]


def _net_matching_cost(P: ExtensionProblem, e: tuple[int, ...]) -> Fraction:
    """Matching cost of the cancelled multisets (e+, e-)."""
    cache = P._matching_cache
    w = cache.get(e)
    if w is None:
        pos = [a for a, c in enumerate(e) for _ in range(max(c, 0))]
        neg = [a for a, c in enumerate(e) for _ in range(max(-c, 0))]
        costs = P._pair_costs
        w = Fraction(min_matching_cost(pos, neg, lambda a, b: costs[a][b], P.mu))
        cache[e] = w
    return w


def _box(P: ExtensionProblem, x: Element, y: Element) -> list[range]:
    """Admissible values of each e_a = c_a - d_a."""
    bx = coordinates(x, P.quotient)
    by = coordinates(y, P.quotient)
    p, cap = P.p, P.cap
    return [range(a - b - cap * p, a - b + cap * p + 1, p) for a, b in zip(bx, by)]


def _enumerated_rho(P: ExtensionProblem, x: Element, y: Element, stop_at=None):
    """Exhaustive search of the box; returns (value, e)."""
    A, Q = P.group, P.quotient
    t = A.sub(x, y)
    best, arg = None, None
    for e in itertools.product(*_box(P, x, y)):
        diff = A.sub(t, A.combine(e, Q.basis))  # u - v
        assert diff in P.sub
        val = P.base(diff) + _net_matching_cost(P, e)
        if best is None or val < best:
            best, arg = val, e
            if stop_at is not None and best == stop_at:
                break
    return best, arg


class _StepTables:
    """Norm-independent part of the walk graph for one quotient."""

    def __init__(self, Q: QuotientStructure):
        tb = Q.tables
        A, p, r = Q.group, Q.prime, len(Q.basis)
        n = len(tb.elements)
        sub_index = {h: i for i, h in enumerate(tb.sub_elements)}
        self.steps = [(a, b) for a in range(r + 1) for b in range(r + 1) if a != b]
        self.vec = np.zeros((len(self.steps), r), dtype=np.int64)
        self.pred = np.empty((len(self.steps), n), dtype=np.int64)
        self.cost_at = np.empty(len(self.steps), dtype=np.int64)  # index of p*step in H
        for s, (a, b) in enumerate(self.steps):
            if a < r:
                self.vec[s, a] += 1
            if b < r:
                self.vec[s, b] -= 1
            step = A.sub(Q.g(a), Q.g(b))
            self.pred[s] = [tb.index[A.sub(x, step)] for x in tb.elements]
            self.cost_at[s] = sub_index[A.mul(p, step)]
        self.zero = tb.index[A.zero]


@lru_cache(maxsize=1024)
def _step_tables(Q: QuotientStructure) -> _StepTables:
    return _StepTables(Q)


class _ShortestPaths:
    """Cheapest walks from 0 in the Cayley graph of the domain.

    Steps are g^a - g^b (a != b in 0..mu) with cost |p g^a - p g^b|_H.  Costs
    are scaled to integers by the common denominator L of the base norm and
    ties are broken towards fewer steps, so the net count vector of a walk
    stays small.
    """

    def __init__(self, P: ExtensionProblem):
        Q = P.quotient
        tb = Q.tables
        st = _step_tables(Q)
        r = P.rank
        n = len(tb.elements)
        self.tables = tb

        if P.base.carrier.elements == tb.sub_elements:
            self.L, sub_vals = P.base.scaled
        else:
            self.L, ints = common_scale([P.base(h) for h in tb.sub_elements])
            sub_vals = np.array(ints, dtype=np.int64)
        self.M = M = n + 1  # hop counts stay below M
        top = int(sub_vals.max()) if len(sub_vals) else 0
        if (top + 1) * M * (n + 1) * 4 < 2**60:
            sub_vals = sub_vals.astype(np.int64)
            big = 2**61  # unreachable
        else:
            sub_vals = np.array([int(v) for v in sub_vals], dtype=object)
            big = (top + 1) * M * (n + 1) * 2**8
        self.sub_key = sub_vals * M
        key = sub_vals[st.cost_at] * M + 1

        D = np.full(n, big, dtype=sub_vals.dtype)
        D[st.zero] = 0
        parent = np.full(n, -1, dtype=np.int64)
        if len(st.steps):
            cols = np.arange(n)
            while True:
                cand = D[st.pred] + key[:, None]
                arg = np.argmin(cand, axis=0)
                best = cand[arg, cols]
                better = best < D
                if not better.any():
                    break
                D = np.where(better, best, D)
                parent = np.where(better, arg, parent)
        self.D = D
        # net count vector along each optimal walk, filled in hop order
        E = np.zeros((n, r), dtype=np.int64)
        order = np.argsort(D % M, kind="stable")
        for i in order:
            s = parent[i]
            if s >= 0:
                E[i] = E[st.pred[s, i]] + st.vec[s]
        self.E = E

    def lower_bounds(self, targets: np.ndarray):
        """For each target index t: scaled bound, minimising walk end z."""
        tb = self.tables
        mins = tb.minus[targets]  # candidates z = t - h
        total = self.D[mins] + self.sub_key[None, :]
        arg = np.argmin(total, axis=1)
        best = total[np.arange(len(targets)), arg]
        z = mins[np.arange(len(targets)), arg]
        return best // self.M, z


def rho(x: Element, y: Element, P: ExtensionProblem, *, prune: bool = True) -> Fraction:
    """Capped infimum of |u - v|_H + matching cost over representations of x and y.

    With prune=False every box point is evaluated with the Hungarian
    algorithm; otherwise the shortest-walk bound is used to stop early.
    """
    x, y = P.group.check(x), P.group.check(y)
    if x not in P.domain or y not in P.domain:
        raise ExtensionError("rho is only defined on G")
    if not prune:
        return _enumerated_rho(P, x, y)[0]
    return _pruned_rho(P, x, y)[0]


def _pruned_rho(P: ExtensionProblem, x: Element, y: Element):
    A = P.group
    sp = P._paths
    t = sp.tables.index[A.sub(x, y)]
    lb, z = sp.lower_bounds(np.array([t]))
    lb = Fraction(int(lb[0]), sp.L)
    e = tuple(int(a) for a in sp.E[z[0]])
    box = _box(P, x, y)
    if all(ea in rng for ea, rng in zip(e, box)):
        return lb, e
    return _enumerated_rho(P, x, y, stop_at=lb)


# -- the extension step ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtendedNorm:
    norm: Pseudonorm
    problem: ExtensionProblem
    witness_counts: np.ndarray = field(repr=False)  # net count vector e per domain element
    enumerated: int = 0  # elements that needed the full box search

    def witness(self, x: Element) -> tuple[int, ...]:
        i = self.problem.quotient.tables.index[x]
        return tuple(int(a) for a in self.witness_counts[i])

    def certificate(self, x: Element) -> tuple[Representation, Representation]:
        """Minimising representations of x and of 0."""
        P = self.problem
        A, Q, p = P.group, P.quotient, P.p
        e = self.witness(x)
        b = coordinates(x, Q)
        j = [(ea - ba) // p for ea, ba in zip(e, b)]
        c = tuple(ba + p * max(ja, 0) for ba, ja in zip(b, j))
        d = tuple(p * max(-ja, 0) for ja in j)
        u = A.sub(x, A.combine(c, Q.basis))
        v = A.neg(A.combine(d, Q.basis))
        return Representation(u, c), Representation(v, d)

    def certificate_value(self, x: Element) -> Fraction:
        """Re-evaluate the certificate with a full Hungarian matching."""
        P = self.problem
        rx, r0 = self.certificate(x)
        costs = P._pair_costs
        w = min_matching_cost(rx.multiset(), r0.multiset(), lambda a, b: costs[a][b], P.mu)
        return P.base(P.group.sub(rx.u, r0.u)) + w


def prime_step_extend(P: ExtensionProblem, *, check: bool = True) -> ExtendedNorm:
    """|x|_G = rho(x, 0) for every x in G.

    With check=True (the default) the restriction to H and the pseudonorm
    axioms are verified before returning.
    """
    sp = P._paths
    tb = sp.tables
    n = len(tb.elements)
    lbs, zs = sp.lower_bounds(np.arange(n))
    E = sp.E[zs]
    inbox = (np.abs(E - tb.coords) <= P.cap * P.p).all(axis=1)
    scaled = lbs.copy()
    enumerated = 0
    zero = P.group.zero
    for i in np.flatnonzero(~inbox):
        x = tb.elements[i]
        val, e = _enumerated_rho(P, x, zero, stop_at=Fraction(int(lbs[i]), sp.L))
        assert (val * sp.L).denominator == 1
        scaled[i] = int(val * sp.L)
        E[i] = e
        enumerated += 1
    if check:
        base = sp.sub_key // sp.M
        bad = np.flatnonzero(scaled[tb.sub_pos] != base)
        if len(bad):
            h = tb.sub_elements[bad[0]]
            raise ExtensionError(f"extension changed the value at {list(h)}")
    norm = Pseudonorm.from_scaled(P.domain, sp.L, scaled)
    if check:
        report = validate(norm, max_violations=1)
        if not report:
            raise ExtensionError("extension is not a pseudonorm: " + "; ".join(report.lines(norm)))
    return ExtendedNorm(norm, P, E, enumerated)


# -- chains of prime steps --------------------------------------------------------


@dataclass(frozen=True)
class ChainPlan:
    """H = H_0 < H_1 < ... < H_n = G with p_{i+1} H_{i+1} inside H_i."""

    start: Subgroup
    steps: tuple[tuple[int, Subgroup], ...]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.steps]


def build_chain(G: Domain, H: Subgroup) -> ChainPlan:
    """Primes in increasing order, each repeated while (1/p)H_i still grows."""
    if not is_subset(H, G):
        raise ExtensionError("H is not contained in G")
    index = len(G.elements) // len(H.elements)
    current = H
    steps = []
    for p in sorted(set(prime_factors(index))):
        while True:
            nxt = divide_subgroup(G, p, current)
            if len(nxt.elements) == len(current.elements):
                break
            steps.append((p, nxt))
            current = nxt
    if len(current.elements) != len(G.elements):
        raise AssertionError("chain did not reach G")
    return ChainPlan(H, tuple(steps))


def chain_steps(G: Domain, H: Subgroup, base: Pseudonorm, cap: int = 2) -> Iterator[tuple[int, Subgroup, ExtendedNorm]]:
    norm = base
    current = H
    for p, nxt in build_chain(G, H).steps:
        ext = prime_step_extend(ExtensionProblem(nxt, current, p, norm.recarry(current), cap))
        yield p, nxt, ext
        norm, current = ext.norm, nxt


def chain_extend(G: Domain, H: Subgroup, base: Pseudonorm, cap: int = 2) -> Pseudonorm:
    """Extend base from H to all of G through the prime chain."""
    norm = base
    for _, _, ext in chain_steps(G, H, base, cap):
        norm = ext.norm
    return norm.recarry(G)
