"""Extending a norm from Z^n to (1/m)Z^n on a finite window.

The chain Z^n = (1/m_0)Z^n < (1/m_1)Z^n < ... < (1/m)Z^n runs through the
prime factors of m in increasing order; each step is the same capped rho
evaluation as in the finite case, with basis g^j = e_j / m_i.  Only a finite
window of each level is tabulated, so every level is computed on a window
wide enough for the shifts the next level asks for.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .extend import min_matching_cost
from .groups import LatticeGroup, prime_factors

Point = tuple[Fraction, ...]

BASE_NORMS: dict[str, Callable[[Point], Fraction]] = {
    "abs-sum": lambda v: sum((abs(a) for a in v), Fraction(0)),
    "abs-max": lambda v: max((abs(a) for a in v), default=Fraction(0)),
}


class LatticeWindowError(ValueError):
    def __init__(self, message: str, required: Fraction):
        super().__init__(f"{message} (window must reach at least {required})")
        self.required = required


def _table_lookup(table: Mapping[Point, Fraction]) -> Callable[[Point], Fraction]:
    bound = max((abs(a) for pt in table for a in pt), default=Fraction(0))

    def look(v: Point) -> Fraction:
        try:
            return table[v]
        except KeyError:
            need = max(abs(a) for a in v)
            raise LatticeWindowError(
                f"base table has no value at {[str(a) for a in v]}", max(need, bound)
            ) from None

    return look


def lattice_extend(
    dim: int,
    denominator: int,
    base: str = "abs-sum",
    window=8,
    cap: int = 2,
    table: Optional[Mapping[Point, Fraction]] = None,
) -> dict[Point, Fraction]:
    """Values |x| for every x in (1/denominator)Z^dim with coordinates in [-window, window]."""
    L = LatticeGroup(dim, denominator)
    window = Fraction(window)
    if cap < 0:
        raise ValueError("cap must be >= 0")
    if base == "table":
        if table is None:
            raise ValueError("base 'table' needs a table of values on integer points")
        for pt in table:
            if any(a.denominator != 1 for a in pt) or len(pt) != dim:
                raise ValueError(f"table key {pt} is not an integer point of Z^{dim}")
        if table.get(L.zero, Fraction(0)) != 0:
            raise ValueError("table must vanish at the origin")
        level: Callable[[Point], Fraction] = _table_lookup(table)
    else:
        try:
            level = BASE_NORMS[base]
        except KeyError:
            raise ValueError(f"unknown base norm {base!r}; choose from {sorted(BASE_NORMS)} or 'table'") from None

    primes = prime_factors(denominator)
    dens = [1]
    for p in primes:
        dens.append(dens[-1] * p)
    # windows[i] = half-width needed at level i
    windows = [window] * (len(primes) + 1)
    for i in range(len(primes), 0, -1):
        p, m = primes[i - 1], dens[i]
        windows[i - 1] = windows[i] + Fraction(p - 1 + cap * p, m)

    values: Optional[dict[Point, Fraction]] = None
    for i, p in enumerate(primes, start=1):
        values = _lattice_step(dim, dens[i], p, cap, level, windows[i])
        level = _dict_lookup(values, windows[i])
    if values is None:
        values = {pt: level(pt) for pt in LatticeGroup(dim, 1).window(window)}
    return {pt: v for pt, v in values.items() if max((abs(a) for a in pt), default=0) <= window}


def _dict_lookup(values: Mapping[Point, Fraction], bound: Fraction) -> Callable[[Point], Fraction]:
    def look(v: Point) -> Fraction:
        try:
            return values[v]
        except KeyError:
            raise LatticeWindowError(
                f"intermediate level has no value at {[str(a) for a in v]}",
                max(abs(a) for a in v),
            ) from None

    return look


def _lattice_step(dim, m, p, cap, prev, bound) -> dict[Point, Fraction]:
    """rho(x, 0) on the window of (1/m)Z^dim, given the norm `prev` on (1/(m/p))Z^dim."""
    mu = dim
    # pairing g^a with g^b costs |p g^a - p g^b| = |(e_a - e_b) * p/m|
    step = Fraction(p, m)
    unit = [tuple(step if j == a else Fraction(0) for j in range(dim)) for a in range(dim)]
    unit.append((Fraction(0),) * dim)
    costs = [[prev(tuple(x - y for x, y in zip(unit[a], unit[b]))) for b in range(dim + 1)] for a in range(dim + 1)]
    matching: dict[tuple[int, ...], Fraction] = {}

    def net_cost(e):
        w = matching.get(e)
        if w is None:
            pos = [a for a, c in enumerate(e) for _ in range(max(c, 0))]
            neg = [a for a, c in enumerate(e) for _ in range(max(-c, 0))]
            w = Fraction(min_matching_cost(pos, neg, lambda a, b: costs[a][b], mu))
            matching[e] = w
        return w

    out = {}
    for x in LatticeGroup(dim, m).window(bound):
        b = [int(a * m) % p for a in x]
        best = None
        for e in itertools.product(*(range(bj - cap * p, bj + cap * p + 1, p) for bj in b)):
            u = tuple(a - Fraction(ej, m) for a, ej in zip(x, e))
            val = prev(u) + net_cost(e)
            if best is None or val < best:
                best = val
        out[x] = best
    return out
