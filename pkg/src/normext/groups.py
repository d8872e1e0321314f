"""Finite abelian groups Z_{n_1} + ... + Z_{n_r}, their subgroups and quotients.

Elements are tuples of residues.  Everything is stored extensionally, which is
fine at desk scale (a few thousand elements at most).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np

Element = tuple[int, ...]


class GroupError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Prime factors of n with multiplicity, ascending."""
    out = []
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.append(f)
            n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FiniteAbelianGroup:
    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise GroupError(f"cyclic factor orders must be >= 1, got {list(orders)}")
        object.__setattr__(self, "orders", orders)

    @property
    def group(self) -> "FiniteAbelianGroup":
        return self

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def zero(self) -> Element:
        return (0,) * len(self.orders)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.orders)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x: Element) -> int:
        return self._index[x]

    def __contains__(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.orders)
            and all(isinstance(a, int) and 0 <= a < n for a, n in zip(x, self.orders))
        )

    def __len__(self) -> int:
        return self.order

    def check(self, x: Sequence[int]) -> Element:
        x = tuple(x)
        if x not in self:
            raise GroupError(f"{list(x)} is not an element of Z{list(self.orders)}")
        return x

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple(-a % n for a, n in zip(x, self.orders))

    def mul(self, k: int, x: Element) -> Element:
        return tuple(k * a % n for a, n in zip(x, self.orders))

    def combine(self, coeffs: Iterable[int], gens: Sequence[Element]) -> Element:
        """sum_i coeffs[i] * gens[i]"""
        acc = [0] * len(self.orders)
        for c, g in zip(coeffs, gens):
            if c:
                for j, a in enumerate(g):
                    acc[j] += c * a
        return tuple(a % n for a, n in zip(acc, self.orders))

    def element_order(self, x: Element) -> int:
        return math.lcm(1, *(n // math.gcd(a, n) for a, n in zip(x, self.orders)))

    @cached_property
    def exponent(self) -> int:
        return math.lcm(1, *self.orders)

    def __repr__(self):
        if not self.orders:
            return "Z[]"
        return " + ".join(f"Z{n}" for n in self.orders)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteAbelianGroup
    elements: tuple[Element, ...]
    generators: tuple[Element, ...] = field(default=(), compare=False)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.parent

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._members

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x: Element) -> int:
        return self._index[x]

    def is_closed(self) -> bool:
        """Exhaustive subgroup test: identity, sums and negatives stay inside."""
        G = self.parent
        if G.zero not in self:
            return False
        for a in self.elements:
            if G.neg(a) not in self:
                return False
            for b in self.elements:
                if G.add(a, b) not in self:
                    return False
        return True

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent!r}, gens={[list(g) for g in self.generators]})"


Domain = Union[FiniteAbelianGroup, Subgroup]


def make_group(orders: Sequence[int]) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(orders))


def _as_subgroup(X: Domain) -> Subgroup:
    if isinstance(X, Subgroup):
        return X
    return Subgroup(X, X.elements, tuple(tuple(int(i == j) for j in range(X.rank)) for i in range(X.rank)))


def subgroup_closure(G: Domain, gens: Iterable[Sequence[int]]) -> Subgroup:
    """Smallest subgroup of G containing gens."""
    A = G.group
    gens = tuple(A.check(g) for g in gens)
    if isinstance(G, Subgroup):
        for g in gens:
            if g not in G:
                raise GroupError(f"{list(g)} is not in the given subgroup")
    span = {A.zero}
    for g in gens:
        if g in span:
            continue
        # span + <g> as the union of the translates span + k*g
        new = set(span)
        step = g
        while step not in span:
            new.update(A.add(s, step) for s in span)
            step = A.add(step, g)
        span = new
    return Subgroup(A, tuple(sorted(span)), gens)


def scale_subgroup(G: Domain, n: int) -> Subgroup:
    """nG = {n*x : x in G}."""
    if n < 1:
        raise GroupError("scale factor must be >= 1")
    A = G.group
    return Subgroup(A, tuple(sorted({A.mul(n, x) for x in G.elements})), ())


def divide_subgroup(G: Domain, n: int, H: Domain) -> Subgroup:
    """(1/n)H inside G, i.e. {x in G : n*x in H}."""
    A = G.group
    members = _as_subgroup(H)
    return Subgroup(A, tuple(x for x in G.elements if A.mul(n, x) in members), ())


def is_subset(H: Domain, G: Domain) -> bool:
    return all(x in G for x in H.elements)


@dataclass(frozen=True, eq=False)
class QuotientStructure:
    """Cosets of `sub` in `domain`.

    When the quotient has prime exponent p (or is trivial and a prime is
    supplied), ``basis`` holds coset representatives g^0..g^{r-1} forming an
    F_p-basis and ``mu_index == r`` is the extra index whose g-value is 0.
    """

    domain: Domain
    sub: Subgroup
    cosets: tuple[tuple[Element, ...], ...]
    exponent: int
    prime: Optional[int]
    basis: Optional[tuple[Element, ...]]
    _coords: Optional[dict[int, tuple[int, ...]]] = field(repr=False, default=None)
    _coset_of: dict[Element, int] = field(repr=False, default_factory=dict)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.domain.group

    @property
    def representatives(self) -> tuple[Element, ...]:
        return tuple(c[0] for c in self.cosets)

    @property
    def mu_index(self) -> Optional[int]:
        return None if self.basis is None else len(self.basis)

    def g(self, alpha: int) -> Element:
        """g^alpha, with g^mu = 0."""
        if alpha == self.mu_index:
            return self.group.zero
        return self.basis[alpha]

    def coset_index(self, x: Element) -> int:
        return self._coset_of[x]

    @cached_property
    def tables(self) -> "QuotientTables":
        return QuotientTables(self)


class QuotientTables:
    """Index-based lookup arrays for vectorised evaluation on the domain."""

    def __init__(self, Q: QuotientStructure):
        A = Q.group
        self.elements = Q.domain.elements
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.sub_elements = Q.sub.elements
        self.sub_pos = np.array([self.index[h] for h in self.sub_elements], dtype=np.int64)
        n = len(self.elements)
        # minus[i, j] = index of (x_i - h_j)
        self.minus = np.array(
            [[self.index[A.sub(x, h)] for h in self.sub_elements] for x in self.elements],
            dtype=np.int64,
        ).reshape(n, len(self.sub_elements))
        self.coords = np.array(
            [Q._coords[Q.coset_index(x)] for x in self.elements], dtype=np.int64
        ).reshape(n, len(Q.basis))


@lru_cache(maxsize=512)
def quotient(G: Domain, H: Subgroup, p: Optional[int] = None) -> QuotientStructure:
    """Coset partition of G by H; an F_p basis when the exponent is prime.

    The basis is chosen greedily, scanning canonical coset representatives
    (lexicographically least element) in order and keeping those independent
    over F_p.  ``p`` may be given explicitly so that the trivial quotient G/G
    gets an empty basis.
    """
    A = G.group
    if not is_subset(H, G):
        raise GroupError("H is not contained in G")
    coset_of: dict[Element, int] = {}
    cosets = []
    for x in G.elements:
        if x in coset_of:
            continue
        c = tuple(sorted(A.add(x, h) for h in H.elements))
        for y in c:
            if y in coset_of:
                raise GroupError("H is not a subgroup of G")
            coset_of[y] = len(cosets)
        cosets.append(c)
    if sum(len(c) for c in cosets) != len(G.elements):
        raise GroupError("H is not a subgroup of G")

    members = H if isinstance(H, Subgroup) else _as_subgroup(H)
    exponent = 1
    for c in cosets:
        x, e = c[0], 1
        while A.mul(e, x) not in members:
            e += 1
        exponent = math.lcm(exponent, e)

    if p is None and is_prime(exponent):
        p = exponent
    if p is None or exponent not in (1, p):
        return QuotientStructure(G, H, tuple(cosets), exponent, None, None, None, coset_of)
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")

    zero_coset = coset_of[A.zero]
    span: dict[int, tuple[int, ...]] = {zero_coset: ()}
    basis: list[Element] = []
    for c in cosets:
        if coset_of[c[0]] in span:
            continue
        g = c[0]
        new: dict[int, tuple[int, ...]] = {}
        for ci, vec in span.items():
            rep = cosets[ci][0]
            for t in range(p):
                new[coset_of[A.add(rep, A.mul(t, g))]] = vec + (t,)
        span = new
        basis.append(g)
    assert len(span) == len(cosets)
    return QuotientStructure(G, H, tuple(cosets), exponent, p, tuple(basis), span, coset_of)


def coordinates(x: Element, Q: QuotientStructure) -> tuple[int, ...]:
    """Coefficients c with x + H = sum_a c_a (g^a + H), c_a in [0, p)."""
    if Q.basis is None:
        raise GroupError(f"quotient has exponent {Q.exponent}, which is not prime")
    if x not in Q._coset_of:
        raise GroupError(f"{list(x)} is not in the domain of the quotient")
    return Q._coords[Q.coset_index(x)]


# -- homomorphisms ----------------------------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    """Homomorphism determined by the images of the standard generators e_i."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    images: tuple[Element, ...]
    fixed: Optional[Subgroup] = None

    def __post_init__(self):
        images = tuple(self.target.check(y) for y in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.rank:
            raise GroupError(
                f"need {self.source.rank} generator images, got {len(images)}"
            )
        for n, y in zip(self.source.orders, images):
            if self.target.mul(n, y) != self.target.zero:
                raise GroupError(
                    f"image {list(y)} of a generator of order {n} does not satisfy n*y = 0"
                )
        if self.fixed is not None:
            for x in self.fixed.elements:
                if apply_hom(self, x) != x:
                    raise GroupError(f"homomorphism does not fix {list(x)}")

    def is_additive(self) -> bool:
        S, T = self.source, self.target
        return all(
            apply_hom(self, S.add(a, b)) == T.add(apply_hom(self, a), apply_hom(self, b))
            for a in S.elements
            for b in S.elements
        )


def apply_hom(h: Homomorphism, x: Element) -> Element:
    return h.target.combine(h.source.check(x), h.images)


def identity_hom(G: FiniteAbelianGroup) -> Homomorphism:
    return Homomorphism(G, G, tuple(tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)))


def zero_hom(S: FiniteAbelianGroup, T: FiniteAbelianGroup) -> Homomorphism:
    return Homomorphism(S, T, (T.zero,) * S.rank)


# -- the rational lattice (1/m)Z^n ---------------------------------------


@dataclass(frozen=True)
class LatticeGroup:
    """(1/m)Z^n, containing Z^n; elements are tuples of Fractions."""

    dim: int
    denominator: int

    def __post_init__(self):
        if self.dim < 1 or self.denominator < 1:
            raise GroupError("dimension and denominator must be >= 1")

    @property
    def zero(self) -> tuple[Fraction, ...]:
        return (Fraction(0),) * self.dim

    def check(self, x: Sequence) -> tuple[Fraction, ...]:
        x = tuple(Fraction(a) for a in x)
        if len(x) != self.dim or any((a * self.denominator).denominator != 1 for a in x):
            raise GroupError(f"{x} is not a point of (1/{self.denominator})Z^{self.dim}")
        return x

    def __contains__(self, x) -> bool:
        try:
            self.check(x)
        except (GroupError, TypeError, ValueError):
            return False
        return True

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a for a in x)

    def is_integral(self, x) -> bool:
        return all(a.denominator == 1 for a in x)

    def window(self, bound) -> list[tuple[Fraction, ...]]:
        """Points with every coordinate in [-bound, bound]."""
        m = self.denominator
        top = math.floor(Fraction(bound) * m)
        axis = [Fraction(k, m) for k in range(-top, top + 1)]
        return list(itertools.product(axis, repeat=self.dim))
