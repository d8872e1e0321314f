"""Transversals of two disjoint k-uniform collections.

Pipeline: pad both collections to partitions of a common ground set, form the
doubly stochastic matrix a_ij = |C_i & D_j| / k, pull out a permutation on its
positive support, and pick one point from each C_i & D_sigma(i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

Label = Hashable


class CollectionError(ValueError):
    pass


def label_key(x):
    # ints before strings; keeps mixed label sets sortable and deterministic
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def _sorted(labels: Iterable[Label]) -> tuple[Label, ...]:
    return tuple(sorted(labels, key=label_key))


@dataclass(frozen=True)
class UniformCollection:
    """Pairwise disjoint sets, all of size k."""

    k: int
    sets: tuple[tuple[Label, ...], ...]

    def __post_init__(self):
        if self.k < 1:
            raise CollectionError("k must be >= 1")
        sets = tuple(_sorted(set(s)) for s in self.sets)
        seen: set = set()
        for s, raw in zip(sets, self.sets):
            if len(s) != self.k or len(s) != len(raw):
                raise CollectionError(f"set {list(raw)} does not have exactly {self.k} distinct elements")
            if seen.intersection(s):
                raise CollectionError(f"set {list(s)} meets an earlier set of the same collection")
            seen.update(s)
        object.__setattr__(self, "sets", sets)

    @classmethod
    def of(cls, sets: Iterable[Iterable[Label]], k: int | None = None) -> "UniformCollection":
        sets = [tuple(s) for s in sets]
        if k is None:
            if not sets:
                raise CollectionError("cannot infer k from an empty collection")
            k = len(sets[0])
        return cls(k, tuple(sets))

    @property
    def union(self) -> frozenset:
        return frozenset(x for s in self.sets for x in s)

    def __len__(self):
        return len(self.sets)


@dataclass(frozen=True)
class DoublyStochasticMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(a) for a in row) for row in self.entries)
        n = len(rows)
        if n == 0:
            raise CollectionError("matrix must have at least one row")
        if any(len(r) != n for r in rows):
            raise CollectionError("matrix must be square")
        if any(a < 0 for r in rows for a in r):
            raise CollectionError("matrix has a negative entry")
        for i, r in enumerate(rows):
            if sum(r) != 1:
                raise CollectionError(f"row {i} sums to {sum(r)}, not 1")
        for j in range(n):
            col = sum(r[j] for r in rows)
            if col != 1:
                raise CollectionError(f"column {j} sums to {col}, not 1")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def positive_entries(self) -> int:
        return sum(1 for r in self.entries for a in r if a > 0)


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    def recompose(self, n: int) -> list[list[Fraction]]:
        M = [[Fraction(0)] * n for _ in range(n)]
        for w, sigma in self.terms:
            for i, j in enumerate(sigma):
                M[i][j] += w
        return M

    def weight(self) -> Fraction:
        return sum((w for w, _ in self.terms), Fraction(0))


def _fresh_labels(ground: frozenset, count: int) -> list[Label]:
    if all(isinstance(x, int) for x in ground):
        start = max(ground, default=-1) + 1
        return list(range(start, start + count))
    out, i = [], 0
    while len(out) < count:
        cand = f"_pad{i}"
        if cand not in ground:
            out.append(cand)
        i += 1
    return out


def _blocks(labels: Sequence[Label], k: int) -> list[tuple[Label, ...]]:
    return [tuple(labels[i:i + k]) for i in range(0, len(labels), k)]


def pad_collections(A: UniformCollection, B: UniformCollection) -> tuple[UniformCollection, UniformCollection]:
    """Extend A and B to k-uniform partitions C >= A, D >= B of one ground set.

    The ground set is (U A) | (U B) plus just enough fresh labels that
    the complement of U A splits into k-blocks; the complement of U B then
    splits as well, because both complements have size = |ground| mod k.
    """
    if A.k != B.k:
        raise CollectionError(f"collections have different set sizes {A.k} and {B.k}")
    k = A.k
    uA, uB = A.union, B.union
    ground = uA | uB
    fresh = _fresh_labels(ground, -len(ground - uA) % k)
    rest_A = list(_sorted(ground - uA)) + fresh
    rest_B = list(_sorted(ground - uB)) + fresh
    if len(rest_B) % k:
        raise CollectionError("padding failed: complements are not divisible by k")
    C = UniformCollection(k, A.sets + tuple(_blocks(rest_A, k)))
    D = UniformCollection(k, B.sets + tuple(_blocks(rest_B, k)))
    return C, D


def intersection_matrix(C: UniformCollection, D: UniformCollection) -> DoublyStochasticMatrix:
    if C.k != D.k:
        raise CollectionError("collections have different set sizes")
    if len(C) != len(D) or C.union != D.union:
        raise CollectionError("collections must have equally many sets and the same union")
    k = C.k
    Dsets = [frozenset(d) for d in D.sets]
    return DoublyStochasticMatrix(tuple(
        tuple(Fraction(len(d.intersection(c)), k) for d in Dsets) for c in C.sets
    ))


def positive_permutation(M: DoublyStochasticMatrix) -> tuple[int, ...]:
    """sigma with M[i][sigma(i)] > 0 for every i (augmenting-path matching)."""
    return _support_matching(M.entries)


def _support_matching(rows) -> tuple[int, ...]:
    n = len(rows)
    adj = [[j for j, a in enumerate(row) if a > 0] for row in rows]
    match_col = [-1] * n

    def augment(i, seen):
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if match_col[j] < 0 or augment(match_col[j], seen):
                match_col[j] = i
                return True
        return False

    for i in range(n):
        if not augment(i, set()):
            raise AssertionError("positive support has no perfect matching; matrix is not doubly stochastic")
    sigma = [0] * n
    for j, i in enumerate(match_col):
        sigma[i] = j
    return tuple(sigma)


def birkhoff_decompose(M: DoublyStochasticMatrix) -> BirkhoffDecomposition:
    """Exact convex decomposition of M into permutation matrices."""
    n = M.n
    # The remainder R stays a multiple of a doubly stochastic matrix, so its
    # positive support always carries a permutation.
    R = [list(row) for row in M.entries]
    terms = []
    remaining = Fraction(1)
    while remaining > 0:
        sigma = _support_matching(R)
        lam = min(R[i][sigma[i]] for i in range(n))
        for i in range(n):
            R[i][sigma[i]] -= lam
        remaining -= lam
        terms.append((lam, sigma))
    assert all(a == 0 for row in R for a in row)
    return BirkhoffDecomposition(tuple(terms))


def transversal(A: UniformCollection, B: UniformCollection) -> frozenset:
    """I with |I & C| = 1 for every C in A and in B."""
    if not len(A) and not len(B):
        return frozenset()
    C, D = pad_collections(A, B)
    M = intersection_matrix(C, D)
    sigma = positive_permutation(M)
    picks = []
    for i, c in enumerate(C.sets):
        common = set(c).intersection(D.sets[sigma[i]])
        picks.append(min(common, key=label_key))
    wanted = A.union | B.union
    return frozenset(x for x in picks if x in wanted)


def _coerce(X, k):
    if isinstance(X, UniformCollection):
        return X
    return UniformCollection.of(X, k)


def is_transversal(I, sets: Iterable[Iterable[Label]], fraction: int = 0) -> bool:
    """|I & C| == |C| / fraction (or == 1 when fraction is 0) for each C."""
    I = set(I)
    for s in sets:
        s = set(s)
        want = len(s) // fraction if fraction else 1
        if len(I & s) != want:
            return False
    return True


def p_fractional_transversal(A: Sequence[Iterable[Label]], B: Sequence[Iterable[Label]], p: int) -> frozenset:
    """I with |I & C| = |C|/p for every C in A and B.

    Each collection must consist of pairwise disjoint sets whose sizes are
    divisible by p.  Every set is cut into p-blocks (in sorted order) and the
    one-point transversal of the two p-uniform block collections is taken.
    """
    if p < 1:
        raise CollectionError("p must be >= 1")
    blocks = []
    for X in (A, B):
        bl = []
        for s in X:
            s = _sorted(s)
            if len(s) % p:
                raise CollectionError(f"set {list(s)} has size {len(s)}, not divisible by {p}")
            bl.extend(_blocks(s, p))
        blocks.append(UniformCollection(p, tuple(bl)))
    return transversal(*blocks)


def run_transversal(A, B, k: int | None = None) -> frozenset:
    """Convenience wrapper accepting plain lists of sets."""
    if k is None:
        first = next((s for s in list(A) + list(B)), None)
        k = len(tuple(first)) if first is not None else 1
    return transversal(_coerce(A, k), _coerce(B, k))
