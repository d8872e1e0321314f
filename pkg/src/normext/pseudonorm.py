"""Pseudonorms as exact value tables, axiom checks and the induced metric."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping

import numpy as np

from .groups import Domain, Element, Homomorphism, apply_hom


class NormError(ValueError):
    pass


def to_fraction(v) -> Fraction:
    """Exact rational from an int, Fraction or a "p/q" string; floats are refused."""
    if isinstance(v, bool):
        raise NormError(f"not a rational value: {v!r}")
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            text = v.strip()
            if any(c in text for c in ".eE"):
                raise ValueError
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise NormError(f"not a rational value: {v!r}") from None
    raise NormError(f"not a rational value: {v!r} ({type(v).__name__})")


def common_scale(values) -> tuple[int, list[int]]:
    """Common denominator L and the integers L*v."""
    L = math.lcm(1, *(v.denominator for v in values))
    return L, [v.numerator * (L // v.denominator) for v in values]


@dataclass(frozen=True, eq=False)
class Pseudonorm:
    carrier: Domain
    values: Mapping[Element, Fraction] = field(repr=False)

    def __post_init__(self):
        elements = self.carrier.elements
        vals = {}
        for x in elements:
            if x not in self.values:
                raise NormError(f"no value for element {list(x)}")
            v = to_fraction(self.values[x])
            if v < 0:
                raise NormError(f"negative value {v} at {list(x)}")
            vals[x] = v
        if len(self.values) != len(vals):
            extra = [list(x) for x in self.values if x not in vals]
            raise NormError(f"values given for elements outside the carrier: {extra[:5]}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_scaled(cls, carrier: Domain, L: int, scaled) -> "Pseudonorm":
        """Table with values scaled[i] / L, in carrier element order (trusted input)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "carrier", carrier)
        object.__setattr__(
            obj, "values", {x: Fraction(int(v), L) for x, v in zip(carrier.elements, scaled)}
        )
        if isinstance(scaled, np.ndarray) and scaled.dtype == np.int64:
            obj.__dict__["scaled"] = (L, scaled)
        return obj

    def __call__(self, x: Element) -> Fraction:
        return self.values[x]

    def __eq__(self, other):
        if not isinstance(other, Pseudonorm):
            return NotImplemented
        return self.values == other.values

    __hash__ = None

    @property
    def group(self):
        return self.carrier.group

    def restrict(self, sub: Domain) -> "Pseudonorm":
        return Pseudonorm(sub, {x: self.values[x] for x in sub.elements})

    def recarry(self, carrier: Domain) -> "Pseudonorm":
        """Same table viewed on another carrier with the same element set."""
        return Pseudonorm(carrier, self.values)

    @cached_property
    def scaled(self) -> tuple[int, np.ndarray]:
        """(L, L*values) in carrier element order, exact as int64."""
        L, ints = common_scale([self.values[x] for x in self.carrier.elements])
        if ints and max(ints) >= 2**60:
            raise OverflowError("pseudonorm values too large for int64 evaluation")
        return L, np.array(ints, dtype=np.int64)


@dataclass
class ValidationReport:
    ok: bool
    zero_value: Fraction
    violations: list[tuple[Element, Element]]

    def __bool__(self):
        return self.ok

    def lines(self, norm: Pseudonorm | None = None) -> list[str]:
        out = []
        if self.zero_value != 0:
            out.append(f"|0| = {self.zero_value}, expected 0")
        for x, y in self.violations:
            if norm is None:
                out.append(f"triangle violation at ({list(x)}, {list(y)})")
            else:
                d = norm(norm.group.sub(x, y))
                out.append(
                    f"triangle violation at ({list(x)}, {list(y)}): "
                    f"|x-y| = {d} > {norm(x)} + {norm(y)}"
                )
        return out


@lru_cache(maxsize=256)
def difference_table(carrier: Domain) -> np.ndarray:
    """table[i, j] = index of x_i - x_j within the carrier."""
    G = carrier.group
    elements = carrier.elements
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    try:
        return np.array(
            [[index[G.sub(x, y)] for y in elements] for x in elements], dtype=np.int64
        ).reshape(n, n)
    except KeyError:
        raise NormError("carrier is not closed under subtraction") from None


def validate(N: Pseudonorm, max_violations: int | None = None) -> ValidationReport:
    """Check |0| = 0 and |x - y| <= |x| + |y| over every pair."""
    G = N.group
    zero_value = N.values.get(G.zero)
    if zero_value is None:
        raise NormError("carrier does not contain the identity")
    _, v = N.scaled
    diff = difference_table(N.carrier)
    bad = v[diff] > v[:, None] + v[None, :]
    elements = N.carrier.elements
    violations = [(elements[i], elements[j]) for i, j in zip(*np.nonzero(bad))]
    if max_violations is not None:
        violations = violations[:max_violations]
    return ValidationReport(zero_value == 0 and not violations, zero_value, violations)


def induced_metric(N: Pseudonorm, x: Element, y: Element) -> Fraction:
    return N(N.group.sub(x, y))


def pullback_norm(h: Homomorphism, N: Pseudonorm) -> Pseudonorm:
    """|x| := N(h(x)) on the source of h."""
    if set(N.carrier.elements) != set(h.target.elements):
        raise NormError("the norm must be defined on the whole target group")
    return Pseudonorm(h.source, {x: N(apply_hom(h, x)) for x in h.source.elements})


def zero_norm(carrier: Domain) -> Pseudonorm:
    return Pseudonorm(carrier, {x: Fraction(0) for x in carrier.elements})
