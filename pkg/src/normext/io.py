"""JSON and CSV formats.

Rationals cross the boundary as strings ("3/2", "4"); elements as integer
arrays, and as their compact JSON text ("[0,2]") when used as object keys.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from .groups import (
    Element,
    FiniteAbelianGroup,
    GroupError,
    Homomorphism,
    Subgroup,
    make_group,
    subgroup_closure,
)
from .pseudonorm import NormError, Pseudonorm, to_fraction
from .transversal import DoublyStochasticMatrix


class InputError(ValueError):
    """Malformed input file (CLI exit status 2)."""


def frac_str(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def element_key(x: Sequence) -> str:
    return "[" + ",".join(str(a) for a in x) + "]"


def parse_element_key(key: str) -> Element:
    try:
        raw = json.loads(key)
    except json.JSONDecodeError:
        raise InputError(f"bad element key {key!r}") from None
    if not isinstance(raw, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in raw):
        raise InputError(f"element key {key!r} is not an integer array")
    return tuple(raw)


def read_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def write_json(path, obj) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise InputError(f"{where}: field {key!r} has the wrong type")
    return val


def _int_list(v, where) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in v):
        raise InputError(f"{where}: expected an integer array, got {v!r}")
    return v


# -- groups -----------------------------------------------------------------


def parse_group(obj, where="group") -> FiniteAbelianGroup:
    orders = _int_list(_require(obj, "orders", list, where), where)
    if not orders:
        raise InputError(f"{where}: 'orders' must not be empty")
    try:
        return make_group(orders)
    except GroupError as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_subgroups(obj, G: FiniteAbelianGroup, where="group") -> list[Subgroup]:
    """Subgroups listed under "subgroup_generators".

    Either one generator list ([[2]]) or several ([[[2]], [[1]]]); the
    second form is indexed by --subgroup-index.
    """
    raw = obj.get("subgroup_generators") if isinstance(obj, dict) else None
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise InputError(f"{where}: 'subgroup_generators' must be a list")
    nested = bool(raw) and all(isinstance(g, list) and all(isinstance(a, list) for a in g) for g in raw)
    lists = raw if nested else [raw]
    out = []
    for gens in lists:
        gens = [_int_list(g, where) for g in gens]
        try:
            out.append(subgroup_closure(G, gens))
        except GroupError as exc:
            raise InputError(f"{where}: {exc}") from None
    return out


def dump_group(G: FiniteAbelianGroup, subgroups: Sequence[Subgroup] = ()) -> dict:
    out: dict = {"orders": list(G.orders)}
    if len(subgroups) == 1:
        out["subgroup_generators"] = [list(g) for g in subgroups[0].generators]
    elif subgroups:
        out["subgroup_generators"] = [[list(g) for g in S.generators] for S in subgroups]
    return out


def load_group_file(path, subgroup_index: Optional[int] = None) -> tuple[FiniteAbelianGroup, Optional[Subgroup]]:
    obj = read_json(path)
    G = parse_group(obj, str(path))
    subs = parse_subgroups(obj, G, str(path))
    if not subs:
        if subgroup_index is not None:
            raise InputError(f"{path}: --subgroup-index given but the file lists no subgroups")
        return G, None
    i = 0 if subgroup_index is None else subgroup_index
    if not 0 <= i < len(subs):
        raise InputError(f"{path}: subgroup index {i} out of range (file lists {len(subs)})")
    return G, subs[i]


# -- norms ------------------------------------------------------------------


def parse_norm(obj, where="norm", group: Optional[FiniteAbelianGroup] = None) -> Pseudonorm:
    """Table on the subgroup formed by its keys (or on the whole group)."""
    G = parse_group(_require(obj, "group", dict, where), f"{where}: group")
    if group is not None and G != group:
        raise InputError(f"{where}: norm is on Z{list(G.orders)}, expected Z{list(group.orders)}")
    raw = _require(obj, "values", dict, where)
    values = {}
    for key, v in raw.items():
        x = parse_element_key(key)
        if x not in G:
            raise InputError(f"{where}: {key} is not an element of Z{list(G.orders)}")
        if x in values:
            raise InputError(f"{where}: duplicate value for {key}")
        try:
            values[x] = to_fraction(v)
        except NormError as exc:
            raise InputError(f"{where}: {exc}") from None
    if len(values) == G.order:
        carrier = G
    else:
        carrier = Subgroup(G, tuple(sorted(values)))
        if not carrier.is_closed():
            raise InputError(f"{where}: the keyed elements do not form a subgroup")
    # negative values surface as NormError: a failed axiom, not a parse error
    return Pseudonorm(carrier, values)


def dump_norm(N: Pseudonorm) -> dict:
    return {
        "group": {"orders": list(N.group.orders)},
        "values": {element_key(x): frac_str(N(x)) for x in N.carrier.elements},
    }


def load_norm_file(path, group=None) -> Pseudonorm:
    return parse_norm(read_json(path), str(path), group)


# -- homomorphisms, collections, matrices -----------------------------------


def parse_hom(obj, where="homomorphism") -> Homomorphism:
    S = parse_group(_require(obj, "source", dict, where), f"{where}: source")
    T = parse_group(_require(obj, "target", dict, where), f"{where}: target")
    images = [_int_list(y, where) for y in _require(obj, "images", list, where)]
    try:
        return Homomorphism(S, T, tuple(tuple(y) for y in images))
    except GroupError as exc:
        raise InputError(f"{where}: {exc}") from None


def dump_hom(h: Homomorphism) -> dict:
    return {
        "source": {"orders": list(h.source.orders)},
        "target": {"orders": list(h.target.orders)},
        "images": [list(y) for y in h.images],
    }


def _label(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(f"{where}: labels must be integers or strings, got {v!r}")
    return v


def parse_collections(obj, where="collections"):
    """(k, A, B) with A, B lists of label lists; k may be omitted."""
    A = _require(obj, "A", list, where)
    B = _require(obj, "B", list, where)
    sets = []
    for name, X in (("A", A), ("B", B)):
        rows = []
        for s in X:
            if not isinstance(s, list):
                raise InputError(f"{where}: every set in {name} must be a list")
            rows.append([_label(v, where) for v in s])
        sets.append(rows)
    k = obj.get("k")
    if k is not None and (isinstance(k, bool) or not isinstance(k, int)):
        raise InputError(f"{where}: 'k' must be an integer")
    p = obj.get("p")
    if p is not None and (isinstance(p, bool) or not isinstance(p, int)):
        raise InputError(f"{where}: 'p' must be an integer")
    return k, sets[0], sets[1], p


def parse_matrix(obj, where="matrix") -> DoublyStochasticMatrix:
    rows = obj.get("matrix") if isinstance(obj, dict) else obj
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows (or {{\"matrix\": rows}})")
    try:
        entries = tuple(tuple(to_fraction(a) for a in r) for r in rows)
    except NormError as exc:
        raise InputError(f"{where}: {exc}") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise InputError(f"{where}: matrix must be square and non-empty")
    return DoublyStochasticMatrix(entries)
