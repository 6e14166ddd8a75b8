"""Named constructions, small-order tables, and embedding-order bounds.

Every named group lives in ``data/registry.json`` as an expression string (or,
for the rank-extended products, a component/twist descriptor) together with its
expected order, so the catalog is auditable without reading code.  This module
realizes those descriptors on demand, exposes the tabulated minimal-order data,
and computes the arithmetic lower bounds the tables rest on.

The four extension families each fix one canonical representative (no extra
twists); ``family_member`` realizes the other members by multiplying the
defining involution with any subset of the family's free twists.
"""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import perms
from .errors import InvalidAction, OutOfRange, UnknownLabel
from .expressions import GroupExpr, parse_expr
from .groups import TableGroup, TwistedGroup, _DGen, bfs_closure, construct

_DATA_PATH = Path(__file__).parent / "data" / "registry.json"


@lru_cache(maxsize=1)
def _data() -> dict:
    with open(_DATA_PATH, encoding="utf-8") as fh:
        return json.load(fh)


def _named_entry(label: str) -> dict:
    entry = _data()["named"].get(label)
    if entry is None:
        raise UnknownLabel(f"no group registered under {label!r}")
    return entry


def available_labels() -> tuple[str, ...]:
    return tuple(sorted(_data()["named"]))


class Resolved:
    """Handle for one registry label: the expected order without realization,
    plus build() for a fresh realization."""

    def __init__(self, label: str, entry: dict):
        self.label = label
        self._entry = entry

    def order_hint(self) -> int:
        return int(self._entry["order"])

    @property
    def anchor(self) -> str:
        return self._entry["anchor"]

    def build(self):
        entry = self._entry
        if "expr" in entry:
            g = construct(parse_expr(entry["expr"]), resolve)
        elif "family" in entry:
            g = _family_group(entry["family"], ())
        else:
            g = _product_group(entry["product"])
        if g.order != entry["order"]:
            raise RuntimeError(
                f"registry entry {self.label!r} built order {g.order}, "
                f"expected {entry['order']}"
            )
        if getattr(g, "expr_text", None) is None:
            g.expr_text = f"named({self.label})"
        return g


def resolve(label: str) -> Resolved:
    return Resolved(label, _named_entry(label))


def named_group(label: str) -> GroupExpr:
    """The defining expression of a registered label.  Labels whose group is
    not expressible in the grammar (the rank-extended products) come back as a
    named() reference that construct() realizes through this registry."""
    entry = _named_entry(label)
    if "expr" in entry:
        return parse_expr(entry["expr"])
    return parse_expr(f"named({label})")


def anchor_of(label: str) -> str:
    return _named_entry(label)["anchor"]


# --- twist machinery -----------------------------------------------------------


def gen_image_map(g: TableGroup, images: dict[str, str]) -> np.ndarray:
    """Automorphism of ``g`` pinned by generator-image words; generators
    without a listed image are fixed.  The map extends over a breadth-first
    closure, so it is total; whether it is a homomorphism is checked by the
    consumer (TwistedGroup validation)."""
    gen_names = list(g.gens)
    gen_elems = [int(g.gens[nm]) for nm in gen_names]
    img_elems = [g.evaluate_word(images.get(nm, nm)) for nm in gen_names]
    elems, deriv = bfs_closure(0, gen_elems, g.mul)
    if len(elems) != g.n:
        raise InvalidAction("generator images must cover a generating set")
    out = np.full(g.n, -1, dtype=np.int32)
    out[0] = 0
    for e in elems[1:]:
        parent, pos = deriv[e]
        out[e] = g.table[out[parent], img_elems[pos]]
    return out


def _conj_map(g: TableGroup, cycles: str) -> np.ndarray:
    """Automorphism of a permutation group given by conjugation with an outer
    permutation of the same degree (written in cycle notation)."""
    if g.perm_elems is None:
        raise InvalidAction("conjugation twists need a permutation group")
    degree = len(g.perm_elems[0])
    t = perms.parse_cycles(cycles, degree=degree)
    t_inv = perms.inverse(t)
    out = np.empty(g.n, dtype=np.int32)
    for i, p in enumerate(g.perm_elems):
        out[i] = g._perm_index[perms.compose(perms.compose(t_inv, p), t)]
    return out


def _theta_action(theta: dict, comp: TableGroup) -> np.ndarray:
    if "conj" in theta:
        return _conj_map(comp, theta["conj"])
    return gen_image_map(comp, theta["images"])


def _component_group(name: str) -> TableGroup:
    return construct(parse_expr(_data()["kfactors"][name]), resolve)


def _family_group(desc: dict, extras: tuple[str, ...]) -> TwistedGroup:
    thetas = _data()["thetas"]
    comps = [_component_group(nm) for nm in desc["components"]]
    names = list(desc["components"])
    actions: list[np.ndarray | None] = [None] * len(comps)
    for tname in list(desc["sigma"]) + list(extras):
        theta = thetas[tname]
        ci = names.index(theta["component"])
        act = _theta_action(theta, comps[ci])
        actions[ci] = act if actions[ci] is None else act[actions[ci]]
    return TwistedGroup(comps, names, [_DGen("sigma", actions)])


def _product_group(desc: dict) -> TwistedGroup:
    thetas = _data()["thetas"]
    comps = [_component_group(nm) for nm in desc["components"]]
    names = list(desc["components"])
    dgens = []
    for tname in desc["dgens"]:
        theta = thetas[tname]
        actions: list[np.ndarray | None] = [None] * len(comps)
        ci = names.index(theta["component"])
        actions[ci] = _theta_action(theta, comps[ci])
        dgens.append(_DGen(tname, actions))
    return TwistedGroup(comps, names, dgens)


def family_thetas(label: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(defining twists, free twists) of an extension family."""
    entry = _named_entry(label)
    if "family" not in entry:
        raise UnknownLabel(f"{label!r} is not an extension family")
    desc = entry["family"]
    return tuple(desc["sigma"]), tuple(desc["free"])


def family_member(label: str, thetas=()) -> TwistedGroup:
    """One member of an extension family: the defining involution multiplied
    by the chosen free twists.  Repeats collapse (the twists are involutory);
    an empty choice gives the canonical representative."""
    entry = _named_entry(label)
    if "family" not in entry:
        raise UnknownLabel(f"{label!r} is not an extension family")
    desc = entry["family"]
    extras: list[str] = []
    for t in thetas:
        t = str(t)
        if t not in desc["free"]:
            raise UnknownLabel(
                f"family {label!r} admits extra twists {tuple(desc['free'])}, "
                f"not {t!r}"
            )
        if t in extras:
            extras.remove(t)
        else:
            extras.append(t)
    g = _family_group(desc, tuple(extras))
    if g.order != entry["order"]:
        raise RuntimeError(f"family {label!r} built order {g.order}")
    return g


# --- tabulated data --------------------------------------------------------------


def _table_row(table: str, n: int, hi: int = 15):
    if not 1 <= n <= hi:
        raise OutOfRange(f"tabulated data covers 1..{hi}, not {n}")
    return _data()[table][str(n)]


def group_labels_of_order(n: int) -> list[str]:
    """Registry labels of every isomorphism type of order n (n <= 15)."""
    return list(_table_row("table1", n))


def groups_of_order(n: int) -> list[GroupExpr]:
    """Defining expressions of every isomorphism type of order n (n <= 15)."""
    return [named_group(lbl) for lbl in group_labels_of_order(n)]


def table2_row(n: int) -> tuple[int, tuple[str, ...]]:
    """(least order, labels) of the groups of least order containing every
    group of order exactly n."""
    row = _table_row("table2", n)
    return int(row["order"]), tuple(row["groups"])


def table4_value(n: int) -> int:
    """Least order of a group containing every group of order n or less."""
    return int(_table_row("table4", n))


def table5_row(n: int) -> tuple[str, ...]:
    """Labels of the listed minimal hosts for all groups of order <= n."""
    return tuple(_table_row("table5", n, hi=11))


# --- bounds ---------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _factorization(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def pbound(p: int, k: int) -> int:
    """Least possible order, p^(2k-1), of a group containing every group of
    order p^k."""
    if not _is_prime(p):
        raise OutOfRange(f"pbound needs a prime, got {p}")
    if k < 1:
        raise OutOfRange(f"pbound needs k >= 1, got {k}")
    return p ** (2 * k - 1)


def collection_bound(n: int) -> int:
    """Every group containing all groups of order n has order divisible by
    this: the product of pbound(p, a) over the prime powers p^a dividing n."""
    if n < 1:
        raise OutOfRange(f"collection_bound needs n >= 1, got {n}")
    out = 1
    for p, a in _factorization(n).items():
        out *= p ** (2 * a - 1)
    return out


def nbound(n: int) -> int:
    """Every group containing all groups of order n or less has order
    divisible by this: the product of pbound(p, k_p) over primes p <= n with
    p^k_p the largest power of p not exceeding n."""
    if n < 1:
        raise OutOfRange(f"nbound needs n >= 1, got {n}")
    out = 1
    for p in range(2, n + 1):
        if not _is_prime(p):
            continue
        k = 1
        while p ** (k + 1) <= n:
            k += 1
        out *= p ** (2 * k - 1)
    return out


# --- enumeration seeds -----------------------------------------------------------


def perfect_seed_exprs() -> dict[int, tuple[str, ...]]:
    """Expression strings for every perfect group of each listed order;
    verified on load by the enumerator (order, perfectness, centre size)."""
    return {int(k): tuple(v) for k, v in _data()["perfect_seeds"].items()}
