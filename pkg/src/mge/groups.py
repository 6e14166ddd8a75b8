"""Concrete finite groups and the expression realizer.

Two realizations exist.  TableGroup stores the full multiplication table as a
dense numpy array and supports every structural query; it is capped at
TABLE_LIMIT elements.  TwistedGroup represents a direct product of dense
components optionally extended by a rank-r elementary-abelian 2-group of
commuting componentwise involutions; its elements are (component tuple, bits)
pairs and it is never materialized as a table.

Element handles are plain ints for TableGroup (0 is always the identity) and
(tuple[int, ...], int) pairs for TwistedGroup.

Semidirect action convention: a clause ``t.g=w`` pins conjugation of ``g`` by
``t``, i.e. ``t^-1 * g * t = w`` holds in the product.  Base generators with
no clause for some acting generator are fixed by it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from . import perms
from .errors import (
    CentralIdentificationError,
    InvalidAction,
    NotNormal,
    OrderLimitExceeded,
    ParseError,
    SubgroupLimitExceeded,
    UnknownGenerator,
)
from .expressions import (
    ActionClause,
    Alternating,
    CentralProduct,
    Cyclic,
    Dicyclic,
    Dihedral,
    DirectProduct,
    ElemAbelian,
    GroupExpr,
    Named,
    PermGroupExpr,
    Quotient,
    Renamed,
    SemidirectProduct,
    Symmetric,
    parse_expr,
    tokenize_word,
)

TABLE_LIMIT = 5000
SUBGROUP_LIMIT = 5000
CHECK_TABLE_LIMIT = 512


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# --- shared closure helper ---------------------------------------------------


def bfs_closure(identity, gens, mul, limit=SUBGROUP_LIMIT):
    """Breadth-first closure of ``gens`` under ``mul``.

    Returns (elements in discovery order, derivations) where the derivation
    of a non-identity element is (parent, generator position) with
    element == mul(parent, gens[pos]).  Deterministic for fixed inputs.
    """
    elems = [identity]
    seen = {identity}
    deriv = {identity: None}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for pos, g in enumerate(gens):
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    elems.append(y)
                    deriv[y] = (x, pos)
                    nxt.append(y)
                    if len(elems) > limit:
                        raise SubgroupLimitExceeded(f"closure exceeded {limit} elements")
        frontier = nxt
    return elems, deriv


# --- dense groups --------------------------------------------------------------


class _Component:
    """A factor's copy inside a product-like parent.

    The parent index of a tuple of factor digits is sum(digit * stride), so
    digit extraction is pure arithmetic.
    """

    def __init__(self, group: "TableGroup", stride: int, rename: dict[str, str]):
        self.group = group
        self.stride = stride
        self.rename = rename

    def inject(self, e: int) -> int:
        return e * self.stride

    def digit(self, parent_idx: int) -> int:
        return (parent_idx // self.stride) % self.group.n


class TableGroup:
    """A finite group as a dense multiplication table over 0..n-1.

    Index 0 is the identity in every group this module builds.
    """

    def __init__(
        self,
        table: np.ndarray,
        gens: dict[str, int],
        *,
        labels: list[str] | None = None,
        expr_text: str | None = None,
        perm_elems: list[perms.Perm] | None = None,
        components: list[_Component] | None = None,
    ):
        table = np.ascontiguousarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("table must be square")
        if n > TABLE_LIMIT:
            raise OrderLimitExceeded(f"order {n} exceeds table limit {TABLE_LIMIT}")
        if not (table[0] == np.arange(n)).all() or not (table[:, 0] == np.arange(n)).all():
            raise ValueError("index 0 must be the identity")
        self.table = table
        self.n = n
        self.inv = np.ascontiguousarray(np.argmin(table, axis=1).astype(np.int32))
        if (table[np.arange(n), self.inv] != 0).any():
            raise ValueError("table has an element without an inverse")
        self.gens = dict(gens)
        self._labels = labels
        self.expr_text = expr_text
        self.perm_elems = perm_elems
        self._perm_index = (
            {p: i for i, p in enumerate(perm_elems)} if perm_elems is not None else None
        )
        self.components = components
        self._bfs_cache: dict[tuple[int, ...], list] = {}

    # -- basics --

    @property
    def order(self) -> int:
        return self.n

    @property
    def identity(self) -> int:
        return 0

    def elements(self):
        return range(self.n)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv_of(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv_of(x), -k
        out, base = 0, x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.n
        idx = np.arange(n)
        cur = idx.copy()
        orders = np.zeros(n, dtype=np.int64)
        k = 1
        while (orders == 0).any():
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.table[cur, idx]
            k += 1
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    @cached_property
    def exponent(self) -> int:
        out = 1
        for d in np.unique(self.element_orders):
            out = _lcm(out, int(d))
        return out

    # -- conjugacy --

    @cached_property
    def _conjugacy(self) -> tuple[np.ndarray, list[int], np.ndarray]:
        n = self.n
        class_id = np.full(n, -1, dtype=np.int64)
        reps: list[int] = []
        sizes: list[int] = []
        all_g = np.arange(n)
        for x in range(n):
            if class_id[x] >= 0:
                continue
            orbit = np.unique(self.table[self.table[all_g, x], self.inv[all_g]])
            class_id[orbit] = len(reps)
            reps.append(x)
            sizes.append(len(orbit))
        return class_id, reps, np.asarray(sizes, dtype=np.int64)

    @property
    def class_ids(self) -> np.ndarray:
        return self._conjugacy[0]

    @property
    def class_reps(self) -> list[int]:
        return self._conjugacy[1]

    @property
    def class_sizes(self) -> np.ndarray:
        return self._conjugacy[2]

    def conjugacy_classes(self) -> list[list[int]]:
        cid = self.class_ids
        out: list[list[int]] = [[] for _ in self.class_reps]
        for x in range(self.n):
            out[int(cid[x])].append(x)
        return out

    def centralizer_size(self, x: int) -> int:
        return self.n // int(self.class_sizes[self.class_ids[x]])

    @cached_property
    def center_elements(self) -> list[int]:
        cid, _, sizes = self._conjugacy
        return [int(x) for x in np.flatnonzero(sizes[cid] == 1)]

    @cached_property
    def derived_elements(self) -> list[int]:
        """Sorted element list of the commutator subgroup."""
        n = self.n
        t = self.table
        inv = self.inv
        comms = np.unique(t[t[np.repeat(inv, n), np.tile(inv, n)], t.ravel()])
        elems, _ = bfs_closure(0, [int(c) for c in comms if c != 0], self.mul)
        return sorted(elems)

    @cached_property
    def abelian_invariants(self) -> tuple[int, ...] | None:
        """Invariant factors, largest first, for abelian groups; else None."""
        if not self.is_abelian:
            return None
        invs: list[int] = []
        g = self
        while g.order > 1:
            x = int(np.argmax(g.element_orders))
            invs.append(g.element_order(x))
            cyc, _ = bfs_closure(0, [x], g.mul)
            g = quotient_group(g, sorted(cyc), check=False)
        return tuple(invs)

    # -- words and labels --

    def evaluate_word(self, word: str) -> int:
        out = 0
        for name, exp in tokenize_word(word):
            out = self.mul(out, self.power(self._resolve_factor(name), exp))
        return out

    def _resolve_factor(self, name: str) -> int:
        if name == "1":
            return 0
        if name in self.gens:
            return self.gens[name]
        got = self._resolve_cycles(name)
        if got is None:
            raise UnknownGenerator(f"no generator or element named {name!r}")
        return got

    def _resolve_cycles(self, token: str) -> int | None:
        if not perms.looks_like_cycles(token):
            return None
        if self._perm_index is not None:
            try:
                p = perms.parse_cycles(token, degree=len(self.perm_elems[0]))
            except ParseError:
                return None
            return self._perm_index.get(p)
        if self.components:
            hits = []
            for comp in self.components:
                sub = comp.group._resolve_cycles(token)
                if sub is not None:
                    hits.append(comp.inject(sub))
            if len(hits) > 1:
                raise UnknownGenerator(f"cycle element {token!r} is ambiguous here")
            if hits:
                return hits[0]
        return None

    @cached_property
    def labels(self) -> list[str]:
        if self._labels is not None:
            return self._labels
        if self.perm_elems is not None:
            return [perms.format_cycles(p) for p in self.perm_elems]
        if self.components:
            out = []
            for x in range(self.n):
                parts = []
                for comp in self.components:
                    d = comp.digit(x)
                    if d != 0:
                        parts.append(_remap_word(comp.group.label_of(d), comp.rename))
                out.append("*".join(parts) if parts else "1")
            return out
        return self._bfs_labels()

    def _bfs_labels(self) -> list[str]:
        names = list(self.gens)
        elems, deriv = bfs_closure(0, [self.gens[s] for s in names], self.mul)
        if len(elems) != self.n:
            # bindings do not generate; indices are still unambiguous
            return [f"#{i}" for i in range(self.n)]
        words: dict[int, list[str]] = {0: []}
        for e in elems[1:]:
            parent, pos = deriv[e]
            words[e] = words[parent] + [names[pos]]
        return [_compress_word(words[i]) for i in range(self.n)]

    def label_of(self, x: int) -> str:
        return self.labels[x]

    # -- generating sequences --

    @cached_property
    def greedy_gens(self) -> tuple[int, ...]:
        """A short generating sequence: the highest-order element first, then
        repeatedly whichever element grows the closure most; ties break to the
        lowest index.  Deterministic."""
        if self.n == 1:
            return ()
        orders = self.element_orders
        first = int(np.lexsort((np.arange(self.n), -orders))[0])
        chosen = [first]
        have = set(bfs_closure(0, chosen, self.mul)[0])
        while len(have) < self.n:
            best, best_size = -1, -1
            for x in range(self.n):
                if x in have:
                    continue
                size = len(bfs_closure(0, chosen + [x], self.mul)[0])
                if size > best_size:
                    best, best_size = x, size
            chosen.append(best)
            have = set(bfs_closure(0, chosen, self.mul)[0])
        return tuple(chosen)

    def bfs_levels(self, gens: tuple[int, ...]) -> list:
        """(closure elements in BFS order, derivations) for each prefix of
        ``gens``; cached per generator tuple."""
        if gens not in self._bfs_cache:
            self._bfs_cache[gens] = [
                bfs_closure(0, list(gens[: i + 1]), self.mul) for i in range(len(gens))
            ]
        return self._bfs_cache[gens]

    # -- subgroups --

    def subgroup(self, generators, limit: int = SUBGROUP_LIMIT) -> "Subgroup":
        gen_elems = [
            self.evaluate_word(g) if isinstance(g, str) else int(g) for g in generators
        ]
        elems, _ = bfs_closure(0, gen_elems, self.mul, limit=limit)
        return Subgroup.from_elements(self, sorted(elems), gen_elems)

    def sylow(self, p: int) -> "Subgroup":
        """A Sylow p-subgroup, grown through normalizers; deterministic."""
        target = 1
        m = self.n
        while m % p == 0:
            target *= p
            m //= p
        cur = [0]
        cur_set = {0}
        gens_used: list[int] = []
        while len(cur) < target:
            found = None
            for x in self._normalizer_of(cur):
                if x in cur_set:
                    continue
                # order of the coset x<cur> inside the normalizer quotient
                k, y = 1, x
                while y not in cur_set:
                    y = self.mul(y, x)
                    k += 1
                if k % p == 0:
                    found = self.power(x, k // p)
                    break
            if found is None:
                raise RuntimeError("sylow growth stalled; table is inconsistent")
            gens_used.append(found)
            cur = sorted(bfs_closure(0, gens_used, self.mul)[0])
            cur_set = set(cur)
        return Subgroup.from_elements(self, cur, gens_used or [0])

    def _normalizer_of(self, elems: list[int]) -> list[int]:
        eset = set(elems)
        arr = np.asarray(sorted(eset), dtype=np.int64)
        out = []
        for g in range(self.n):
            conj = self.table[self.table[g, arr], self.inv[g]]
            if all(int(c) in eset for c in conj):
                out.append(g)
        return out

    @property
    def table_hash(self) -> str:
        return hashlib.sha256(self.table.astype(np.int32).tobytes()).hexdigest()

    def __repr__(self) -> str:
        src = self.expr_text or "table"
        return f"<TableGroup order={self.n} from {src!r}>"


def _compress_word(names: list[str]) -> str:
    if not names:
        return "1"
    out = []
    i = 0
    while i < len(names):
        j = i
        while j < len(names) and names[j] == names[i]:
            j += 1
        out.append(names[i] if j - i == 1 else f"{names[i]}^{j - i}")
        i = j
    return "*".join(out)


def _remap_word(word: str, rename: dict[str, str]) -> str:
    if not rename or word == "1" or word.startswith("#"):
        return word
    parts = []
    for name, exp in tokenize_word(word):
        name = rename.get(name, name)
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts)


@dataclass
class Subgroup:
    """A subgroup captured as sorted ambient elements plus its own table."""

    ambient: object
    elements: list
    gen_elems: list
    group: TableGroup
    to_ambient: list

    @staticmethod
    def from_elements(ambient, elements: list, gen_elems: list) -> "Subgroup":
        index = {e: i for i, e in enumerate(elements)}
        s = len(elements)
        if isinstance(ambient, TableGroup):
            arr = np.asarray(elements, dtype=np.int64)
            back = np.zeros(ambient.n, dtype=np.int64)
            back[arr] = np.arange(s)
            tab = back[ambient.table[np.ix_(arr, arr)]]
        else:
            tab = np.zeros((s, s), dtype=np.int64)
            for i, a in enumerate(elements):
                for j, b in enumerate(elements):
                    tab[i, j] = index[ambient.mul(a, b)]
        gens = {f"g{k + 1}": index[e] for k, e in enumerate(gen_elems)}
        labels = [ambient.label_of(e) for e in elements]
        grp = TableGroup(tab.astype(np.int32), gens, labels=labels)
        return Subgroup(ambient, elements, gen_elems, grp, list(elements))

    @property
    def order(self) -> int:
        return len(self.elements)


# --- quotients ------------------------------------------------------------------


def quotient_group(g: TableGroup, normal_elems: list[int], *, check: bool = True) -> TableGroup:
    n = g.n
    nset = {int(e) for e in normal_elems}
    arr = np.asarray(sorted(nset), dtype=np.int64)
    if check:
        idx = np.arange(n)
        for a in sorted(nset):
            conj = g.table[g.table[idx, a], g.inv[idx]]
            if not all(int(c) in nset for c in conj):
                raise NotNormal(
                    f"element {g.label_of(a)} has conjugates outside the subgroup"
                )
    cosets = g.table[arr[:, None], np.arange(n)[None, :]]
    rep = cosets.min(axis=0)
    uniq = np.unique(rep)
    new_idx = np.zeros(n, dtype=np.int64)
    new_idx[uniq] = np.arange(len(uniq))
    tab = new_idx[rep[g.table[np.ix_(uniq, uniq)]]]
    gens = {name: int(new_idx[rep[e]]) for name, e in g.gens.items()}
    return TableGroup(tab.astype(np.int32), gens)


# --- builders --------------------------------------------------------------------


def build_cyclic(n: int) -> TableGroup:
    if n > TABLE_LIMIT:
        raise OrderLimitExceeded(f"C({n}) exceeds table limit")
    idx = np.arange(n, dtype=np.int64)
    table = (idx[:, None] + idx[None, :]) % n
    labels = ["1"] + [("a" if k == 1 else f"a^{k}") for k in range(1, n)]
    return TableGroup(table.astype(np.int32), {"a": 1 % n}, labels=labels)


def build_elem_abelian(p: int, k: int) -> TableGroup:
    n = p**k
    if n > TABLE_LIMIT:
        raise OrderLimitExceeded(f"EA({p},{k}) exceeds table limit")
    idx = np.arange(n, dtype=np.int64)
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(k):
        d = (idx // p**i) % p
        table += ((d[:, None] + d[None, :]) % p) * p**i
    gens = {f"a{i + 1}": p**i for i in range(k)}
    return TableGroup(table.astype(np.int32), gens)


def build_dihedral(n: int) -> TableGroup:
    m = 2 * n
    if m > TABLE_LIMIT:
        raise OrderLimitExceeded(f"D({n}) exceeds table limit")
    i = np.arange(m, dtype=np.int64)
    rot, flip = i % n, i // n
    ri, rj = rot[:, None], rot[None, :]
    fi, fj = flip[:, None], flip[None, :]
    table = (fi ^ fj) * n + np.where(fi == 0, ri + rj, ri - rj) % n
    return TableGroup(table.astype(np.int32), {"a": 1 % n, "b": n})


def build_dicyclic(n: int) -> TableGroup:
    m = 4 * n
    if m > TABLE_LIMIT:
        raise OrderLimitExceeded(f"Q({n}) exceeds table limit")
    tn = 2 * n
    i = np.arange(m, dtype=np.int64)
    rot, flip = i % tn, i // tn
    ri, rj = rot[:, None], rot[None, :]
    fi, fj = flip[:, None], flip[None, :]
    newrot = (np.where(fi == 0, ri + rj, ri - rj) + ((fi & fj) == 1) * n) % tn
    table = (fi ^ fj) * tn + newrot
    return TableGroup(table.astype(np.int32), {"a": 1, "b": tn})


def build_perm_group(degree: int, gen_perms: list[perms.Perm]) -> TableGroup:
    ident = perms.identity_perm(degree)
    closure, _ = bfs_closure(ident, list(gen_perms), perms.compose)
    n = len(closure)
    if n > TABLE_LIMIT:
        raise OrderLimitExceeded(f"permutation closure has {n} elements")
    elems = [ident] + sorted(e for e in closure if e != ident)
    mat = np.asarray(elems, dtype=np.int32)
    index = {mat[i].tobytes(): i for i in range(n)}
    table = np.zeros((n, n), dtype=np.int32)
    for i in range(n):
        prods = np.ascontiguousarray(mat[:, mat[i]])  # row j: elems[i] * elems[j]
        table[i] = [index[prods[j].tobytes()] for j in range(n)]
    gens = {perms.format_cycles(p): index[np.asarray(p, dtype=np.int32).tobytes()] for p in gen_perms}
    return TableGroup(table, gens, perm_elems=elems)


def build_symmetric(n: int) -> TableGroup:
    if _factorial(n) > TABLE_LIMIT:
        raise OrderLimitExceeded(f"S({n}) exceeds table limit")
    if n == 1:
        return build_perm_group(1, [(0,)])
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return build_perm_group(n, [cycle, swap] if n > 2 else [swap])


def build_alternating(n: int) -> TableGroup:
    if n <= 2:
        d = max(n, 1)
        return build_perm_group(d, [perms.identity_perm(d)])
    if _factorial(n) // 2 > TABLE_LIMIT:
        raise OrderLimitExceeded(f"A({n}) exceeds table limit")
    three = tuple([1, 2, 0] + list(range(3, n)))
    if n == 3:
        gens = [three]
    elif n % 2 == 1:
        gens = [three, tuple(list(range(1, n)) + [0])]
    else:
        gens = [three, tuple([0] + list(range(2, n)) + [1])]
    return build_perm_group(n, gens)


def _renamed_bindings(groups: list[TableGroup]) -> list[dict[str, str]]:
    """Deduplicate generator names across factors: a name used by several
    factors gets a 1-based position suffix in each of them."""
    counts: dict[str, int] = {}
    for g in groups:
        for name in g.gens:
            counts[name] = counts.get(name, 0) + 1
    out = []
    for pos, g in enumerate(groups, start=1):
        out.append(
            {name: (f"{name}_{pos}" if counts[name] > 1 else name) for name in g.gens}
        )
    return out


def build_product(factors: list[TableGroup]) -> TableGroup:
    for f in factors:
        if not isinstance(f, TableGroup):
            raise OrderLimitExceeded("direct-product factors must fit the dense-table limit")
    n = 1
    for f in factors:
        n *= f.n
    if n > TABLE_LIMIT:
        raise OrderLimitExceeded(f"direct product of order {n} exceeds table limit")
    strides = []
    rest = n
    for f in factors:
        rest //= f.n
        strides.append(rest)
    idx = np.arange(n, dtype=np.int64)
    table = np.zeros((n, n), dtype=np.int64)
    for f, r in zip(factors, strides):
        d = (idx // r) % f.n
        table += f.table.astype(np.int64)[d[:, None], d[None, :]] * r
    renames = _renamed_bindings(factors)
    gens: dict[str, int] = {}
    comps: list[_Component] = []
    for f, r, ren in zip(factors, strides, renames):
        for name, e in f.gens.items():
            gens[ren[name]] = int(e) * r
        comps.append(_Component(f, r, ren))
    return TableGroup(table.astype(np.int32), gens, components=comps)


def build_semidirect(
    base: TableGroup, actor: TableGroup, clauses: tuple[ActionClause, ...]
) -> TableGroup:
    m, q = base.n, actor.n
    n = m * q
    if n > TABLE_LIMIT:
        raise OrderLimitExceeded(f"semidirect product of order {n} exceeds table limit")
    overlap = set(base.gens) & set(actor.gens)
    if overlap:
        raise InvalidAction(
            f"generator names {sorted(overlap)} appear on both sides; rename with gens()"
        )
    per_gen: dict[str, dict[str, str]] = {t: {} for t in actor.gens}
    for cl in clauses:
        t = cl.actor_gen
        if t is None:
            if len(actor.gens) != 1:
                raise InvalidAction(
                    f"clause {cl.text()!r} omits the acting generator but the actor has several"
                )
            t = next(iter(actor.gens))
        if t not in actor.gens:
            raise InvalidAction(f"unknown acting generator {t!r}")
        if cl.base_gen not in base.gens:
            raise InvalidAction(f"unknown base generator {cl.base_gen!r}")
        if cl.base_gen in per_gen[t]:
            raise InvalidAction(f"duplicate clause for {t}.{cl.base_gen}")
        per_gen[t][cl.base_gen] = cl.word
    base_names = list(base.gens)
    belems, bderiv = bfs_closure(0, [base.gens[s] for s in base_names], base.mul)
    if len(belems) != m:
        raise InvalidAction("base generators do not generate the base group")
    # conj_of_gen[t][x] = t^-1 x t, extended multiplicatively from the clauses
    conj_of_gen: dict[str, np.ndarray] = {}
    for t in actor.gens:
        images = {
            pos: base.gens[s] if per_gen[t].get(s) is None else base.evaluate_word(per_gen[t][s])
            for pos, s in enumerate(base_names)
        }
        amap = np.zeros(m, dtype=np.int64)
        for e in belems[1:]:
            parent, pos = bderiv[e]
            amap[e] = base.table[amap[parent], images[pos]]
        _require_automorphism(base, amap, f"action of {t!r}")
        conj_of_gen[t] = amap
    actor_names = list(actor.gens)
    aelems, aderiv = bfs_closure(0, [actor.gens[s] for s in actor_names], actor.mul)
    if len(aelems) != q:
        raise InvalidAction("acting generators do not generate the acting group")
    conj_by = np.zeros((q, m), dtype=np.int64)
    conj_by[0] = np.arange(m)
    for u in aelems[1:]:
        parent, pos = aderiv[u]
        conj_by[u] = conj_of_gen[actor_names[pos]][conj_by[parent]]
    # the extension must respect the actor's own relations
    for u in range(q):
        for s in actor_names:
            v = actor.mul(u, actor.gens[s])
            if not (conj_by[v] == conj_of_gen[s][conj_by[u]]).all():
                raise InvalidAction(
                    "action clauses are inconsistent with the acting group's relations"
                )
    # pair (b, t) <-> index t*m + b stands for the product b*t
    un_conj = np.zeros((q, m), dtype=np.int64)
    for t in range(q):
        un_conj[t, conj_by[t]] = np.arange(m)  # x -> t x t^-1
    outer = np.zeros((n, n), dtype=np.int64)
    for t1 in range(q):
        moved = base.table.astype(np.int64)[:, un_conj[t1]]
        for t2 in range(q):
            tt = actor.mul(t1, t2)
            outer[t1 * m:(t1 + 1) * m, t2 * m:(t2 + 1) * m] = moved + tt * m
    renames = _renamed_bindings([base, actor])
    gens = {renames[0][s]: int(e) for s, e in base.gens.items()}
    gens.update({renames[1][s]: int(e) * m for s, e in actor.gens.items()})
    comps = [_Component(base, 1, renames[0]), _Component(actor, m, renames[1])]
    return TableGroup(outer.astype(np.int32), gens, components=comps)


def _require_automorphism(g: TableGroup, amap: np.ndarray, what: str) -> None:
    if len(np.unique(amap)) != g.n or int(amap[0]) != 0:
        raise InvalidAction(f"{what} is not a bijection fixing the identity")
    if not (amap[g.table] == g.table[amap[:, None], amap[None, :]]).all():
        raise InvalidAction(f"{what} is not an automorphism of the base")


def build_central_product(
    left: TableGroup, right: TableGroup, left_word: str, right_word: str
) -> TableGroup:
    """Quotient of left x right identifying the two central words.  Works
    pairwise on the factor tables so only the quotient, never the full
    product, has to fit the dense-table limit."""
    u = left.evaluate_word(left_word)
    v = right.evaluate_word(right_word)
    if u not in set(left.center_elements):
        raise CentralIdentificationError(f"{left_word!r} is not central on the left side")
    if v not in set(right.center_elements):
        raise CentralIdentificationError(f"{right_word!r} is not central on the right side")
    d = left.element_order(u)
    if d != right.element_order(v):
        raise CentralIdentificationError(
            f"identified elements have orders {d} != {right.element_order(v)}"
        )
    nl, nr = left.n, right.n
    m = nl * nr // d
    if m > TABLE_LIMIT:
        raise OrderLimitExceeded(f"central product of order {m} exceeds table limit")
    # pair (l, r) <-> flat index l*nr + r; identify (l, r) ~ (l*u, r*v^-1) and
    # take the least flat index of each orbit as the coset representative
    lmul = left.table[:, u].astype(np.int64)
    rmul = right.table[:, right.inv_of(v)].astype(np.int64)
    cl = np.repeat(np.arange(nl, dtype=np.int64), nr)
    cr = np.tile(np.arange(nr, dtype=np.int64), nl)
    canon = cl * nr + cr
    for _ in range(d - 1):
        cl = lmul[cl]
        cr = rmul[cr]
        canon = np.minimum(canon, cl * nr + cr)
    reps = np.flatnonzero(canon == np.arange(nl * nr))
    pos = np.full(nl * nr, -1, dtype=np.int64)
    pos[reps] = np.arange(m)
    flat_to_q = pos[canon]
    la = (reps // nr).astype(np.int64)
    ra = (reps % nr).astype(np.int64)
    tab = np.empty((m, m), dtype=np.int32)
    ltab = left.table.astype(np.int64)
    rtab = right.table.astype(np.int64)
    for a in range(m):
        tab[a] = flat_to_q[ltab[la[a], la] * nr + rtab[ra[a], ra]]
    renames = _renamed_bindings([left, right])
    gens = {renames[0][s]: int(flat_to_q[int(e) * nr]) for s, e in left.gens.items()}
    gens.update({renames[1][s]: int(flat_to_q[int(e)]) for s, e in right.gens.items()})
    return TableGroup(tab, gens)


# --- twisted products --------------------------------------------------------------


class _DGen:
    """One twist generator: an involution acting componentwise; None entries
    act as the identity on that component."""

    def __init__(self, name: str, actions: list[np.ndarray | None]):
        self.name = name
        self.actions = actions


class TwistedGroup:
    """Direct product of dense components extended by a rank-r elementary
    abelian 2-group of commuting componentwise involutory automorphisms.

    Elements are (component index tuple, bits); bit i set means twist i
    participates.  (b1, d1)(b2, d2) = (b1 * d1(b2), d1 xor d2).
    """

    def __init__(
        self,
        components: list[TableGroup],
        comp_names: list[str],
        dgens: list[_DGen],
        expr_text: str | None = None,
    ):
        if len(comp_names) != len(components):
            raise ValueError("one name per component")
        self.components = components
        self.comp_names = _dedupe_names(comp_names)
        self.dgens = dgens
        self.rank = len(dgens)
        self.expr_text = expr_text
        order = 1 << self.rank
        for c in components:
            order *= c.n
        self.order = order
        self._action_memo: dict[tuple[int, int], np.ndarray | None] = {}
        self._masks = [
            sum(1 << bit for bit, d in enumerate(dgens) if d.actions[ci] is not None)
            for ci in range(len(components))
        ]
        self.renames = _renamed_bindings(components)
        self.gens: dict[str, object] = {}
        for ci, (c, ren) in enumerate(zip(components, self.renames)):
            for name, e in c.gens.items():
                self.gens[ren[name]] = self._inject(ci, int(e))
        for bit, d in enumerate(dgens):
            if d.name in self.gens:
                raise ValueError(f"twist generator name {d.name!r} collides")
            self.gens[d.name] = (self._zero_tuple(), 1 << bit)
        self._validate()

    def _zero_tuple(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.components)

    def _inject(self, ci: int, e: int):
        base = [0] * len(self.components)
        base[ci] = e
        return (tuple(base), 0)

    def _validate(self) -> None:
        for d in self.dgens:
            if len(d.actions) != len(self.components):
                raise ValueError(f"twist {d.name!r} must list one action per component")
            for ci, act in enumerate(d.actions):
                if act is None:
                    continue
                g = self.components[ci]
                _require_automorphism(g, act, f"twist {d.name!r} on {self.comp_names[ci]}")
                if not (act[act] == np.arange(g.n)).all():
                    raise ValueError(
                        f"twist {d.name!r} is not involutory on {self.comp_names[ci]}"
                    )
        for ci in range(len(self.components)):
            acts = [d.actions[ci] for d in self.dgens if d.actions[ci] is not None]
            for i in range(len(acts)):
                for j in range(i + 1, len(acts)):
                    if not (acts[i][acts[j]] == acts[j][acts[i]]).all():
                        raise ValueError(
                            f"twists do not commute on component {self.comp_names[ci]}"
                        )
        for bits in range(1, 1 << self.rank):
            if all(self._composed(ci, bits) is None for ci in range(len(self.components))):
                raise ValueError("twist bits act unfaithfully (a combination is trivial)")

    def _composed(self, ci: int, bits: int) -> np.ndarray | None:
        """Composite action of twist bits on component ci; None is identity."""
        key = (ci, bits & self._masks[ci])
        if key[1] == 0:
            return None
        if key not in self._action_memo:
            out: np.ndarray | None = None
            for bit, d in enumerate(self.dgens):
                if key[1] & (1 << bit) and d.actions[ci] is not None:
                    act = d.actions[ci]
                    out = act.copy() if out is None else act[out]
            self._action_memo[key] = out
        return self._action_memo[key]

    # -- element interface --

    @property
    def identity(self):
        return (self._zero_tuple(), 0)

    def mul(self, x, y):
        (b1, d1), (b2, d2) = x, y
        moved = []
        for ci, g in enumerate(self.components):
            act = self._composed(ci, d1)
            e = b2[ci] if act is None else int(act[b2[ci]])
            moved.append(int(g.table[b1[ci], e]))
        return (tuple(moved), d1 ^ d2)

    def inv_of(self, x):
        b, d = x
        moved = []
        for ci, g in enumerate(self.components):
            e = int(g.inv[b[ci]])
            act = self._composed(ci, d)
            moved.append(e if act is None else int(act[e]))
        return (tuple(moved), d)

    def power(self, x, k: int):
        if k < 0:
            x, k = self.inv_of(x), -k
        out, base = self.identity, x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def element_order(self, x) -> int:
        k = 1
        cur = x
        while cur != self.identity:
            cur = self.mul(cur, x)
            k += 1
        return k

    def elements(self):
        """Every element, ordered by (component tuple, bits).  Only sensible
        for small instances; sweeps should restrict support instead."""
        import itertools

        for base in itertools.product(*(range(c.n) for c in self.components)):
            for bits in range(1 << self.rank):
                yield (base, bits)

    def support_elements(self, support: list[int]):
        """Elements with trivial base part off the given components; every
        twist-bit combination is included."""
        import itertools

        ranges = [
            range(c.n) if ci in support else range(1)
            for ci, c in enumerate(self.components)
        ]
        for base in itertools.product(*ranges):
            for bits in range(1 << self.rank):
                yield (base, bits)

    def resolve_support(self, names) -> list[int] | None:
        if names is None:
            return None
        out = set()
        for s in names:
            s = str(s).strip()
            if s.isdigit():
                i = int(s)
                if not 0 <= i < len(self.components):
                    raise UnknownGenerator(f"component index {i} out of range")
            elif s in self.comp_names:
                i = self.comp_names.index(s)
            else:
                raise UnknownGenerator(f"unknown component {s!r}; have {self.comp_names}")
            out.add(i)
        return sorted(out)

    def evaluate_word(self, word: str):
        out = self.identity
        for name, exp in tokenize_word(word):
            out = self.mul(out, self.power(self._resolve_factor(name), exp))
        return out

    def _resolve_factor(self, name: str):
        if name == "1":
            return self.identity
        if name in self.gens:
            return self.gens[name]
        if perms.looks_like_cycles(name):
            hits = []
            for ci, g in enumerate(self.components):
                got = g._resolve_cycles(name)
                if got is not None:
                    hits.append((ci, got))
            if len(hits) > 1:
                raise UnknownGenerator(f"cycle element {name!r} is ambiguous here")
            if hits:
                return self._inject(*hits[0])
        raise UnknownGenerator(f"no generator or element named {name!r}")

    def label_of(self, x) -> str:
        b, d = x
        parts = []
        for ci, (g, ren) in enumerate(zip(self.components, self.renames)):
            if b[ci] != 0:
                parts.append(_remap_word(g.label_of(b[ci]), ren))
        for bit, dg in enumerate(self.dgens):
            if d & (1 << bit):
                parts.append(dg.name)
        return "*".join(parts) if parts else "1"

    def subgroup(self, generators, limit: int = SUBGROUP_LIMIT) -> Subgroup:
        gen_elems = [
            self.evaluate_word(g) if isinstance(g, str) else g for g in generators
        ]
        elems, _ = bfs_closure(self.identity, gen_elems, self.mul, limit=limit)
        return Subgroup.from_elements(self, sorted(elems), gen_elems)

    def __repr__(self) -> str:
        src = self.expr_text or "twisted"
        return f"<TwistedGroup order={self.order} from {src!r}>"


def _dedupe_names(names: list[str]) -> list[str]:
    counts: dict[str, int] = {}
    for s in names:
        counts[s] = counts.get(s, 0) + 1
    seen: dict[str, int] = {}
    out = []
    for s in names:
        if counts[s] == 1:
            out.append(s)
        else:
            seen[s] = seen.get(s, 0) + 1
            out.append(f"{s}_{seen[s]}")
    return out


# --- table validation -----------------------------------------------------------


def check_table(table) -> bool:
    """Full associativity/identity/inverse validation; cubic time, so refused
    above CHECK_TABLE_LIMIT elements.  Expects the identity at index 0."""
    table = np.asarray(table)
    n = table.shape[0]
    if n > CHECK_TABLE_LIMIT:
        raise ValueError(f"check_table is limited to {CHECK_TABLE_LIMIT} elements")
    if table.ndim != 2 or table.shape != (n, n):
        return False
    if table.min() < 0 or table.max() >= n:
        return False
    if not (table[0] == np.arange(n)).all() or not (table[:, 0] == np.arange(n)).all():
        return False
    for row in table:
        if len(np.unique(row)) != n:
            return False
    for col in table.T:
        if len(np.unique(col)) != n:
            return False
    for i in range(n):
        if not (table[table[i], :] == table[i][table]).all():
            return False
    return True


# --- expression realization --------------------------------------------------------


def expr_order(expr: GroupExpr | str, resolver=None) -> int:
    """Order of the group an expression denotes, computed without realizing
    direct products (their factors multiply).  Nodes that need inspection
    (quotients, permutation closures, central identifications) realize their
    ingredients, which are small by construction."""
    if isinstance(expr, str):
        expr = parse_expr(expr)
    if isinstance(expr, Cyclic):
        return expr.n
    if isinstance(expr, ElemAbelian):
        return expr.p**expr.k
    if isinstance(expr, Dihedral):
        return 2 * expr.n
    if isinstance(expr, Dicyclic):
        return 4 * expr.n
    if isinstance(expr, Symmetric):
        return _factorial(expr.n)
    if isinstance(expr, Alternating):
        return max(1, _factorial(expr.n) // 2)
    if isinstance(expr, DirectProduct):
        out = 1
        for f in expr.factors:
            out *= expr_order(f, resolver)
        return out
    if isinstance(expr, SemidirectProduct):
        return expr_order(expr.base, resolver) * expr_order(expr.actor, resolver)
    if isinstance(expr, Renamed):
        return expr_order(expr.inner, resolver)
    if isinstance(expr, Named):
        return _resolve_named(expr.label, resolver).order_hint()
    if isinstance(expr, CentralProduct):
        left = construct(expr.left, resolver)
        right = construct(expr.right, resolver)
        u = left.evaluate_word(expr.left_word)
        return left.order * right.order // left.element_order(u)
    if isinstance(expr, Quotient):
        g = construct(expr.inner, resolver)
        return g.order // g.subgroup(list(expr.words)).order
    if isinstance(expr, PermGroupExpr):
        return construct(expr, resolver).order
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _resolve_named(label: str, resolver):
    if resolver is None:
        from . import registry

        resolver = registry.resolve
    return resolver(label)


def construct(expr: GroupExpr | str, resolver=None):
    """Realize an expression (or its text form) as a TableGroup, or as a
    TwistedGroup when a direct product exceeds the dense-table limit."""
    if isinstance(expr, str):
        expr = parse_expr(expr)
    g = _construct(expr, resolver)
    if getattr(g, "expr_text", None) is None:
        g.expr_text = expr.text()
    return g


def _construct(expr: GroupExpr, resolver):
    if isinstance(expr, Cyclic):
        return build_cyclic(expr.n)
    if isinstance(expr, ElemAbelian):
        return build_elem_abelian(expr.p, expr.k)
    if isinstance(expr, Dihedral):
        return build_dihedral(expr.n)
    if isinstance(expr, Dicyclic):
        return build_dicyclic(expr.n)
    if isinstance(expr, Symmetric):
        return build_symmetric(expr.n)
    if isinstance(expr, Alternating):
        return build_alternating(expr.n)
    if isinstance(expr, PermGroupExpr):
        gen_perms = [perms.parse_cycles(s, degree=expr.degree) for s in expr.gens]
        return build_perm_group(expr.degree, gen_perms)
    if isinstance(expr, DirectProduct):
        if expr_order(expr, resolver) <= TABLE_LIMIT:
            return build_product([construct(f, resolver) for f in expr.factors])
        return _build_twisted_product(expr, resolver)
    if isinstance(expr, SemidirectProduct):
        base = construct(expr.base, resolver)
        actor = construct(expr.actor, resolver)
        if not isinstance(base, TableGroup) or not isinstance(actor, TableGroup):
            raise OrderLimitExceeded("sd() sides must fit the dense-table limit")
        return build_semidirect(base, actor, expr.clauses)
    if isinstance(expr, CentralProduct):
        left = construct(expr.left, resolver)
        right = construct(expr.right, resolver)
        if not isinstance(left, TableGroup) or not isinstance(right, TableGroup):
            raise OrderLimitExceeded("cp() sides must fit the dense-table limit")
        return build_central_product(left, right, expr.left_word, expr.right_word)
    if isinstance(expr, Quotient):
        g = construct(expr.inner, resolver)
        if not isinstance(g, TableGroup):
            raise OrderLimitExceeded("quo() needs a dense-table group")
        return quotient_group(g, g.subgroup(list(expr.words)).elements)
    if isinstance(expr, Renamed):
        return _apply_renames(construct(expr.inner, resolver), expr.names)
    if isinstance(expr, Named):
        return _resolve_named(expr.label, resolver).build()
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _apply_renames(g, names: tuple[str, ...]):
    old = list(g.gens)
    if len(names) != len(old):
        raise ParseError(f"gens() got {len(names)} names for {len(old)} generators: {old}")
    mapping = dict(zip(old, names))
    g.gens = {mapping[o]: g.gens[o] for o in old}
    if isinstance(g, TableGroup):
        g.__dict__.pop("labels", None)
        if g._labels is not None:
            g._labels = [_remap_word(w, mapping) for w in g._labels]
        if g.components:
            for comp in g.components:
                comp.rename = {k: mapping.get(v, v) for k, v in comp.rename.items()}
    else:
        for dg in g.dgens:
            dg.name = mapping.get(dg.name, dg.name)
        g.renames = [
            {k: mapping.get(v, v) for k, v in ren.items()} for ren in g.renames
        ]
    g.expr_text = None
    return g


def _build_twisted_product(expr: DirectProduct, resolver) -> TwistedGroup:
    factors = [construct(f, resolver) for f in expr.factors]
    flat: list[TableGroup] = []
    names: list[str] = []
    dgens: list[_DGen] = []
    for f, fe in zip(factors, expr.factors):
        if isinstance(f, TwistedGroup):
            offset = len(flat)
            flat.extend(f.components)
            names.extend(f.comp_names)
            for d in f.dgens:
                dgens.append(_DGen(d.name, [None] * offset + list(d.actions)))
        else:
            flat.append(f)
            names.append(fe.label if isinstance(fe, Named) else fe.text())
    for d in dgens:
        d.actions.extend([None] * (len(flat) - len(d.actions)))
    return TwistedGroup(flat, names, dgens, expr_text=expr.text())
