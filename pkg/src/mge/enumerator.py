"""Exhaustive enumeration of small group orders, with an independent oracle.

Every group whose derived subgroup is proper has a normal subgroup of prime
index (pull back an index-p subgroup of the abelianization), so recursing on
"base of order n/p extended by a cyclic group of order p" reaches every
non-perfect isomorphism class.  The perfect classes in range come from a
fixed seed list that is verified on load rather than discovered.

An extension of N by C_p is pinned by a pair (alpha, a): alpha the
conjugation automorphism induced by a chosen coset generator t, and a = t^p,
subject to alpha(a) = a and alpha^p = conjugation-by-a.  Candidates are
over-generated from such pairs, deduped by invariant buckets plus explicit
isomorphism tests, and pinned to canonical regular-representation recipes so
repeated runs emit byte-identical catalogs.

The oracle reads Cayley's theorem backwards: isomorphism classes of order n
are exactly the conjugacy classes of regular subgroups of the symmetric group
of degree n, so for n <= 10 it searches for regular subgroups directly.  Its
only shared machinery with the enumerator is the final dedupe.
"""

from __future__ import annotations

import itertools
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._version import ENGINE_VERSION
from .errors import (
    AutBudgetExceeded,
    IncompleteSeedSet,
    OutOfRange,
    TierLimitExceeded,
)
from .expressions import GroupExpr, parse_expr
from .groups import TableGroup, construct
from .morphisms import (
    Fingerprint,
    ea_basis_and_coords,
    elem_abelian_prime,
    is_isomorphic,
    rich_invariant_key,
    search_monomorphisms,
)
from .perms import format_cycles

AUT_MATERIALIZE_LIMIT = 1 << 20
HARD_ORDER_LIMIT = 256
ORACLE_LIMIT = 10
TIER_EXTRA = {1: frozenset(), 2: frozenset({72, 96, 120, 144}),
              3: frozenset({72, 96, 120, 144, 81, 243})}


def default_tier() -> int:
    raw = os.environ.get("MGE_TIER", "2")
    try:
        tier = int(raw)
    except ValueError:
        raise OutOfRange(f"MGE_TIER must be 1, 2, or 3, not {raw!r}")
    if tier not in TIER_EXTRA:
        raise OutOfRange(f"MGE_TIER must be 1, 2, or 3, not {raw!r}")
    return tier


def order_allowed(n: int, tier: int) -> bool:
    return 1 <= n <= 64 or n in TIER_EXTRA[tier]


def cache_dir() -> Path:
    raw = os.environ.get("MGE_CACHE_DIR")
    if raw:
        return Path(raw).expanduser()
    return Path.home() / ".cache" / "mge"


_BUNDLED_DIR = Path(__file__).parent / "data" / "catalogs"


# --- catalogs ---------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    recipe: GroupExpr
    group: TableGroup
    fingerprint: Fingerprint
    table_hash: str

    @property
    def recipe_text(self) -> str:
        return self.recipe.text()

    def to_json(self) -> dict:
        return {
            "recipe": self.recipe_text,
            "fingerprint": self.fingerprint.canonical_bytes().decode(),
            "table_hash": self.table_hash,
        }


@dataclass
class Catalog:
    order: int
    entries: list[CatalogEntry]
    provenance: str  # cyclic-extension | oracle

    def __len__(self) -> int:
        return len(self.entries)

    def groups(self) -> list[TableGroup]:
        return [e.group for e in self.entries]

    def find_isomorphic(self, g: TableGroup) -> CatalogEntry | None:
        fp = Fingerprint.of(g)
        for e in self.entries:
            if e.fingerprint == fp and is_isomorphic(g, e.group) is not None:
                return e
        return None

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "engine_version": ENGINE_VERSION,
            "method": self.provenance,
            "entries": [e.to_json() for e in self.entries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(doc: dict) -> "Catalog":
        if doc.get("engine_version") != ENGINE_VERSION:
            raise ValueError("catalog written by a different engine version")
        order = doc["order"]
        entries = []
        for raw in doc["entries"]:
            expr = parse_expr(raw["recipe"])
            g = construct(expr)
            if g.order != order:
                raise ValueError(f"catalog entry {raw['recipe']!r} has wrong order")
            if g.table_hash != raw["table_hash"]:
                raise ValueError(f"catalog entry {raw['recipe']!r} fails its table hash")
            fp = Fingerprint.of(g)
            if fp.canonical_bytes().decode() != raw["fingerprint"]:
                raise ValueError(f"catalog entry {raw['recipe']!r} fails its fingerprint")
            entries.append(CatalogEntry(expr, g, fp, raw["table_hash"]))
        return Catalog(order, entries, doc["method"])


def regular_recipe(g: TableGroup) -> str:
    """A self-contained expression for g: its right-regular representation,
    generated by the columns of a greedy generating sequence."""
    if g.n == 1:
        return "C(1)"
    cycles = [
        format_cycles(tuple(int(v) for v in g.table[:, x])) for x in g.greedy_gens
    ]
    return f"perm({g.n}; " + ", ".join(cycles) + ")"


def _canonical_entry(g: TableGroup) -> CatalogEntry:
    expr = parse_expr(regular_recipe(g))
    canon = construct(expr)
    return CatalogEntry(expr, canon, Fingerprint.of(canon), canon.table_hash)


def _dedupe(candidates) -> list[CatalogEntry]:
    """Sequential reduce in deterministic generation order: invariant-key
    buckets first, explicit isomorphism tests only within a bucket."""
    buckets: dict[bytes, list[TableGroup]] = {}
    found: list[TableGroup] = []
    for g in candidates:
        reps = buckets.setdefault(rich_invariant_key(g), [])
        if any(is_isomorphic(g, r) is not None for r in reps):
            continue
        reps.append(g)
        found.append(g)
    entries = [_canonical_entry(g) for g in found]
    entries.sort(key=lambda e: (e.fingerprint.canonical_bytes(), e.recipe_text))
    return entries


# --- extension pairs over elementary abelian bases -------------------------------
#
# For an elementary abelian base every conjugation is trivial, so valid alphas
# are exactly the matrices of multiplicative order dividing p, taken up to
# GL-conjugacy: unipotent Jordan types when p equals the field characteristic,
# companion-block sums of irreducible factors of x^p - 1 otherwise.


def _poly_divmod(f: tuple, g: tuple, q: int) -> tuple[tuple, tuple]:
    f = list(f)
    dg = len(g) - 1
    lead_inv = pow(g[-1], -1, q)
    quo = [0] * max(len(f) - dg, 0)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * lead_inv % q
        quo[i - dg] = c
        if c:
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % q
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return tuple(quo), tuple(f)


def _monic_polys(degree: int, q: int):
    for coeffs in itertools.product(range(q), repeat=degree):
        yield coeffs + (1,)


def _poly_trim(coeffs: list) -> tuple:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _poly_add(a: tuple, b: tuple, q: int) -> tuple:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % q
    return _poly_trim(out)


def _poly_mulmod(a: tuple, b: tuple, f: tuple, q: int) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _poly_divmod(_poly_trim(out), f, q)[1]


def _poly_powmod(a: tuple, e: int, f: tuple, q: int) -> tuple:
    acc = (1,)
    while e:
        if e & 1:
            acc = _poly_mulmod(acc, a, f, q)
        a = _poly_mulmod(a, a, f, q)
        e >>= 1
    return acc


def _poly_gcd(a: tuple, b: tuple, q: int) -> tuple:
    while b != (0,):
        a, b = b, _poly_divmod(a, b, q)[1]
    inv = pow(a[-1], -1, q)
    return tuple(c * inv % q for c in a)


def _split_same_degree(f: tuple, d: int, q: int) -> list[tuple]:
    """Irreducible factors of monic squarefree f, all of known degree d.
    Gcd splitting against a fixed trial stream; trial division is hopeless
    here because d can run into the hundreds."""
    if len(f) - 1 == d:
        return [f]
    for degree in itertools.count(1):
        for u in _monic_polys(degree, q):
            if q == 2:
                # char 2 splits on the trace map u + u^2 + ... + u^(2^(d-1))
                w = u
                term = u
                for _ in range(d - 1):
                    term = _poly_mulmod(term, term, f, q)
                    w = _poly_add(w, term, q)
            else:
                w = _poly_add(_poly_powmod(u, (q**d - 1) // 2, f, q), (q - 1,), q)
            g = _poly_gcd(f, w, q)
            if 1 < len(g) < len(f):
                quo = _poly_divmod(f, g, q)[0]
                return _split_same_degree(g, d, q) + _split_same_degree(quo, d, q)


def _mult_order(q: int, p: int) -> int:
    acc, d = q % p, 1
    while acc != 1:
        acc = acc * q % p
        d += 1
    return d


def _factors_of_xp_minus_1(q: int, p: int) -> list[tuple]:
    """Monic irreducible factors over GF(q), ascending by (degree, coeffs).
    Squarefree since p != q: x - 1 plus (p-1)/d cyclotomic factors whose
    shared degree d is the multiplicative order of q mod p."""
    d = _mult_order(q, p)
    if d == 1:
        roots = [z for z in range(1, q) if pow(z, p, q) == 1]
        return sorted(((q - z) % q, 1) for z in roots)
    cyclo = _split_same_degree(tuple([1] * p), d, q)
    return [(q - 1, 1)] + sorted(cyclo)


def _companion(poly: tuple) -> np.ndarray:
    d = len(poly) - 1
    m = np.zeros((d, d), dtype=np.int64)
    for i in range(d - 1):
        m[i + 1, i] = 1
    for i in range(d):
        m[i, d - 1] = -poly[i]
    return m


def _jordan(size: int) -> np.ndarray:
    m = np.eye(size, dtype=np.int64)
    for i in range(size - 1):
        m[i + 1, i] = 1
    return m


def _block_diag(blocks: list[np.ndarray], k: int) -> np.ndarray:
    m = np.zeros((k, k), dtype=np.int64)
    at = 0
    for b in blocks:
        s = b.shape[0]
        m[at:at + s, at:at + s] = b
        at += s
    return m


def _partitions(k: int, maxpart: int):
    if k == 0:
        yield ()
        return
    for first in range(min(k, maxpart), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def _ea_alpha_matrices(q: int, k: int, p: int) -> list[np.ndarray]:
    if p == q:
        return [
            _block_diag([_jordan(s) for s in part], k)
            for part in _partitions(k, min(p, k))
        ]
    factors = _factors_of_xp_minus_1(q, p)
    degrees = [len(f) - 1 for f in factors]
    reps = []

    def rec(i: int, remaining: int, blocks: list[np.ndarray]):
        if i == len(factors):
            if remaining == 0:
                reps.append(_block_diag(blocks, k))
            return
        d = degrees[i]
        comp = _companion(factors[i]) % q
        for count in range(remaining // d, -1, -1):
            rec(i + 1, remaining - count * d, blocks + [comp] * count)

    rec(0, k, [])
    return reps


def _ea_alpha_pairs(base: TableGroup, q: int, p: int):
    """(alpha map, valid a list) pairs for an elementary abelian base."""
    k = 0
    while q**k < base.n:
        k += 1
    _, elem_of, vec_of = ea_basis_and_coords(base, q)
    for mat in _ea_alpha_matrices(q, k, p):
        amap = np.empty(base.n, dtype=np.int64)
        for e in range(base.n):
            v = np.asarray(vec_of[e], dtype=np.int64)
            amap[e] = elem_of[tuple(int(c) for c in (v @ mat) % q)]
        fixed = [e for e in range(base.n) if amap[e] == e]
        yield amap, fixed


# --- extension pairs over arbitrary bases -----------------------------------------


def _materialized_automorphisms(base: TableGroup) -> list[np.ndarray]:
    out = []
    for mo in search_monomorphisms(base, base, require_iso=True):
        arr = np.fromiter(
            (mo.mapping[x] for x in range(base.n)), dtype=np.int64, count=base.n
        )
        out.append(arr)
        if len(out) > AUT_MATERIALIZE_LIMIT:
            raise AutBudgetExceeded(
                f"automorphism group of a base of order {base.n} exceeds "
                f"{AUT_MATERIALIZE_LIMIT}; no extension path for it"
            )
    return out


def _aut_generators(auts: list[np.ndarray], n: int) -> list[np.ndarray]:
    """A greedy generating subset, taken in stream order."""
    ident = np.arange(n)
    have = {ident.tobytes()}
    gens: list[np.ndarray] = []
    for cand in auts:
        if cand.tobytes() in have:
            continue
        gens.append(cand)
        closure = {ident.tobytes(): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens:
                    c = g[f]
                    kb = c.tobytes()
                    if kb not in closure:
                        closure[kb] = c
                        nxt.append(c)
            frontier = nxt
        have = set(closure)
        if len(have) == len(auts):
            break
    return gens


def _generic_alpha_pairs(base: TableGroup, p: int):
    """(alpha map, valid a list) pairs for an arbitrary base, with alpha
    reduced modulo regradings that provably preserve the extension's
    isomorphism class: conjugating by an automorphism (relabel the base),
    composing with an inner map (move t inside its coset), and replacing t
    by a coprime power (pick another generator of the quotient)."""
    m = base.n
    table = base.table.astype(np.int64)
    auts = _materialized_automorphisms(base)
    idx = np.arange(m)

    conj = [table[table[b, idx], base.inv[b]] for b in range(m)]  # b y b^-1
    inner_rep: dict[bytes, int] = {}
    for b in range(m):
        inner_rep.setdefault(conj[b].tobytes(), b)
    center = [b for b in range(m) if (conj[b] == idx).all()]

    aut_gens = _aut_generators(auts, m)
    inv_aut_gens = [np.argsort(s) for s in aut_gens]
    gen_conj = [conj[b] for b in base.greedy_gens]
    gen_conj += [np.argsort(c) for c in gen_conj]

    def alpha_power(amap: np.ndarray) -> np.ndarray:
        out = idx
        for _ in range(p):
            out = amap[out]
        return out

    seen: set[bytes] = set()
    for alpha in auts:
        pw = alpha_power(alpha)
        a0 = inner_rep.get(pw.tobytes())
        if a0 is None:
            continue
        kb = alpha.tobytes()
        if kb in seen:
            continue
        # mark the whole equivalence class of this representative
        frontier = [alpha]
        seen.add(kb)
        while frontier:
            nxt = []
            for f in frontier:
                neighbours = []
                for s, si in zip(aut_gens, inv_aut_gens):
                    neighbours.append(s[f[si]])
                    neighbours.append(si[f[s]])
                for c in gen_conj:
                    neighbours.append(c[f])
                    neighbours.append(f[c])
                acc = f
                for _ in range(p - 2):
                    acc = f[acc]
                    neighbours.append(acc)
                for nb in neighbours:
                    nbk = nb.tobytes()
                    if nbk not in seen:
                        seen.add(nbk)
                        nxt.append(nb)
            frontier = nxt
        valid_a = sorted(
            int(table[a0, z]) for z in center if alpha[table[a0, z]] == table[a0, z]
        )
        yield alpha, valid_a


def _extension_table(base: TableGroup, amap: np.ndarray, a: int, p: int) -> np.ndarray:
    m = base.n
    t = base.table.astype(np.int64)
    pows = [np.arange(m)]
    for _ in range(1, p):
        pows.append(amap[pows[-1]])
    n = m * p
    out = np.empty((n, n), dtype=np.int64)
    # index i*m + x stands for x * t^i; t^p = a commutes with t
    for i in range(p):
        for j in range(p):
            blk = t[:, pows[i]]
            if i + j >= p:
                blk = t[blk, a]
            out[i * m:(i + 1) * m, j * m:(j + 1) * m] = blk + ((i + j) % p) * m
    return out


def _fresh_name(taken, want: str) -> str:
    if want not in taken:
        return want
    k = 2
    while f"{want}{k}" in taken:
        k += 1
    return f"{want}{k}"


def _extension_candidates(base: TableGroup, p: int):
    q = elem_abelian_prime(base) if base.n > 1 else None
    pairs = (
        _ea_alpha_pairs(base, q, p) if q is not None else _generic_alpha_pairs(base, p)
    )
    gens = dict(base.gens)
    gens[_fresh_name(gens, "t")] = base.n
    for amap, valid_a in pairs:
        for a in valid_a:
            yield TableGroup(_extension_table(base, amap, a, p), gens)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def cyclic_extensions(base: TableGroup, p: int) -> list[TableGroup]:
    """All groups of order |base|*p containing a normal copy of the base with
    quotient of order p, up to isomorphism."""
    if p < 2 or _prime_factors(p) != [p]:
        raise OutOfRange(f"{p} is not prime")
    return [e.group for e in _dedupe(_extension_candidates(base, p))]


# --- perfect seeds ----------------------------------------------------------------


def _seed_entries(n: int) -> list[TableGroup]:
    if n > HARD_ORDER_LIMIT:
        raise IncompleteSeedSet(
            f"perfect groups are only tabulated up to order {HARD_ORDER_LIMIT}; "
            f"order {n} could hide an unlisted one"
        )
    from .registry import perfect_seed_exprs

    out = []
    for text in perfect_seed_exprs().get(n, ()):
        g = construct(text)
        if g.order != n:
            raise IncompleteSeedSet(f"seed {text!r} has order {g.order}, wanted {n}")
        if len(g.derived_elements) != g.order:
            raise IncompleteSeedSet(f"seed {text!r} is not perfect")
        if len(g.center_elements) > 2:
            raise IncompleteSeedSet(f"seed {text!r} has too large a centre")
        out.append(g)
    return out


# --- the enumerator ---------------------------------------------------------------

_MEMO: dict[int, Catalog] = {}


def clear_memory_cache() -> None:
    _MEMO.clear()


def enumerate_groups(n: int, *, tier: int | None = None) -> Catalog:
    """The complete catalog of isomorphism classes of order n."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise OutOfRange(f"order must be a positive integer, not {n!r}")
    t = default_tier() if tier is None else tier
    if t not in TIER_EXTRA:
        raise OutOfRange(f"tier must be 1, 2, or 3, not {t!r}")
    if not order_allowed(n, t):
        raise TierLimitExceeded(
            f"order {n} is outside tier {t}; raise MGE_TIER or pass a higher tier"
        )
    return _catalog(n, t)


def _catalog(n: int, tier: int) -> Catalog:
    if n in _MEMO:
        return _MEMO[n]
    cat = _load_cached(n)
    if cat is None:
        cat = _compute(n, tier)
        _save_cache(cat)
    _MEMO[n] = cat
    return cat


def _compute(n: int, tier: int) -> Catalog:
    if n == 1:
        return Catalog(1, [_canonical_entry(construct("C(1)"))], "cyclic-extension")

    def candidates():
        for p in _prime_factors(n):
            for entry in _catalog(n // p, tier).entries:
                yield from _extension_candidates(entry.group, p)
        yield from _seed_entries(n)

    return Catalog(n, _dedupe(candidates()), "cyclic-extension")


def _load_cached(n: int) -> Catalog | None:
    for path in (cache_dir() / f"order{n}.json", _BUNDLED_DIR / f"order{n}.json"):
        if not path.is_file():
            continue
        try:
            return Catalog.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError):
            continue  # stale or foreign; recompute
    return None


def _save_cache(cat: Catalog) -> None:
    target = cache_dir() / f"order{cat.order}.json"
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(cat.dumps())
        os.replace(tmp, target)
    except OSError:
        pass  # caching is best-effort; results are still returned


# --- the regular-representation oracle --------------------------------------------


def _cycle_lengths(p: tuple[int, ...]) -> list[int]:
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        out.append(length)
    return out


def _is_uniform_fpf(p: tuple[int, ...]) -> bool:
    lens = _cycle_lengths(p)
    return lens[0] > 1 and all(c == lens[0] for c in lens)


def _uniform_with_image(n: int, u: int) -> list[tuple[int, ...]]:
    """All permutations of degree n whose cycles share one length > 1 and
    which map point 0 to point u."""
    out = []
    for d in range(2, n + 1):
        if n % d:
            continue
        perm = [-1] * n

        def close_cycle(points: list[int]):
            for x, y in zip(points, points[1:]):
                perm[x] = y
            perm[points[-1]] = points[0]

        def rec(remaining: frozenset):
            if not remaining:
                out.append(tuple(perm))
                return
            r = min(remaining)
            rest = sorted(remaining - {r})
            if r == 0:
                tails = (
                    (u,) + t
                    for t in itertools.permutations([x for x in rest if x != u], d - 2)
                )
            else:
                tails = itertools.permutations(rest, d - 1)
            for tail in tails:
                pts = [r, *tail]
                close_cycle(pts)
                rec(remaining - set(pts))

        rec(frozenset(range(n)))
    return out


def _compose(p: tuple, g: tuple) -> tuple:
    return tuple(g[i] for i in p)


def _perm_closure_capped(gens: list[tuple], cap: int):
    ident = tuple(range(len(gens[0])))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                c = _compose(e, g)
                if c not in elems:
                    if len(elems) >= cap:
                        return None
                    elems.add(c)
                    nxt.append(c)
        frontier = nxt
    return elems


def _regular_table(elems: set[tuple], n: int) -> np.ndarray:
    by_image = sorted(elems, key=lambda p: p[0])
    tab = np.empty((n, n), dtype=np.int64)
    for j, rho in enumerate(by_image):
        tab[:, j] = rho  # (rho_i rho_j)(0) = rho_j(i)
    return tab


def regular_oracle(n: int) -> Catalog:
    """Isomorphism classes of order n via regular subgroups of the symmetric
    group of degree n; independent of the extension recursion."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise OutOfRange(f"order must be a positive integer, not {n!r}")
    if n > ORACLE_LIMIT:
        raise OutOfRange(f"the oracle is exhaustive only up to order {ORACLE_LIMIT}")
    if n == 1:
        return Catalog(1, [_canonical_entry(construct("C(1)"))], "oracle")

    p = _prime_factors(n)[0]
    # canonical element of order p: every class has a regular copy through it
    c0 = tuple(i + 1 if i % p < p - 1 else i - (p - 1) for i in range(n))
    buckets: dict[int, list[tuple]] = {}

    def bucket(u: int) -> list[tuple]:
        if u not in buckets:
            buckets[u] = _uniform_with_image(n, u)
        return buckets[u]

    found: list[np.ndarray] = []

    def extend(gens: list[tuple], elems: set[tuple]):
        if len(elems) == n:
            found.append(_regular_table(elems, n))
            return
        if len(gens) >= 3:
            return
        covered = {e[0] for e in elems}
        u = min(set(range(n)) - covered)
        for cand in bucket(u):
            if cand in elems:
                continue
            closure = _perm_closure_capped(gens + [cand], n)
            if closure is None or n % len(closure):
                continue
            if all(e == tuple(range(n)) or _is_uniform_fpf(e) for e in closure):
                extend(gens + [cand], closure)

    start = _perm_closure_capped([c0], n)
    extend([c0], start)
    groups = (TableGroup(t, {"g1": 1}) for t in found)
    return Catalog(n, _dedupe(groups), "oracle")
