"""Embedding certificates, coverage reports, and minimal-order searches.

Three layers live here.  Claims and certificates are the serialized form of
"these words generate a copy of that group"; verifying one replays the words,
closes them into a subgroup, and runs the isomorphism test.  Coverage checks
(contains_all_of_order / contains_all_upto) quantify those claims over every
isomorphism class of a given order, falling back to embedding search when the
ambient group is dense.  On top of both sits the scenario runner, which
reproduces the tabulated results end to end and emits deterministic
machine-readable reports.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import enumerator, registry
from ._version import ENGINE_VERSION
from .errors import (
    EngineError,
    IncompleteCertificates,
    TierLimitExceeded,
    UnknownLabel,
)
from .expressions import parse_expr
from .groups import Subgroup, TableGroup, bfs_closure, construct
from .morphisms import find_embedding, is_isomorphic

_MAX_WORKERS = max(1, min(8, os.cpu_count() or 1))

_CERT_DIR = Path(__file__).resolve().parent / "data" / "certs"


# --- certificates -----------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    """One embedding assertion: the words generate a copy of the target."""

    target: str
    generators: tuple[str, ...]
    source: str = "paper"

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "generators": list(self.generators),
            "source": self.source,
        }

    @staticmethod
    def from_json(doc: dict) -> "Claim":
        src = doc.get("source", "paper")
        if src not in ("paper", "derived"):
            raise ValueError(f"claim source must be 'paper' or 'derived', got {src!r}")
        return Claim(doc["target"], tuple(doc["generators"]), src)


@dataclass
class Certificate:
    """A batch of claims sharing one ambient group."""

    ambient: str
    anchor: str
    claims: list[Claim]

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "anchor": self.anchor,
            "claims": [c.to_json() for c in self.claims],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(doc: dict) -> "Certificate":
        return Certificate(
            doc["ambient"],
            doc.get("anchor", ""),
            [Claim.from_json(c) for c in doc["claims"]],
        )

    @staticmethod
    def load(path) -> "Certificate":
        with open(path, "r", encoding="utf-8") as fh:
            return Certificate.from_json(json.load(fh))


@lru_cache(maxsize=1)
def bundled_certificates() -> dict[str, "Certificate"]:
    """Shipped certificates keyed by their ambient expression text."""
    out = {}
    if _CERT_DIR.is_dir():
        for p in sorted(_CERT_DIR.glob("*.json")):
            cert = Certificate.load(p)
            out[cert.ambient] = cert
    return out


def bundled_certificate(ambient: str) -> "Certificate":
    certs = bundled_certificates()
    if ambient not in certs:
        raise UnknownLabel(f"no bundled certificate for ambient {ambient!r}")
    return certs[ambient]


def _certs_for_label(label: str) -> list["Certificate"]:
    certs = bundled_certificates()
    key = f"named({label})"
    return [certs[key]] if key in certs else []


# --- reports ----------------------------------------------------------------------


@dataclass
class ReportItem:
    item_id: str
    status: str  # pass | fail | skip
    detail: str = ""
    witness: dict | None = None

    def to_json(self) -> dict:
        doc = {"id": self.item_id, "status": self.status, "detail": self.detail}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


@dataclass
class Report:
    scenario: str
    items: list[ReportItem]
    engine_version: str = ENGINE_VERSION

    @property
    def passed(self) -> bool:
        # skips carry tier reasons and do not fail a run
        return all(it.status != "fail" for it in self.items)

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for it in self.items:
            out[it.status] = out.get(it.status, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "engine_version": self.engine_version,
            "passed": self.passed,
            "items": [it.to_json() for it in self.items],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def lines(self) -> list[str]:
        out = []
        for it in self.items:
            mark = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[it.status]
            suffix = f"  ({it.detail})" if it.detail else ""
            out.append(f"[{mark}] {it.item_id}{suffix}")
        c = self.counts()
        verdict = "PASS" if self.passed else "FAIL"
        out.append(
            f"{self.scenario}: {verdict}  "
            f"({c['pass']} passed, {c['fail']} failed, {c['skip']} skipped)"
        )
        return out


# --- claim verification -----------------------------------------------------------


def generated_subgroup(g, words) -> Subgroup:
    """Close the word images into a subgroup of g."""
    gens = [g.evaluate_word(w) for w in words]
    identity = 0 if isinstance(g, TableGroup) else g.identity
    elems, _ = bfs_closure(identity, gens, g.mul)
    return Subgroup.from_elements(g, elems, gens)


@lru_cache(maxsize=512)
def _target_group(text: str) -> TableGroup:
    g = construct(parse_expr(text))
    if not isinstance(g, TableGroup):
        raise EngineError(f"claim target {text!r} is not a dense group")
    return g


def verify_claim(g, claim: Claim, *, ambient_text: str | None = None) -> ReportItem:
    """Replay one claim: evaluate, close, compare orders, test isomorphism."""
    target = _target_group(claim.target)
    try:
        sub = generated_subgroup(g, claim.generators)
    except EngineError as e:
        return ReportItem(claim.target, "fail", f"{type(e).__name__}: {e}")
    if sub.order != target.order:
        return ReportItem(
            claim.target, "fail", f"order mismatch {sub.order} != {target.order}"
        )
    if is_isomorphic(sub.group, target) is None:
        return ReportItem(
            claim.target, "fail", f"generated subgroup is not isomorphic to {claim.target}"
        )
    witness = {"kind": "embedding", **claim.to_json()}
    if ambient_text is not None:
        witness["ambient"] = ambient_text
    return ReportItem(
        claim.target, "pass", f"order {target.order}, source {claim.source}", witness
    )


def verify_certificate(cert: Certificate | str | Path) -> Report:
    """Check every claim of a certificate against its ambient group."""
    if not isinstance(cert, Certificate):
        cert = Certificate.load(cert)
    g = construct(parse_expr(cert.ambient))
    items = _pmap(lambda c: verify_claim(g, c, ambient_text=cert.ambient), cert.claims)
    for i, it in enumerate(items):
        it.item_id = f"claim {i + 1}: {it.item_id}"
    return Report("verify-certificate", items)


# --- coverage checks --------------------------------------------------------------


@lru_cache(maxsize=64)
def _targets_of_order(n: int, tier: int) -> tuple[tuple[str, TableGroup], ...]:
    """(expression text, group) for every isomorphism class of order n."""
    if 1 <= n <= 15:
        exprs = registry.groups_of_order(n)
        return tuple((e.text(), construct(e)) for e in exprs)
    cat = enumerator.enumerate_groups(n, tier=tier)
    return tuple((e.recipe_text, e.group) for e in cat.entries)


# per-(ambient table, target) embedding results, keyed by the ambient's table
# hash so repeated sweeps over the same catalogs reuse the work
_EMBED_MEMO: dict[tuple[str, str], tuple[bool, list[str] | None]] = {}


def _dense_embeds(g: TableGroup, text: str, target: TableGroup):
    key = (g.table_hash, text)
    hit = _EMBED_MEMO.get(key)
    if hit is not None:
        return hit
    m = find_embedding(target, g)
    if m is None:
        res = (False, None)
    else:
        res = (True, [img for _, img in m.witness_words()])
    _EMBED_MEMO[key] = res
    return res


def _match_claims(certificates, target: TableGroup) -> list[Claim]:
    """Claims whose declared target is isomorphic to the given group."""
    out = []
    for cert in certificates:
        for c in cert.claims:
            t = _target_group(c.target)
            if t.order == target.order and is_isomorphic(t, target) is not None:
                out.append(c)
    return out


def _check_target(g, text: str, target: TableGroup, certificates, ambient_text):
    claims = _match_claims(certificates, target) if certificates else []
    notes = []
    for c in claims:
        item = verify_claim(g, c, ambient_text=ambient_text)
        if item.status == "pass":
            item.item_id = text
            return item
        notes.append(item.detail)
    if not isinstance(g, TableGroup):
        raise IncompleteCertificates(
            f"no verified claim covers target {text!r} in non-dense ambient "
            f"{ambient_text or type(g).__name__}"
        )
    ok, images = _dense_embeds(g, text, target)
    if ok:
        witness = {
            "kind": "embedding",
            "target": text,
            "generators": images,
            "source": "derived",
        }
        if ambient_text is not None:
            witness["ambient"] = ambient_text
        return ReportItem(text, "pass", f"order {target.order}, source derived", witness)
    detail = f"no embedding of {text}"
    if notes:
        detail += f"; claim failures: {'; '.join(notes)}"
    witness = {"kind": "absence", "target": text}
    if ambient_text is not None:
        witness["ambient"] = ambient_text
    return ReportItem(text, "fail", detail, witness)


def contains_all_of_order(
    g,
    n: int,
    certificates=None,
    *,
    ambient_text: str | None = None,
    stop_on_fail: bool = False,
    tier: int | None = None,
) -> Report:
    """Does every group of order n embed in g?  One item per target."""
    certificates = _as_cert_list(certificates)
    tier = enumerator.default_tier() if tier is None else tier
    items = []
    for text, target in _targets_of_order(n, tier):
        item = _check_target(g, text, target, certificates, ambient_text)
        items.append(item)
        if stop_on_fail and item.status == "fail":
            break
    return Report(f"contains-all-of-order-{n}", items)


def contains_all_upto(
    g,
    n: int,
    certificates=None,
    *,
    ambient_text: str | None = None,
    stop_on_fail: bool = False,
    tier: int | None = None,
) -> Report:
    """Does every group of order at most n embed in g?"""
    certificates = _as_cert_list(certificates)
    tier = enumerator.default_tier() if tier is None else tier
    items = []
    for k in range(1, n + 1):
        for text, target in _targets_of_order(k, tier):
            item = _check_target(g, text, target, certificates, ambient_text)
            items.append(item)
            if stop_on_fail and item.status == "fail":
                return Report(f"contains-all-upto-{n}", items)
    return Report(f"contains-all-upto-{n}", items)


def _as_cert_list(certificates) -> list[Certificate]:
    if certificates is None:
        return []
    if isinstance(certificates, Certificate):
        return [certificates]
    return list(certificates)


# --- minimal-order search ---------------------------------------------------------


@dataclass
class SearchOutcome:
    collection: str
    n: int
    bound: int
    max_order: int
    candidates: list[int]
    found_order: int | None
    groups: list[str]
    eliminated: dict[int, int] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.found_order is not None

    def to_json(self) -> dict:
        return {
            "collection": self.collection,
            "n": self.n,
            "bound": self.bound,
            "max_order": self.max_order,
            "candidates": self.candidates,
            "found_order": self.found_order,
            "groups": self.groups,
            "eliminated": {str(k): v for k, v in self.eliminated.items()},
        }


_SEARCH_MEMO: dict[tuple, SearchOutcome] = {}


def minimal_embedding_search(
    kind: str, n: int, max_order: int, *, tier: int | None = None
) -> SearchOutcome:
    """Least order admitting a group that hosts the whole collection.

    kind "order" quantifies over all groups of order exactly n, kind "upto"
    over all groups of order at most n.  Candidate orders are the multiples
    of the matching lower bound; the first order with a passing group stops
    the search, but every group of that order is still examined so the full
    set of minimal groups gets reported.
    """
    if kind not in ("order", "upto"):
        raise ValueError(f"kind must be 'order' or 'upto', got {kind!r}")
    tier = enumerator.default_tier() if tier is None else tier
    key = (kind, n, max_order, tier)
    hit = _SEARCH_MEMO.get(key)
    if hit is not None:
        return hit
    bound = registry.collection_bound(n) if kind == "order" else registry.nbound(n)
    candidates = list(range(bound, max_order + 1, bound))
    for m in candidates:
        if not enumerator.order_allowed(m, tier):
            raise TierLimitExceeded(
                f"candidate order {m} is outside tier {tier}; raise MGE_TIER"
            )
    checker = contains_all_of_order if kind == "order" else contains_all_upto
    name = f"all-{'of-order' if kind == 'order' else 'upto'} {n}"
    eliminated: dict[int, int] = {}
    outcome = None
    for m in candidates:
        cat = enumerator.enumerate_groups(m, tier=tier)

        def _try(entry):
            rep = checker(
                entry.group, n, ambient_text=entry.recipe_text,
                stop_on_fail=True, tier=tier,
            )
            return entry.recipe_text if rep.passed else None

        results = _pmap(_try, cat.entries)
        passing = [r for r in results if r is not None]
        if passing:
            outcome = SearchOutcome(
                name, n, bound, max_order, candidates, m, passing, eliminated
            )
            break
        eliminated[m] = len(cat.entries)
    if outcome is None:
        outcome = SearchOutcome(
            name, n, bound, max_order, candidates, None, [], eliminated
        )
    _SEARCH_MEMO[key] = outcome
    return outcome


# --- witness replay ---------------------------------------------------------------


def replay_witness(w: dict) -> bool:
    """Re-verify a report witness from scratch.  True means it still holds."""
    kind = w.get("kind")
    if kind == "embedding":
        g = construct(parse_expr(w["ambient"]))
        item = verify_claim(
            g, Claim(w["target"], tuple(w["generators"]), w.get("source", "derived"))
        )
        return item.status == "pass"
    if kind == "absence":
        g = construct(parse_expr(w["ambient"]))
        if not isinstance(g, TableGroup):
            return False
        return find_embedding(_target_group(w["target"]), g) is None
    if kind == "bijection":
        cat = enumerator.enumerate_groups(w["order"])
        seen = set()
        for label, recipe in w["pairs"]:
            g = construct(registry.named_group(label))
            entry = cat.find_isomorphic(g)
            if entry is None or entry.recipe_text != recipe or recipe in seen:
                return False
            seen.add(recipe)
        return len(seen) == len(cat)
    if kind == "minimal-search":
        out = minimal_embedding_search(w["search_kind"], w["n"], w["max_order"])
        return out.found_order == w["order"] and sorted(out.groups) == sorted(w["groups"])
    if kind == "containment":
        g = construct(parse_expr(w["ambient"]))
        certs = bundled_certificates().get(w["ambient"])
        checker = contains_all_of_order if w["quantifier"] == "order" else contains_all_upto
        return checker(g, w["n"], certs, ambient_text=w["ambient"]).passed
    if kind == "table4":
        n, factor = w["n"], w["factor"]
        stated = registry.table4_value(n)
        if stated != factor * registry.nbound(n):
            return False
        g = construct(parse_expr(w["ambient"]))
        if g.order != stated:
            return False
        certs = bundled_certificates().get(w["ambient"])
        return contains_all_upto(g, n, certs, ambient_text=w["ambient"]).passed
    raise ValueError(f"unknown witness kind {kind!r}")


def replay_report(report: Report) -> bool:
    """Every pass item's witness re-verifies."""
    for it in report.items:
        if it.status == "pass" and it.witness is not None:
            if not replay_witness(it.witness):
                return False
    return True


# --- scenario runner --------------------------------------------------------------


_SCENARIOS: dict[str, object] = {}


def _scenario(sid: str):
    def reg(fn):
        _SCENARIOS[sid] = fn
        return fn

    return reg


def scenario_ids() -> list[str]:
    return list(_SCENARIOS)


def reproduce(sid: str, *, tier: int | None = None) -> Report:
    if sid not in _SCENARIOS:
        raise UnknownLabel(f"unknown scenario {sid!r}; have {', '.join(_SCENARIOS)}")
    tier = enumerator.default_tier() if tier is None else tier
    return Report(sid, _SCENARIOS[sid](tier))


def _pmap(fn, items):
    items = list(items)
    if len(items) <= 1 or _MAX_WORKERS == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=_MAX_WORKERS) as ex:
        return list(ex.map(fn, items))


def _class_names(texts: list[str], labels: list[str]) -> tuple[bool, str]:
    """Match recipe texts against expected registry labels up to isomorphism."""
    if len(texts) != len(labels):
        return False, f"expected {len(labels)} classes, found {len(texts)}"
    remaining = {lb: construct(registry.named_group(lb)) for lb in labels}
    for text in texts:
        g = construct(parse_expr(text))
        found = None
        for lb, h in remaining.items():
            if g.order == h.order and is_isomorphic(g, h) is not None:
                found = lb
                break
        if found is None:
            return False, f"group {text!r} matches no expected class"
        del remaining[found]
    return True, ""


@_scenario("table1")
def _run_table1(tier: int) -> list[ReportItem]:
    items = []
    for n in range(1, 16):
        cat = enumerator.enumerate_groups(n, tier=tier)
        labels = registry.group_labels_of_order(n)
        if len(cat) != len(labels):
            items.append(
                ReportItem(f"order {n}", "fail",
                           f"enumerated {len(cat)} classes, expected {len(labels)}")
            )
            continue
        pairs = []
        seen = set()
        problem = None
        for lb in labels:
            g = construct(registry.named_group(lb))
            entry = cat.find_isomorphic(g)
            if entry is None:
                problem = f"{lb} matches no enumerated class"
                break
            if entry.recipe_text in seen:
                problem = f"{lb} duplicates the class of {entry.recipe_text}"
                break
            seen.add(entry.recipe_text)
            pairs.append([lb, entry.recipe_text])
        if problem is not None:
            items.append(ReportItem(f"order {n}", "fail", problem))
            continue
        items.append(
            ReportItem(
                f"order {n}", "pass", f"{len(labels)} classes, bijective",
                {"kind": "bijection", "order": n, "pairs": pairs},
            )
        )
    return items


@_scenario("table2")
def _run_table2(tier: int) -> list[ReportItem]:
    items = []
    for n in range(1, 16):
        stated_order, stated_labels = registry.table2_row(n)
        try:
            out = minimal_embedding_search("order", n, stated_order, tier=tier)
        except TierLimitExceeded as e:
            items.append(ReportItem(f"n={n}", "skip", str(e)))
            continue
        if out.found_order != stated_order:
            items.append(
                ReportItem(f"n={n}", "fail",
                           f"search found order {out.found_order}, stated {stated_order}")
            )
            continue
        ok, why = _class_names(out.groups, list(stated_labels))
        if not ok:
            items.append(ReportItem(f"n={n}", "fail", why))
            continue
        items.append(
            ReportItem(
                f"n={n}", "pass",
                f"minimal order {stated_order}, groups {{{', '.join(stated_labels)}}}",
                {"kind": "minimal-search", "search_kind": "order", "n": n,
                 "max_order": stated_order, "order": out.found_order,
                 "groups": out.groups},
            )
        )
    return items


@_scenario("table4")
def _run_table4(tier: int) -> list[ReportItem]:
    items = []
    for n in range(1, 16):
        stated = registry.table4_value(n)
        factor = 1 if n <= 11 else 2
        nb = registry.nbound(n)
        if stated != factor * nb:
            items.append(
                ReportItem(f"n={n}", "fail",
                           f"stated {stated} != {factor} * nbound({n}) = {factor * nb}")
            )
            continue
        if n <= 11:
            label = registry.table5_row(n)[0]
        elif n == 12:
            label = "BIG12_SOL"
        else:
            label = "BIG15_SOL"
        ambient = f"named({label})"
        g = construct(registry.named_group(label))
        if g.order != stated:
            items.append(
                ReportItem(f"n={n}", "fail", f"{label} has order {g.order}, stated {stated}")
            )
            continue
        rep = contains_all_upto(
            g, n, _certs_for_label(label), ambient_text=ambient,
            stop_on_fail=True, tier=tier,
        )
        if not rep.passed:
            missing = [it.item_id for it in rep.items if it.status == "fail"]
            items.append(ReportItem(f"n={n}", "fail", f"{label} does not host {missing}"))
            continue
        minimality = (
            "minimal: equals the collection lower bound"
            if factor == 1
            else "attained; lower bound not re-derived here"
        )
        items.append(
            ReportItem(
                f"n={n}", "pass", f"{stated} attained by {label}; {minimality}",
                {"kind": "table4", "n": n, "factor": factor, "ambient": ambient},
            )
        )
    return items


@_scenario("table5")
def _run_table5(tier: int) -> list[ReportItem]:
    items = []
    for n in range(1, 12):
        expected = registry.nbound(n)
        for label in registry.table5_row(n):
            g = construct(registry.named_group(label))
            if g.order != expected:
                items.append(
                    ReportItem(f"n={n}: {label}", "fail",
                               f"order {g.order} != nbound({n}) = {expected}")
                )
                continue
            ambient = f"named({label})"
            rep = contains_all_upto(
                g, n, _certs_for_label(label), ambient_text=ambient,
                stop_on_fail=True, tier=tier,
            )
            if rep.passed:
                items.append(
                    ReportItem(
                        f"n={n}: {label}", "pass",
                        f"order {expected}, hosts every group of order <= {n}",
                        {"kind": "containment", "ambient": ambient,
                         "quantifier": "upto", "n": n},
                    )
                )
            else:
                missing = [it.item_id for it in rep.items if it.status == "fail"]
                items.append(
                    ReportItem(f"n={n}: {label}", "fail", f"does not host {missing}")
                )
    return items


@_scenario("thm-order32")
def _run_thm32(tier: int) -> list[ReportItem]:
    out = minimal_embedding_search("order", 8, 64, tier=tier)
    witness = {"kind": "minimal-search", "search_kind": "order", "n": 8,
               "max_order": 64, "order": out.found_order, "groups": out.groups}
    if out.found_order != 32:
        return [ReportItem("minimal order", "fail",
                           f"found {out.found_order}, expected 32")]
    items = [ReportItem("minimal order", "pass", "32", witness)]
    ok, why = _class_names(out.groups, ["C2xH1", "H2"])
    if ok:
        items.append(
            ReportItem("passing classes", "pass", "exactly 2 groups: C2xH1 and H2",
                       witness)
        )
    else:
        items.append(ReportItem("passing classes", "fail", why))
    return items


@_scenario("thm-order144")
def _run_thm144(tier: int) -> list[ReportItem]:
    try:
        out = minimal_embedding_search("order", 12, 144, tier=tier)
    except TierLimitExceeded as e:
        return [ReportItem("minimal order", "skip", str(e))]
    if out.found_order != 144:
        return [ReportItem("minimal order", "fail",
                           f"found {out.found_order}, expected 144")]
    witness = {"kind": "minimal-search", "search_kind": "order", "n": 12,
               "max_order": 144, "order": 144, "groups": out.groups}
    elim = ", ".join(f"{m} ({c} groups)" for m, c in sorted(out.eliminated.items()))
    items = [ReportItem("minimal order", "pass",
                        f"144 after eliminating {elim}", witness)]
    ok, why = _class_names(out.groups, ["S3xS4"])
    if ok:
        items.append(
            ReportItem("passing classes", "pass", "exactly 1 group: S3xS4", witness)
        )
    else:
        items.append(ReportItem("passing classes", "fail", why))
    return items


def _index2_subgroups(g: TableGroup):
    """Element arrays of the index-2 subgroups, found as hyperplanes over the
    quotient by the squares-and-commutators closure."""
    n = g.n
    gens = set()
    for x in range(n):
        gens.add(int(g.table[x, x]))
    for x in range(n):
        for y in range(x + 1, n):
            xy = int(g.table[x, y])
            yx = int(g.table[y, x])
            gens.add(int(g.table[g.inv_of(yx), xy]))
    elems, _ = bfs_closure(0, sorted(gens), g.mul)
    nset = sorted(elems)
    if len(nset) == n:
        return
    # label cosets, then give the elementary abelian quotient 0/1 coordinates
    rep = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if rep[x] >= 0:
            continue
        r = len(reps)
        reps.append(x)
        for e in nset:
            rep[g.table[x, e]] = r
    coords = {0: 0}
    nbits = 0
    for i in range(1, len(reps)):
        if i in coords:
            continue
        bit = 1 << nbits
        nbits += 1
        for j in list(coords):
            coords[int(rep[g.table[reps[j], reps[i]]])] = coords[j] | bit
    coord_of = np.zeros(len(reps), dtype=np.int64)
    for j, c in coords.items():
        coord_of[j] = c
    elem_coord = coord_of[rep]
    for phi in range(1, 1 << nbits):
        masked = elem_coord & phi
        parity = np.zeros(n, dtype=np.int64)
        while masked.any():
            parity ^= masked & 1
            masked = masked >> 1
        yield np.flatnonzero(parity == 0)


def _has_abelian_exp4_half(g: TableGroup) -> bool:
    """An abelian subgroup of index 2 and exponent at most 4 exists."""
    orders = g.element_orders
    for sub in _index2_subgroups(g):
        if orders[sub].max() > 4:
            continue
        block = g.table[np.ix_(sub, sub)]
        if (block == block.T).all():
            return True
    return False


@_scenario("lemma-habex4")
def _run_habex4(tier: int) -> list[ReportItem]:
    cat = enumerator.enumerate_groups(32, tier=tier)
    with_hyp = [e for e in cat.entries if _has_abelian_exp4_half(e.group)]

    def _check(entry):
        rep = contains_all_of_order(
            entry.group, 8, ambient_text=entry.recipe_text, tier=tier
        )
        missing = [it.item_id for it in rep.items if it.status == "fail"]
        if missing:
            return ReportItem(
                entry.recipe_text, "pass", f"missing {', '.join(missing)}",
                {"kind": "absence", "ambient": entry.recipe_text, "target": missing[0]},
            )
        return ReportItem(
            entry.recipe_text, "fail",
            "hosts all groups of order 8 despite an abelian half of exponent <= 4",
        )

    items = _pmap(_check, with_hyp)
    items.append(
        ReportItem(
            "hypothesis coverage", "pass",
            f"{len(with_hyp)} of {len(cat)} order-32 groups have an abelian "
            f"index-2 subgroup of exponent <= 4",
        )
    )
    return items


@_scenario("lemma-order96")
def _run_order96(tier: int) -> list[ReportItem]:
    if not enumerator.order_allowed(96, tier):
        return [ReportItem("order 96 sweep", "skip",
                           f"needs tier 2 enumeration of order 96 (active tier {tier})")]
    cat = enumerator.enumerate_groups(96, tier=tier)
    a4 = _target_group("A(4)")

    def _check(entry):
        hosts_a4, _ = _dense_embeds(entry.group, "A(4)", a4)
        if not hosts_a4:
            return None
        rep = contains_all_of_order(
            entry.group, 8, ambient_text=entry.recipe_text, tier=tier
        )
        missing = [it.item_id for it in rep.items if it.status == "fail"]
        if missing:
            return ReportItem(
                entry.recipe_text, "pass", f"hosts A4; missing {', '.join(missing)}",
                {"kind": "absence", "ambient": entry.recipe_text, "target": missing[0]},
            )
        return ReportItem(
            entry.recipe_text, "fail", "hosts A4 and every group of order 8"
        )

    items = [it for it in _pmap(_check, cat.entries) if it is not None]
    items.append(
        ReportItem(
            "hypothesis coverage", "pass",
            f"{len(items)} of {len(cat)} order-96 groups host A4",
        )
    )
    return items


@_scenario("lemma-p3")
def _run_p3(tier: int) -> list[ReportItem]:
    if not enumerator.order_allowed(243, tier):
        return [
            ReportItem(
                "order 243 sweep", "skip",
                f"needs tier 3 enumeration of order 243 (active tier {tier}; "
                "set MGE_TIER=3)",
            )
        ]
    cat = enumerator.enumerate_groups(243, tier=tier)

    def _check(entry):
        rep = contains_all_of_order(
            entry.group, 27, ambient_text=entry.recipe_text,
            stop_on_fail=True, tier=tier,
        )
        missing = [it.item_id for it in rep.items if it.status == "fail"]
        if missing:
            return ReportItem(
                entry.recipe_text, "pass", f"missing {missing[0]}",
                {"kind": "absence", "ambient": entry.recipe_text, "target": missing[0]},
            )
        return ReportItem(entry.recipe_text, "fail", "hosts every group of order 27")

    return _pmap(_check, cat.entries)


@_scenario("example-p6")
def _run_p6(tier: int) -> list[ReportItem]:
    items = []
    g6 = construct(registry.named_group("GP6_3"))
    rep = contains_all_of_order(g6, 27, ambient_text="named(GP6_3)", tier=tier)
    if rep.passed:
        items.append(
            ReportItem(
                "GP6_3 hosts all of order 27", "pass",
                f"order {g6.order}, {len(rep.items)} targets",
                {"kind": "containment", "ambient": "named(GP6_3)",
                 "quantifier": "order", "n": 27},
            )
        )
        items.extend(rep.items)
    else:
        missing = [it.item_id for it in rep.items if it.status == "fail"]
        items.append(
            ReportItem("GP6_3 hosts all of order 27", "fail", f"missing {missing}")
        )
    w = construct(registry.named_group("W3"))
    wrep = contains_all_of_order(w, 27, ambient_text="named(W3)", tier=tier)
    missing = [it.item_id for it in wrep.items if it.status == "fail"]
    ea = _target_group("EA(3, 3)")
    ok = (
        len(missing) == 1
        and is_isomorphic(_target_group(missing[0]), ea) is not None
    )
    if ok:
        items.append(
            ReportItem(
                "W3 misses exactly the rank-3 elementary abelian group", "pass",
                f"missing {missing[0]} only",
                {"kind": "absence", "ambient": "named(W3)", "target": missing[0]},
            )
        )
    else:
        items.append(
            ReportItem(
                "W3 misses exactly the rank-3 elementary abelian group", "fail",
                f"missing set was {missing}",
            )
        )
    return items
