"""Minimal-order host searches: which group is the smallest that contains
every group of a given order (or of all orders up to n) as a subgroup?

Run with:  python3 demos/minimal_host_searches.py
"""

from mge import construct, is_isomorphic
from mge.registry import collection_bound, nbound, pbound
from mge.verify import contains_all_of_order, minimal_embedding_search

# ---------------------------------------------------------------------------
# lower bounds come from closed formulas, no search needed

print("divisibility lower bounds")
print(f"  every host of all 5 groups of order 8 has order divisible by "
      f"{collection_bound(8)} (= pbound(2,3) = {pbound(2, 3)})")
for n in (4, 8, 11, 12, 15):
    print(f"  a host of every group of order <= {n:2d} "
          f"needs order at least {nbound(n)}")

# ---------------------------------------------------------------------------
# the order-8 search: scan multiples of the bound, keep groups that host all

out = minimal_embedding_search("order", 8, 64)
print(f"\nall groups of order 8 first fit inside order {out.found_order}")
for text in out.groups:
    g = construct(text)
    for label in ("C2xH1", "H2"):
        if is_isomorphic(g, construct(f"named({label})")) is not None:
            print(f"  {text}\n    = {label}")

# the same sweep at order 4 settles instantly
out4 = minimal_embedding_search("order", 4, 16)
print(f"\nboth groups of order 4 fit inside order {out4.found_order}: "
      f"{', '.join(out4.groups)}")

# ---------------------------------------------------------------------------
# containment reports show exactly which targets fail and why

d8 = construct("D(8)")
rep = contains_all_of_order(d8, 8, ambient_text="D(8)")
print(f"\nD(8) as a host for order-8 subgroups "
      f"({rep.counts()['pass']} of {len(rep.items)} embed):")
for it in rep.items:
    mark = "ok  " if it.status == "pass" else "FAIL"
    print(f"  {mark} {it.item_id:10s} {it.detail}")
