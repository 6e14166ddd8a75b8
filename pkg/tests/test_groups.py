"""Construction oracles: orders, exponents, centres, classes, and word
evaluation for every constructor, checked against hand-computed values."""

import numpy as np
import pytest

from mge import Subgroup, TableGroup, TwistedGroup, check_table, construct, expr_order, quotient_group
from mge.errors import (
    CentralIdentificationError,
    InvalidAction,
    NotNormal,
    OrderLimitExceeded,
    UnknownGenerator,
)
from mge.groups import bfs_closure

# constructor text, order, abelian, exponent, centre size
BASIC_FACTS = [
    ("C(1)", 1, True, 1, 1),
    ("C(12)", 12, True, 12, 12),
    ("EA(2,3)", 8, True, 2, 8),
    ("EA(3,2)", 9, True, 3, 9),
    ("D(3)", 6, False, 6, 1),
    ("D(4)", 8, False, 4, 2),
    ("D(7)", 14, False, 14, 1),
    ("Q(2)", 8, False, 4, 2),
    ("Q(3)", 12, False, 12, 2),
    ("S(4)", 24, False, 12, 1),
    ("A(4)", 12, False, 6, 1),
    ("A(5)", 60, False, 30, 1),
    ("C(2) x C(6)", 12, True, 6, 12),
    ("sd(gens(C(7), g1), gens(C(3), t), t.g1=g1^2)", 21, False, 21, 1),
    ("cp(D(4), gens(D(4), c, d), a^2=c^2)", 32, False, 4, 2),
    ("quo(Q(2), a^2)", 4, True, 2, 4),
    ("perm(5; (1 2 3 4 5), (2 5)(3 4))", 10, False, 10, 1),
]


@pytest.mark.parametrize("text, order, abelian, exponent, z", BASIC_FACTS)
def test_basic_facts(text, order, abelian, exponent, z):
    g = construct(text)
    assert g.order == order
    assert g.is_abelian is abelian
    assert g.exponent == exponent
    assert len(g.center_elements) == z
    assert expr_order(text) == order
    assert check_table(g.table)


def test_element_order_census():
    q2 = construct("Q(2)")
    counts = np.bincount(q2.element_orders, minlength=5)
    # the quaternion group has a single involution
    assert list(counts[1:5]) == [1, 1, 0, 6]
    a4 = construct("A(4)")
    counts = np.bincount(a4.element_orders, minlength=4)
    assert list(counts[1:4]) == [1, 3, 8]


def test_conjugacy_classes_of_s4():
    s4 = construct("S(4)")
    sizes = sorted(len(c) for c in s4.conjugacy_classes())
    assert sizes == [1, 3, 6, 6, 8]
    assert sorted(int(s) for s in s4.class_sizes) == sizes
    assert int(s4.class_sizes.sum()) == 24


def test_derived_and_invariants():
    s4 = construct("S(4)")
    assert len(s4.derived_elements) == 12
    assert s4.abelian_invariants is None
    assert construct("C(12)").abelian_invariants == (12,)
    assert construct("C(2) x C(6)").abelian_invariants == (6, 2)
    assert construct("EA(2,3)").abelian_invariants == (2, 2, 2)
    # perfect: the derived subgroup is everything
    assert len(construct("A(5)").derived_elements) == 60


def test_word_evaluation_round_trip():
    d4 = construct("D(4)")
    assert d4.evaluate_word("1") == d4.identity
    ab = d4.evaluate_word("a*b")
    assert d4.element_order(ab) == 2
    assert d4.evaluate_word("a^-1") == d4.inv_of(d4.evaluate_word("a"))
    for x in d4.elements():
        assert d4.evaluate_word(d4.label_of(x)) == x
    with pytest.raises(UnknownGenerator):
        d4.evaluate_word("z")


def test_cycle_factors_in_words():
    s4 = construct("S(4)")
    x = s4.evaluate_word("(1 2 3 4)*(1 2)")
    assert s4.element_order(x) == 3
    # spaces inside cycles are optional
    assert s4.evaluate_word("(12)(34)") == s4.evaluate_word("(1 2)(3 4)")


def test_power_and_inverse_agree():
    g = construct("Q(3)")
    for x in g.elements():
        assert g.power(x, -1) == g.inv_of(x)
        assert g.power(x, g.element_order(x)) == g.identity
        assert g.mul(x, g.inv_of(x)) == g.identity


def test_product_needs_distinct_names():
    with pytest.raises(InvalidAction):
        construct("sd(C(7), C(3), t.g1=g1^2)")


def test_table_limit_guard():
    assert expr_order("C(5001)") == 5001
    with pytest.raises(OrderLimitExceeded):
        construct("C(5001)")


def test_subgroup_and_sylow():
    s4 = construct("S(4)")
    h = s4.subgroup([s4.evaluate_word("(12)"), s4.evaluate_word("(34)")])
    assert h.order == 4
    assert s4.sylow(2).order == 8
    assert s4.sylow(3).order == 3
    want = {s4.identity} | {
        s4.evaluate_word(w) for w in ("(12)", "(34)", "(12)(34)")
    }
    assert set(h.elements) == want
    assert h.group.is_abelian and h.group.exponent == 2


def test_subgroup_from_elements():
    s4 = construct("S(4)")
    a4_elems = s4.derived_elements
    h = Subgroup.from_elements(
        s4, a4_elems, [s4.evaluate_word("(123)"), s4.evaluate_word("(12)(34)")]
    )
    assert h.order == 12
    assert set(h.group.gens) == {"g1", "g2"}
    assert not h.group.is_abelian


def test_quotient_groups():
    s4 = construct("S(4)")
    v4 = [s4.identity] + [x for x in s4.elements() if s4.label_of(x) in ("(12)(34)", "(13)(24)", "(14)(23)")]
    q = quotient_group(s4, v4)
    assert q.order == 6 and not q.is_abelian
    d4 = construct("D(4)")
    q2 = quotient_group(d4, d4.center_elements)
    assert q2.order == 4 and q2.exponent == 2
    with pytest.raises(NotNormal):
        quotient_group(s4, [s4.identity, s4.evaluate_word("(12)")])


def test_central_product_rejects_bad_identification():
    with pytest.raises(CentralIdentificationError):
        construct("cp(D(4), gens(D(4), c, d), a=c)")  # a is not central
    with pytest.raises(CentralIdentificationError):
        construct("cp(C(4), gens(C(8), c), a=c)")  # order 4 vs 8


def test_bfs_closure_generic():
    elems, deriv = bfs_closure(0, [1], lambda a, b: (a + b) % 5)
    assert sorted(elems) == [0, 1, 2, 3, 4]
    assert deriv[0] is None and deriv[2] == (1, 0)
    assert bfs_closure(0, [], lambda a, b: a)[0] == [0]


def test_table_hash_is_stable_and_structural():
    a = construct("D(4)")
    b = construct("D(4)")
    assert a.table_hash == b.table_hash
    assert a.table_hash != construct("Q(2)").table_hash


def test_twisted_product_basics():
    tw = construct("named(C5xC7xC9xD3xH1)")
    assert isinstance(tw, TwistedGroup)
    assert tw.order == 30240
    assert tw.comp_names == ["C(5)", "C(7)", "C(9)", "D(3)", "H1"]
    e = tw.identity
    assert tw.mul(e, e) == e
    x = tw.evaluate_word("a_1*a_3")
    assert tw.element_order(x) == 45  # C5 and C9 parts in one word
    assert tw.evaluate_word(tw.label_of(x)) == x
    assert tw.resolve_support(["H1"]) == [4]
    assert tw.resolve_support("04") == [0, 4]


def test_twisted_support_elements_count():
    tw = construct("named(C5xC7xC9xD3xH1)")
    pool = list(tw.support_elements([0, 3]))
    assert len(pool) == 5 * 6  # product of the selected component orders


def test_twisted_family_has_twist_generators():
    big = construct("named(BIG12_SOL)")
    assert isinstance(big, TwistedGroup)
    assert big.order == 665280
    assert "sigma" in big.gens
    s = big.evaluate_word("sigma")
    assert big.element_order(s) == 2
    inv = big.inv_of(s)
    assert big.mul(s, inv) == big.identity


def test_dense_registry_groups_stay_dense():
    for label, order in [("W3", 243), ("W5", 3125), ("GP6_3", 729), ("S3xS4", 144)]:
        g = construct(f"named({label})")
        assert isinstance(g, TableGroup)
        assert g.order == order


def test_check_table_rejects_non_group():
    bad = np.zeros((3, 3), dtype=np.int64)
    assert not check_table(bad)
    assert check_table(construct("C(7)").table)
