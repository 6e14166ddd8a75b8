"""Certificates, containment reports, the minimal-order search, witness
replay, and the reproducible scenarios."""

import json

import pytest

from mge import construct
from mge.errors import IncompleteCertificates, TierLimitExceeded, UnknownLabel
from mge.verify import (
    Certificate,
    Claim,
    bundled_certificate,
    bundled_certificates,
    contains_all_of_order,
    contains_all_upto,
    generated_subgroup,
    minimal_embedding_search,
    replay_report,
    replay_witness,
    reproduce,
    scenario_ids,
    verify_certificate,
    verify_claim,
)


def test_claim_round_trip():
    c = Claim("C(4)", ("(1234)",), "paper")
    assert Claim.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        Claim.from_json({"target": "C(4)", "generators": [], "source": "guess"})


def test_certificate_round_trip(tmp_path):
    cert = Certificate(
        "S(4)",
        "symmetric group on four points",
        [Claim("C(4)", ("(1234)",)), Claim("EA(2,2)", ("(12)(34)", "(13)(24)"), "derived")],
    )
    path = tmp_path / "c.json"
    path.write_text(cert.dumps())
    again = Certificate.load(path)
    assert again == cert
    assert verify_certificate(path).passed


def test_generated_subgroup():
    s4 = construct("S(4)")
    sub = generated_subgroup(s4, ["(123)", "(12)(34)"])
    assert sub.order == 12


def test_verify_claim_pass():
    s4 = construct("S(4)")
    item = verify_claim(s4, Claim("C(4)", ("(1234)",)))
    assert item.status == "pass"
    assert item.witness["target"] == "C(4)"


def test_verify_claim_order_mismatch():
    s4 = construct("S(4)")
    item = verify_claim(s4, Claim("C(8)", ("(1234)",)))
    assert item.status == "fail"
    assert "order mismatch 4 != 8" in item.detail


def test_verify_claim_wrong_class():
    s4 = construct("S(4)")
    item = verify_claim(s4, Claim("C(4)", ("(12)(34)", "(13)(24)")))
    assert item.status == "fail"
    assert "not isomorphic" in item.detail


def test_verify_claim_bad_word():
    s4 = construct("S(4)")
    item = verify_claim(s4, Claim("C(4)", ("nosuch",)))
    assert item.status == "fail"


def test_bundled_certificates_lookup():
    certs = bundled_certificates()
    assert "named(S3xS4)" in certs
    assert "named(BIGPROD)" in certs
    with pytest.raises(UnknownLabel):
        bundled_certificate("named(NOPE)")


def test_bundled_lemma_certificate_verifies():
    rep = verify_certificate(bundled_certificate("named(S3xS4)"))
    assert rep.passed
    assert rep.counts()["pass"] == len(bundled_certificate("named(S3xS4)").claims)


def test_containment_pass_dense():
    rep = contains_all_of_order(construct("named(C2xH1)"), 8, ambient_text="named(C2xH1)")
    assert rep.passed
    assert rep.counts()["pass"] == 5
    for item in rep.items:
        assert item.witness is not None


def test_containment_ex192_order12():
    # order 192 hosts all five groups of order 12 even though 144 | 192 fails
    assert 192 % 144 != 0
    rep = contains_all_of_order(construct("named(EX192)"), 12, ambient_text="named(EX192)")
    assert rep.passed


def test_containment_failure_is_reported():
    rep = contains_all_of_order(construct("C(8)"), 8, ambient_text="C(8)")
    assert not rep.passed
    failed = {it.item_id for it in rep.items if it.status == "fail"}
    assert "D(4)" in failed and "Q(2)" in failed


def test_containment_stop_on_fail():
    rep = contains_all_of_order(
        construct("C(8)"), 8, ambient_text="C(8)", stop_on_fail=True
    )
    assert not rep.passed
    assert rep.counts()["fail"] == 1


def test_twisted_ambient_needs_certificates():
    tw = construct("named(C5xC7xC9xD3xH1)")
    with pytest.raises(IncompleteCertificates):
        contains_all_of_order(tw, 8, certificates=[], ambient_text="named(C5xC7xC9xD3xH1)")


def test_twisted_ambient_with_bundled_certificates():
    label = "C5xC7xC9xD3xH1"
    tw = construct(f"named({label})")
    cert = bundled_certificate(f"named({label})")
    rep = contains_all_upto(tw, 9, cert, ambient_text=f"named({label})")
    assert rep.passed


def test_upto_containment_small():
    rep = contains_all_upto(construct("C(6)"), 3, ambient_text="C(6)")
    assert rep.passed
    assert rep.counts()["pass"] == 3  # one target per order 1, 2, 3


def test_minimal_search_order_collection():
    out = minimal_embedding_search("order", 4, 16)
    assert out.found_order == 8
    assert out.candidates == [8, 16]  # multiples of the divisibility bound
    assert out.eliminated == {}
    got = [construct(text) for text in out.groups]
    assert len(got) == 2
    # exactly one host per isomorphism type: one abelian, one dihedral
    from mge import is_isomorphic

    flat = sorted(
        "C(2) x C(4)" if is_isomorphic(g, construct("C(2) x C(4)")) else
        "D(4)" if is_isomorphic(g, construct("D(4)")) else "?"
        for g in got
    )
    assert flat == ["C(2) x C(4)", "D(4)"]


def test_minimal_search_trivial():
    out = minimal_embedding_search("order", 2, 4)
    assert out.found_order == 2 and len(out.groups) == 1


def test_minimal_search_upto():
    out = minimal_embedding_search("upto", 3, 12)
    assert out.found_order == 6
    assert len(out.groups) == 2  # the cyclic and the dihedral group of order 6


def test_minimal_search_rejects_bad_kind():
    with pytest.raises(ValueError):
        minimal_embedding_search("sideways", 4, 16)


def test_minimal_search_tier_guard():
    with pytest.raises(TierLimitExceeded):
        minimal_embedding_search("order", 5, 200, tier=1)


def test_scenarios_registered():
    ids = scenario_ids()
    for sid in ("table1", "table2", "table4", "table5", "thm-order32",
                "thm-order144", "lemma-habex4", "lemma-order96", "lemma-p3",
                "example-p6"):
        assert sid in ids
    with pytest.raises(UnknownLabel):
        reproduce("nope")


def test_scenario_reports_are_deterministic():
    a = reproduce("table1")
    b = reproduce("table1")
    assert a.passed and b.passed
    assert a.dumps() == b.dumps()
    doc = json.loads(a.dumps())
    assert doc["scenario"] == "table1" and doc["passed"] is True


def test_thm_order32_scenario_and_replay():
    rep = reproduce("thm-order32")
    assert rep.passed
    assert replay_report(rep)


def test_replay_witness_rejects_tampering():
    rep = reproduce("thm-order32")
    w = next(it.witness for it in rep.items if it.witness is not None)
    assert replay_witness(w)
    bad = dict(w)
    if "groups" in bad:
        bad["groups"] = list(bad["groups"]) + ["C(5)"]
    elif "target" in bad:
        bad["target"] = "C(5)"
    assert not replay_witness(bad)


def test_lemma_p3_skips_below_tier3():
    rep = reproduce("lemma-p3", tier=2)
    assert rep.passed
    assert rep.counts()["skip"] >= 1
